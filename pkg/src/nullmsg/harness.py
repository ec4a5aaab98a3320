"""Exhaustive sweeps that check the necessity and sufficiency results on a run space."""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

from .commgraph import (
    BlockReport,
    build_cg,
    build_confusion_run,
    check_ffailed_block,
    forward,
    has_chain,
    silent_choir,
    unlabeled_edges,
)
from .conditions import ConditionReport, check_robust_conditions
from .knowledge import ActionDone, ChainReached, NotNice, ValueIs, knows, knows_not_nice_fast
from .model import ModelError, Protocol, Run
from .simulator import RunIndex, enumerate_runs, is_compatible

BlockChecker = Callable[..., BlockReport]
PAIR_BUDGET = 2_000_000
SWEEPS = {
    "model": "model_sweeps",
    "knowledge": "knowledge_sweeps",
    "chain": "chain_sweeps",
    "order": "pattern_order",
    "nice": "nice_necessity",
    "or": "or_sweeps",
    "robust": "robust_sweep",
}


@dataclass
class SweepReport(ConditionReport):
    checked: Counter = field(default_factory=Counter)

    def tick(self, name: str, n: int = 1) -> None:
        self.checked[name] += n

    def expect(self, name: str, cond: bool, witness) -> None:
        self.tick(name)
        if not cond:
            self.add(name, witness)


def _mutant(cg, a, b, f, failed=(), exhaustive=False) -> BlockReport:
    rep = check_ffailed_block(cg, a, b, f, failed, exhaustive)
    return BlockReport(not rep.ok, None if not rep.ok else frozenset(failed), rep.checked)


class Sweeper:
    """Runs every registered sweep over one enumerated run space."""

    def __init__(self, idx: RunIndex, mutate: bool = False, seed: int = 0):
        self.idx = idx
        self.net = idx.net
        self.f = idx.f
        self.T = idx.horizon
        self.block: BlockChecker = _mutant if mutate else check_ffailed_block
        self.rng = random.Random(seed)
        self.report = SweepReport()
        self.confusions = 0

    def K(self, p: int, fact, r: Run, m: int) -> bool:
        return knows(p, fact, r, m, self.idx)

    def src(self):
        return (self.net.source, 0)

    def run_all(self, sweeps=SWEEPS) -> SweepReport:
        unknown = set(sweeps) - set(SWEEPS)
        if unknown:
            raise ValueError(f"unknown sweeps {sorted(unknown)}")
        proto = self.idx.protocol
        for name in sweeps:
            if name == "or":
                if getattr(proto, "instance", None) is not None:
                    self.or_sweeps(proto.instance)
            elif name == "robust":
                if getattr(proto, "family", None) == "rbm":
                    self.robust_sweep()
            else:
                getattr(self, SWEEPS[name])()
        return self.report

    def model_sweeps(self) -> None:
        rep = self.report
        for rid, r in enumerate(self.idx.runs):
            rep.expect("minimal-compatible", is_compatible(r, r.minimal), rid)
            for e in r.minimal:
                late = [s for s in r.sends if s[1] == e.proc and s[0] > e.time]
                acts = [a for a in r.actions if a[0] == e.proc and a[2] >= e.time]
                rep.expect("crash-silence", not late and not acts, (rid, e.proc))

    def knowledge_sweeps(self) -> None:
        idx, rep, nice = self.idx, self.report, self.idx.nice
        s0 = self.src()
        facts = [ValueIs(0), ValueIs(1), NotNice()]
        for rid, r in enumerate(idx.runs):
            for p in range(self.net.n):
                for m in range(self.T + 1):
                    for fact in facts:
                        if self.K(p, fact, r, m):
                            rep.expect("knowledge-property", fact.holds(r, m, idx), (rid, p, m, fact))
                    fast = knows_not_nice_fast(idx.protocol, r, p, m, nice)
                    rep.expect("fast-not-nice", fast == self.K(p, NotNice(), r, m), (rid, p, m))
            d = self.net.dest
            for m in range(self.T + 1):
                fact = ChainReached(s0, (d, m))
                if self.K(d, fact, r, m):
                    rep.expect("knowledge-property", fact.holds(r, m, idx), (rid, d, m, fact))

    def chain_sweeps(self) -> None:
        """Knowing v_s = 1 needs a chain, knowledge of it, and a resilient block; blocks imply a choir."""
        idx, rep, f = self.idx, self.report, self.f
        d, s0 = self.net.dest, self.src()
        for rid, r in enumerate(idx.runs):
            cg = idx.cg(r)
            for m in range(self.T + 1):
                if not r.active(d, m):
                    continue
                theta = (d, m)
                blk = self.block(cg, s0, theta, f, r.failed)
                if self.K(d, ValueIs(1), r, m):
                    rep.expect("chain-necessary", has_chain(cg, s0, theta), (rid, m))
                    rep.expect("chain-known", self.K(d, ChainReached(s0, theta), r, m), (rid, m))
                    rep.expect("block-necessary", blk.ok, (rid, m, blk.witness))
                if m >= 1 and blk.ok:
                    choir = silent_choir(r, cg, m, f)
                    actual = theta in forward(cg, s0, actual_only=True)
                    rep.expect("block-choir", choir is not None or actual, (rid, m))
                if not blk.ok:
                    self.confusion(r, cg, blk.witness, theta)

    def confusion(self, r: Run, cg, B, theta) -> None:
        idx, rep, s0 = self.idx, self.report, self.src()
        d, m = theta
        if not B:
            # no path at all: r itself is the confusing run
            rep.expect("confusion", not has_chain(cg, s0, theta), (idx.id_of(r), m))
            return
        try:
            r2 = build_confusion_run(idx.protocol, r, B, s0, theta, idx)
        except ModelError as exc:
            rep.expect("confusion", False, (idx.id_of(r), m, B, str(exc)))
            return
        self.confusions += 1
        ok = (
            r2.state(d, m) == r.state(d, m)
            and len(r2.minimal) <= self.f
            and not has_chain(build_cg(r2, idx), s0, theta)
        )
        rep.expect("confusion", ok, (idx.id_of(r), m, B))

    def pattern_order(self) -> None:
        """A harsher minimal pattern yields an unlabeled subgraph (every harsher pair, both values)."""
        runs, rep, idx = self.idx.runs, self.report, self.idx
        by_pattern: Dict = defaultdict(list)
        for rid, r in enumerate(runs):
            by_pattern[r.minimal].append(rid)
        groups: Dict = defaultdict(list)
        for fp in by_pattern:
            groups[fp.procs].append(fp)
        edges = {rid: unlabeled_edges(idx.cg(r)) for rid, r in enumerate(runs)}

        def le(ea, eb) -> bool:
            return ea.time < eb.time or (ea.time == eb.time and ea.blocked >= eb.blocked)

        pairs = []
        for fb in by_pattern:
            need = fb.procs
            evb = {e.proc: e for e in fb}
            for procs, fas in groups.items():
                if not need <= procs:
                    continue
                for fa in fas:
                    if all(le(fa.event_for(p), evb[p]) for p in need):
                        pairs.append((fa, fb))
        if len(pairs) > PAIR_BUDGET:
            rep.tick("pattern-subgraph-sampled")
            pairs = self.rng.sample(pairs, PAIR_BUDGET)
        for fa, fb in pairs:
            for i in by_pattern[fa]:
                for j in by_pattern[fb]:
                    rep.expect("pattern-subgraph", edges[i] <= edges[j], (i, j))

    def nice_necessity(self) -> None:
        idx, rep = self.idx, self.report
        nice, cg = idx.nice, idx.cg(idx.nice)
        d, s0 = self.net.dest, self.src()
        for m in range(self.T + 1):
            if self.K(d, ValueIs(1), nice, m):
                rep.expect("nice-block-necessary", self.block(cg, s0, (d, m), self.f).ok, m)

    def or_sweeps(self, inst) -> None:
        idx, rep = self.idx, self.report
        for h in range(1, inst.k + 1):
            rep.expect("or-nice-live", idx.nice.action_time(inst.actors[h - 1], h) == inst.times[h - 1], h)
        for rid, r in enumerate(idx.runs):
            for p, h, t in r.actions:
                ok = r.vs == 1 and all(
                    (lambda u: u is not None and u <= t)(r.action_time(inst.actors[g - 1], g)) for g in range(1, h)
                )
                rep.expect("or-consistent", ok, (rid, h))
                rep.expect("or-knows-value", self.K(p, ValueIs(1), r, t), (rid, h))
                if h > 1:
                    rep.expect("or-knows-previous", self.K(p, ActionDone(h - 1), r, t), (rid, h))
                rep.expect("or-conservative", not self.K(p, NotNice(), r, t), (rid, h))

    def robust_sweep(self) -> None:
        idx, rep = self.idx, self.report
        cond = check_robust_conditions(idx.protocol.target, self.f)
        bad = robust_counterexample(idx)
        if cond.ok:
            rep.expect("robust-sufficient", bad is None, bad)
        else:
            rep.tick("robust-unmet")


def robust_counterexample(idx: RunIndex) -> Optional[int]:
    """A run with v_s = 1 and s, d correct where d never comes to know v_s = 1."""
    s, d = idx.net.source, idx.net.dest
    for rid, r in enumerate(idx.runs):
        if r.vs != 1 or s in r.failed or d in r.failed:
            continue
        if not any(knows(d, ValueIs(1), r, m, idx) for m in range(idx.horizon + 1)):
            return rid
    return None


def verify_sweeps(
    q: Protocol,
    f: int,
    horizon: int,
    mutate: bool = False,
    idx: Optional[RunIndex] = None,
    sweeps=tuple(SWEEPS),
) -> SweepReport:
    """Run the selected sweeps over the full run space of ``q``; the report lists violated instances."""
    if idx is None:
        # an RbM protocol already enumerated its own run space while tabulating
        own = getattr(q, "runs", None) is not None and q.f == f and q.target.horizon == horizon
        idx = RunIndex(q, f, horizon, q.runs) if own else enumerate_runs(q, f, horizon)
    return Sweeper(idx, mutate).run_all(sweeps)


def nice_knowledge(q: Protocol, f: int, horizon: int, m: Optional[int] = None) -> bool:
    """Does d know v_s = 1 at (nice run, m)?"""
    idx = enumerate_runs(q, f, horizon)
    m = horizon if m is None else m
    return knows(idx.net.dest, ValueIs(1), idx.nice, m, idx)
