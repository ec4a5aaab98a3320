"""Structural conditions for ordered response and robust information transfer."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .commgraph import CommGraph, EdgeKind, backward, bnf_reachable, check_f_block, forward
from .model import Node, ORInstance
from .simulator import ResourceBoundError

DEFAULT_COMBINATION_CAP = 100_000


@dataclass
class ConditionReport:
    ok: bool = True
    violations: List[Tuple[str, object]] = field(default_factory=list)

    def add(self, cond: str, witness) -> None:
        self.violations.append((cond, witness))
        self.ok = False

    def extend(self, other: "ConditionReport") -> None:
        for v in other.violations:
            self.add(*v)

    def __bool__(self) -> bool:
        return self.ok


def check_or_necessary(cg: CommGraph, inst: ORInstance, f: int) -> ConditionReport:
    """Blocks every ordered-response solution's nice graph must contain."""
    s = cg.net.source
    rep = ConditionReport()
    for x in range(1, inst.k + 1):
        blk = check_f_block(cg, (s, 0), inst.node(x), f)
        if not blk.ok:
            rep.add("f-block", {"x": x, "B": blk.witness})
    for x in range(2, inst.k + 1):
        sub = cg.without_nulls_from([inst.actors[x - 2]])
        blk = check_f_block(sub, inst.node_after(x - 1), inst.node(x), f - 1)
        if not blk.ok:
            rep.add("(f-1)-block", {"x": x, "B": blk.witness})
    return rep


def check_or_conservative(cg: CommGraph, inst: ORInstance, f: int) -> ConditionReport:
    """If b's crash at rho_b can stop a_x while B cuts theta_x from theta_h, b must still reach theta_h.

    Both the premise and the failure of the conclusion only get easier as B
    grows, so only sets of the maximal size f containing b are tried."""
    rep = ConditionReport()
    if f < 1:
        return rep
    n = cg.n
    for b in range(n):
        others = [p for p in range(n) if p != b]
        bigs = [frozenset((b, *X)) for X in itertools.combinations(others, min(f - 1, len(others)))]
        for mb in range(cg.horizon):
            starts = [
                v for v, kind, _ in cg.out_edges((b, mb)) if kind is EdgeKind.ACTUAL
            ]
            if not starts:
                continue
            reach = set()
            for v in starts:
                reach |= forward(cg, v, frozenset({b}))
            for x in range(1, inst.k + 1):
                if inst.node(x) not in reach:
                    continue
                for h in range(x + 1, inst.k + 1):
                    th = inst.node(h)
                    for B in bigs:
                        if bnf_reachable(cg, B, inst.node(x), th):
                            continue
                        if mb + 1 <= cg.horizon and bnf_reachable(cg, B, (b, mb + 1), th):
                            continue
                        rep.add("conservative", {"rho": (b, mb), "x": x, "h": h, "B": B})
    return rep


def check_or_sufficient(cg: CommGraph, inst: ORInstance, f: int) -> ConditionReport:
    rep = check_or_necessary(cg, inst, f)
    rep.extend(check_or_conservative(cg, inst, f))
    return rep


def _path_signatures(cg: CommGraph, a: Node, b: Node, s: int, d: int) -> Set[Tuple[FrozenSet[int], bool]]:
    """(senders other than s and d, whether s sends a null) over all a -> b paths.

    Computed layer by layer; only nodes that can still reach b are kept."""
    useful = backward(cg, b)
    if a not in useful:
        return set()
    sigs: Dict[Node, Set] = {a: {(frozenset(), False)}}
    for t in range(a[1], b[1]):
        for p in range(cg.n):
            here = sigs.get((p, t))
            if not here:
                continue
            for v, kind, sender in cg.out_edges((p, t)):
                if v not in useful:
                    continue
                dst = sigs.setdefault(v, set())
                if kind is EdgeKind.LOCAL:
                    dst |= here
                    continue
                snull = sender == s and kind is EdgeKind.NULL
                for senders, flag in here:
                    dst.add((senders if sender in (s, d) else senders | {sender}, flag or snull))
    return sigs.get(b, set())


def _disjoint_family(sigs, size: int, max_snull: int, cap: int) -> Optional[list]:
    """``size`` pairwise sender-disjoint signatures, at most ``max_snull`` of them with s-nulls."""
    # drop dominated signatures: a subset of senders with no worse s-null flag
    items = sorted(sigs, key=lambda x: (len(x[0]), x[1], sorted(x[0])))
    kept = []
    for sg in items:
        if not any(k[0] <= sg[0] and (not k[1] or sg[1]) for k in kept):
            kept.append(sg)
    tried = 0
    for combo in itertools.combinations(kept, size):
        tried += 1
        if tried > cap:
            raise ResourceBoundError(f"more than {cap} path combinations; use a smaller instance")
        if sum(1 for c in combo if c[1]) > max_snull:
            continue
        seen: set = set()
        ok = True
        for c in combo:
            if seen & c[0]:
                ok = False
                break
            seen |= c[0]
        if ok:
            return list(combo)
    return None


def check_robust_conditions(
    cg: CommGraph, f: int, cap: int = DEFAULT_COMBINATION_CAP, literal: bool = False
) -> ConditionReport:
    """Robust information transfer: some m admits a direct actual s -> d message by m-1,
    or f+1 sender-disjoint paths to (d, m) of which at most one has s sending a null.

    ``literal=True`` instead only asks that one of the f+1 paths be free of
    s-nulls; that reading is too weak once f >= 2 and too strict at f = 0.
    Paths are compared by signature, so two paths with identical sender sets
    count once."""
    s, d = cg.net.source, cg.net.dest
    rep = ConditionReport()
    for m in range(cg.horizon + 1):
        if any(cg.kind(s, d, t) is EdgeKind.ACTUAL for t in range(m)):
            return rep
        sigs = _path_signatures(cg, (s, 0), (d, m), s, d)
        if not sigs:
            continue
        found = _disjoint_family(sigs, f + 1, f if literal else 1, cap)
        if found:
            return rep
    rep.add("robust", {"f": f, "horizon": cg.horizon})
    return rep
