"""Labeled communication graphs and the structural conditions decided on them."""

from __future__ import annotations

import enum
import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .model import FailureEvent, FailurePattern, ModelError, Network, Node, Protocol, Run
from .simulator import RunIndex, simulate


class EdgeKind(str, enum.Enum):
    LOCAL = "local"
    ACTUAL = "actual"
    NULL = "null"


@dataclass(frozen=True)
class CommGraph:
    """Nodes are (process, time) for time 0..horizon; local edges are implicit.

    ``messages`` maps a slot (sender, receiver, send time) to ACTUAL or NULL.
    """

    n: int
    horizon: int
    messages: Dict[Tuple[int, int, int], EdgeKind] = field(hash=False)
    net: Optional[Network] = field(default=None, compare=False, hash=False)

    def __post_init__(self) -> None:
        for (i, j, t), kind in self.messages.items():
            if kind is EdgeKind.LOCAL:
                raise ModelError("local edges are implicit")
            if not (0 <= t < self.horizon and 0 <= i < self.n and 0 <= j < self.n) or i == j:
                raise ModelError(f"message edge {(i, j, t)} outside the graph")
            if self.net is not None and not self.net.has_channel(i, j):
                raise ModelError(f"edge {(i, j, t)} is not on a declared channel")
        out: Dict[Node, List[Tuple[int, int, EdgeKind]]] = defaultdict(list)
        for (i, j, t), kind in sorted(self.messages.items()):
            out[(i, t)].append((j, i, kind))
        inn: Dict[Node, List[Node]] = defaultdict(list)
        for (i, j, t) in self.messages:
            inn[(j, t + 1)].append((i, t))
        object.__setattr__(self, "_out", out)
        object.__setattr__(self, "_in", inn)

    def preds(self, node: Node) -> List[Node]:
        p, t = node
        res = list(self._in.get(node, ()))  # type: ignore[attr-defined]
        if t > 0:
            res.append((p, t - 1))
        return res

    def out_edges(self, node: Node):
        """(target node, kind, sender) triples leaving ``node``, the local edge first."""
        p, t = node
        res = []
        if t < self.horizon:
            res.append(((p, t + 1), EdgeKind.LOCAL, p))
            for j, i, kind in self._out.get(node, ()):  # type: ignore[attr-defined]
                res.append(((j, t + 1), kind, i))
        return res

    def edges(self, kind: Optional[EdgeKind] = None) -> List[Tuple[Node, Node, EdgeKind]]:
        res = []
        if kind in (None, EdgeKind.LOCAL):
            res += [((p, t), (p, t + 1), EdgeKind.LOCAL) for p in range(self.n) for t in range(self.horizon)]
        for (i, j, t), k in sorted(self.messages.items()):
            if kind in (None, k):
                res.append(((i, t), (j, t + 1), k))
        return res

    def kind(self, i: int, j: int, t: int) -> Optional[EdgeKind]:
        return self.messages.get((i, j, t))

    def nodes(self) -> Iterable[Node]:
        return ((p, t) for t in range(self.horizon + 1) for p in range(self.n))

    def without_nulls_from(self, procs: Iterable[int]) -> "CommGraph":
        drop = set(procs)
        msgs = {k: v for k, v in self.messages.items() if not (v is EdgeKind.NULL and k[0] in drop)}
        return CommGraph(self.n, self.horizon, msgs, self.net)


def is_null_message(i: int, j: int, t: int, r: Run, idx: RunIndex) -> bool:
    if not idx.net.has_channel(i, j):
        raise ModelError(f"no channel {idx.net.label(i)}->{idx.net.label(j)}")
    if r.blocked(i, j, t) or r.sent(i, j, t):
        return False
    return (i, j, t) in idx.possible_sends


def build_cg(r: Run, idx: RunIndex) -> CommGraph:
    msgs: Dict[Tuple[int, int, int], EdgeKind] = {}
    for t, i, j, _ in r.sends:
        msgs[(i, j, t)] = EdgeKind.ACTUAL
    for i, j, t in idx.possible_sends:
        if t < r.horizon and (i, j, t) not in msgs and not r.blocked(i, j, t):
            msgs[(i, j, t)] = EdgeKind.NULL
    return CommGraph(idx.net.n, r.horizon, msgs, idx.net)


def forward(cg: CommGraph, a: Node, banned: FrozenSet[int] = frozenset(), actual_only: bool = False) -> Set[Node]:
    """Nodes reachable from ``a`` without null edges sent by ``banned`` (or without any null edge)."""
    seen = {a}
    stack = [a]
    while stack:
        u = stack.pop()
        for v, kind, sender in cg.out_edges(u):
            if kind is EdgeKind.NULL and (actual_only or sender in banned):
                continue
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def backward(cg: CommGraph, b: Node) -> Set[Node]:
    """Nodes from which ``b`` is reachable along edges of any kind."""
    seen = {b}
    stack = [b]
    while stack:
        v = stack.pop()
        for u in cg.preds(v):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


def has_chain(cg: CommGraph, a: Node, b: Node) -> bool:
    return b in forward(cg, a)


def bnf_reachable(cg: CommGraph, B: Iterable[int], a: Node, b: Node) -> bool:
    return b in forward(cg, a, frozenset(B))


def null_senders(cg: CommGraph, a: Node, b: Node) -> FrozenSet[int]:
    """Processes owning a null edge that lies on some a -> b path."""
    fw = forward(cg, a)
    bw = backward(cg, b)
    return frozenset(
        i for (i, j, t), kind in cg.messages.items() if kind is EdgeKind.NULL and (i, t) in fw and (j, t + 1) in bw
    )


@dataclass(frozen=True)
class BlockReport:
    ok: bool
    witness: Optional[FrozenSet[int]] = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def _search(cg: CommGraph, a: Node, b: Node, candidates: Iterable[FrozenSet[int]]) -> BlockReport:
    checked = 0
    for B in candidates:
        checked += 1
        if not bnf_reachable(cg, B, a, b):
            return BlockReport(False, B, checked)
    return BlockReport(True, None, checked)


def check_ffailed_block(
    cg: CommGraph, a: Node, b: Node, f: int, failed: Iterable[int] = (), exhaustive: bool = False
) -> BlockReport:
    """Is there a B-null-free a -> b path for every B with |B u failed| <= f?

    By default only the hardest sets are tried: ``failed`` plus as many
    relevant null senders as the budget allows.  Removing processes from B can
    only add paths, so this is equivalent to the full quantifier;
    ``exhaustive=True`` enumerates every B as a cross-check."""
    failed = frozenset(failed)
    if len(failed) > f:
        raise ModelError("more failed processes than the failure bound")
    if exhaustive:
        everyone = range(cg.n)
        cands = (
            frozenset(B)
            for k in range(0, f + 1)
            for B in itertools.combinations(everyone, k)
            if len(frozenset(B) | failed) <= f
        )
        return _search(cg, a, b, cands)
    extra = sorted(null_senders(cg, a, b) - failed)
    size = min(f - len(failed), len(extra))
    cands = (failed | frozenset(X) for X in itertools.combinations(extra, size))
    return _search(cg, a, b, cands)


def check_f_block(cg: CommGraph, a: Node, b: Node, f: int, exhaustive: bool = False) -> BlockReport:
    if f < 0:
        # an (f-1)-block with f = 0 degenerates to plain reachability
        return BlockReport(has_chain(cg, a, b), None if has_chain(cg, a, b) else frozenset(), 1)
    return check_ffailed_block(cg, a, b, f, (), exhaustive)


def silent_choir(r: Run, cg: CommGraph, m: int, f: int, source: Optional[int] = None, dest: Optional[int] = None):
    """Processes reached by an actual chain from (source, 0) by m-1 that send nothing to ``dest`` at m-1.

    Returned only when, together with the run's faulty processes, they number at least f+1."""
    if m < 1:
        raise ValueError("a silent choir needs m >= 1")
    net = cg.net
    s = net.source if source is None else source
    d = net.dest if dest is None else dest
    reach = forward(cg, (s, 0), actual_only=True)
    S = frozenset(p for p in range(cg.n) if (p, m - 1) in reach and cg.kind(p, d, m - 1) is not EdgeKind.ACTUAL)
    return S if len(S | r.failed) >= f + 1 else None


def critical_time(cg: CommGraph, B: Iterable[int], p: int, a: Node, b: Node) -> float:
    """Earliest t with a B-null-free path a -> (p, t) and any path (p, t) -> b."""
    fw = forward(cg, a, frozenset(B))
    bw = backward(cg, b)
    for t in range(cg.horizon + 1):
        if (p, t) in fw and (p, t) in bw:
            return t
    return math.inf


def minimize_cut(cg: CommGraph, B: Iterable[int], a: Node, b: Node) -> FrozenSet[int]:
    """Shrink a cutting set B until no member can be dropped."""
    cur = set(B)
    for x in sorted(cur):
        trial = cur - {x}
        if not bnf_reachable(cg, trial, a, b):
            cur = trial
    return frozenset(cur)


def confusion_pattern(r: Run, cg: CommGraph, B: Iterable[int], a: Node, b: Node, net: Network) -> FailurePattern:
    B = minimize_cut(cg, B, a, b)
    events = []
    for p in sorted(B):
        ct = critical_time(cg, B, p, a, b)
        if ct != math.inf:
            events.append(FailureEvent(p, int(ct), frozenset(net.out_neighbors(p))))
    for e in r.minimal:
        if e.proc not in B:
            events.append(e)
    return FailurePattern(tuple(events))


def build_confusion_run(q: Protocol, r: Run, B: Iterable[int], a: Node, b: Node, idx: RunIndex) -> Run:
    """A run the destination cannot tell from ``r`` at ``b`` in which no chain a -> b exists.

    Processes of B crash at their critical times blocking every out-channel;
    other faulty processes crash as in ``r``.  Its graph is ``build_cg(r2, idx)``:
    the indexed representative of the same minimal pattern may keep null
    edges on channels the crash blocks here."""
    B = frozenset(B)
    cg = idx.cg(r)
    if not B or bnf_reachable(cg, B, a, b):
        raise ModelError("the confusion run needs a non-empty set B cutting every B-null-free path")
    fp = confusion_pattern(r, cg, B, a, b, idx.net)
    return simulate(q, r.vs, fp, r.horizon)


def unlabeled_edges(cg: CommGraph) -> FrozenSet[Tuple[int, int, int]]:
    return frozenset(cg.messages)


def subgraph_unlabeled(g1: CommGraph, g2: CommGraph) -> bool:
    if g1.horizon != g2.horizon or g1.n != g2.n:
        raise ModelError("graphs over different node sets")
    return unlabeled_edges(g1) <= unlabeled_edges(g2)
