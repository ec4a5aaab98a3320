"""Exact knowledge over an enumerated run space.

A process knows a fact at (r, m) when the fact holds at time m in every
indexed run where the process has the same local state at m.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .commgraph import has_chain
from .model import Node, Protocol, Run
from .simulator import RunIndex, nice_run


class Fact:
    def holds(self, r: Run, m: int, idx: RunIndex) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class ValueIs(Fact):
    b: int

    def holds(self, r, m, idx):
        return r.vs == self.b


@dataclass(frozen=True)
class ChainReached(Fact):
    a: Node
    b: Node

    def holds(self, r, m, idx):
        return self.b[1] <= m and has_chain(idx.cg(r), self.a, self.b)


@dataclass(frozen=True)
class NotNice(Fact):
    def holds(self, r, m, idx):
        return r.key != idx.nice.key


@dataclass(frozen=True)
class ActionDone(Fact):
    """Action h (1-based) has been performed by time m."""

    h: int

    def holds(self, r, m, idx):
        return any(h == self.h and t <= m for _, h, t in r.actions)


@dataclass(frozen=True)
class SourceFaulty(Fact):
    def holds(self, r, m, idx):
        c = r.crash_time(idx.net.source)
        return c is not None and c <= m


@dataclass(frozen=True)
class Or(Fact):
    parts: Tuple[Fact, ...]

    def holds(self, r, m, idx):
        return any(p.holds(r, m, idx) for p in self.parts)


NOT_ONE_OR_SOURCE_FAULTY = Or((ValueIs(0), SourceFaulty()))


def eval_fact(fact: Fact, r: Run, m: int, idx: RunIndex) -> bool:
    return fact.holds(r, m, idx)


def counterexample(i: int, fact: Fact, r: Run, m: int, idx: RunIndex) -> Optional[int]:
    """Id of an indexed run that ``i`` cannot tell from ``r`` at m and where ``fact`` fails.

    The answer only depends on i's state, so it is memoised on the index."""
    state = r.state(i, m)
    key = (i, m, state, fact)
    memo = idx.memo
    if key not in memo:
        memo[key] = next(
            (rid for rid in idx.indistinguishable(i, m, state) if not fact.holds(idx.runs[rid], m, idx)),
            None,
        )
    return memo[key]


def knows(i: int, fact: Fact, r: Run, m: int, idx: RunIndex) -> bool:
    if m > idx.horizon:
        raise ValueError(f"time {m} beyond horizon {idx.horizon}")
    return counterexample(i, fact, r, m, idx) is None


def knows_not_nice_fast(q: Protocol, r: Run, p: int, t: int, nice: Optional[Run] = None) -> bool:
    """Compare p's state with its state in the nice run."""
    nice = nice if nice is not None else nice_run(q, max(t, r.horizon))
    return r.state(p, t) != nice.state(p, t)


def it_achieved(r: Run, m: int, idx: RunIndex) -> bool:
    d = idx.net.dest
    return knows(d, ValueIs(0), r, m, idx) or knows(d, ValueIs(1), r, m, idx)
