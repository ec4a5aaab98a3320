"""Money spent on actual messages, and the ocean-relay scenario."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .commgraph import CommGraph, EdgeKind
from .model import ModelError, Network, Run
from .protocols import ocean_network


class CostError(ModelError):
    pass


def channel_cost(net: Network, i: int, j: int) -> Fraction:
    if net.costs is None or (i, j) not in net.costs:
        raise CostError(f"no cost for channel {net.label(i)}->{net.label(j)}")
    return net.costs[(i, j)]


def run_cost(r: Run, net: Network) -> Fraction:
    """Sum of channel costs over actual sends; silence is free."""
    return sum((channel_cost(net, i, j) for _, i, j, _ in r.sends), Fraction(0))


@dataclass(frozen=True)
class ScenarioMix:
    nice: int
    bad: int = 0

    def __post_init__(self) -> None:
        if self.nice < 0 or self.bad < 0:
            raise ValueError("scenario counts must be non-negative")


def mix_cost(mix: ScenarioMix, nice_cost, worst_cost=0) -> Fraction:
    return mix.nice * Fraction(nice_cost) + mix.bad * Fraction(worst_cost)


def cheapest_chain(net: Network, a: Optional[int] = None, b: Optional[int] = None) -> Fraction:
    """Cost of the cheapest all-actual relay from a to b (one message per hop)."""
    a = net.source if a is None else a
    b = net.dest if b is None else b
    best = {a: Fraction(0)}
    heap = [(Fraction(0), a)]
    while heap:
        c, u = heapq.heappop(heap)
        if u == b:
            return c
        if c > best.get(u, c):
            continue
        for v in net.out_neighbors(u):
            nc = c + channel_cost(net, u, v)
            if nc < best.get(v, nc + 1):
                best[v] = nc
                heapq.heappush(heap, (nc, v))
    raise CostError(f"no channel path from {net.label(a)} to {net.label(b)}")


OCEAN_F = 2
OCEAN_HORIZON = 2


def ocean_target(net: Optional[Network] = None) -> CommGraph:
    """s tells two relays actually and the third by silence; all relays stay silent toward d."""
    net = net or ocean_network()
    s, d = net.source, net.dest
    p1, p2, p3 = (net.index(x) for x in ("p1", "p2", "p3"))
    msgs = {
        (s, p1, 0): EdgeKind.ACTUAL,
        (s, p2, 0): EdgeKind.ACTUAL,
        (s, p3, 0): EdgeKind.NULL,
        (p1, d, 1): EdgeKind.NULL,
        (p2, d, 1): EdgeKind.NULL,
        (p3, d, 1): EdgeKind.NULL,
    }
    return CommGraph(net.n, OCEAN_HORIZON, msgs, net)


@dataclass(frozen=True)
class OceanReport:
    chain: Fraction
    nice: Fraction
    worst: Fraction
    mixed: Fraction
    baseline: Fraction
    informed: bool


def ocean_scenario(nice_runs: int = 100, bad_runs: int = 2) -> OceanReport:
    from .knowledge import ValueIs, knows
    from .simulator import enumerate_runs
    from .synth import synth_nbm

    net = ocean_network()
    q = synth_nbm(ocean_target(net))
    idx = enumerate_runs(q, OCEAN_F, OCEAN_HORIZON)
    nice = run_cost(idx.nice, net)
    worst = max(run_cost(r, net) for r in idx.runs)
    chain = cheapest_chain(net)
    informed = knows(net.dest, ValueIs(1), idx.nice, OCEAN_HORIZON, idx)
    return OceanReport(
        chain=chain,
        nice=nice,
        worst=worst,
        mixed=mix_cost(ScenarioMix(nice_runs, bad_runs), nice, worst),
        baseline=mix_cost(ScenarioMix(nice_runs + bad_runs), chain),
        informed=informed,
    )
