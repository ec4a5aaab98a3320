"""Seeded generators of small networks, target graphs and ordered-response instances."""

from __future__ import annotations

import random
from typing import Optional

from .commgraph import CommGraph, EdgeKind
from .model import Network, ORInstance


def random_network(rng: random.Random, n: Optional[int] = None, density: float = 0.6) -> Network:
    """Random channels on n processes; s (index 0) always has an out-channel and d (last) an in-channel."""
    n = n or rng.randint(3, 5)
    names = ["s"] + [f"p{i}" for i in range(1, n - 1)] + ["d"]
    chans = {(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < density}
    chans.add((0, rng.randrange(1, n)))
    chans.add((rng.randrange(0, n - 1), n - 1))
    return Network(n, frozenset(chans), tuple(names))


def random_target(
    rng: random.Random,
    net: Network,
    horizon: int,
    p_actual: float = 0.3,
    p_null: float = 0.3,
) -> CommGraph:
    msgs = {}
    for t in range(horizon):
        for i, j in sorted(net.channels):
            x = rng.random()
            if x < p_actual:
                msgs[(i, j, t)] = EdgeKind.ACTUAL
            elif x < p_actual + p_null:
                msgs[(i, j, t)] = EdgeKind.NULL
    return CommGraph(net.n, horizon, msgs, net)


def random_instance(rng: random.Random, net: Network, horizon: int, k: Optional[int] = None) -> ORInstance:
    """Actors with strictly increasing action times below the horizon."""
    k = k or rng.randint(1, min(3, horizon))
    times = sorted(rng.sample(range(1, horizon), min(k, horizon - 1)) if horizon > 1 else [0])
    actors = tuple(rng.randrange(net.n) for _ in times)
    return ORInstance(actors, tuple(times))
