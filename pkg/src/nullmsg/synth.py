"""Bit protocols synthesised from a target communication graph."""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Tuple

from .commgraph import CommGraph, EdgeKind
from .model import EMPTY_PATTERN, LocalState, ModelError, Network, ORInstance, Protocol, Step
from .simulator import Prefix, expand, simulate

BIT0, BIT1 = 0, 1


class SynthesisError(ModelError):
    pass


class _GraphProtocol(Protocol):
    """Sends along the target's edges; what and whether depends on a guard.

    Actual edge: send '0' when the guard holds, '1' otherwise.  Null edge:
    send '0' when the guard holds, stay silent otherwise."""

    family = "graph"

    def __init__(self, target: CommGraph, net: Optional[Network] = None):
        net = net or target.net
        if net is None:
            raise SynthesisError("target graph carries no network")
        for (i, j, t) in target.messages:
            if not net.has_channel(i, j):
                raise SynthesisError(f"target edge {net.label(i)}->{net.label(j)} at {t} is not a channel")
        super().__init__(net)
        self.target = target
        self.name = self.family
        self._plan: Dict[Tuple[int, int], List[Tuple[int, EdgeKind]]] = defaultdict(list)
        for (i, j, t), kind in sorted(target.messages.items()):
            self._plan[(i, t)].append((j, kind))
        self._acts: Dict[Tuple[int, int], frozenset] = {}

    def guard(self, p: int, state: LocalState) -> bool:
        raise NotImplementedError

    def step(self, p: int, state: LocalState) -> Step:
        edges = self._plan.get((p, state.time), ())
        acts = self._acts.get((p, state.time), frozenset())
        if not edges and not acts:
            return Step()
        g = self.guard(p, state)
        sends = []
        for j, kind in edges:
            if kind is EdgeKind.ACTUAL:
                sends.append((j, BIT0 if g else BIT1))
            elif g:
                sends.append((j, BIT0))
        # conservative: act only while the state still matches the nice run
        return Step(tuple(sends), frozenset() if g else acts)

    def _check_nice(self) -> None:
        nice = simulate(self, 1, EMPTY_PATTERN, self.target.horizon)
        got = {(i, j, t) for t, i, j, _ in nice.sends}
        want = {k for k, v in self.target.messages.items() if v is EdgeKind.ACTUAL}
        if got != want:
            raise SynthesisError(f"nice run sends {sorted(got ^ want)} differently from the target")


class NiceBasedProtocol(_GraphProtocol):
    """Guard: the process knows the run is not the nice run (its state differs from the nice one)."""

    family = "nbm"

    def __init__(self, target: CommGraph, net: Optional[Network] = None, instance: Optional[ORInstance] = None):
        super().__init__(target, net)
        self.instance = instance
        if instance is not None:
            self.name = "or"
            if max(instance.times) >= target.horizon:
                raise SynthesisError("action times must be below the target horizon")
            acts = defaultdict(set)
            for h in range(1, instance.k + 1):
                acts[instance.node(h)].add(h)
            self._acts = {node: frozenset(hs) for node, hs in acts.items()}
        self._nice: Optional[Sequence[Sequence[LocalState]]] = None
        # while _nice is unset every guard is false, which is exactly the nice run
        self._nice = simulate(self, 1, EMPTY_PATTERN, target.horizon).states
        self._check_nice()

    def guard(self, p: int, state: LocalState) -> bool:
        if self._nice is None:
            return False
        t = state.time
        if t >= len(self._nice[p]):
            return True
        return state != self._nice[p][t]

    def describe(self):
        from .io import cg_to_json, instance_to_json

        out = {"family": self.name, "target": cg_to_json(self.target)}
        if self.instance is not None:
            out["instance"] = instance_to_json(self.instance, self.net)
        return out


class RobustBasedProtocol(_GraphProtocol):
    """Guard: the process knows (v_s != 1 or s is faulty).

    Knowledge at time t depends only on run prefixes up to t, so the guard is
    tabulated exactly, one time layer at a time, over all prefixes with at
    most f crashes.  A crash of s at time >= t is invisible at t and can be
    swapped for no crash at all, so 's is faulty' is evaluated as 's crashed
    before t' on prefixes."""

    family = "rbm"

    def __init__(self, target: CommGraph, f: int, net: Optional[Network] = None):
        super().__init__(target, net)
        self.f = f
        self._table: Dict[Tuple[int, int, LocalState], bool] = {}
        self.runs = expand(self, f, target.horizon, on_layer=self._tabulate)
        self._check_nice()

    def _tabulate(self, t: int, layer: Sequence[Prefix]) -> None:
        s = self.net.source
        for p in range(self.net.n):
            verdict: Dict[LocalState, bool] = {}
            for pre in layer:
                if pre.crashed(p):
                    continue
                st = pre.state(p)
                fact = pre.vs != 1 or pre.crashed(s)
                verdict[st] = verdict.get(st, True) and fact
            for st, v in verdict.items():
                self._table[(p, t, st)] = v

    def guard(self, p: int, state: LocalState) -> bool:
        # a state no run reaches makes the knowledge claim vacuously true
        return self._table.get((p, state.time, state), True)

    def describe(self):
        from .io import cg_to_json

        return {"family": self.name, "target": cg_to_json(self.target), "f": self.f}


def synth_nbm(target: CommGraph, net: Optional[Network] = None) -> NiceBasedProtocol:
    return NiceBasedProtocol(target, net)


def synth_or(target: CommGraph, inst: ORInstance, net: Optional[Network] = None) -> NiceBasedProtocol:
    return NiceBasedProtocol(target, net, inst)


def synth_rbm(target: CommGraph, f: int, net: Optional[Network] = None) -> RobustBasedProtocol:
    return RobustBasedProtocol(target, f, net)
