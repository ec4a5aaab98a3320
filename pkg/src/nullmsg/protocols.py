"""Builtin protocols and networks."""

from __future__ import annotations

from .model import RECV, LocalState, ModelError, Network, Protocol, SILENT_STEP, Step

UNKNOWN = "?"


def net1() -> Network:
    """Three processes s, p, d with channels s->p, s->d and p->d."""
    return Network.build(["s", "p", "d"], [("s", "p"), ("s", "d"), ("p", "d")])


def ocean_network() -> Network:
    """Source, three cheap relays and a distant destination."""
    relays = ["p1", "p2", "p3"]
    chans = [("s", r) for r in relays] + [(r, "d") for r in relays]
    costs = {("s", r): 1 for r in relays}
    costs.update({(r, "d"): 1000 for r in relays})
    return Network.build(["s", *relays, "d"], chans, costs)


def complete_network(n: int) -> Network:
    names = ["s"] + [f"p{i}" for i in range(1, n - 1)] + ["d"]
    return Network(n, frozenset((i, j) for i in range(n) for j in range(n) if i != j), tuple(names))


def _received(state: LocalState, sender: int):
    for e in state.events:
        if e.kind == RECV and e.peer == sender:
            return e.msg
    return None


class _Relay(Protocol):
    """s reports v_s to p in round 1; p stays silent toward d iff it heard v_s = 1."""

    name = "p1"
    direct = False

    def __init__(self, net: Network):
        super().__init__(net)
        try:
            self.s, self.p, self.d = net.index("s"), net.index("p"), net.index("d")
        except ModelError:
            raise ModelError(f"{self.name} needs processes named s, p and d") from None

    def step(self, proc: int, state: LocalState) -> Step:
        if proc == self.s and state.time == 0:
            sends = [(self.p, state.value)]
            if self.direct and state.value == 0:
                sends.append((self.d, 0))
            return Step(tuple(sends))
        if proc == self.p and state.time == 1:
            got = _received(state, self.s)
            if got == 1:
                return SILENT_STEP
            return Step(((self.d, UNKNOWN if got is None else got),))
        return SILENT_STEP


class P1(_Relay):
    name = "p1"


class P2(_Relay):
    """P1 plus a direct message s->d at time 0 exactly when v_s = 0."""

    name = "p2"
    direct = True


class Silent(Protocol):
    name = "silent"

    def step(self, proc: int, state: LocalState) -> Step:
        return SILENT_STEP


class Flood(Protocol):
    """Every round, every process tells every out-neighbour what it knows of v_s."""

    name = "flood"

    def step(self, proc: int, state: LocalState) -> Step:
        val = state.value if proc == self.net.source else UNKNOWN
        if val == UNKNOWN:
            for e in state.events:
                if e.kind == RECV and e.msg != UNKNOWN:
                    val = e.msg
                    break
        return Step(tuple((j, val) for j in self.net.out_neighbors(proc)))


BUILTINS = {"p1": P1, "p2": P2, "silent": Silent, "flood": Flood}
