"""Domain vocabulary: networks, failure patterns, local states, runs and protocols."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, NamedTuple, Optional, Tuple

Token = Hashable
Node = Tuple[int, int]  # (process, time)

SENT = "sent"
RECV = "recv"
ACT = "act"


class ModelError(ValueError):
    """Malformed network, pattern or protocol input."""


class ProtocolViolation(ModelError):
    """A protocol step tried to send on a channel that does not exist."""


class Event(NamedTuple):
    """One observed event.  ``peer`` is the other endpoint, or the action index for ``act``."""

    kind: str
    peer: int
    msg: Token
    at: int


class LocalState(NamedTuple):
    value: object
    time: int
    events: Tuple[Event, ...] = ()


class Step(NamedTuple):
    sends: Tuple[Tuple[int, Token], ...] = ()
    actions: FrozenSet[int] = frozenset()


SILENT_STEP = Step()


@dataclass(frozen=True)
class Network:
    n: int
    channels: FrozenSet[Tuple[int, int]]
    names: Tuple[str, ...] = ()
    costs: Optional[Dict[Tuple[int, int], Fraction]] = field(default=None, compare=False, hash=False)
    source: int = -1
    dest: int = -1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ModelError("network needs at least one process")
        names = tuple(self.names) or tuple(f"p{i}" for i in range(self.n))
        if len(names) != self.n or len(set(names)) != self.n:
            raise ModelError("process names must be unique and one per process")
        object.__setattr__(self, "names", names)
        chans = frozenset((int(i), int(j)) for i, j in self.channels)
        for i, j in chans:
            if i == j:
                raise ModelError(f"self-channel on {names[i]}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ModelError(f"channel ({i},{j}) out of range")
        object.__setattr__(self, "channels", chans)
        if self.costs is not None:
            missing = chans - set(self.costs)
            if missing:
                raise ModelError(f"costs missing for channels {sorted(missing)}")
            if any(c < 0 for c in self.costs.values()):
                raise ModelError("channel costs must be non-negative")
        if self.source < 0:
            object.__setattr__(self, "source", names.index("s") if "s" in names else 0)
        if self.dest < 0:
            object.__setattr__(self, "dest", names.index("d") if "d" in names else self.n - 1)
        out: List[List[int]] = [[] for _ in range(self.n)]
        for i, j in sorted(chans):
            out[i].append(j)
        object.__setattr__(self, "_out", tuple(tuple(o) for o in out))

    @classmethod
    def build(cls, names: Iterable[str], channels: Iterable[Tuple[str, str]], costs=None, **kw) -> "Network":
        names = tuple(names)
        ix = {nm: i for i, nm in enumerate(names)}
        chans = [(ix[a], ix[b]) for a, b in channels]
        cost_map = None
        if costs is not None:
            cost_map = {(ix[a], ix[b]): Fraction(c) for (a, b), c in costs.items()}
        return cls(len(names), frozenset(chans), names, cost_map, **kw)

    def out_neighbors(self, p: int) -> Tuple[int, ...]:
        return self._out[p]  # type: ignore[attr-defined]

    def index(self, name) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.n:
                raise ModelError(f"process {name} out of range")
            return name
        if isinstance(name, str) and name.isdigit() and name not in self.names:
            return self.index(int(name))
        try:
            return self.names.index(name)
        except ValueError:
            raise ModelError(f"unknown process {name!r}") from None

    def label(self, p: int) -> str:
        return self.names[p]

    def has_channel(self, i: int, j: int) -> bool:
        return (i, j) in self.channels


@dataclass(frozen=True, order=True)
class FailureEvent:
    proc: int
    time: int
    blocked: FrozenSet[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocked", frozenset(self.blocked))


@dataclass(frozen=True)
class FailurePattern:
    """A set of crash triples (process, crash time, blocked recipients)."""

    events: Tuple[FailureEvent, ...] = ()

    def __post_init__(self) -> None:
        evs = tuple(sorted(self.events, key=lambda e: (e.proc, e.time, sorted(e.blocked))))
        object.__setattr__(self, "events", evs)

    @classmethod
    def of(cls, *triples) -> "FailurePattern":
        return cls(tuple(FailureEvent(p, t, frozenset(bl)) for p, t, bl in triples))

    def __iter__(self) -> Iterator[FailureEvent]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    @property
    def procs(self) -> FrozenSet[int]:
        return frozenset(e.proc for e in self.events)

    def event_for(self, p: int) -> Optional[FailureEvent]:
        for e in self.events:
            if e.proc == p:
                return e
        return None


EMPTY_PATTERN = FailurePattern()


def validate_pattern(fp: FailurePattern, net: Network, f: int) -> bool:
    if len(fp) > f:
        return False
    procs = [e.proc for e in fp]
    if len(set(procs)) != len(procs):
        return False
    for e in fp:
        if not 0 <= e.proc < net.n or e.time < 0:
            return False
        if not e.blocked <= set(net.out_neighbors(e.proc)):
            return False
    return True


def harsher(fp1: FailurePattern, fp2: FailurePattern) -> bool:
    """True iff ``fp1 <= fp2``: every crash of ``fp2`` happens in ``fp1`` earlier, or at
    the same time with at least the same blocked recipients."""
    mine = {e.proc: e for e in fp1}
    for e in fp2:
        h = mine.get(e.proc)
        if h is None:
            return False
        if h.time < e.time:
            continue
        if h.time == e.time and e.blocked <= h.blocked:
            continue
        return False
    return True


@dataclass(frozen=True)
class Run:
    """A horizon-truncated execution.

    ``states[p][t]`` is p's local state at time t; a crashed process keeps the
    state it had at its crash time.  ``pattern`` is the pattern the run was
    generated from and ``prescribed[p]`` records whom a crashing process was
    supposed to message in its crash round.
    """

    vs: int
    pattern: FailurePattern
    horizon: int
    sends: FrozenSet[Tuple[int, int, int, Token]]
    actions: FrozenSet[Tuple[int, int, int]]
    states: Tuple[Tuple[LocalState, ...], ...]
    prescribed: Tuple[Tuple[int, FrozenSet[int]], ...] = ()
    multiplicity: int = field(default=1, compare=False)

    def _cached(self, name, build):
        val = self.__dict__.get(name)
        if val is None:
            val = build()
            object.__setattr__(self, name, val)
        return val

    @property
    def minimal(self) -> FailurePattern:
        """The least harsh pattern compatible with this run."""

        def build():
            presc = dict(self.prescribed)
            return FailurePattern(
                tuple(
                    FailureEvent(e.proc, e.time, e.blocked & presc.get(e.proc, frozenset()))
                    for e in self.pattern
                    if e.time < self.horizon
                )
            )

        return self._cached("_minimal", build)

    @property
    def failed(self) -> FrozenSet[int]:
        return self.minimal.procs

    @property
    def key(self) -> Tuple[int, FailurePattern]:
        return (self.vs, self.minimal)

    def state(self, p: int, t: int) -> LocalState:
        return self.states[p][t]

    def crash_time(self, p: int) -> Optional[int]:
        e = self.minimal.event_for(p)
        return None if e is None else e.time

    def active(self, p: int, t: int) -> bool:
        """Not crashed up to and including time t."""
        c = self.crash_time(p)
        return c is None or c > t

    def sent(self, i: int, j: int, t: int) -> bool:
        slots = self._cached("_slots", lambda: frozenset((i_, j_, t_) for t_, i_, j_, _ in self.sends))
        return (i, j, t) in slots

    def blocked(self, i: int, j: int, t: int) -> bool:
        """Channel (i, j) blocked at time t: listed in the crash round, every channel afterwards.

        Uses the pattern the run was generated from, so a crash that blocks a
        channel the protocol had no use for still rules out a null message on
        it.  Enumerated runs carry their minimal pattern."""
        e = self.pattern.event_for(i)
        if e is None or e.time >= self.horizon:
            return False
        return t > e.time or (t == e.time and j in e.blocked)

    def action_time(self, p: int, index: int) -> Optional[int]:
        for q, h, t in self.actions:
            if q == p and h == index:
                return t
        return None


class Protocol:
    """Deterministic protocol: a pure function of (process, local state)."""

    name = "protocol"

    def __init__(self, net: Network):
        self.net = net

    def initial_value(self, p: int, vs: int):
        return vs if p == self.net.source else None

    def step(self, p: int, state: LocalState) -> Step:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"family": self.name}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


@dataclass(frozen=True)
class ORInstance:
    """Ordered-response instance: actor ``actors[h-1]`` performs action h at ``times[h-1]``."""

    actors: Tuple[int, ...]
    times: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "actors", tuple(self.actors))
        object.__setattr__(self, "times", tuple(self.times))
        if not self.actors or len(self.actors) != len(self.times):
            raise ModelError("ordered-response instance needs k >= 1 actors with one time each")
        if any(a > b for a, b in zip(self.times, self.times[1:])):
            raise ModelError("action times must be non-decreasing")

    @property
    def k(self) -> int:
        return len(self.actors)

    def node(self, h: int) -> Node:
        """theta_h for 1-based h."""
        return (self.actors[h - 1], self.times[h - 1])

    def node_after(self, h: int) -> Node:
        return (self.actors[h - 1], self.times[h - 1] + 1)
