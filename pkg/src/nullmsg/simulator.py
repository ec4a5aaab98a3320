"""Round engine and exhaustive enumeration of a protocol's run space."""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .model import (
    ACT,
    EMPTY_PATTERN,
    RECV,
    SENT,
    Event,
    FailureEvent,
    FailurePattern,
    LocalState,
    ModelError,
    Network,
    Protocol,
    ProtocolViolation,
    Run,
    Step,
)

log = logging.getLogger(__name__)

DEFAULT_CAPS = {"n": 6, "horizon": 6, "f": 3, "runs": 400_000}


class ResourceBoundError(RuntimeError):
    """An exhaustive search would exceed its configured size cap."""


@dataclass(frozen=True)
class Prefix:
    """A run cut at time ``t``; the unit the layered enumeration works on."""

    vs: int
    t: int
    states: Tuple[Tuple[LocalState, ...], ...]
    sends: Tuple[tuple, ...]
    actions: Tuple[tuple, ...]
    crashes: Tuple[Tuple[FailureEvent, FrozenSet[int]], ...]
    multiplicity: int = 1

    def state(self, p: int) -> LocalState:
        return self.states[p][-1]

    def crashed(self, p: int) -> bool:
        return any(e.proc == p for e, _ in self.crashes)

    def crash_time(self, p: int) -> Optional[int]:
        for e, _ in self.crashes:
            if e.proc == p:
                return e.time
        return None


def initial_prefix(q: Protocol, vs: int) -> Prefix:
    states = tuple((LocalState(q.initial_value(p, vs), 0, ()),) for p in range(q.net.n))
    return Prefix(vs, 0, states, (), (), ())


def plan_round(q: Protocol, pre: Prefix) -> Dict[int, Step]:
    """Steps of every process still active at ``pre.t``."""
    net = q.net
    plans = {}
    for p in range(net.n):
        if pre.crashed(p):
            continue
        st = q.step(p, pre.state(p))
        for j, _ in st.sends:
            if not net.has_channel(p, j):
                raise ProtocolViolation(
                    f"{q.name}: {net.label(p)} sends to {net.label(j)} at time {pre.t} without a channel"
                )
        if len({j for j, _ in st.sends}) != len(st.sends):
            raise ProtocolViolation(f"{q.name}: two messages on one channel at time {pre.t}")
        plans[p] = st
    return plans


def advance(pre: Prefix, plans: Dict[int, Step], crashing: Dict[int, FrozenSet[int]], multiplicity: int = 1) -> Prefix:
    """Execute round ``pre.t + 1``.  ``crashing`` maps processes crashing at ``pre.t`` to blocked sets."""
    t = pre.t
    n = len(pre.states)
    inbox: List[List[Event]] = [[] for _ in range(n)]
    sends = list(pre.sends)
    actions = list(pre.actions)
    crashes = list(pre.crashes)
    own: Dict[int, List[Event]] = {}
    for p, st in plans.items():
        bl = crashing.get(p)
        mine = []
        for j, msg in sorted(st.sends, key=lambda x: x[0]):
            if bl is not None and j in bl:
                continue
            sends.append((t, p, j, msg))
            mine.append(Event(SENT, j, msg, t))
            inbox[j].append(Event(RECV, p, msg, t + 1))
        if bl is None:
            for h in sorted(st.actions):
                actions.append((p, h, t))
                mine.append(Event(ACT, h, None, t))
        else:
            crashes.append((FailureEvent(p, t, bl), frozenset(j for j, _ in st.sends)))
        own[p] = mine
    states = []
    for p in range(n):
        hist = pre.states[p]
        if p not in plans or p in crashing:
            states.append(hist + (hist[-1],))
            continue
        cur = hist[-1]
        evs = cur.events + tuple(own[p]) + tuple(sorted(inbox[p], key=lambda e: e.peer))
        states.append(hist + (LocalState(cur.value, t + 1, evs),))
    return Prefix(pre.vs, t + 1, tuple(states), tuple(sends), tuple(actions), tuple(crashes), pre.multiplicity * multiplicity)


def finish(pre: Prefix) -> Run:
    pattern = FailurePattern(tuple(e for e, _ in pre.crashes))
    prescribed = tuple(sorted((e.proc, presc) for e, presc in pre.crashes))
    return Run(
        vs=pre.vs,
        pattern=pattern,
        horizon=pre.t,
        sends=frozenset(pre.sends),
        actions=frozenset(pre.actions),
        states=pre.states,
        prescribed=prescribed,
        multiplicity=pre.multiplicity,
    )


def simulate(q: Protocol, vs: int, fp: FailurePattern, horizon: int) -> Run:
    """The unique run of ``q`` from initial value ``vs`` under pattern ``fp``."""
    net = q.net
    if vs not in (0, 1):
        raise ModelError("the source value must be 0 or 1")
    seen = set()
    for e in fp:
        if e.proc in seen:
            raise ModelError(f"process {net.label(e.proc)} crashes twice")
        seen.add(e.proc)
        if not 0 <= e.proc < net.n or e.time < 0:
            raise ModelError(f"bad failure event {e}")
        if not e.blocked <= set(net.out_neighbors(e.proc)):
            raise ModelError(f"{net.label(e.proc)} blocks a channel it does not have")
    by_time: Dict[int, Dict[int, FrozenSet[int]]] = defaultdict(dict)
    for e in fp:
        by_time[e.time][e.proc] = e.blocked
    pre = initial_prefix(q, vs)
    for _ in range(horizon):
        plans = plan_round(q, pre)
        crashing = {p: bl for p, bl in by_time.get(pre.t, {}).items() if p in plans}
        pre = advance(pre, plans, crashing)
    run = finish(pre)
    # keep the caller's pattern (incl. events past the horizon) for compatibility checks
    return Run(run.vs, fp, horizon, run.sends, run.actions, run.states, run.prescribed)


def nice_run(q: Protocol, horizon: int) -> Run:
    return simulate(q, 1, EMPTY_PATTERN, horizon)


def minimal_pattern(r: Run) -> FailurePattern:
    return r.minimal


def is_compatible(r: Run, fp: FailurePattern) -> bool:
    """Both clauses of run/pattern compatibility, evaluated within the horizon."""
    inside = [e for e in fp if e.time < r.horizon]
    if {(e.proc, e.time) for e in inside} != {(e.proc, e.time) for e in r.minimal}:
        return False
    presc = dict(r.prescribed)
    for e in inside:
        for j in presc.get(e.proc, ()):
            if r.sent(e.proc, j, e.time) == (j in e.blocked):
                return False
    return True


def _crash_options(net: Network, plans: Dict[int, Step], budget: int) -> Iterator[Tuple[Dict[int, FrozenSet[int]], int]]:
    """Every way the active processes can crash this round, blocking only prescribed recipients.

    Yields (crashing map, number of raw failure patterns it stands for)."""
    active = sorted(plans)
    for k in range(0, min(budget, len(active)) + 1):
        for who in itertools.combinations(active, k):
            choices = []
            weight = 1
            for p in who:
                presc = sorted(j for j, _ in plans[p].sends)
                weight *= 2 ** (len(net.out_neighbors(p)) - len(presc))
                choices.append([frozenset(c) for r_ in range(len(presc) + 1) for c in itertools.combinations(presc, r_)])
            for combo in itertools.product(*choices):
                yield dict(zip(who, combo)), weight


LayerHook = Callable[[int, Sequence[Prefix]], None]


def expand(q: Protocol, f: int, horizon: int, on_layer: Optional[LayerHook] = None, cap: int = DEFAULT_CAPS["runs"]) -> List[Run]:
    """All distinct runs of ``q`` with at most ``f`` crashes, built one time layer at a time.

    ``on_layer(t, prefixes)`` sees every run prefix at time t before any process
    steps at t; knowledge-based protocols use it to tabulate their guards."""
    net = q.net
    layer = [initial_prefix(q, vs) for vs in (0, 1)]
    for t in range(horizon):
        if on_layer is not None:
            on_layer(t, layer)
        nxt = []
        for pre in layer:
            plans = plan_round(q, pre)
            for crashing, weight in _crash_options(net, plans, f - len(pre.crashes)):
                nxt.append(advance(pre, plans, crashing, weight))
                if len(nxt) > cap:
                    raise ResourceBoundError(f"more than {cap} run prefixes at time {t + 1}; shrink the instance")
        layer = nxt
    if on_layer is not None:
        on_layer(horizon, layer)
    return [finish(p) for p in layer]


def count_patterns(net: Network, f: int, horizon: int) -> int:
    """Closed-form number of failure patterns with crash times below the horizon."""
    weights = [horizon * 2 ** len(net.out_neighbors(p)) for p in range(net.n)]
    total = 0
    for k in range(f + 1):
        for who in itertools.combinations(range(net.n), k):
            prod = 1
            for p in who:
                prod *= weights[p]
            total += prod
    return total


def check_caps(net: Network, f: int, horizon: int, caps: Optional[dict] = None) -> None:
    caps = {**DEFAULT_CAPS, **(caps or {})}
    est = 2 * count_patterns(net, f, horizon)
    if net.n > caps["n"] or horizon > caps["horizon"] or f > caps["f"]:
        raise ResourceBoundError(
            f"instance N={net.n}, T={horizon}, f={f} exceeds caps N<={caps['n']}, T<={caps['horizon']}, "
            f"f<={caps['f']} (estimated {est} runs)"
        )
    if est > caps["runs"]:
        raise ResourceBoundError(f"estimated {est} runs exceeds the cap of {caps['runs']}; shrink N, T or f")


class RunIndex:
    """The enumerated run space R(Q, gamma^f) at a horizon, indexed by local state."""

    def __init__(self, q: Protocol, f: int, horizon: int, runs: List[Run]):
        self.protocol = q
        self.net = q.net
        self.f = f
        self.horizon = horizon
        self.runs = runs
        self.by_key = {r.key: i for i, r in enumerate(runs)}
        self._states: Dict[Tuple[int, int], Dict] = defaultdict(lambda: defaultdict(list))
        for rid, r in enumerate(runs):
            for p in range(self.net.n):
                for t in range(horizon + 1):
                    self._states[(p, t)][r.states[p][t]].append(rid)
        self.possible_sends = frozenset((i, j, t) for r in runs for t, i, j, _ in r.sends)
        self.nice_id = self.by_key[(1, EMPTY_PATTERN)]
        self._cg_cache: Dict[int, object] = {}
        self.memo: Dict[Tuple, Optional[int]] = {}

    def __len__(self) -> int:
        return len(self.runs)

    @property
    def nice(self) -> Run:
        return self.runs[self.nice_id]

    @property
    def pattern_count(self) -> int:
        """Number of (vs, failure pattern) combinations the runs stand for."""
        return sum(r.multiplicity for r in self.runs)

    def id_of(self, r: Run) -> int:
        return self.by_key[r.key]

    def indistinguishable(self, p: int, t: int, state) -> List[int]:
        return self._states[(p, t)].get(state, [])

    def state_classes(self, p: int, t: int):
        return self._states[(p, t)]

    def find(self, vs: int, fp: FailurePattern) -> Run:
        """The indexed run for a (vs, pattern) pair, whatever its redundant blocked entries."""
        r = simulate(self.protocol, vs, fp, self.horizon)
        return self.runs[self.by_key[r.key]]

    def cg(self, r: Run):
        from .commgraph import build_cg

        rid = self.id_of(r)
        g = self._cg_cache.get(rid)
        if g is None:
            g = self._cg_cache[rid] = build_cg(r, self)
        return g


def enumerate_runs(q: Protocol, f: int, horizon: int, caps: Optional[dict] = None) -> RunIndex:
    """Enumerate one run per distinct (vs, minimal failure pattern)."""
    check_caps(q.net, f, horizon, caps)
    cap = (caps or {}).get("runs", DEFAULT_CAPS["runs"])
    try:
        runs = expand(q, f, horizon, cap=cap)
    except ResourceBoundError as exc:
        raise ResourceBoundError(f"{exc} (closed-form estimate {2 * count_patterns(q.net, f, horizon)} runs)") from None
    log.debug("enumerated %d runs (%d patterns) for %s", len(runs), sum(r.multiplicity for r in runs), q.name)
    return RunIndex(q, f, horizon, runs)
