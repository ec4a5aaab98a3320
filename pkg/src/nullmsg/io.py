"""JSON formats for networks, graphs, instances, patterns and runs."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from .commgraph import CommGraph, EdgeKind
from .model import FailureEvent, FailurePattern, ModelError, Network, ORInstance, Run


def load_json(path_or_text) -> Any:
    """Parse a file path, or inline JSON when the argument starts with '{' or '['."""
    text = str(path_or_text)
    if text.lstrip().startswith(("{", "[")):
        return json.loads(text)
    return json.loads(Path(text).read_text())


def _proc(net: Network, x) -> int:
    return net.index(x)


def network_from_json(d: Dict) -> Tuple[Network, Optional[int], Optional[int]]:
    """Returns the network plus the optional f and horizon it carries."""
    n = int(d["n"])
    names = tuple(d.get("names") or ())
    probe = Network(n, frozenset(), names)
    chans = frozenset((_proc(probe, a), _proc(probe, b)) for a, b in d.get("channels", ()))
    costs = None
    if d.get("costs") is not None:
        costs = {}
        for key, val in d["costs"].items():
            a, _, b = key.partition("-")
            costs[(_proc(probe, a), _proc(probe, b))] = Fraction(str(val))
    kw = {}
    for role in ("source", "dest"):
        if d.get(role) is not None:
            kw[role] = _proc(probe, d[role])
    net = Network(n, chans, probe.names, costs, **kw)
    return net, d.get("f"), d.get("horizon")


def _money(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def network_to_json(net: Network, f: Optional[int] = None, horizon: Optional[int] = None) -> Dict:
    out: Dict[str, Any] = {
        "n": net.n,
        "names": list(net.names),
        "channels": [[net.label(i), net.label(j)] for i, j in sorted(net.channels)],
        "source": net.label(net.source),
        "dest": net.label(net.dest),
    }
    if net.costs is not None:
        out["costs"] = {f"{net.label(i)}-{net.label(j)}": _money(c) for (i, j), c in sorted(net.costs.items())}
    if f is not None:
        out["f"] = f
    if horizon is not None:
        out["horizon"] = horizon
    return out


def cg_to_json(cg: CommGraph) -> Dict:
    edges = [[i, t, j, t + 1, k.value] for (i, j, t), k in sorted(cg.messages.items())]
    return {"n": cg.n, "horizon": cg.horizon, "edges": edges}


def cg_from_json(d: Dict, net: Optional[Network] = None) -> CommGraph:
    horizon = int(d["horizon"])
    n = net.n if net is not None else int(d["n"])
    msgs = {}
    for e in d["edges"]:
        p, t, q, t2, kind = e
        if net is not None:
            p, q = net.index(p), net.index(q)
        k = EdgeKind(kind)
        if t2 != t + 1:
            raise ModelError(f"edge {e} does not advance one round")
        if k is EdgeKind.LOCAL:
            if p != q:
                raise ModelError(f"local edge {e} between different processes")
            continue
        if (p, q, t) in msgs:
            raise ModelError(f"edge {e} listed twice")
        msgs[(p, q, t)] = k
    return CommGraph(n, horizon, msgs, net)


def instance_from_json(d: Dict, net: Network) -> ORInstance:
    return ORInstance(tuple(net.index(a) for a in d["actors"]), tuple(int(t) for t in d["times"]))


def instance_to_json(inst: ORInstance, net: Optional[Network] = None) -> Dict:
    actors = [net.label(a) for a in inst.actors] if net is not None else list(inst.actors)
    return {"actors": actors, "times": list(inst.times)}


def pattern_from_json(d, net: Network) -> FailurePattern:
    events = []
    for p, t, bl in d:
        events.append(FailureEvent(net.index(p), int(t), frozenset(net.index(x) for x in bl)))
    return FailurePattern(tuple(events))


def pattern_to_json(fp: FailurePattern):
    return [[e.proc, e.time, sorted(e.blocked)] for e in fp]


def run_to_json(r: Run) -> Dict:
    return {
        "vs": r.vs,
        "pattern": pattern_to_json(r.minimal),
        "horizon": r.horizon,
        "sends": [list(s) for s in sorted(r.sends, key=repr)],
        "actions": [list(a) for a in sorted(r.actions)],
    }
