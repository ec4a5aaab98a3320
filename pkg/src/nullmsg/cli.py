"""Command line: simulate, enumerate, graph, check, know, synth, verify, cost.

Exit codes: 0 ok / verdict true, 1 verdict false, 2 input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional, Tuple

from . import io
from .commgraph import (
    build_cg,
    check_f_block,
    check_ffailed_block,
    silent_choir,
)
from .conditions import check_or_conservative, check_or_necessary, check_robust_conditions
from .cost import ocean_scenario, run_cost
from .dot import export_dot
from .knowledge import (
    NOT_ONE_OR_SOURCE_FAULTY,
    ActionDone,
    ChainReached,
    NotNice,
    SourceFaulty,
    ValueIs,
    counterexample,
    knows,
)
from .model import FailureEvent, FailurePattern, ModelError, Network, Node
from .protocols import BUILTINS, complete_network, net1, ocean_network
from .simulator import ResourceBoundError, count_patterns, enumerate_runs, simulate

OK, FALSE, INPUT_ERROR, RESOURCE = 0, 1, 2, 3
BUILTIN_NETS = {"net1": net1, "ocean": ocean_network}


class InputError(Exception):
    pass


def load_network(text: str) -> Tuple[Network, Optional[int], Optional[int]]:
    if text in BUILTIN_NETS:
        return BUILTIN_NETS[text](), None, None
    if text.startswith("complete:"):
        return complete_network(int(text.split(":", 1)[1])), None, None
    return io.network_from_json(io.load_json(text))


def load_protocol(text: str, net: Network, f: int):
    from .synth import synth_nbm, synth_or, synth_rbm

    family, _, arg = text.partition(":")
    if family in BUILTINS and not arg:
        return BUILTINS[family](net)
    if family in ("nbm", "rbm", "or") and arg:
        parts = arg.split(",")
        target = io.cg_from_json(io.load_json(parts[0]), net)
        if family == "nbm":
            return synth_nbm(target, net)
        if family == "rbm":
            return synth_rbm(target, f, net)
        if len(parts) != 2:
            raise InputError("or:<graph>,<instance> needs both files")
        return synth_or(target, io.instance_from_json(io.load_json(parts[1]), net), net)
    raise InputError(f"unknown protocol {text!r}")


def parse_node(text: str, net: Network) -> Node:
    p, sep, t = text.partition("@")
    if not sep:
        raise InputError(f"node {text!r} must look like name@time")
    return (net.index(p), int(t))


def parse_pattern(text: Optional[str], net: Network) -> FailurePattern:
    """Either JSON [[proc, time, [blocked...]], ...] or 'p@1>d,q;s@0' (no '>' blocks nothing)."""
    if not text:
        return FailurePattern()
    if text.lstrip().startswith("["):
        return io.pattern_from_json(json.loads(text), net)
    events = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        head, _, bl = chunk.partition(">")
        p, t = parse_node(head, net)
        events.append(FailureEvent(p, t, frozenset(net.index(x) for x in bl.split(",") if x)))
    return FailurePattern(tuple(events))


def parse_fact(text: str, net: Network):
    if text in ("v=0", "v=1"):
        return ValueIs(int(text[-1]))
    if text == "not-nice":
        return NotNice()
    if text == "s-faulty":
        return SourceFaulty()
    if text in ("v!=1|s-faulty", "robust"):
        return NOT_ONE_OR_SOURCE_FAULTY
    if text.startswith("done:"):
        return ActionDone(int(text[5:]))
    if text.startswith("chain:"):
        a, b = text[6:].split(",")
        return ChainReached(parse_node(a, net), parse_node(b, net))
    raise InputError(f"unknown fact {text!r}")


class Context:
    def __init__(self, args):
        self.args = args
        self.net, f, horizon = load_network(args.net)
        self.f = args.f if args.f is not None else (f if f is not None else 1)
        self.horizon = args.horizon if args.horizon is not None else (horizon if horizon is not None else 2)
        self._q = None

    @property
    def q(self):
        if self._q is None:
            self._q = load_protocol(self.args.protocol, self.net, self.f)
        return self._q

    def run(self):
        return simulate(self.q, self.args.vs, parse_pattern(self.args.pattern, self.net), self.horizon)

    def index(self):
        return enumerate_runs(self.q, self.f, self.horizon)

    def emit(self, obj, text: str) -> None:
        print(json.dumps(obj, indent=2, default=_jsonable) if self.args.json else text)


def _jsonable(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    return str(x)


def _labels(net: Network, procs) -> List[str]:
    return [net.label(p) for p in sorted(procs)]


def cmd_simulate(ctx: Context) -> int:
    r = ctx.run()
    net = ctx.net
    lines = [f"vs={r.vs} pattern={io.pattern_to_json(r.minimal)} horizon={r.horizon}"]
    for t, i, j, tok in sorted(r.sends, key=repr):
        lines.append(f"  t={t} {net.label(i)} -> {net.label(j)}: {tok}")
    for p, h, t in sorted(r.actions):
        lines.append(f"  t={t} {net.label(p)} performs a{h}")
    ctx.emit(io.run_to_json(r), "\n".join(lines))
    return OK


def cmd_enumerate(ctx: Context) -> int:
    idx = ctx.index()
    closed = 2 * count_patterns(ctx.net, ctx.f, ctx.horizon)
    out = {"runs": len(idx), "patterns": idx.pattern_count, "closed_form": closed}
    ctx.emit(out, f"{len(idx)} distinct runs, {idx.pattern_count} (vs, pattern) pairs, closed form {closed}")
    return OK


def _graph(ctx: Context):
    if ctx.args.target:
        return io.cg_from_json(io.load_json(ctx.args.target), ctx.net)
    idx = ctx.index()
    return build_cg(idx.find(ctx.args.vs, parse_pattern(ctx.args.pattern, ctx.net)), idx)


def cmd_graph(ctx: Context) -> int:
    cg = _graph(ctx)
    if ctx.args.dot:
        print(export_dot(cg, local=ctx.args.local), end="")
    else:
        print(json.dumps(io.cg_to_json(cg), indent=2))
    return OK


def cmd_check(ctx: Context) -> int:
    a = ctx.args
    net = ctx.net
    cond = a.condition
    src = parse_node(a.src, net) if a.src else (net.source, 0)
    if cond == "nice-it":
        from .synth import synth_nbm

        cg = _graph(ctx)
        dst = parse_node(a.dst, net) if a.dst else (net.dest, cg.horizon)
        blk = check_f_block(cg, src, dst, ctx.f, a.exhaustive)
        q = synth_nbm(cg, net)
        idx = enumerate_runs(q, ctx.f, cg.horizon)
        k = knows(net.dest, ValueIs(1), idx.nice, dst[1], idx)
        ctx.emit({"block": blk.ok, "knows": k}, f"f-resilient block: {blk.ok}; d knows v_s=1 in the nice run: {k}")
        return OK if blk.ok and k else FALSE
    if cond in ("block", "ffailed", "choir"):
        if a.target:
            cg, failed, r = _graph(ctx), frozenset(), None
        else:
            idx = ctx.index()
            r = idx.find(a.vs, parse_pattern(a.pattern, net))
            cg, failed = idx.cg(r), r.failed
        dst = parse_node(a.dst, net) if a.dst else (net.dest, cg.horizon)
        if cond == "choir":
            if r is None:
                raise InputError("the choir check needs a run, not a target graph")
            S = silent_choir(r, cg, dst[1], ctx.f)
            ctx.emit({"choir": None if S is None else _labels(net, S)}, f"silent choir: {None if S is None else _labels(net, S)}")
            return OK if S is not None else FALSE
        blk = check_ffailed_block(cg, src, dst, ctx.f, failed if cond == "ffailed" else (), a.exhaustive)
        wit = None if blk.witness is None else _labels(net, blk.witness)
        ctx.emit({"ok": blk.ok, "witness": wit, "checked": blk.checked}, f"block ok: {blk.ok}" + ("" if blk.ok else f"; B = {wit}"))
        return OK if blk.ok else FALSE
    cg = _graph(ctx)
    if cond == "robust":
        rep = check_robust_conditions(cg, ctx.f, literal=a.literal)
    else:
        if not a.instance:
            raise InputError(f"{cond} needs --instance")
        inst = io.instance_from_json(io.load_json(a.instance), net)
        rep = (check_or_necessary if cond == "or-nec" else check_or_conservative)(cg, inst, ctx.f)
    viol = [[c, w] for c, w in rep.violations]
    ctx.emit({"ok": rep.ok, "violations": viol}, f"{cond}: {'ok' if rep.ok else 'violated'}" + "".join(f"\n  {c}: {w}" for c, w in viol))
    return OK if rep.ok else FALSE


def cmd_know(ctx: Context) -> int:
    a, net = ctx.args, ctx.net
    idx = ctx.index()
    if a.run is not None:
        if not 0 <= a.run < len(idx):
            raise InputError(f"run id {a.run} outside 0..{len(idx) - 1}")
        r = idx.runs[a.run]
    else:
        r = idx.find(a.vs, parse_pattern(a.pattern, net))
    p = net.index(a.proc)
    m = ctx.horizon if a.time is None else a.time
    fact = parse_fact(a.fact, net)
    ce = counterexample(p, fact, r, m, idx)
    out = {"knows": ce is None, "run": idx.id_of(r), "crashed": not r.active(p, m)}
    text = f"K_{net.label(p)}({a.fact}) at time {m}: {ce is None}"
    if ce is not None:
        other = idx.runs[ce]
        out["counterexample"] = {"id": ce, **io.run_to_json(other)}
        text += f"\n  indistinguishable run {ce}: vs={other.vs} pattern={io.pattern_to_json(other.minimal)}"
    ctx.emit(out, text)
    return OK if ce is None else FALSE


def cmd_synth(ctx: Context) -> int:
    from .synth import synth_nbm, synth_or, synth_rbm

    a = ctx.args
    if not a.target:
        raise InputError("synth needs --target")
    cg = io.cg_from_json(io.load_json(a.target), ctx.net)
    if a.family == "nbm":
        q = synth_nbm(cg, ctx.net)
    elif a.family == "rbm":
        q = synth_rbm(cg, ctx.f, ctx.net)
    else:
        if not a.instance:
            raise InputError("the or family needs --instance")
        q = synth_or(cg, io.instance_from_json(io.load_json(a.instance), ctx.net), ctx.net)
    desc = q.describe()
    desc["network"] = io.network_to_json(ctx.net, ctx.f, cg.horizon)
    print(json.dumps(desc, indent=2))
    return OK


def cmd_verify(ctx: Context) -> int:
    from .harness import verify_sweeps

    a = ctx.args
    if a.all:
        targets = [(name, cls(net1()), 1, 2) for name, cls in sorted(BUILTINS.items())]
    else:
        targets = [(a.protocol, ctx.q, ctx.f, ctx.horizon)]
    ok = True
    summary = {}
    for name, q, f, T in targets:
        rep = verify_sweeps(q, f, T, mutate=a.mutate)
        ok &= rep.ok
        summary[name] = {"ok": rep.ok, "checked": dict(rep.checked), "violations": [[c, w] for c, w in rep.violations[:20]]}
    text = "\n".join(
        f"{name}: {'ok' if s['ok'] else 'VIOLATED'} ({sum(s['checked'].values())} instances)"
        + "".join(f"\n  {c}: {w}" for c, w in s["violations"])
        for name, s in summary.items()
    )
    ctx.emit(summary, text)
    return OK if ok else FALSE


def cmd_cost(ctx: Context) -> int:
    a = ctx.args
    if a.scenario == "ocean":
        rep = ocean_scenario(a.nice_runs, a.bad_runs)
        out = {
            "cheapest_chain": rep.chain,
            "nice": rep.nice,
            "worst": rep.worst,
            "mixed": rep.mixed,
            "baseline": rep.baseline,
            "informed": rep.informed,
        }
        text = "\n".join(f"{k}: {_jsonable(v) if not isinstance(v, bool) else v}" for k, v in out.items())
        ctx.emit(out, text)
        return OK
    c = run_cost(ctx.run(), ctx.net)
    ctx.emit({"cost": c}, f"cost: {_jsonable(c)}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nullmsg", description=__doc__.splitlines()[0])
    ap.add_argument("--net", default="net1", help="network JSON file, or net1 / ocean / complete:N")
    ap.add_argument("--f", type=int, default=None, help="failure bound")
    ap.add_argument("--horizon", type=int, default=None)
    ap.add_argument("--protocol", default="p2", help="p1, p2, silent, flood, nbm:<cg>, rbm:<cg>, or:<cg>,<inst>")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--exhaustive", action="store_true", help="block checks try every set B")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def run_args(p):
        p.add_argument("--vs", type=int, default=1)
        p.add_argument("--pattern", default="", help="e.g. 'p@1>d;s@0' or JSON [[p,t,[..]]]")

    p = sub.add_parser("simulate")
    run_args(p)
    sub.add_parser("enumerate")
    p = sub.add_parser("graph")
    run_args(p)
    p.add_argument("--target", help="graph JSON instead of a run")
    p.add_argument("--dot", action="store_true")
    p.add_argument("--local", action="store_true", help="include local edges in DOT")
    p = sub.add_parser("check")
    run_args(p)
    p.add_argument("--condition", required=True, choices=["block", "ffailed", "choir", "robust", "or-nec", "or-cons", "nice-it"])
    p.add_argument("--target")
    p.add_argument("--instance")
    p.add_argument("--src", help="node name@time (default source@0)")
    p.add_argument("--dst", help="node name@time (default dest@horizon)")
    p.add_argument("--literal", action="store_true", help="robust check: only one path must avoid source nulls")
    p = sub.add_parser("know")
    run_args(p)
    p.add_argument("--fact", required=True, help="v=0, v=1, not-nice, s-faulty, robust, done:H, chain:A,B")
    p.add_argument("--proc", default="d")
    p.add_argument("--time", type=int)
    p.add_argument("--run", type=int, help="run id from the enumeration")
    p = sub.add_parser("synth")
    p.add_argument("--family", required=True, choices=["nbm", "rbm", "or"])
    p.add_argument("--target")
    p.add_argument("--instance")
    p = sub.add_parser("verify")
    p.add_argument("--all", action="store_true", help="every builtin protocol on net1, f=1, horizon 2")
    p.add_argument("--mutate", action="store_true", help="corrupt the block checker to test the harness")
    p = sub.add_parser("cost")
    run_args(p)
    p.add_argument("--scenario", choices=["ocean"])
    p.add_argument("--nice-runs", type=int, default=100)
    p.add_argument("--bad-runs", type=int, default=2)
    return ap


COMMANDS = {
    "simulate": cmd_simulate,
    "enumerate": cmd_enumerate,
    "graph": cmd_graph,
    "check": cmd_check,
    "know": cmd_know,
    "synth": cmd_synth,
    "verify": cmd_verify,
    "cost": cmd_cost,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.cmd](Context(args))
    except ResourceBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RESOURCE
    except (InputError, ModelError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
