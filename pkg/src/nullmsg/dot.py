"""Graphviz export of communication graphs: actual edges solid, null edges dashed."""

from __future__ import annotations

import re
from typing import List, Optional, Tuple

from .commgraph import CommGraph, EdgeKind
from .model import Network

_STYLE = {EdgeKind.ACTUAL: "solid", EdgeKind.NULL: "dashed", EdgeKind.LOCAL: "dotted"}
_EDGE = re.compile(r'^\s*"([^"@]+)@(\d+)"\s*->\s*"([^"@]+)@(\d+)"\s*\[style=(\w+)\];')


def _name(net: Optional[Network], p: int) -> str:
    return net.label(p) if net is not None else str(p)


def export_dot(cg: CommGraph, local: bool = False, name: str = "cg") -> str:
    net = cg.net
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    edges = cg.edges()
    for (p, t), (q, u), kind in sorted(edges, key=lambda e: (e[0][1], e[0][0], e[1][0], e[2].value)):
        if kind is EdgeKind.LOCAL and not local:
            continue
        a, b = f"{_name(net, p)}@{t}", f"{_name(net, q)}@{u}"
        lines.append(f'  "{a}" -> "{b}" [style={_STYLE[kind]}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_dot(text: str, net: Optional[Network] = None) -> List[Tuple[Tuple[int, int], Tuple[int, int], EdgeKind]]:
    """Edges of a graph written by export_dot."""
    by_style = {v: k for k, v in _STYLE.items()}
    out = []
    for line in text.splitlines():
        m = _EDGE.match(line)
        if not m:
            continue
        p, t, q, u, style = m.groups()
        pi = net.index(p) if net is not None else int(p)
        qi = net.index(q) if net is not None else int(q)
        out.append(((pi, int(t)), (qi, int(u)), by_style[style]))
    return out
