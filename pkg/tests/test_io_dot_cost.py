import json
from collections import Counter
from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from nullmsg import io
from nullmsg.commgraph import CommGraph, EdgeKind
from nullmsg.cost import (
    CostError,
    ScenarioMix,
    cheapest_chain,
    mix_cost,
    ocean_scenario,
    ocean_target,
    run_cost,
)
from nullmsg.dot import export_dot, parse_dot
from nullmsg.gen import random_network, random_target
from nullmsg.model import EMPTY_PATTERN, FailurePattern, ModelError
from nullmsg.protocols import P2, Silent, net1, ocean_network
from nullmsg.simulator import nice_run, simulate
from nullmsg.synth import synth_nbm

A, N = EdgeKind.ACTUAL, EdgeKind.NULL


def test_network_round_trip():
    net = ocean_network()
    d = io.network_to_json(net, 2, 2)
    back, f, T = io.network_from_json(json.loads(json.dumps(d)))
    assert back == net and back.costs == net.costs and (f, T) == (2, 2)
    assert back.source == net.source and back.dest == net.dest


def test_network_json_by_index():
    net, f, T = io.network_from_json({"n": 3, "channels": [[0, 1], [1, 2]], "costs": {"0-1": 0.5, "1-2": 2}})
    assert net.costs[(0, 1)] == Fraction(1, 2) and f is None
    with pytest.raises(ModelError):
        io.network_from_json({"n": 2, "channels": [[0, 0]]})


def test_cg_round_trip(idx_p2_f1):
    cg = idx_p2_f1.cg(idx_p2_f1.nice)
    d = io.cg_to_json(cg)
    assert io.cg_from_json(d, cg.net).messages == cg.messages
    d["edges"].append([0, 0, 0, 1, "local"])
    assert io.cg_from_json(d, cg.net).messages == cg.messages
    with pytest.raises(ModelError):
        io.cg_from_json({"horizon": 2, "edges": [[0, 0, 1, 2, "actual"]]}, cg.net)


def test_named_edges_and_instances():
    net = ocean_network()
    cg = io.cg_from_json({"horizon": 2, "edges": [["s", 0, "p1", 1, "actual"]]}, net)
    assert cg.messages == {(0, 1, 0): A}
    inst = io.instance_from_json({"actors": ["p1", "d"], "times": [1, 2]}, net)
    assert io.instance_to_json(inst, net) == {"actors": ["p1", "d"], "times": [1, 2]}


def test_run_export(net):
    r = simulate(P2(net), 0, FailurePattern.of((1, 1, {2})), 2)
    d = io.run_to_json(r)
    assert d["vs"] == 0 and d["pattern"] == [[1, 1, [2]]]
    assert [0, 0, 1, 0] in d["sends"]
    assert io.pattern_from_json(d["pattern"], net) == r.minimal


def test_dot_r2(idx_p2_f1):
    text = export_dot(idx_p2_f1.cg(idx_p2_f1.nice))
    assert text.count("style=solid") == 1 and text.count("style=dashed") == 2
    assert '"s@0" -> "p@1" [style=solid];' in text
    assert "dotted" not in text and "dotted" in export_dot(idx_p2_f1.cg(idx_p2_f1.nice), local=True)


def test_dot_empty_graph():
    text = export_dot(CommGraph(3, 2, {}))
    assert text == "digraph cg {\n  rankdir=LR;\n}\n"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_dot_round_trip(seed, local):
    rng = random.Random(seed)
    net = random_network(rng)
    cg = random_target(rng, net, rng.randint(1, 3))
    text = export_dot(cg, local=local)
    assert text == export_dot(cg, local=local)
    assert Counter(parse_dot(text, net)) == Counter(e for e in cg.edges() if local or e[2] is not EdgeKind.LOCAL)


def test_costs():
    net = ocean_network()
    q = synth_nbm(ocean_target(net))
    assert run_cost(nice_run(q, 2), net) == 2
    assert run_cost(simulate(q, 0, EMPTY_PATTERN, 2), net) == 3003
    assert run_cost(nice_run(Silent(net), 2), net) == 0
    assert cheapest_chain(net) == 1001
    with pytest.raises(CostError):
        run_cost(nice_run(P2(net1()), 2), net1())


def test_cost_additive_over_rounds():
    net = ocean_network()
    r = simulate(synth_nbm(ocean_target(net)), 0, FailurePattern.of((1, 1, {4})), 2)
    per_round = sum(net.costs[(i, j)] for t in range(2) for tt, i, j, _ in r.sends if tt == t)
    assert per_round == run_cost(r, net)


def test_mix():
    assert mix_cost(ScenarioMix(100, 2), 2, 3003) == 6206
    assert mix_cost(ScenarioMix(102, 0), 1001) == 102102
    assert mix_cost(ScenarioMix(0, 0), 5, 7) == 0
    with pytest.raises(ValueError):
        ScenarioMix(-1)


def test_ocean_scenario_exact():
    rep = ocean_scenario()
    assert (rep.chain, rep.nice, rep.worst, rep.mixed, rep.baseline) == (1001, 2, 3003, 6206, 102102)
    assert all(isinstance(x, Fraction) and x.denominator == 1 for x in (rep.chain, rep.nice, rep.worst, rep.mixed, rep.baseline))
    assert rep.informed
