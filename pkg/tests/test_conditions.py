import pytest

from nullmsg.commgraph import CommGraph, EdgeKind
from nullmsg.conditions import (
    check_or_conservative,
    check_or_necessary,
    check_or_sufficient,
    check_robust_conditions,
)
from nullmsg.harness import robust_counterexample
from nullmsg.model import Network, ORInstance
from nullmsg.simulator import ResourceBoundError, RunIndex
from nullmsg.synth import synth_rbm

A, N = EdgeKind.ACTUAL, EdgeKind.NULL
S, P, D = 0, 1, 2


def test_or_necessary_missing_path(net):
    cg = CommGraph(3, 2, {}, net)
    rep = check_or_necessary(cg, ORInstance((D,), (1,)), 1)
    assert not rep.ok and rep.violations[0][0] == "f-block"


def test_or_second_condition_degenerates_at_f0(net):
    cg = CommGraph(3, 3, {(S, P, 0): A, (S, D, 0): A}, net)
    inst = ORInstance((P, D), (1, 2))
    # no path from <p,2> to <d,2> at all
    rep = check_or_necessary(cg, inst, 0)
    assert [v[0] for v in rep.violations] == ["(f-1)-block"]
    base = {(S, P, 0): A, (S, D, 0): A}
    inst2 = ORInstance((P, D), (1, 3))
    assert check_or_necessary(CommGraph(3, 3, {**base, (P, D, 2): A}, net), inst2, 0).ok
    # i_1's own null edge does not count for the second condition
    assert not check_or_necessary(CommGraph(3, 3, {**base, (P, D, 2): N}, net), inst2, 0).ok


def test_conservative_vacuous_cases(net):
    cg = CommGraph(3, 2, {(S, P, 0): A}, net)
    assert check_or_conservative(cg, ORInstance((P,), (1,)), 2).ok
    assert check_or_conservative(cg, ORInstance((P, D), (0, 1)), 0).ok


def test_conservative_violation():
    # b = q relays to i_x = p by an actual message; nothing links p's action to d's except via q's null
    net = Network.build(["s", "q", "p", "d"], [("s", "q"), ("q", "p"), ("q", "d"), ("p", "d"), ("s", "d")])
    s, q, p, d = range(4)
    cg = CommGraph(4, 3, {(s, q, 0): A, (q, p, 1): A, (s, d, 0): A}, net)
    inst = ORInstance((p, d), (2, 3))
    rep = check_or_conservative(cg, inst, 1)
    assert not rep.ok
    assert any(w["rho"] == (q, 1) and w["B"] == {q} for _, w in rep.violations)
    assert not check_or_sufficient(cg, inst, 1).ok


def test_robust_bullets(net):
    assert check_robust_conditions(CommGraph(3, 1, {(S, D, 0): A}, net), 3).ok
    relays = Network.build(["s", "a", "b", "c", "d"], [("s", x) for x in "abc"] + [(x, "d") for x in "abc"])
    chains = {(0, i, 0): A for i in (1, 2, 3)}
    chains.update({(i, 4, 1): A for i in (1, 2, 3)})
    cg = CommGraph(5, 2, chains, relays)
    assert check_robust_conditions(cg, 2).ok
    assert not check_robust_conditions(cg, 3).ok
    assert not check_robust_conditions(CommGraph(3, 2, {}, net), 0).ok


def _fan(net):
    s, p, q, u, d = range(5)
    return CommGraph(
        5, 2, {(s, p, 0): A, (s, q, 0): N, (s, u, 0): N, (p, d, 1): N, (q, d, 1): N, (u, d, 1): N}, net
    )


def test_literal_reading_fails_at_f2():
    net = Network.build(["s", "p", "q", "u", "d"], [("s", x) for x in "pqu"] + [(x, "d") for x in "pqu"])
    cg = _fan(net)
    assert check_robust_conditions(cg, 2, literal=True).ok
    assert not check_robust_conditions(cg, 2).ok
    q = synth_rbm(cg, 2)
    rid = robust_counterexample(RunIndex(q, 2, 2, q.runs))
    assert rid is not None


def test_literal_reading_too_strict_at_f0(net):
    cg = CommGraph(3, 1, {(S, D, 0): N}, net)
    assert check_robust_conditions(cg, 0).ok
    assert not check_robust_conditions(cg, 0, literal=True).ok
    q = synth_rbm(cg, 0)
    assert robust_counterexample(RunIndex(q, 0, 1, q.runs)) is None


def test_combination_cap():
    net = Network.build(["s", "a", "b", "c", "d"], [("s", x) for x in "abc"] + [(x, "d") for x in "abc"])
    cg = _fan(net)
    with pytest.raises(ResourceBoundError):
        check_robust_conditions(cg, 2, cap=0)
