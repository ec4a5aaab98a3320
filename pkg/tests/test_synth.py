import random

import pytest

from nullmsg.commgraph import CommGraph, EdgeKind, check_f_block
from nullmsg.cost import OCEAN_F, OCEAN_HORIZON, ocean_target
from nullmsg.gen import random_network, random_target
from nullmsg.knowledge import NotNice, ValueIs, knows
from nullmsg.model import ModelError, ORInstance
from nullmsg.protocols import P2, ocean_network
from nullmsg.simulator import RunIndex, enumerate_runs, simulate
from nullmsg.synth import SynthesisError, synth_nbm, synth_or, synth_rbm

S, P, D = 0, 1, 2
A, N = EdgeKind.ACTUAL, EdgeKind.NULL


def _slots(r):
    return {(t, i, j) for t, i, j, _ in r.sends}


def test_nbm_from_r2_behaves_like_p2(net, idx_p2_f1):
    q = synth_nbm(idx_p2_f1.cg(idx_p2_f1.nice))
    mine = enumerate_runs(q, 1, 2)
    assert len(mine) == len(idx_p2_f1)
    for r in idx_p2_f1.runs:
        r2 = simulate(q, r.vs, r.minimal, 2)
        assert _slots(r2) == _slots(r)
        for m in range(3):
            assert knows(D, ValueIs(1), r, m, idx_p2_f1) == knows(D, ValueIs(1), mine.find(r.vs, r.minimal), m, mine)


def test_local_only_target_is_silent(net):
    q = synth_nbm(CommGraph(3, 2, {}, net))
    for vs in (0, 1):
        assert simulate(q, vs, (), 2).sends == frozenset()


def test_ocean_target_informs_d_with_two_failures():
    q = synth_nbm(ocean_target())
    idx = enumerate_runs(q, OCEAN_F, OCEAN_HORIZON)
    assert knows(4, ValueIs(1), idx.nice, 2, idx)
    assert check_f_block(ocean_target(), (0, 0), (4, 2), 2).ok
    assert not check_f_block(ocean_target(), (0, 0), (4, 2), 3).ok


def test_target_edge_must_be_a_channel(net):
    with pytest.raises(ModelError):
        synth_nbm(CommGraph(3, 2, {(D, S, 0): A}, net))
    with pytest.raises(SynthesisError):
        synth_nbm(CommGraph(3, 2, {(D, S, 0): A}), net)


def test_or_nice_run_performs_all_actions(net):
    cg = CommGraph(3, 3, {(S, P, 0): A, (P, D, 1): A, (S, D, 0): N}, net)
    inst = ORInstance((P, D), (1, 2))
    q = synth_or(cg, inst)
    nice = simulate(q, 1, (), 3)
    assert nice.action_time(P, 1) == 1 and nice.action_time(D, 2) == 2
    idx = enumerate_runs(q, 1, 3)
    for r in idx.runs:
        for p, h, t in r.actions:
            assert not knows(p, NotNice(), r, t, idx)
    with pytest.raises(SynthesisError):
        synth_or(cg, ORInstance((P,), (3,)))


def test_rbm_third_clause_sends_nice_actual_edges_always(net):
    cg = CommGraph(3, 2, {(S, P, 0): A, (P, D, 1): N}, net)
    q = synth_rbm(cg, 1)
    idx = RunIndex(q, 1, 2, q.runs)
    for r in idx.runs:
        if not r.blocked(S, P, 0):
            assert r.sent(S, P, 0)


def test_rbm_guard_is_exact_knowledge():
    rng = random.Random(11)
    from nullmsg.knowledge import NOT_ONE_OR_SOURCE_FAULTY

    for _ in range(8):
        net = random_network(rng, n=4)
        cg = random_target(rng, net, 2, 0.4, 0.3)
        f = rng.randint(0, 2)
        q = synth_rbm(cg, f)
        idx = RunIndex(q, f, 2, q.runs)
        for r in idx.runs:
            for p in range(net.n):
                for t in range(2):
                    if r.active(p, t):
                        assert q.guard(p, r.state(p, t)) == knows(p, NOT_ONE_OR_SOURCE_FAULTY, r, t, idx)


def test_nbm_sufficiency_on_random_targets():
    rng = random.Random(4)
    for _ in range(15):
        net = random_network(rng, n=4)
        T = rng.randint(2, 3)
        f = rng.randint(0, 2)
        cg = random_target(rng, net, T)
        idx = enumerate_runs(synth_nbm(cg), f, T)
        for m in range(T + 1):
            assert check_f_block(cg, (0, 0), (net.dest, m), f).ok == knows(net.dest, ValueIs(1), idx.nice, m, idx)
