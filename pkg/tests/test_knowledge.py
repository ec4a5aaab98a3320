import pytest

from nullmsg.knowledge import (
    NOT_ONE_OR_SOURCE_FAULTY,
    ActionDone,
    ChainReached,
    NotNice,
    SourceFaulty,
    ValueIs,
    counterexample,
    eval_fact,
    it_achieved,
    knows,
    knows_not_nice_fast,
)
from nullmsg.model import EMPTY_PATTERN, FailurePattern
from nullmsg.protocols import P2, Flood, complete_network
from nullmsg.simulator import enumerate_runs, simulate

S, P, D = 0, 1, 2


def test_intro_knowledge(idx_p1_f0, idx_p1_f1, idx_p2_f1):
    assert knows(D, ValueIs(1), idx_p1_f0.nice, 2, idx_p1_f0)
    assert not knows(D, ValueIs(1), idx_p1_f1.nice, 2, idx_p1_f1)
    assert knows(D, ValueIs(1), idx_p2_f1.nice, 2, idx_p2_f1)


def test_counterexample_is_vs0_with_p_crashed(idx_p1_f1):
    rid = counterexample(D, ValueIs(1), idx_p1_f1.nice, 2, idx_p1_f1)
    r = idx_p1_f1.runs[rid]
    assert r.vs == 0 and r.failed == {P}


def test_facts(idx_p2_f1):
    idx = idx_p2_f1
    r2 = idx.nice
    assert not eval_fact(NotNice(), r2, 2, idx)
    assert eval_fact(ValueIs(1), r2, 2, idx)
    assert eval_fact(ChainReached((S, 0), (D, 2)), r2, 2, idx)
    assert not eval_fact(ChainReached((S, 0), (D, 2)), r2, 1, idx)
    crashed = idx.find(1, FailurePattern.of((S, 1, set())))
    assert not eval_fact(SourceFaulty(), crashed, 0, idx)
    assert eval_fact(SourceFaulty(), crashed, 1, idx)
    assert eval_fact(NOT_ONE_OR_SOURCE_FAULTY, crashed, 2, idx)
    assert not eval_fact(ActionDone(1), r2, 2, idx)
    with pytest.raises(ValueError):
        knows(D, ValueIs(1), r2, 3, idx)


def test_it_achieved(idx_p1_f1, idx_p2_f1):
    assert it_achieved(idx_p2_f1.nice, 2, idx_p2_f1)
    assert not it_achieved(idx_p1_f1.nice, 2, idx_p1_f1)
    r0 = idx_p1_f1.find(0, EMPTY_PATTERN)
    assert it_achieved(r0, 2, idx_p1_f1)
    for r in idx_p2_f1.runs:
        assert not it_achieved(r, 0, idx_p2_f1)


def test_fast_not_nice(net):
    q = P2(net)
    nice = simulate(q, 1, EMPTY_PATTERN, 2)
    assert not any(knows_not_nice_fast(q, nice, p, t) for p in range(3) for t in range(3))
    assert knows_not_nice_fast(q, simulate(q, 0, EMPTY_PATTERN, 2), S, 0)


@pytest.mark.parametrize("f,T", [(1, 2), (2, 2), (1, 3)])
def test_fast_matches_oracle_and_state_determinism(f, T):
    idx = enumerate_runs(Flood(complete_network(4)), f, T)
    for r in idx.runs:
        for p in range(4):
            for t in range(T + 1):
                k = knows(p, NotNice(), r, t, idx)
                assert knows_not_nice_fast(idx.protocol, r, p, t, idx.nice) == k
                other = idx.runs[idx.indistinguishable(p, t, r.state(p, t))[0]]
                assert knows(p, ValueIs(1), other, t, idx) == knows(p, ValueIs(1), r, t, idx)


def test_verdicts_stable_under_longer_horizon(net):
    short = enumerate_runs(P2(net), 1, 2)
    long = enumerate_runs(P2(net), 1, 3)
    for r in short.runs:
        rl = long.find(r.vs, r.minimal)
        for m in range(3):
            for fact in (ValueIs(1), ValueIs(0), NotNice()):
                assert knows(D, fact, r, m, short) == knows(D, fact, rl, m, long)
