import pytest

from nullmsg.protocols import P1, P2, net1
from nullmsg.simulator import enumerate_runs

S, P, D = 0, 1, 2


@pytest.fixture(scope="session")
def net():
    return net1()


@pytest.fixture(scope="session")
def idx_p1_f0(net):
    return enumerate_runs(P1(net), 0, 2)


@pytest.fixture(scope="session")
def idx_p1_f1(net):
    return enumerate_runs(P1(net), 1, 2)


@pytest.fixture(scope="session")
def idx_p2_f1(net):
    return enumerate_runs(P2(net), 1, 2)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
