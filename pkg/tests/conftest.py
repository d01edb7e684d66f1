import numpy as np
import pytest

import isoalg as ia

_acceptance_results = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1],
                                    report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, ok in _acceptance_results:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")


@pytest.fixture(scope="session")
def polar2():
    """Polar model of the 2x2 rank-one operator a = 2*e12."""
    return ia.build_polar_model(np.array([[0, 2], [0, 0]], complex))


@pytest.fixture(scope="session")
def polar6():
    """Polar model of a 6-dim weighted backward shift, weights q^{j/2}."""
    q = 0.5
    weights = [q ** (j / 2) for j in range(1, 6)]
    return ia.build_polar_model(ia.weighted_backward_shift(weights))


@pytest.fixture(scope="session")
def qdeform12():
    """The q-model at n = 12, q = 1/2 with the Heisenberg weight."""
    return ia.build_qdeform(12, 0.5, "heisenberg")


@pytest.fixture(scope="session")
def qdeform6():
    return ia.build_qdeform(6, 0.5, "heisenberg")


@pytest.fixture(scope="session")
def broken_system():
    """Negative control: the full 2x2 algebra with the shift unit; U*U is
    not central, so none of the coefficient conditions hold."""
    e12 = np.array([[0, 1], [0, 0]], complex)
    algebra = ia.generate_closure([e12])
    return ia.IsometrySystem(algebra, e12)
