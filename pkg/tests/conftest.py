import numpy as np
import pytest

from collapse_lab.lattice import GramMatrix


def make_spd(rng, k, jitter=0.3):
    A = np.eye(k) + jitter * rng.standard_normal((k, k))
    A *= rng.uniform(0.5, 2.0)
    return GramMatrix(A.T @ A + 1e-3 * np.eye(k))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
