import numpy as np
import pytest

from biaspolar.core import BeliefConfig, InfluenceGraph

_ACCEPTANCE_LINES = []


def random_graph(rng, n, density=None):
    """Valid influence graph with a random positive support."""
    density = rng.uniform(0.1, 1.0) if density is None else density
    mask = rng.random((n, n)) < density
    w = np.where(mask, rng.uniform(0.01, 1.0, (n, n)), 0.0)
    np.fill_diagonal(w, 1.0)
    return InfluenceGraph(w, name="random")


def random_beliefs(rng, n):
    b = rng.random(n)
    # sprinkle exact extremes and bin edges
    for i in np.nonzero(rng.random(n) < 0.1)[0]:
        b[i] = rng.choice([0.0, 1.0, 0.2, 0.4, 0.5, 0.6, 0.8])
    return BeliefConfig(b)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def acceptance_report():
    def report(criterion, ok, detail=""):
        _ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {detail}")
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
