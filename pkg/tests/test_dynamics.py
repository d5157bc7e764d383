import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biaspolar.core import BeliefConfig, Discretization, InfluenceGraph
from biaspolar.dynamics import UpdateRule, cb_factor, evolve, is_radical, iterate, step, step_cb, step_classical
from biaspolar.polarization import polarization
from biaspolar.scenarios import graph_circular, graph_clique, graph_faint, graph_unrelenting, make_graph

from conftest import random_beliefs, random_graph


def loop_step(b, w, biased):
    """Plain-Python reference for one synchronous update."""
    n = len(b)
    out = []
    for i in range(n):
        nbrs = [j for j in range(n) if w[j][i] > 0]
        total = 0.0
        for j in nbrs:
            beta = 1 - abs(b[j] - b[i]) if biased else 1.0
            total += beta * w[j][i] * (b[j] - b[i])
        out.append(b[i] + total / len(nbrs))
    return out


@pytest.mark.parametrize("pair, expected", [((0.5, 0.5), 1.0), ((0.0, 1.0), 0.0), ((0.2, 0.7), 0.5)])
def test_cb_factor(pair, expected):
    assert cb_factor(*pair) == pytest.approx(expected, abs=1e-15)
    assert cb_factor(*pair) == cb_factor(*reversed(pair))


def test_radical_pair_is_fixed():
    for g in (graph_clique(2), InfluenceGraph([[1, 1], [1, 1]])):
        np.testing.assert_array_equal(step_cb([0.0, 1.0], g).beliefs, [0.0, 1.0])


def test_two_agent_hand_values():
    g = graph_clique(2, 0.5)
    np.testing.assert_allclose(step_cb([0.1, 0.9], g).beliefs, [0.14, 0.86], atol=1e-15)
    np.testing.assert_allclose(step_classical([0.1, 0.9], g).beliefs, [0.3, 0.7], atol=1e-15)


def test_classical_mixes_radical_pair():
    g = InfluenceGraph([[1, 1], [1, 1]])
    np.testing.assert_array_equal(step_classical([0.0, 1.0], g).beliefs, [0.5, 0.5])


@pytest.mark.parametrize("rule", list(UpdateRule))
def test_consensus_is_fixed(rule):
    b = np.full(7, 0.37)
    for kind in ("clique", "circular", "unrelenting", "faint"):
        np.testing.assert_array_equal(step(b, make_graph(kind, 7), rule).beliefs, b)


@pytest.mark.parametrize("rule", list(UpdateRule))
def test_matches_reference_loop(rng, rule):
    biased = rule is UpdateRule.CONFIRMATION_BIAS
    for _ in range(40):
        n = int(rng.integers(1, 15))
        g = random_graph(rng, n)
        b = random_beliefs(rng, n).beliefs
        expected = loop_step(list(b), g.weights.tolist(), biased)
        np.testing.assert_allclose(step(b, g, rule).beliefs, expected, rtol=0, atol=1e-15)


def test_evolve_zero_horizon():
    b = BeliefConfig([0.1, 0.5, 0.9])
    tr = evolve(b, graph_clique(3), t_max=0)
    assert len(tr) == 1
    np.testing.assert_array_equal(tr.configs[0], b.beliefs)
    assert tr.polarization[0] == polarization(b)


def test_evolve_records_polarization():
    D = Discretization.uniform(4)
    tr = evolve([0.0, 0.3, 0.95], graph_faint(3), "classical", 20, D, K=2.0, alpha=1.2)
    assert len(tr) == 21 and list(tr.steps) == list(range(21))
    for row, rho in zip(tr.configs, tr.polarization):
        assert rho == polarization(row, D, 2.0, 1.2)


def test_record_every_keeps_last_step():
    tr = evolve([0.0, 0.3, 0.95], graph_clique(3), t_max=10, record_every=4)
    assert list(tr.steps) == [0, 4, 8, 10]
    full = evolve([0.0, 0.3, 0.95], graph_clique(3), t_max=10)
    np.testing.assert_array_equal(tr.configs, full.configs[[0, 4, 8, 10]])


def test_radical_trace_constant():
    tr = evolve([0.0, 1.0, 1.0, 0.0], graph_unrelenting(4), t_max=30)
    assert np.all(tr.configs == tr.configs[0])


def test_evolve_is_deterministic():
    g = graph_faint(40)
    b = np.linspace(0, 1, 40) ** 2
    a1 = evolve(b, g, t_max=50).configs
    a2 = evolve(b, g, t_max=50).configs
    assert a1.tobytes() == a2.tobytes()


def test_is_radical():
    assert is_radical([0, 1, 1])
    assert not is_radical([0, 0.5])
    assert is_radical([1])


@settings(max_examples=60, deadline=None)
@given(
    st.integers(2, 12).flatmap(
        lambda n: st.tuples(
            st.lists(st.floats(0, 1), min_size=n, max_size=n),
            st.lists(st.sampled_from([0.0, 0.05, 0.3, 0.7, 1.0]), min_size=n * n, max_size=n * n),
        )
    ),
    st.sampled_from(list(UpdateRule)),
)
def test_hull_and_monotone_extremes(data, rule):
    beliefs, flat = data
    n = len(beliefs)
    w = np.array(flat).reshape(n, n)
    np.fill_diagonal(w, 1.0)
    g = InfluenceGraph(w)
    prev = np.array(beliefs)
    for _, b in iterate(beliefs, g, rule, 30):
        assert b.min() >= prev.min() and b.max() <= prev.max()
        prev = b


def test_min_bias_factor_never_drops(rng):
    for _ in range(20):
        n = int(rng.integers(2, 12))
        g = random_graph(rng, n)
        b0 = rng.uniform(0.05, 0.95, n)
        lowest = 1.0 - (b0.max() - b0.min())
        for _, b in iterate(b0, g, "confirmation_bias", 100):
            assert 1.0 - (b.max() - b.min()) >= lowest


@pytest.mark.parametrize("n", [5, 12])
def test_sum_conservation(n):
    b0 = np.linspace(0.05, 0.9, n) ** 1.5
    cases = [(graph_clique(n), "confirmation_bias"), (graph_circular(n), "classical"), (graph_faint(n), "confirmation_bias")]
    for g, rule in cases:
        prev = None
        for _, b in iterate(b0, g, rule, 200):
            if prev is not None:
                assert abs(b.sum() - prev.sum()) < 1e-12
            prev = b
