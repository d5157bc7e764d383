import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from biaspolar.analysis import is_balanced, is_reciprocal, is_regular, is_strongly_connected, is_weakly_connected
from biaspolar.core import neighbors, validate
from biaspolar.dynamics import is_radical
from biaspolar.scenarios import (
    GraphFileError,
    beliefs_extreme,
    beliefs_mild,
    beliefs_tripolar,
    beliefs_uniform,
    format_graph,
    graph_circular,
    graph_clique,
    graph_disconnected,
    graph_faint,
    graph_unrelenting,
    make_beliefs,
    make_graph,
    parse_graph,
)


@pytest.mark.parametrize(
    "gen, n, expected",
    [
        (beliefs_uniform, 3, [0, 0.5, 1]),
        (beliefs_uniform, 2, [0, 1]),
        (beliefs_uniform, 5, [0, 0.25, 0.5, 0.75, 1]),
        (beliefs_uniform, 1, [0]),
        (beliefs_mild, 4, [0.2, 0.3, 0.6, 0.7]),
        (beliefs_mild, 2, [0.2, 0.6]),
        (beliefs_extreme, 4, [0, 0.1, 0.8, 0.9]),
        (beliefs_extreme, 2, [0, 0.8]),
        (beliefs_tripolar, 3, [0, 0.4, 0.8]),
        (beliefs_tripolar, 6, [0, 0.1, 0.4, 0.5, 0.8, 0.9]),
    ],
)
def test_belief_formulas(gen, n, expected):
    np.testing.assert_allclose(gen(n).beliefs, expected, rtol=0, atol=1e-15)


@pytest.mark.parametrize("gen, n", [(beliefs_mild, 1), (beliefs_extreme, 1), (beliefs_tripolar, 2)])
def test_belief_preconditions(gen, n):
    with pytest.raises(ValueError):
        gen(n)


@given(st.integers(2, 400))
def test_uniform_properties(n):
    b = beliefs_uniform(n).beliefs
    assert b[0] == 0 and b[-1] == 1
    assert np.all(np.diff(b) > 0)
    assert math.fsum(b) / n == pytest.approx(0.5, abs=1e-15)


@given(st.integers(2, 400))
def test_mild_and_extreme_ranges(n):
    half = -(-n // 2)
    mild = beliefs_mild(n).beliefs
    assert np.all((mild[:half] >= 0.2) & (mild[:half] < 0.4))
    assert np.all((mild[half:] >= 0.6) & (mild[half:] < 0.8))
    ext = beliefs_extreme(n).beliefs
    assert np.all((ext[:half] >= 0) & (ext[:half] < 0.2))
    assert np.all((ext[half:] >= 0.8) & (ext[half:] < 1.0))
    assert not is_radical(ext)


@given(st.integers(3, 400))
def test_tripolar_blocks(n):
    b = beliefs_tripolar(n).beliefs
    a, c = n // 3, -(-2 * n // 3)
    assert np.all(b[:a] < 0.2)
    assert np.all((b[a:c] >= 0.4) & (b[a:c] < 0.6))
    assert np.all((b[c:] >= 0.8) & (b[c:] < 1.0))


def test_clique():
    np.testing.assert_array_equal(graph_clique(2, 0.5).weights, [[1, 0.5], [0.5, 1]])
    np.testing.assert_array_equal(graph_clique(1).weights, [[1]])


def test_circular_edges():
    w = graph_circular(3, 0.5).weights
    off = {(int(i), int(j)) for i, j in zip(*np.nonzero(w)) if i != j}
    assert off == {(0, 1), (1, 2), (2, 0)}
    assert np.all(w[w != 1] <= 0.5)


def test_disconnected_blocks():
    w = graph_disconnected(4).weights
    assert np.all(w[:2, 2:] == 0) and np.all(w[2:, :2] == 0)
    assert w[0, 1] == w[2, 3] == 0.5
    # odd n: first block is ceil(n/2)
    w5 = graph_disconnected(5).weights
    assert w5[2, 0] == 0.5 and w5[2, 3] == 0


def test_unrelenting_formula():
    n = 4
    w = graph_unrelenting(n).weights
    off = ~np.eye(n, dtype=bool)
    assert np.all(w[:, 0][off[:, 0]] == 0) and np.all(w[:, 3][off[:, 3]] == 0)
    assert w[0, 1] == w[0, 2] == w[3, 1] == w[3, 2] == 0.6
    assert w[1, 2] == w[2, 1] == 0.1
    # middle agents hear both influencers, every other middle agent and themselves
    n = 7
    g = graph_unrelenting(n)
    assert [len(neighbors(g, i)) for i in range(n)] == [1] + [n] * (n - 2) + [1]


def test_faint_formula():
    w = graph_faint(4).weights
    # groups {0, 1, 2} and {3} under the <= ceil(n/2) split
    assert np.all(w[:3, 3] == 0.1) and np.all(w[3, :3] == 0.1)
    assert w[0, 2] == 0.5


@pytest.mark.parametrize("n", [2, 3, 4, 7, 12, 31])
def test_generated_graphs_are_valid(n):
    for kind in ("clique", "circular", "disconnected", "faint") + (("unrelenting",) if n >= 3 else ()):
        assert validate(make_graph(kind, n)).ok


@pytest.mark.parametrize("n", [2, 3, 6, 11])
def test_structural_properties(n):
    for g in (graph_clique(n), graph_faint(n)):
        assert is_reciprocal(g) and is_regular(g)
    assert is_strongly_connected(graph_faint(n))
    circ = graph_circular(n)
    assert is_balanced(circ)[0]
    assert all(len(neighbors(circ, i)) == 2 for i in range(n))
    dis = graph_disconnected(n)
    assert not is_weakly_connected(dis)


def test_unknown_kinds():
    with pytest.raises(ValueError):
        make_graph("bogus", 3)
    with pytest.raises(ValueError):
        make_beliefs("bogus", 3)


def test_bad_strength():
    with pytest.raises(ValueError):
        graph_clique(3, 0.0)


class TestGraphFile:
    def test_transcription(self):
        g = parse_graph("n=2\n0 1 0.5")
        np.testing.assert_array_equal(g.weights, [[1, 0.5], [0, 1]])

    def test_empty_edges(self):
        np.testing.assert_array_equal(parse_graph("n=3\n").weights, np.eye(3))

    def test_comments_and_blank_lines(self):
        g = parse_graph("# vaccine example\n\nn=3  # three agents\n2 0 0.25 # edge\n")
        assert g.weights[2, 0] == 0.25

    @pytest.mark.parametrize(
        "text, line",
        [
            ("n=2\n0 1 0.5\n0 1 0.4\n", 3),
            ("n=2\n0 1 1.5\n", 2),
            ("n=2\n0 2 0.5\n", 2),
            ("n=2\n0 1\n", 2),
            ("n=x\n", 1),
            ("0 1 0.5\n", 1),
            ("n=2\n0 one 0.5\n", 2),
        ],
    )
    def test_errors_carry_line(self, text, line):
        with pytest.raises(GraphFileError) as info:
            parse_graph(text)
        assert info.value.line == line

    def test_missing_header(self):
        with pytest.raises(GraphFileError):
            parse_graph("# nothing\n")

    def test_round_trip(self):
        for g in (graph_circular(12), graph_unrelenting(5), graph_faint(6)):
            assert parse_graph(format_graph(g)) == g
