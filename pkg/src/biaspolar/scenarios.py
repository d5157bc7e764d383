"""Initial belief configurations, influence-graph topologies and the edge-list loader.

Group splits use integer ceilings/floors (``-(-n // 2)``) so that no float
rounding enters the block boundaries.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import BeliefConfig, InfluenceGraph

BELIEF_KINDS = ("uniform", "mild", "extreme", "tripolar")
GRAPH_KINDS = ("clique", "circular", "disconnected", "unrelenting", "faint")


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _need(n: int, minimum: int, kind: str) -> None:
    if n < minimum:
        raise ValueError(f"{kind} needs n >= {minimum}, got {n}")


def _check_strength(C: float) -> None:
    if not 0.0 < C <= 1.0:
        raise ValueError(f"influence strength C must lie in (0, 1], got {C}")


def beliefs_uniform(n: int) -> BeliefConfig:
    """Equally spaced beliefs ``i / (n - 1)``; a single agent gets 0."""
    _need(n, 1, "uniform")
    if n == 1:
        return BeliefConfig([0.0])
    return BeliefConfig([i / (n - 1) for i in range(n)])


def _two_groups(n: int, low: float, high: float) -> BeliefConfig:
    half = _ceil_div(n, 2)
    values = [
        0.2 * i / half + low if i < half else 0.2 * (i - half) / (n - half) + high
        for i in range(n)
    ]
    return BeliefConfig(values)


def beliefs_mild(n: int) -> BeliefConfig:
    """Two groups spread over [0.2, 0.4) and [0.6, 0.8)."""
    _need(n, 2, "mild")
    return _two_groups(n, 0.2, 0.6)


def beliefs_extreme(n: int) -> BeliefConfig:
    """Two groups spread over [0, 0.2) and [0.8, 1)."""
    _need(n, 2, "extreme")
    return _two_groups(n, 0.0, 0.8)


def beliefs_tripolar(n: int) -> BeliefConfig:
    _need(n, 3, "tripolar")
    a = n // 3
    b = _ceil_div(2 * n, 3)
    values = []
    for i in range(n):
        if i < a:
            values.append(0.2 * i / a)
        elif i < b:
            values.append(0.2 * (i - a) / (b - a) + 0.4)
        else:
            values.append(0.2 * (i - b) / (n - b) + 0.8)
    return BeliefConfig(values)


_BELIEF_GENERATORS = {
    "uniform": beliefs_uniform,
    "mild": beliefs_mild,
    "extreme": beliefs_extreme,
    "tripolar": beliefs_tripolar,
}


def make_beliefs(kind, n: int) -> BeliefConfig:
    """Build beliefs from a kind name or an explicit list of values."""
    if isinstance(kind, str):
        try:
            return _BELIEF_GENERATORS[kind](n)
        except KeyError:
            raise ValueError(f"unknown belief kind {kind!r}; expected one of {BELIEF_KINDS}") from None
    return BeliefConfig(list(kind))


def _with_unit_diagonal(w: np.ndarray, name: str) -> InfluenceGraph:
    np.fill_diagonal(w, 1.0)
    return InfluenceGraph(w, name=name)


def graph_clique(n: int, C: float = 0.5) -> InfluenceGraph:
    _need(n, 1, "clique")
    _check_strength(C)
    return _with_unit_diagonal(np.full((n, n), C), "clique")


def graph_circular(n: int, C: float = 0.5) -> InfluenceGraph:
    """Each agent influences only its successor ``(i + 1) mod n``."""
    _need(n, 2, "circular")
    _check_strength(C)
    w = np.zeros((n, n))
    for i in range(n):
        w[i, (i + 1) % n] = C
    return _with_unit_diagonal(w, "circular")


def graph_disconnected(n: int, C: float = 0.5) -> InfluenceGraph:
    """Two cliques, agents ``< ceil(n/2)`` and the rest, with no cross influence."""
    _need(n, 2, "disconnected")
    _check_strength(C)
    group = np.arange(n) >= _ceil_div(n, 2)
    w = np.where(group[:, None] == group[None, :], C, 0.0)
    return _with_unit_diagonal(w, "disconnected")


def graph_unrelenting(n: int) -> InfluenceGraph:
    """Agents 0 and n-1 push 0.6 onto everyone else and listen to nobody."""
    _need(n, 3, "unrelenting")
    w = np.full((n, n), 0.1)
    w[:, 0] = 0.0
    w[:, n - 1] = 0.0
    w[0, 1 : n - 1] = 0.6
    w[n - 1, 1 : n - 1] = 0.6
    return _with_unit_diagonal(w, "unrelenting")


def graph_faint(n: int, C: float = 0.5, cross: float = 0.1) -> InfluenceGraph:
    """Two dense groups (indices ``<= ceil(n/2)`` and the rest) joined by weak links.

    The split is one agent later than :func:`graph_disconnected`'s.
    """
    _need(n, 2, "faint")
    _check_strength(C)
    group = np.arange(n) > _ceil_div(n, 2)
    w = np.where(group[:, None] == group[None, :], C, cross)
    return _with_unit_diagonal(w, "faint")


_GRAPH_GENERATORS = {
    "clique": graph_clique,
    "circular": graph_circular,
    "disconnected": graph_disconnected,
    "unrelenting": graph_unrelenting,
    "faint": graph_faint,
}


def make_graph(kind: str, n: int, C: float = 0.5) -> InfluenceGraph:
    try:
        gen = _GRAPH_GENERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown graph kind {kind!r}; expected one of {GRAPH_KINDS}") from None
    if kind == "unrelenting":
        return gen(n)
    return gen(n, C)


class GraphFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_graph(text: str, name: str = "file") -> InfluenceGraph:
    """Parse the edge-list format: ``n=<count>`` then ``<src> <dst> <weight>`` lines."""
    n = None
    w = None
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            key, sep, value = line.partition("=")
            if key.strip() != "n" or not sep:
                raise GraphFileError("expected header 'n=<count>'", lineno)
            try:
                n = int(value.strip())
            except ValueError:
                raise GraphFileError(f"agent count is not an integer: {value.strip()!r}", lineno) from None
            if n < 1:
                raise GraphFileError("agent count must be >= 1", lineno)
            w = np.zeros((n, n))
            continue
        parts = line.split()
        if len(parts) != 3:
            raise GraphFileError("expected '<src> <dst> <weight>'", lineno)
        try:
            src, dst, weight = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise GraphFileError(f"cannot parse edge {line!r}", lineno) from None
        if not (0 <= src < n and 0 <= dst < n):
            raise GraphFileError(f"agent index out of range in edge {line!r}", lineno)
        if not 0.0 <= weight <= 1.0:
            raise GraphFileError(f"weight out of range [0, 1]: {weight!r}", lineno)
        if (src, dst) in seen:
            raise GraphFileError(f"duplicate edge {src} -> {dst}", lineno)
        seen.add((src, dst))
        w[src, dst] = weight
    if n is None:
        raise GraphFileError("missing header 'n=<count>'")
    return _with_unit_diagonal(w, name)


def load_graph(path) -> InfluenceGraph:
    path = Path(path)
    return parse_graph(path.read_text(encoding="utf-8"), name=path.stem)


def format_graph(graph: InfluenceGraph) -> str:
    """Edge-list text for every positive off-diagonal weight."""
    lines = [f"n={graph.n}"]
    w = graph.weights
    for i, j in zip(*np.nonzero(w)):
        if i != j:
            lines.append(f"{i} {j} {float(w[i, j])!r}")
    return "\n".join(lines) + "\n"
