"""Shared domain types: beliefs, influence graphs, bins, traces and run configs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


def _frozen(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class BeliefConfig:
    """One belief in [0, 1] per agent.

    Construction only enforces shape; range violations are reported by
    :func:`validate` so that every problem can be listed at once.
    """

    beliefs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "beliefs", _frozen(self.beliefs, 1))
        if self.beliefs.size == 0:
            raise ValueError("a belief configuration needs at least one agent")

    @property
    def n(self) -> int:
        return self.beliefs.size

    def __len__(self) -> int:
        return self.beliefs.size

    def __eq__(self, other):
        if not isinstance(other, BeliefConfig):
            return NotImplemented
        return np.array_equal(self.beliefs, other.beliefs)


@dataclass(frozen=True, eq=False)
class InfluenceGraph:
    """Dense n x n influence matrix; ``weights[i, j]`` is i's direct influence on j."""

    weights: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "weights", _frozen(self.weights, 2))
        rows, cols = self.weights.shape
        if rows != cols or rows == 0:
            raise ValueError(f"influence matrix must be square and non-empty, got {self.weights.shape}")

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def __eq__(self, other):
        if not isinstance(other, InfluenceGraph):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)


@dataclass(frozen=True)
class Discretization:
    """Partition of [0, 1] into k bins.

    Bin m is ``[boundaries[m], boundaries[m+1])`` except the last, which is
    closed on the right. A value sitting on an interior boundary belongs to
    the bin on its right.
    """

    boundaries: tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(x) for x in self.boundaries)
        object.__setattr__(self, "boundaries", b)
        if len(b) < 2:
            raise ValueError("a discretization needs at least two boundaries")
        if b[0] != 0.0 or b[-1] != 1.0:
            raise ValueError("boundaries must start at 0 and end at 1")
        if any(lo >= hi for lo, hi in zip(b, b[1:])):
            raise ValueError("boundaries must be strictly increasing")

    @classmethod
    def uniform(cls, k: int = 5) -> "Discretization":
        if k < 1:
            raise ValueError("k must be at least 1")
        return cls(tuple(m / k for m in range(k + 1)))

    @property
    def k(self) -> int:
        return len(self.boundaries) - 1

    @property
    def interior(self) -> tuple[float, ...]:
        return self.boundaries[1:-1]

    @property
    def midpoints(self) -> tuple[float, ...]:
        b = self.boundaries
        return tuple((lo + hi) / 2 for lo, hi in zip(b, b[1:]))

    def to_json(self):
        """Bin count for equal-width bins, explicit boundary list otherwise."""
        if self == Discretization.uniform(self.k):
            return self.k
        return list(self.boundaries)

    @classmethod
    def from_json(cls, spec) -> "Discretization":
        if isinstance(spec, bool):
            raise ValueError("bins must be a count or a boundary list")
        if isinstance(spec, int):
            return cls.uniform(spec)
        if isinstance(spec, (list, tuple)):
            return cls(tuple(spec))
        raise ValueError("bins must be a count or a boundary list")


@dataclass(frozen=True, eq=False)
class Trace:
    """Recorded belief configurations of one run and their polarization.

    ``steps[r]`` is the time step of row ``r``; with ``record_every == 1``
    the steps are simply ``0..t_max``.
    """

    steps: np.ndarray
    configs: np.ndarray
    polarization: np.ndarray
    rule: str
    graph_name: str
    discretization: Discretization
    K: float
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "steps", np.array(self.steps, dtype=np.int64))
        object.__setattr__(self, "configs", _frozen(self.configs, 2))
        object.__setattr__(self, "polarization", _frozen(self.polarization, 1))
        self.steps.setflags(write=False)
        m = len(self.steps)
        if m < 1 or self.configs.shape[0] != m or self.polarization.size != m:
            raise ValueError("steps, configs and polarization must have equal length >= 1")

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def final(self) -> np.ndarray:
        return self.configs[-1]

    def config_at(self, row: int) -> BeliefConfig:
        return BeliefConfig(self.configs[row])


@dataclass
class ValidationResult:
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self) -> bool:
        return self.ok


class ValidationError(ValueError):
    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def validate(graph: InfluenceGraph, beliefs: BeliefConfig | None = None) -> ValidationResult:
    """Check every graph/belief invariant and collect all violations."""
    errors = []
    w = graph.weights
    if beliefs is not None and beliefs.n != graph.n:
        errors.append(f"dimension mismatch: graph has {graph.n} agents, beliefs have {beliefs.n}")
    for i, j in zip(*np.nonzero(~((w >= 0.0) & (w <= 1.0)))):
        errors.append(f"weight out of range at ({i}, {j}): {float(w[i, j])!r}")
    for i in np.nonzero(np.diagonal(w) != 1.0)[0]:
        errors.append(f"diagonal entry ({i}, {i}) must be 1, got {float(w[i, i])!r}")
    if beliefs is not None:
        b = beliefs.beliefs
        for i in np.nonzero(~((b >= 0.0) & (b <= 1.0)))[0]:
            errors.append(f"belief out of range for agent {i}: {float(b[i])!r}")
    return ValidationResult(errors)


def ensure_valid(graph: InfluenceGraph, beliefs: BeliefConfig | None = None) -> None:
    result = validate(graph, beliefs)
    if not result.ok:
        raise ValidationError(result.errors)


def neighbors(graph: InfluenceGraph, i: int) -> frozenset[int]:
    """Agents with positive direct influence on ``i`` (always includes ``i``)."""
    if not 0 <= i < graph.n:
        raise IndexError(f"agent index {i} out of range for {graph.n} agents")
    return frozenset(int(j) for j in np.nonzero(graph.weights[:, i] > 0)[0])


def neighbor_counts(graph: InfluenceGraph) -> np.ndarray:
    """|A_i| for every agent, as a float vector."""
    return (graph.weights > 0).sum(axis=0).astype(float)


UPDATE_RULES = ("confirmation_bias", "classical")


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one simulation run."""

    n: int | None = None
    belief_kind: str | tuple[float, ...] = "uniform"
    graph_kind: str = "clique"
    graph_file: str | None = None
    update_rule: str = "confirmation_bias"
    t_max: int | None = None
    epsilon: float = 1e-6
    bins: Discretization = field(default_factory=Discretization.uniform)
    K: float = 1000.0
    alpha: float = 1.6
    record_every: int = 1
    out_dir: str = "out"

    def __post_init__(self):
        if isinstance(self.belief_kind, list):
            object.__setattr__(self, "belief_kind", tuple(float(x) for x in self.belief_kind))
        if self.n is None:
            object.__setattr__(self, "n", 12 if self.graph_kind == "circular" else 1000)
        if self.t_max is None:
            object.__setattr__(self, "t_max", 500 if self.n <= 100 else 2000)
        problems = []
        if self.n < 1:
            problems.append("n must be >= 1")
        if self.update_rule not in UPDATE_RULES:
            problems.append(f"update_rule must be one of {UPDATE_RULES}")
        if self.t_max < 0:
            problems.append("t_max must be >= 0")
        if not self.epsilon > 0:
            problems.append("epsilon must be > 0")
        if not self.K > 0:
            problems.append("K must be > 0")
        if not self.alpha > 0:
            problems.append("alpha must be > 0")
        if self.record_every < 1:
            problems.append("record_every must be >= 1")
        if self.graph_kind == "file" and not self.graph_file:
            problems.append("graph_kind 'file' requires graph_file")
        if problems:
            raise ValidationError(problems)

    def to_json(self) -> dict:
        belief = self.belief_kind if isinstance(self.belief_kind, str) else list(self.belief_kind)
        return {
            "n": self.n,
            "belief_kind": belief,
            "graph_kind": self.graph_kind,
            "graph_file": self.graph_file,
            "update_rule": self.update_rule,
            "t_max": self.t_max,
            "epsilon": self.epsilon,
            "bins": self.bins.to_json(),
            "K": self.K,
            "alpha": self.alpha,
            "record_every": self.record_every,
            "out_dir": self.out_dir,
        }
