"""Graph structure checks, convergence detection, consensus prediction and the
DeGroot reduction of the classical update."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .core import BeliefConfig, Discretization, InfluenceGraph, Trace, neighbor_counts
from .dynamics import UpdateRule, is_radical

FLOW_TOL = 1e-12
DEFAULT_EPSILON = 1e-6


def _support(I: InfluenceGraph) -> csr_matrix:
    adj = I.weights > 0
    np.fill_diagonal(adj, False)
    return csr_matrix(adj)


def is_strongly_connected(I: InfluenceGraph) -> bool:
    count, _ = connected_components(_support(I), directed=True, connection="strong")
    return count == 1


def is_weakly_connected(I: InfluenceGraph) -> bool:
    count, _ = connected_components(_support(I), directed=True, connection="weak")
    return count == 1


def flow_imbalance(I: InfluenceGraph) -> np.ndarray:
    """Out-flow minus in-flow for every agent."""
    w = I.weights
    return np.array([math.fsum(w[i, :]) - math.fsum(w[:, i]) for i in range(I.n)])


def is_balanced(I: InfluenceGraph, tol: float = FLOW_TOL) -> tuple[bool, np.ndarray]:
    imbalance = flow_imbalance(I)
    return bool(np.all(np.abs(imbalance) <= tol)), imbalance


def group_flow_conservation(I: InfluenceGraph, group) -> tuple[float, float]:
    """Total influence from ``group`` to its complement, and back."""
    a = sorted(set(int(i) for i in group))
    b = sorted(set(range(I.n)) - set(a))
    if not a or not b or a[0] < 0 or a[-1] >= I.n:
        raise ValueError("partition sides must be non-empty subsets of the agents")
    w = I.weights
    return math.fsum(w[np.ix_(a, b)].ravel()), math.fsum(w[np.ix_(b, a)].ravel())


def is_reciprocal(I: InfluenceGraph) -> bool:
    return bool(np.array_equal(I.weights, I.weights.T))


def is_regular(I: InfluenceGraph) -> bool:
    """Every agent has the same number of neighbors |A_i| (unweighted)."""
    counts = neighbor_counts(I)
    return bool(np.all(counts == counts[0]))


@dataclass(frozen=True)
class StructureReport:
    strongly_connected: bool
    weakly_connected: bool
    balanced: bool
    reciprocal: bool
    regular: bool
    flow_imbalance: tuple[float, ...]

    def to_json(self) -> dict:
        d = asdict(self)
        d["flow_imbalance"] = list(self.flow_imbalance)
        return d


def structure_report(I: InfluenceGraph) -> StructureReport:
    balanced, imbalance = is_balanced(I)
    return StructureReport(
        strongly_connected=is_strongly_connected(I),
        weakly_connected=is_weakly_connected(I),
        balanced=balanced,
        reciprocal=is_reciprocal(I),
        regular=is_regular(I),
        flow_imbalance=tuple(float(x) for x in imbalance),
    )


def predict_consensus(I: InfluenceGraph, B0, rule) -> float | None:
    """Mean initial belief when the graph's symmetry pins down the consensus value.

    Needs a regular, weakly connected graph that is additionally reciprocal
    (confirmation-bias rule) or a circulation (classical rule).
    """
    rule = UpdateRule(rule)
    if not (is_regular(I) and is_weakly_connected(I)):
        return None
    if rule is UpdateRule.CONFIRMATION_BIAS:
        symmetric = is_reciprocal(I)
    else:
        symmetric = is_balanced(I)[0]
    if not symmetric:
        return None
    b = B0.beliefs if isinstance(B0, BeliefConfig) else np.asarray(B0, dtype=float)
    return math.fsum(b) / b.size


def _near_boundary(value: float, D: Discretization, tol: float) -> bool:
    return any(abs(value - edge) <= tol for edge in D.interior)


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    t_converged: int | None
    consensus_value: float | None
    spread_final: float
    near_borderline: bool

    def to_json(self) -> dict:
        return asdict(self)


def convergence_report(
    trace: Trace,
    epsilon: float = DEFAULT_EPSILON,
    borderline_epsilon: float | None = None,
) -> ConvergenceReport:
    """Consensus is declared at the first recorded step whose spread is below ``epsilon``."""
    borderline_epsilon = epsilon if borderline_epsilon is None else borderline_epsilon
    spreads = trace.configs.max(axis=1) - trace.configs.min(axis=1)
    hits = np.nonzero(spreads < epsilon)[0]
    spread_final = float(spreads[-1])
    # beliefs cannot drift apart again, so a hit at any row implies convergence at the horizon
    converged = bool(hits.size) and spread_final < epsilon
    value = math.fsum(trace.final) / trace.final.size if converged else None
    return ConvergenceReport(
        converged=converged,
        t_converged=int(trace.steps[hits[0]]) if converged else None,
        consensus_value=value,
        spread_final=spread_final,
        near_borderline=converged and _near_boundary(value, trace.discretization, borderline_epsilon),
    )


def degroot_matrix(I: InfluenceGraph) -> np.ndarray:
    """Row-stochastic matrix whose powers reproduce the classical update.

    The diagonal sums only over ``j != i``; including the self weight would
    break row-stochasticity.
    """
    counts = neighbor_counts(I)
    T = I.weights.T / counts[:, None]
    np.fill_diagonal(T, 0.0)
    off = np.array([math.fsum(row) for row in T])
    T[np.diag_indices_from(T)] = 1.0 - off
    return T


def degroot_iterate(T: np.ndarray, F0, t: int) -> np.ndarray:
    F = F0.beliefs if isinstance(F0, BeliefConfig) else np.asarray(F0, dtype=float)
    T = np.asarray(T, dtype=float)
    if T.shape != (F.size, F.size):
        raise ValueError(f"matrix shape {T.shape} does not match {F.size} agents")
    for _ in range(t):
        F = T @ F
    return F


@dataclass(frozen=True)
class PersistenceDiagnosis:
    """Which of the four structural explanations for lasting polarization hold."""

    unbalanced: bool
    not_weakly_connected: bool
    radical_initial: bool
    borderline_limit: bool
    polarization_final: float
    persistent: bool
    inconsistent: bool

    @property
    def conditions(self) -> tuple[int, ...]:
        flags = (self.unbalanced, self.not_weakly_connected, self.radical_initial, self.borderline_limit)
        return tuple(k for k, flag in enumerate(flags, start=1) if flag)

    def to_json(self) -> dict:
        d = asdict(self)
        d["conditions"] = list(self.conditions)
        return d


def diagnose_persistence(
    I: InfluenceGraph,
    B0,
    trace: Trace,
    D: Discretization | None = None,
    epsilon: float = DEFAULT_EPSILON,
    borderline_epsilon: float | None = None,
) -> PersistenceDiagnosis:
    """Check a finished run against the conditions under which polarization can persist.

    ``inconsistent`` is raised when polarization is still above ``epsilon``
    but none of the conditions hold, which points at a bug rather than a
    property of the model. The borderline check is numerical only.
    """
    D = D or trace.discretization
    borderline_epsilon = epsilon if borderline_epsilon is None else borderline_epsilon
    final = trace.final
    spread = float(final.max() - final.min())
    common = math.fsum(final) / final.size
    borderline = spread < epsilon and _near_boundary(common, D, borderline_epsilon)
    rho = float(trace.polarization[-1])
    unbalanced = not is_balanced(I)[0]
    split = not is_weakly_connected(I)
    radical = is_radical(B0)
    persistent = rho > epsilon
    return PersistenceDiagnosis(
        unbalanced=unbalanced,
        not_weakly_connected=split,
        radical_initial=radical,
        borderline_limit=borderline,
        polarization_final=rho,
        persistent=persistent,
        inconsistent=persistent and not (unbalanced or split or radical or borderline),
    )
