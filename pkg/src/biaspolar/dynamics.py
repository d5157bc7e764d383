"""Synchronous belief updates with and without confirmation bias."""

from __future__ import annotations

from enum import Enum

import numpy as np

from .core import BeliefConfig, Discretization, InfluenceGraph, Trace, neighbor_counts
from .polarization import DEFAULT_ALPHA, DEFAULT_BINS, DEFAULT_K, polarization


class UpdateRule(str, Enum):
    CONFIRMATION_BIAS = "confirmation_bias"
    CLASSICAL = "classical"


def cb_factor(b_i: float, b_j: float) -> float:
    """Confirmation-bias factor ``1 - |b_j - b_i|``."""
    return 1.0 - abs(b_j - b_i)


def _beliefs(B) -> np.ndarray:
    return B.beliefs if isinstance(B, BeliefConfig) else np.asarray(B, dtype=float)


def _step(b: np.ndarray, weights: np.ndarray, counts: np.ndarray, biased: bool) -> np.ndarray:
    # diff[i, j] = b_j - b_i; influence[i, j] = I_{j,i}
    diff = b[None, :] - b[:, None]
    terms = weights.T * diff
    if biased:
        terms *= 1.0 - np.abs(diff)
    # cumsum fixes ascending-j accumulation so runs are bit-reproducible
    correction = np.cumsum(terms, axis=1)[:, -1]
    out = b + correction / counts
    assert out.min() >= b.min() and out.max() <= b.max(), "update left the belief hull"
    return out


def step_cb(B, I: InfluenceGraph) -> BeliefConfig:
    return BeliefConfig(_step(_beliefs(B), I.weights, neighbor_counts(I), biased=True))


def step_classical(B, I: InfluenceGraph) -> BeliefConfig:
    return BeliefConfig(_step(_beliefs(B), I.weights, neighbor_counts(I), biased=False))


def step(B, I: InfluenceGraph, rule=UpdateRule.CONFIRMATION_BIAS) -> BeliefConfig:
    rule = UpdateRule(rule)
    if rule is UpdateRule.CONFIRMATION_BIAS:
        return step_cb(B, I)
    return step_classical(B, I)


def iterate(B0, I: InfluenceGraph, rule=UpdateRule.CONFIRMATION_BIAS, t_max: int = 1, record_every: int = 1):
    """Yield ``(t, beliefs)`` for t = 0..t_max, thinned to every ``record_every`` steps.

    The final step is always yielded.
    """
    biased = UpdateRule(rule) is UpdateRule.CONFIRMATION_BIAS
    weights = I.weights
    counts = neighbor_counts(I)
    b = _beliefs(B0).copy()
    yield 0, b
    for t in range(1, t_max + 1):
        b = _step(b, weights, counts, biased)
        if t % record_every == 0 or t == t_max:
            yield t, b


def evolve(
    B0,
    I: InfluenceGraph,
    rule=UpdateRule.CONFIRMATION_BIAS,
    t_max: int = 100,
    D: Discretization | None = None,
    K: float = DEFAULT_K,
    alpha: float = DEFAULT_ALPHA,
    record_every: int = 1,
) -> Trace:
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    D = D or Discretization.uniform(DEFAULT_BINS)
    rule = UpdateRule(rule)
    steps, configs, rho = [], [], []
    for t, b in iterate(B0, I, rule, t_max, record_every):
        steps.append(t)
        configs.append(b)
        rho.append(polarization(b, D, K, alpha))
    return Trace(
        steps=steps,
        configs=np.vstack(configs),
        polarization=rho,
        rule=rule.value,
        graph_name=I.name,
        discretization=D,
        K=K,
        alpha=alpha,
    )


def is_radical(B) -> bool:
    b = _beliefs(B)
    return bool(np.all((b == 0.0) | (b == 1.0)))
