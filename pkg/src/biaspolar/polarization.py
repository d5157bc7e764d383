"""Esteban-Ray polarization of belief configurations pooled into bins."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .core import BeliefConfig, Discretization

DEFAULT_K = 1000.0
DEFAULT_ALPHA = 1.6
DEFAULT_BINS = 5


@dataclass(frozen=True)
class BinDistribution:
    """Occupied-bin frequencies ``weights`` located at bin mid-points ``positions``."""

    weights: tuple[float, ...]
    positions: tuple[float, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.positions) or not self.weights:
            raise ValueError("weights and positions must have equal, non-zero length")
        if any(p <= 0 for p in self.weights):
            raise ValueError("bin weights must be strictly positive")
        if abs(math.fsum(self.weights) - 1.0) > 1e-12:
            raise ValueError("bin weights must sum to 1")


def bin_index(b: float, D: Discretization) -> int:
    # bisect_right sends a value on an interior boundary to the right-hand bin
    return min(bisect.bisect_right(D.boundaries, b) - 1, D.k - 1)


def bin_indices(beliefs, D: Discretization) -> np.ndarray:
    """Vectorised :func:`bin_index` over an array of beliefs."""
    b = np.asarray(beliefs, dtype=float)
    idx = np.searchsorted(np.asarray(D.boundaries), b, side="right") - 1
    return np.minimum(idx, D.k - 1)


def to_distribution(B: BeliefConfig, D: Discretization) -> BinDistribution:
    beliefs = B.beliefs if isinstance(B, BeliefConfig) else np.asarray(B, dtype=float)
    counts = np.bincount(bin_indices(beliefs, D), minlength=D.k)
    n = beliefs.size
    mids = D.midpoints
    occupied = np.nonzero(counts)[0]
    return BinDistribution(
        weights=tuple(counts[m] / n for m in occupied),
        positions=tuple(mids[m] for m in occupied),
    )


def esteban_ray(dist: BinDistribution, K: float = DEFAULT_K, alpha: float = DEFAULT_ALPHA) -> float:
    """``K * sum_i sum_j pi_i**(1 + alpha) * pi_j * |y_i - y_j|``."""
    if not K > 0:
        raise ValueError("K must be positive")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    pi = np.asarray(dist.weights)
    y = np.asarray(dist.positions)
    terms = (pi ** (1.0 + alpha))[:, None] * pi[None, :] * np.abs(y[:, None] - y[None, :])
    return K * math.fsum(terms.ravel())


def polarization(
    B: BeliefConfig,
    D: Discretization | None = None,
    K: float = DEFAULT_K,
    alpha: float = DEFAULT_ALPHA,
) -> float:
    D = D or Discretization.uniform(DEFAULT_BINS)
    return esteban_ray(to_distribution(B, D), K, alpha)
