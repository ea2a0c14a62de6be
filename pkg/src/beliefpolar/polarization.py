"""Esteban-Ray polarization of a belief configuration.

Beliefs are binned into ``k`` intervals of ``[0, 1]``; each non-empty bin
contributes its population share and a representative value (the bin
midpoint by default).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ParameterError
from .model import BeliefState, SimulationTrace

DEFAULT_BINS = 5
DEFAULT_ALPHA = 1.6
DEFAULT_K = 1000.0


@dataclass(frozen=True, eq=False)
class BinSpec:
    edges: np.ndarray
    representatives: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.float64)
        y = np.asarray(self.representatives, dtype=np.float64)
        if e.ndim != 1 or e.size < 2:
            raise ParameterError("need at least two bin edges")
        if e[0] != 0.0 or e[-1] != 1.0 or np.any(np.diff(e) <= 0):
            raise ParameterError("bin edges must increase strictly from 0 to 1")
        if y.shape != (e.size - 1,):
            raise ParameterError("need exactly one representative per bin")
        if np.any(y < e[:-1]) or np.any(y > e[1:]):
            raise ParameterError("each representative must lie inside its bin")
        e.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "representatives", y)

    @property
    def k(self) -> int:
        return self.representatives.size

    @classmethod
    def uniform(cls, k: int = DEFAULT_BINS) -> "BinSpec":
        """``k`` equal-width bins with midpoint representatives."""
        if k < 1:
            raise ParameterError("bin count must be positive")
        edges = np.arange(k + 1, dtype=np.float64) / k
        return cls(edges, (np.arange(k, dtype=np.float64) + 0.5) / k)

    def assign(self, values: np.ndarray) -> np.ndarray:
        """Bin index of each value; bins are ``[e_i, e_{i+1})``, the last one closed."""
        idx = np.searchsorted(self.edges, values, side="right") - 1
        return np.clip(idx, 0, self.k - 1)


@dataclass(frozen=True, eq=False)
class Distribution:
    weights: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        y = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if p.size < 1 or p.shape != y.shape:
            raise ParameterError("weights and values must be non-empty and of equal length")
        if np.any(p <= 0):
            raise ParameterError("distribution weights must be strictly positive")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ParameterError(f"distribution weights must sum to 1, got {p.sum()!r}")
        p.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "weights", p)
        object.__setattr__(self, "values", y)

    def __len__(self):
        return self.weights.size


@dataclass(frozen=True)
class ERParams:
    K: float = DEFAULT_K
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if not self.K > 0:
            raise ParameterError("K must be positive")
        if not self.alpha > 0:
            raise ParameterError("alpha must be positive")


def discretize(B: BeliefState, bins: BinSpec) -> Distribution:
    counts = np.bincount(bins.assign(B.values), minlength=bins.k)
    keep = counts > 0
    return Distribution(counts[keep] / B.n, bins.representatives[keep])


def er_sum(weights: Sequence[float], values: Sequence[float], K: float, alpha: float) -> float:
    """Raw double sum ``K * sum_i sum_j p_i^(1+alpha) p_j |y_i - y_j|``.

    No normalisation is imposed on ``weights``; ``er_measure`` is this sum on
    a proper distribution.
    """
    p = np.asarray(weights, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    dist = np.abs(y[:, None] - y[None, :])
    return float(K * np.sum(p[:, None] ** (1.0 + alpha) * p[None, :] * dist))


def er_measure(d: Distribution, p: ERParams = ERParams()) -> float:
    return er_sum(d.weights, d.values, p.K, p.alpha)


def polarization(B: BeliefState, bins: BinSpec | None = None, p: ERParams = ERParams()) -> float:
    return er_measure(discretize(B, bins or BinSpec.uniform()), p)


def polarization_series(
    trace: SimulationTrace, bins: BinSpec | None = None, p: ERParams = ERParams()
) -> list[float]:
    bins = bins or BinSpec.uniform()
    return [er_measure(discretize(s, bins), p) for s in trace.states]
