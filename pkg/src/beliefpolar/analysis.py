"""Convergence prediction for the belief dynamics.

The regular update is linear, ``B^{t+1} = M B^t`` with a row-stochastic
update matrix ``M``, so limits can be read off the Markov-chain view.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ShapeError
from .graphs import classify, strongly_connected_components
from .model import BeliefState, InfluenceGraph, SimulationTrace


@dataclass(frozen=True, eq=False)
class ExtremeSeries:
    max_t: np.ndarray
    min_t: np.ndarray
    argmax_t: np.ndarray
    argmin_t: np.ndarray

    @property
    def U_est(self) -> float:
        return float(self.max_t[-1])

    @property
    def L_est(self) -> float:
        return float(self.min_t[-1])

    def gaps(self) -> np.ndarray:
        return self.max_t - self.min_t

    def __len__(self):
        return self.max_t.size


def extremes(trace: SimulationTrace) -> ExtremeSeries:
    b = trace.beliefs
    return ExtremeSeries(
        max_t=b.max(axis=1),
        min_t=b.min(axis=1),
        argmax_t=b.argmax(axis=1),
        argmin_t=b.argmin(axis=1),
    )


@dataclass(frozen=True)
class ConvergenceBound:
    T_eps: float
    C: float
    eps_target: float
    epsilon_contraction: float | None = None
    f_min: float | None = None

    @property
    def steps(self) -> int:
        """Smallest whole step count strictly beyond ``T_eps``."""
        return math.floor(self.T_eps) + 1

    def to_dict(self) -> dict:
        return {
            "T_eps": self.T_eps,
            "C": self.C,
            "eps_target": self.eps_target,
            "epsilon_contraction": self.epsilon_contraction,
            "f_min": self.f_min,
        }


def clique_convergence_bound(C: float, B0: BeliefState, eps: float) -> ConvergenceBound:
    """Time after which a ``C``-clique started at ``B0`` has gap below ``eps``.

    The gap shrinks exactly by ``1 - C`` per step, so
    ``T_eps = log_{1-C}(eps / gap0)``; ``C = 1`` gives ``T_eps = 1``.
    A non-positive logarithm is clamped to 0.
    """
    if not eps > 0:
        raise ParameterError("eps must be positive")
    if not 0 < C <= 1:
        raise ParameterError("clique constant must be in (0, 1]")
    gap0 = B0.gap()
    if C == 1.0:
        T = 1.0
    elif gap0 <= 0.0:
        T = 0.0
    else:
        T = max(0.0, math.log(eps / gap0) / math.log(1.0 - C))
    return ConvergenceBound(T_eps=T, C=float(C), eps_target=float(eps))


def min_confirmation_factor(B0: BeliefState) -> float:
    """Smallest confirmation-bias factor over all pairs at time 0."""
    return 1.0 - B0.gap()


def epsilon_contraction(I: InfluenceGraph, series: ExtremeSeries, f_min: float = 1.0) -> float | None:
    """Diagnostic ``((I_min f_min) / n)^(n-1) (U - L)`` using the observed final extremes.

    Returns None when the graph has no positive influence.
    """
    pos = I.weights[I.weights > 0]
    if pos.size == 0:
        return None
    n = I.n
    return float((pos.min() * f_min / n) ** (n - 1) * (series.U_est - series.L_est))


def predict_consensus(I: InfluenceGraph, B0: BeliefState) -> float | None:
    """Mean initial belief when the graph is balanced and weakly connected, else None."""
    if I.n != B0.n:
        raise ShapeError("belief state and influence graph sizes differ")
    rep = classify(I)
    if rep.balanced and rep.weakly_connected:
        return float(np.mean(B0.values))
    return None


@dataclass(frozen=True)
class SccDecomposition:
    components: tuple[tuple[int, ...], ...]
    condensation_edges: tuple[tuple[int, int], ...]
    source_components: tuple[int, ...]

    def component_of(self, agent: int) -> int:
        for k, comp in enumerate(self.components):
            if agent in comp:
                return k
        raise IndexError(agent)

    def to_dict(self) -> dict:
        return {
            "components": [list(c) for c in self.components],
            "condensation_edges": [list(e) for e in self.condensation_edges],
            "source_components": list(self.source_components),
        }


def scc_condense(I: InfluenceGraph) -> SccDecomposition:
    """Strongly connected components and their condensation DAG.

    Components are numbered by their smallest agent; condensation edges
    follow influence direction, so source components receive no outside
    influence.
    """
    adj = I.weights > 0
    comps = sorted((tuple(c) for c in strongly_connected_components(adj)), key=lambda c: c[0])
    label = np.empty(I.n, dtype=int)
    for k, c in enumerate(comps):
        label[list(c)] = k
    src, dst = np.nonzero(adj)
    edges = sorted({(int(label[a]), int(label[b])) for a, b in zip(src, dst) if label[a] != label[b]})
    has_in = {b for _, b in edges}
    sources = tuple(k for k in range(len(comps)) if k not in has_in)
    return SccDecomposition(tuple(comps), tuple(edges), sources)


@dataclass(frozen=True, eq=False)
class UpdateMatrix:
    m: np.ndarray

    def apply(self, B: BeliefState) -> np.ndarray:
        return self.m @ B.values


def build_update_matrix(I: InfluenceGraph) -> UpdateMatrix:
    """Row-stochastic ``M`` with ``M[i, j] = I[j, i] / n`` off the diagonal."""
    n = I.n
    m = I.weights.T / n
    np.fill_diagonal(m, 0.0)
    np.fill_diagonal(m, 1.0 - m.sum(axis=1))
    m.setflags(write=False)
    return UpdateMatrix(m)


@dataclass(frozen=True, eq=False)
class LimitReport:
    limits: np.ndarray
    iterations: int
    residual: float
    converged: bool
    consensus: bool

    def to_dict(self) -> dict:
        return {
            "limits": self.limits.tolist(),
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "consensus": self.consensus,
        }


def limit_beliefs(
    I: InfluenceGraph, B0: BeliefState, tol: float = 1e-13, max_iter: int = 1_000_000
) -> LimitReport:
    """Power iteration ``B <- M B`` until the largest per-agent change is below ``tol``.

    A small change alone can hide a large remaining distance when the chain
    mixes slowly, so iteration also continues until the geometric tail
    ``change * r / (1 - r)`` (``r`` the ratio of successive changes) is below
    ``tol``, or the change is at rounding level.  Running out of iterations
    is reported through ``converged=False``.
    """
    if I.n != B0.n:
        raise ShapeError("belief state and influence graph sizes differ")
    if not tol > 0:
        raise ParameterError("tol must be positive")
    if max_iter < 1:
        raise ParameterError("max_iter must be at least 1")
    m = build_update_matrix(I).m
    b = B0.values.copy()
    noise = 8 * np.finfo(np.float64).eps
    residual = prev = math.inf
    it = 0
    while it < max_iter:
        nxt = m @ b
        residual = float(np.max(np.abs(nxt - b)))
        b = nxt
        it += 1
        if residual < tol:
            r = residual / prev if prev > 0 else 0.0
            if residual <= noise or (r < 1 and residual * r / (1 - r) < tol):
                break
        prev = residual
    b = np.clip(b, 0.0, 1.0)
    converged = residual < tol
    return LimitReport(
        limits=b,
        iterations=it,
        residual=residual,
        converged=converged,
        consensus=bool(b.max() - b.min() <= I.n * tol),
    )

