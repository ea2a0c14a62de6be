"""Belief states, influence graphs and the two synchronous update rules.

Agents are the indices ``0 .. n-1``.  ``weights[i, j]`` is the influence of
agent ``i`` on agent ``j``; the update of agent ``i`` therefore reads column
``i`` of the influence matrix.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidSizeError, ParameterError, ShapeError

GUARD_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


class UpdateKind(enum.Enum):
    REGULAR = "regular"
    CONFIRMATION_BIAS = "confirmation_bias"


class StopReason(enum.Enum):
    MAX_STEPS = "max_steps"
    GAP_BELOW_TOLERANCE = "gap_below_tolerance"


class InitialBeliefs(enum.Enum):
    UNIFORM = "uniform"
    MILD = "mild"
    EXTREME = "extreme"
    TRIPOLAR = "tripolar"


@dataclass(frozen=True, eq=False)
class BeliefState:
    """Belief of every agent in the proposition at a single time step."""

    values: np.ndarray

    def __post_init__(self):
        v = _frozen(np.asarray(self.values, dtype=np.float64).reshape(-1))
        if v.size < 1:
            raise InvalidSizeError("a belief state needs at least one agent")
        if not np.all(np.isfinite(v)) or v.min() < 0.0 or v.max() > 1.0:
            raise ParameterError("belief values must lie in [0, 1]")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, BeliefState):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    __hash__ = None

    def gap(self) -> float:
        return float(self.values.max() - self.values.min())

    def tolist(self) -> list[float]:
        return self.values.tolist()


@dataclass(frozen=True, eq=False)
class InfluenceGraph:
    """Weighted directed influence between agents, diagonal fixed to zero."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise ShapeError(f"influence matrix must be square and non-empty, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or w.min() < 0.0 or w.max() > 1.0:
            raise ParameterError("influence weights must lie in [0, 1]")
        if np.any(np.diag(w) != 0.0):
            raise ParameterError("self-influence must be 0 (diagonal entries are not used by the model)")
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def __eq__(self, other):
        if not isinstance(other, InfluenceGraph):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    __hash__ = None

    @classmethod
    def zeros(cls, n: int) -> "InfluenceGraph":
        return cls(np.zeros((n, n)))


@dataclass(frozen=True, eq=False)
class StepBreakdown:
    """Per-pair contributions of one update step.

    ``pairwise[i, j]`` is the belief agent ``i`` would adopt after
    interacting with ``j`` alone; ``factors[i, j]`` is the confirmation-bias
    factor applied to that interaction (identically 1 for the regular rule).
    """

    pairwise: np.ndarray
    factors: np.ndarray

    def row_averages(self) -> np.ndarray:
        return self.pairwise.mean(axis=1)


def gen_initial_beliefs(kind: InitialBeliefs | str, n: int) -> BeliefState:
    """Standard initial configurations: uniform, mild, extreme, tripolar.

    >>> gen_initial_beliefs("uniform", 5).tolist()
    [0.0, 0.25, 0.5, 0.75, 1.0]
    """
    kind = InitialBeliefs(kind)
    if n < 1:
        raise InvalidSizeError("n must be at least 1")
    i = np.arange(n, dtype=np.float64)
    half = math.ceil(n / 2)
    if kind is InitialBeliefs.UNIFORM:
        # a single agent has nowhere to spread; place it at 0
        b = i / (n - 1) if n > 1 else np.zeros(1)
    elif kind is InitialBeliefs.MILD:
        b = np.where(i < half, 0.8 * i / n, 0.8 * i / n + 0.20)
    elif kind is InitialBeliefs.EXTREME:
        b = np.where(i < half, 0.4 * i / n, 0.4 * i / n + 0.60)
    else:
        if n < 3:
            raise InvalidSizeError("tripolar configuration needs n >= 3")
        lo, hi = n // 3, math.ceil(2 * n / 3)
        b = 0.60 * i / n + np.where(i < lo, 0.0, np.where(i < hi, 0.20, 0.40))
    return BeliefState(b)


def _check_dims(B: BeliefState, I: InfluenceGraph) -> None:
    if B.n != I.n:
        raise ShapeError(f"belief state has {B.n} agents but influence graph has {I.n}")


def _confirmation_factors(b: np.ndarray) -> np.ndarray:
    return 1.0 - np.abs(b[:, None] - b[None, :])


def _advance(b: np.ndarray, w: np.ndarray, factors: np.ndarray | None) -> np.ndarray:
    """One synchronous step on raw arrays.

    ``factors`` of None is the regular rule.  Sums run over the sender index
    ``j`` in ascending order: reducing axis 0 of a C-contiguous matrix adds
    whole rows one after another, so the result does not depend on SIMD or
    pairwise-summation choices.
    """
    n = b.size
    # diff[j, i] = B_j - B_i, aligned with w[j, i] = influence of j on i
    diff = b[:, None] - b[None, :]
    terms = w * diff
    if factors is not None:
        terms = factors * terms
    out = b + np.add.reduce(np.ascontiguousarray(terms), axis=0) / n
    lo, hi = out.min(), out.max()
    if lo < 0.0 or hi > 1.0:
        if lo < -GUARD_TOL or hi > 1.0 + GUARD_TOL:
            raise ArithmeticError(f"belief left [0, 1] beyond rounding: [{lo!r}, {hi!r}]")
        out = np.clip(out, 0.0, 1.0)
    return out


def _advance_kind(b: np.ndarray, w: np.ndarray, kind: UpdateKind) -> np.ndarray:
    if kind is UpdateKind.REGULAR:
        return _advance(b, w, None)
    return _advance(b, w, _confirmation_factors(b))


def regular_step(B: BeliefState, I: InfluenceGraph) -> BeliefState:
    """Average of pairwise moves towards every other agent, scaled by influence."""
    _check_dims(B, I)
    return BeliefState(_advance(B.values, I.weights, None))


def confirmation_bias_step(B: BeliefState, I: InfluenceGraph) -> BeliefState:
    """Regular step with each interaction damped by ``1 - |B_j - B_i|``."""
    _check_dims(B, I)
    return BeliefState(_advance(B.values, I.weights, _confirmation_factors(B.values)))


def apply_step(B: BeliefState, I: InfluenceGraph, kind: UpdateKind | str) -> BeliefState:
    kind = UpdateKind(kind)
    if kind is UpdateKind.REGULAR:
        return regular_step(B, I)
    return confirmation_bias_step(B, I)


def step_breakdown(B: BeliefState, I: InfluenceGraph, kind: UpdateKind | str) -> StepBreakdown:
    _check_dims(B, I)
    kind = UpdateKind(kind)
    b = B.values
    if kind is UpdateKind.REGULAR:
        factors = np.ones((b.size, b.size))
    else:
        factors = _confirmation_factors(b)
    # pairwise[i, j] = B_i + f_ij * I[j, i] * (B_j - B_i)
    pairwise = b[:, None] + factors * I.weights.T * (b[None, :] - b[:, None])
    return StepBreakdown(pairwise=_frozen(pairwise), factors=_frozen(factors))


@dataclass(frozen=True, eq=False)
class SimulationTrace:
    """Time-ordered belief states of one run.

    ``beliefs`` has shape ``(T, n)``; row ``t`` is the configuration at time
    ``t``.  ``graph`` may be None for hand-built traces, which then cannot be
    replayed.
    """

    beliefs: np.ndarray
    update_kind: UpdateKind = UpdateKind.REGULAR
    graph: InfluenceGraph | None = None
    steps_taken: int = -1
    stop_reason: StopReason = StopReason.MAX_STEPS
    _states: tuple = field(default=(), init=False, repr=False)

    def __post_init__(self):
        b = np.asarray(self.beliefs, dtype=np.float64)
        if b.ndim != 2 or b.shape[0] < 1 or b.shape[1] < 1:
            raise ShapeError("a trace needs at least one state with at least one agent")
        if b.min() < 0.0 or b.max() > 1.0:
            raise ParameterError("belief values must lie in [0, 1]")
        if self.graph is not None and self.graph.n != b.shape[1]:
            raise ShapeError("trace width does not match the influence graph")
        object.__setattr__(self, "beliefs", _frozen(b))
        object.__setattr__(self, "update_kind", UpdateKind(self.update_kind))
        if self.steps_taken < 0:
            object.__setattr__(self, "steps_taken", b.shape[0] - 1)

    @classmethod
    def from_states(cls, states: Sequence[BeliefState | Sequence[float]], **kw) -> "SimulationTrace":
        rows = [s.values if isinstance(s, BeliefState) else np.asarray(s, dtype=float) for s in states]
        return cls(np.vstack(rows), **kw)

    def __len__(self) -> int:
        return self.beliefs.shape[0]

    @property
    def n(self) -> int:
        return self.beliefs.shape[1]

    @property
    def states(self) -> tuple[BeliefState, ...]:
        if not self._states:
            object.__setattr__(self, "_states", tuple(BeliefState(row) for row in self.beliefs))
        return self._states

    def state(self, t: int) -> BeliefState:
        return BeliefState(self.beliefs[t])

    @property
    def final(self) -> BeliefState:
        return self.state(-1)

    def gaps(self) -> np.ndarray:
        return self.beliefs.max(axis=1) - self.beliefs.min(axis=1)

    def replay_error(self) -> float:
        """Largest deviation between stored states and re-applying the update."""
        if self.graph is None:
            raise ValueError("trace has no influence graph to replay against")
        worst = 0.0
        w = self.graph.weights
        for t in range(len(self) - 1):
            nxt = _advance_kind(self.beliefs[t], w, self.update_kind)
            worst = max(worst, float(np.max(np.abs(nxt - self.beliefs[t + 1]))))
        return worst


def run(
    B0: BeliefState,
    I: InfluenceGraph,
    kind: UpdateKind | str = UpdateKind.REGULAR,
    max_steps: int = 100,
    stop_gap: float | None = None,
) -> SimulationTrace:
    """Iterate the chosen update from ``B0``.

    Stops after ``max_steps`` steps, or earlier as soon as the belief gap
    ``max - min`` drops strictly below ``stop_gap`` (checked after each step).
    """
    _check_dims(B0, I)
    kind = UpdateKind(kind)
    if max_steps < 0:
        raise ParameterError("max_steps must be non-negative")
    if stop_gap is not None and not stop_gap > 0:
        raise ParameterError("stop_gap must be positive")

    w = I.weights
    out = np.empty((max_steps + 1, B0.n))
    out[0] = B0.values
    reason = StopReason.MAX_STEPS
    t = 0
    while t < max_steps:
        out[t + 1] = _advance_kind(out[t], w, kind)
        t += 1
        if stop_gap is not None and out[t].max() - out[t].min() < stop_gap:
            reason = StopReason.GAP_BELOW_TOLERANCE
            break
    return SimulationTrace(out[: t + 1], update_kind=kind, graph=I, steps_taken=t, stop_reason=reason)
