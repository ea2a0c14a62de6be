"""Checkers that test convergence results against concrete traces.

Every checker returns a ``CheckReport``; a failed check carries the first
offending ``(t, agent)`` with both sides of the inequality and the slack
(negative when violated).  Checkers raise ``PreconditionError`` when the
trace or graph falls outside the hypotheses of the result being checked.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import min_confirmation_factor
from .errors import ParameterError, PreconditionError
from .graphs import GraphClassReport, InfluencePath, classify, clique_constant
from .model import BeliefState, InfluenceGraph, SimulationTrace, UpdateKind, confirmation_bias_step

ORDER_TOL = 1e-12
GAP_TOL = 1e-9


@dataclass(frozen=True)
class Violation:
    t: int
    agent: int
    lhs: float
    rhs: float
    slack: float


@dataclass(frozen=True)
class CheckReport:
    name: str
    passed: bool
    first_violation: Violation | None = None

    def __post_init__(self):
        if self.passed != (self.first_violation is None):
            raise ValueError("a report passes exactly when it has no violation")

    def __bool__(self):
        return self.passed

    def summary(self) -> str:
        if self.passed:
            return f"PASS {self.name}"
        v = self.first_violation
        return f"FAIL {self.name}: t={v.t} agent={v.agent} lhs={v.lhs!r} rhs={v.rhs!r} slack={v.slack!r}"


def _ok(name: str) -> CheckReport:
    return CheckReport(name, True)


def _fail(name: str, t, agent, lhs, rhs, slack) -> CheckReport:
    return CheckReport(name, False, Violation(int(t), int(agent), float(lhs), float(rhs), float(slack)))


def check_belief_bounds(trace: SimulationTrace) -> CheckReport:
    """Each new belief lies between the previous step's extreme beliefs."""
    name = "belief_bounds"
    if len(trace) < 2:
        raise ParameterError("belief-bounds check needs at least two states")
    b = trace.beliefs
    hi = b[:-1].max(axis=1)
    lo = b[:-1].min(axis=1)
    nxt = b[1:]
    above = hi[:, None] + ORDER_TOL - nxt
    below = nxt - (lo[:, None] - ORDER_TOL)
    for t in range(nxt.shape[0]):
        for i in range(nxt.shape[1]):
            if above[t, i] < 0:
                return _fail(name, t, i, nxt[t, i], hi[t], hi[t] - nxt[t, i])
            if below[t, i] < 0:
                return _fail(name, t, i, nxt[t, i], lo[t], nxt[t, i] - lo[t])
    return _ok(name)


def check_order_preservation(trace: SimulationTrace, report: GraphClassReport) -> CheckReport:
    """Under clique influence, ``B_i^t >= B_j^t`` implies ``B_i^{t+1} >= B_j^{t+1}``."""
    name = "order_preservation"
    if report.clique_constant is None:
        raise PreconditionError("order preservation only holds for clique influence")
    b = trace.beliefs
    for t in range(len(trace) - 1):
        cur, nxt = b[t], b[t + 1]
        ordered = cur[:, None] >= cur[None, :]
        slack = nxt[:, None] - nxt[None, :] + ORDER_TOL
        bad = ordered & (slack < 0)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            return _fail(name, t, i, nxt[i], nxt[j], nxt[i] - nxt[j])
    return _ok(name)


def check_conservation(trace: SimulationTrace, report: GraphClassReport) -> CheckReport:
    """Balanced influence keeps the total belief constant.

    Allowed drift grows by ``n * 1e-12`` per step to absorb rounding.
    """
    name = "conservation"
    if not report.balanced:
        raise PreconditionError("belief conservation needs a balanced influence graph")
    if trace.update_kind is not UpdateKind.REGULAR:
        raise PreconditionError("belief conservation is stated for the regular update")
    sums = trace.beliefs.sum(axis=1)
    n = trace.n
    for t in range(1, sums.size):
        drift = abs(sums[t] - sums[0])
        allowed = n * ORDER_TOL * t
        if drift > allowed:
            return _fail(name, t, -1, sums[t], sums[0], allowed - drift)
    return _ok(name)


def check_geometric_gap(trace: SimulationTrace, C: float) -> CheckReport:
    """On a ``C``-clique the belief gap at ``t`` is ``(1 - C)^t`` times the initial gap."""
    name = "geometric_gap"
    if trace.update_kind is not UpdateKind.REGULAR:
        raise PreconditionError("the geometric gap law is stated for the regular update")
    if trace.graph is not None and clique_constant(trace.graph) != C and trace.n > 1:
        raise PreconditionError(f"trace graph is not a {C}-clique")
    gaps = trace.gaps()
    for t in range(gaps.size):
        expected = (1.0 - C) ** t * gaps[0]
        err = abs(gaps[t] - expected)
        if err > GAP_TOL:
            return _fail(name, t, -1, gaps[t], expected, GAP_TOL - err)
    return _ok(name)


def check_path_bound(trace: SimulationTrace, I: InfluenceGraph, path: InfluencePath, t: int) -> CheckReport:
    """Path bound and one-step contraction for an influence path starting at ``t``.

    With ``i -> ... -> j`` of size ``s`` and product influence ``C``:

    * ``B_j^{t+s} <= max^t + C f^s / n^s (B_i^t - max^t)``
    * with ``g = max^t - B_j^{t+s}``: ``B_j^{t+s+1} <= max^t - g / n``

    ``f`` is the minimum confirmation-bias factor at time 0 for
    confirmation-bias traces and 1 otherwise.
    """
    name = "path_bound"
    s = path.size
    if t < 0 or t + s + 1 >= len(trace):
        raise ParameterError(f"trace of length {len(trace)} too short for t={t} and path size {s}")
    if not classify(I).strongly_connected:
        raise PreconditionError("the path bound is stated for strongly connected influence")
    if trace.update_kind is UpdateKind.CONFIRMATION_BIAS:
        f = min_confirmation_factor(trace.state(0))
    else:
        f = 1.0
    b = trace.beliefs
    n = trace.n
    top = b[t].max()
    i, j = path.source, path.target
    reached = b[t + s, j]
    bound = top + path.product_influence * f ** s / n ** s * (b[t, i] - top)
    if reached - bound > ORDER_TOL:
        return _fail(name, t + s, j, reached, bound, bound - reached)
    deficit = max(0.0, top - reached)
    after = b[t + s + 1, j]
    bound2 = top - deficit / n
    if after - bound2 > ORDER_TOL:
        return _fail(name, t + s + 1, j, after, bound2, bound2 - after)
    return _ok(name)


def check_cb_fixedpoint(B: BeliefState, I: InfluenceGraph) -> CheckReport:
    """A configuration of only 0 and 1 beliefs is fixed under confirmation bias."""
    name = "cb_fixedpoint"
    v = B.values
    if not np.all((v == 0.0) | (v == 1.0)):
        raise PreconditionError("all beliefs must be exactly 0 or 1")
    out = confirmation_bias_step(B, I).values
    diff = np.flatnonzero(out != v)
    if diff.size:
        a = diff[0]
        return _fail(name, 1, a, out[a], v[a], -abs(out[a] - v[a]))
    return _ok(name)
