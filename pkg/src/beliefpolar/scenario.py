"""Scenario files: JSON description of one simulation run.

Example::

    {"n": 3,
     "beliefs": {"kind": "uniform"},
     "influence": {"kind": "clique", "c": 0.5},
     "update": "regular",
     "steps": 10,
     "stop_gap": 1e-3,
     "polarization": {"bins": 5, "alpha": 1.6, "k": 1000}}

Belief kinds: uniform, mild, extreme, tripolar, explicit (``values``).
Influence kinds: clique, circular (``c``, default 0.5), disconnected,
unrelenting, faint, explicit (``matrix``).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BeliefPolarError
from .graphs import GraphKind, gen_influence
from .model import BeliefState, InfluenceGraph, InitialBeliefs, UpdateKind, gen_initial_beliefs
from .polarization import DEFAULT_ALPHA, DEFAULT_BINS, DEFAULT_K, BinSpec, ERParams

BELIEF_KINDS = [k.value for k in InitialBeliefs] + ["explicit"]
INFLUENCE_KINDS = [k.value for k in GraphKind] + ["explicit"]


class ScenarioError(BeliefPolarError):
    """Invalid scenario document; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class PolarizationSpec:
    bins: int = DEFAULT_BINS
    alpha: float = DEFAULT_ALPHA
    K: float = DEFAULT_K

    def bin_spec(self) -> BinSpec:
        return BinSpec.uniform(self.bins)

    def params(self) -> ERParams:
        return ERParams(K=self.K, alpha=self.alpha)


@dataclass(frozen=True)
class Scenario:
    n: int
    beliefs_kind: str
    influence_kind: str
    update: UpdateKind = UpdateKind.REGULAR
    steps: int = 100
    stop_gap: float | None = None
    c: float = 0.5
    belief_values: tuple[float, ...] | None = None
    matrix: tuple[tuple[float, ...], ...] | None = None
    polarization: PolarizationSpec = field(default_factory=PolarizationSpec)

    def initial_beliefs(self) -> BeliefState:
        if self.beliefs_kind == "explicit":
            return BeliefState(np.array(self.belief_values))
        return gen_initial_beliefs(self.beliefs_kind, self.n)

    def influence_graph(self) -> InfluenceGraph:
        if self.influence_kind == "explicit":
            return InfluenceGraph(np.array(self.matrix))
        return gen_influence(self.influence_kind, self.n, self.c)

    def with_overrides(self, **kw) -> "Scenario":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        beliefs = {"kind": self.beliefs_kind}
        if self.belief_values is not None:
            beliefs["values"] = list(self.belief_values)
        influence = {"kind": self.influence_kind}
        if self.influence_kind in ("clique", "circular"):
            influence["c"] = self.c
        if self.matrix is not None:
            influence["matrix"] = [list(r) for r in self.matrix]
        d = {
            "n": self.n,
            "beliefs": beliefs,
            "influence": influence,
            "update": self.update.value,
            "steps": self.steps,
            "polarization": {"bins": self.polarization.bins, "alpha": self.polarization.alpha, "k": self.polarization.K},
        }
        if self.stop_gap is not None:
            d["stop_gap"] = self.stop_gap
        return d


def _number(doc: dict, key: str, path: str, default=None):
    if key not in doc:
        if default is None:
            raise ScenarioError(path, "missing required field")
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ScenarioError(path, f"expected a finite number, got {v!r}")
    return v


def _integer(doc: dict, key: str, path: str, default=None) -> int:
    v = _number(doc, key, path, default)
    if not float(v).is_integer():
        raise ScenarioError(path, f"expected an integer, got {v!r}")
    return int(v)


def _object(doc: dict, key: str, path: str) -> dict:
    v = doc.get(key)
    if not isinstance(v, dict):
        raise ScenarioError(path, "expected an object")
    return v


def _kind(doc: dict, path: str, allowed: list[str]) -> str:
    k = doc.get("kind")
    if k not in allowed:
        raise ScenarioError(path, f"unknown kind {k!r}; expected one of {', '.join(allowed)}")
    return k


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("$", "scenario must be a JSON object")
    n = _integer(doc, "n", "n")
    if n < 1:
        raise ScenarioError("n", "agent count must be at least 1")

    bdoc = _object(doc, "beliefs", "beliefs")
    bkind = _kind(bdoc, "beliefs.kind", BELIEF_KINDS)
    values = None
    if bkind == "explicit":
        raw = bdoc.get("values")
        if not isinstance(raw, list) or len(raw) != n:
            raise ScenarioError("beliefs.values", f"expected a list of {n} numbers")
        for i, v in enumerate(raw):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not 0 <= v <= 1:
                raise ScenarioError(f"beliefs.values[{i}]", f"belief must be a number in [0, 1], got {v!r}")
        values = tuple(float(v) for v in raw)
    elif bkind == "tripolar" and n < 3:
        raise ScenarioError("beliefs.kind", "tripolar beliefs need n >= 3")

    idoc = _object(doc, "influence", "influence")
    ikind = _kind(idoc, "influence.kind", INFLUENCE_KINDS)
    c = 0.5
    matrix = None
    if ikind in ("clique", "circular"):
        c = float(_number(idoc, "c", "influence.c", 0.5))
        if not 0 < c <= 1:
            raise ScenarioError("influence.c", f"influence constant must be in (0, 1], got {c!r}")
    elif ikind == "unrelenting" and n < 3:
        raise ScenarioError("influence.kind", "unrelenting influencers need n >= 3")
    elif ikind == "explicit":
        raw = idoc.get("matrix")
        if not isinstance(raw, list) or len(raw) != n:
            raise ScenarioError("influence.matrix", f"expected {n} rows")
        rows = []
        for i, row in enumerate(raw):
            if not isinstance(row, list) or len(row) != n:
                raise ScenarioError(f"influence.matrix[{i}]", f"expected {n} entries")
            for j, v in enumerate(row):
                p = f"influence.matrix[{i}][{j}]"
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not 0 <= v <= 1:
                    raise ScenarioError(p, f"influence must be a number in [0, 1], got {v!r}")
                if i == j and v != 0:
                    raise ScenarioError(p, "self-influence must be 0")
            rows.append(tuple(float(v) for v in row))
        matrix = tuple(rows)

    upd = doc.get("update", "regular")
    try:
        update = UpdateKind(upd)
    except ValueError:
        raise ScenarioError("update", f"expected 'regular' or 'confirmation_bias', got {upd!r}") from None

    steps = _integer(doc, "steps", "steps", 100)
    if steps < 0:
        raise ScenarioError("steps", "must be non-negative")
    stop_gap = None
    if doc.get("stop_gap") is not None:
        stop_gap = float(_number(doc, "stop_gap", "stop_gap"))
        if not stop_gap > 0:
            raise ScenarioError("stop_gap", "must be positive")

    pol = PolarizationSpec()
    if "polarization" in doc:
        pdoc = _object(doc, "polarization", "polarization")
        bins = _integer(pdoc, "bins", "polarization.bins", DEFAULT_BINS)
        alpha = float(_number(pdoc, "alpha", "polarization.alpha", DEFAULT_ALPHA))
        K = float(_number(pdoc, "k", "polarization.k", DEFAULT_K))
        if bins < 1:
            raise ScenarioError("polarization.bins", "must be at least 1")
        if not alpha > 0:
            raise ScenarioError("polarization.alpha", "must be positive")
        if not K > 0:
            raise ScenarioError("polarization.k", "must be positive")
        pol = PolarizationSpec(bins=bins, alpha=alpha, K=K)

    return Scenario(
        n=n,
        beliefs_kind=bkind,
        influence_kind=ikind,
        update=update,
        steps=steps,
        stop_gap=stop_gap,
        c=c,
        belief_values=values,
        matrix=matrix,
        polarization=pol,
    )


def parse_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError("$", f"invalid JSON: {e}") from None
    return scenario_from_dict(doc)
