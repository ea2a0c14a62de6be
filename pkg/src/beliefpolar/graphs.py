"""Influence-graph families and structural classification."""
from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidPathError, InvalidSizeError, NotAPathError, ParameterError
from .model import InfluenceGraph

BALANCE_TOL = 1e-9


class GraphKind(enum.Enum):
    CLIQUE = "clique"
    CIRCULAR = "circular"
    DISCONNECTED = "disconnected"
    UNRELENTING = "unrelenting"
    FAINT = "faint"


def gen_influence(kind: GraphKind | str, n: int, c: float = 0.5) -> InfluenceGraph:
    """Build one of the standard influence graphs on ``n`` agents.

    ``c`` is the constant influence of the clique and circular families and
    is ignored by the others.
    """
    kind = GraphKind(kind)
    if n < 1:
        raise InvalidSizeError("n must be at least 1")
    if kind in (GraphKind.CLIQUE, GraphKind.CIRCULAR) and not 0 < c <= 1:
        raise ParameterError(f"influence constant must be in (0, 1], got {c!r}")

    idx = np.arange(n)
    if kind is GraphKind.CLIQUE:
        w = np.full((n, n), float(c))
    elif kind is GraphKind.CIRCULAR:
        w = np.zeros((n, n))
        if n > 1:
            w[idx, (idx + 1) % n] = c
    elif kind is GraphKind.DISCONNECTED:
        first = idx < math.ceil(n / 2)
        w = np.where(first[:, None] == first[None, :], 0.5, 0.0)
    elif kind is GraphKind.FAINT:
        # group boundary taken literally: agents <= ceil(n/2) form the first group
        first = idx <= math.ceil(n / 2)
        w = np.where(first[:, None] == first[None, :], 0.5, 0.1)
    else:
        if n < 3:
            raise InvalidSizeError("unrelenting influencers need n >= 3")
        w = np.full((n, n), 0.1)
        w[0, :] = 0.6
        w[n - 1, :] = 0.6
        w[:, 0] = 0.0
        w[:, n - 1] = 0.0
    np.fill_diagonal(w, 0.0)
    return InfluenceGraph(w)


def strongly_connected_components(adj: np.ndarray) -> list[list[int]]:
    """Tarjan's algorithm on a boolean adjacency matrix, without recursion.

    Components come out in reverse topological order of the condensation
    (sinks first); members are sorted.
    """
    n = adj.shape[0]
    succ = [np.flatnonzero(adj[v]).tolist() for v in range(n)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for k in range(pos, len(succ[v])):
                w = succ[v][k]
                if index[w] < 0:
                    work.append((v, k + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def _support(I: InfluenceGraph) -> np.ndarray:
    return I.weights > 0


def is_strongly_connected(I: InfluenceGraph) -> bool:
    return len(strongly_connected_components(_support(I))) == 1


def is_weakly_connected(I: InfluenceGraph) -> bool:
    adj = _support(I)
    und = adj | adj.T
    seen = np.zeros(I.n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in np.flatnonzero(und[v] & ~seen):
            seen[w] = True
            queue.append(int(w))
    return bool(seen.all())


def balance_residual(I: InfluenceGraph) -> np.ndarray:
    """Outgoing minus incoming influence of each agent."""
    w = I.weights
    return w.sum(axis=1) - w.sum(axis=0)


def is_balanced(I: InfluenceGraph, tol: float = BALANCE_TOL) -> bool:
    return bool(np.all(np.abs(balance_residual(I)) <= tol))


def clique_constant(I: InfluenceGraph) -> float | None:
    if I.n < 2:
        return None
    off = I.weights[~np.eye(I.n, dtype=bool)]
    c = off[0]
    if c > 0 and np.all(off == c):
        return float(c)
    return None


@dataclass(frozen=True)
class GraphClassReport:
    strongly_connected: bool
    weakly_connected: bool
    balanced: bool
    clique_constant: float | None
    min_positive_influence: float | None

    def to_dict(self) -> dict:
        return {
            "strongly_connected": self.strongly_connected,
            "weakly_connected": self.weakly_connected,
            "balanced": self.balanced,
            "clique_constant": self.clique_constant,
            "min_positive_influence": self.min_positive_influence,
        }


def classify(I: InfluenceGraph) -> GraphClassReport:
    pos = I.weights[I.weights > 0]
    return GraphClassReport(
        strongly_connected=is_strongly_connected(I),
        weakly_connected=is_weakly_connected(I),
        balanced=is_balanced(I),
        clique_constant=clique_constant(I),
        min_positive_influence=float(pos.min()) if pos.size else None,
    )


@dataclass(frozen=True)
class InfluencePath:
    agents: tuple[int, ...]
    product_influence: float

    @property
    def size(self) -> int:
        return len(self.agents) - 1

    @property
    def source(self) -> int:
        return self.agents[0]

    @property
    def target(self) -> int:
        return self.agents[-1]


def product_influence(I: InfluenceGraph, agents: Sequence[int]) -> InfluencePath:
    agents = tuple(int(a) for a in agents)
    if len(agents) < 2:
        raise InvalidPathError("a path needs at least two agents")
    if len(set(agents)) != len(agents):
        raise InvalidPathError(f"path repeats an agent: {agents}")
    if min(agents) < 0 or max(agents) >= I.n:
        raise InvalidPathError(f"agent index out of range for n={I.n}")
    prod = 1.0
    for a, b in zip(agents, agents[1:]):
        c = I.weights[a, b]
        if c <= 0:
            raise NotAPathError(f"agent {a} has no direct influence on agent {b}")
        prod *= c
    return InfluencePath(agents, float(prod))


def shortest_path(I: InfluenceGraph, source: int, target: int) -> InfluencePath | None:
    """Fewest-edge influence path, or None when ``target`` is unreachable."""
    if source == target:
        return None
    adj = _support(I)
    prev = {source: source}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in np.flatnonzero(adj[v]).tolist():
            if w not in prev:
                prev[w] = v
                if w == target:
                    path = [w]
                    while path[-1] != source:
                        path.append(prev[path[-1]])
                    return product_influence(I, path[::-1])
                queue.append(w)
    return None


# Random families used by tests and sweeps; not part of the model itself.

def _random_cycle(rng: np.random.Generator, n: int, length: int) -> list[int]:
    return rng.choice(n, size=length, replace=False).tolist()


def random_circulation(
    rng: np.random.Generator,
    n: int,
    cycles: int,
    *,
    min_weight: float = 0.0,
    spanning: bool = False,
) -> InfluenceGraph:
    """Superpose ``cycles`` random directed cycles with random weights.

    Every cycle adds the same weight on each of its edges, so the sum is
    balanced.  If an entry exceeds 1 the whole matrix is rescaled, which
    keeps it balanced (clipping would not).  ``spanning`` adds one cycle
    through all agents, making the result weakly connected.
    """
    if n < 2:
        raise InvalidSizeError("a circulation needs n >= 2")
    w = np.zeros((n, n))
    loops = [_random_cycle(rng, n, int(rng.integers(2, n + 1))) for _ in range(cycles)]
    if spanning:
        loops.append(rng.permutation(n).tolist())
    for cyc in loops:
        c = rng.uniform(min_weight, 1.0)
        if c == 0.0:
            continue
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            w[a, b] += c
    top = w.max()
    if top > 1.0:
        w /= top
    return InfluenceGraph(w)


def random_influence(
    rng: np.random.Generator,
    n: int,
    density: float = 0.3,
    *,
    min_weight: float = 0.1,
    strongly_connected: bool = False,
) -> InfluenceGraph:
    """Random support with probability ``density`` per ordered pair.

    With ``strongly_connected`` a random Hamiltonian cycle is added.
    """
    mask = rng.random((n, n)) < density
    if strongly_connected and n > 1:
        order = rng.permutation(n)
        mask[order, np.roll(order, -1)] = True
    w = np.where(mask, rng.uniform(min_weight, 1.0, size=(n, n)), 0.0)
    np.fill_diagonal(w, 0.0)
    return InfluenceGraph(w)
