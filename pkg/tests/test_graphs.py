import itertools

import networkx as nx
import numpy as np
import pytest

from beliefpolar import InfluenceGraph, classify, gen_influence, product_influence
from beliefpolar.errors import InvalidPathError, InvalidSizeError, NotAPathError, ParameterError
from beliefpolar.graphs import (
    random_circulation,
    random_influence,
    shortest_path,
    strongly_connected_components,
)


def test_clique():
    w = gen_influence("clique", 3, 0.5).weights
    assert w.tolist() == [[0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]]


def test_circular():
    w = gen_influence("circular", 3, 0.5).weights
    assert w.tolist() == [[0, 0.5, 0], [0, 0, 0.5], [0.5, 0, 0]]


def test_disconnected():
    w = gen_influence("disconnected", 4).weights
    assert w.tolist() == [[0, 0.5, 0, 0], [0.5, 0, 0, 0], [0, 0, 0, 0.5], [0, 0, 0.5, 0]]


def test_unrelenting():
    w = gen_influence("unrelenting", 4).weights
    assert w.tolist() == [[0, 0.6, 0.6, 0], [0, 0, 0.1, 0], [0, 0.1, 0, 0], [0, 0.6, 0.6, 0]]


def test_faint_literal_groups():
    w = gen_influence("faint", 6).weights
    # agents 0..3 (<= ceil(6/2)) form one group, 4..5 the other
    assert w[0, 3] == 0.5 and w[3, 4] == 0.1 and w[4, 5] == 0.5
    assert np.all(np.diag(w) == 0)


def test_generator_errors():
    with pytest.raises(ParameterError):
        gen_influence("clique", 3, 1.5)
    with pytest.raises(ParameterError):
        gen_influence("circular", 3, 0)
    with pytest.raises(InvalidSizeError):
        gen_influence("unrelenting", 2)
    with pytest.raises(InvalidSizeError):
        gen_influence("clique", 0)


def test_generators_deterministic():
    for kind in ["clique", "circular", "disconnected", "unrelenting", "faint"]:
        assert gen_influence(kind, 9) == gen_influence(kind, 9)


def test_classify_circular():
    r = classify(gen_influence("circular", 3, 0.5))
    assert r.strongly_connected and r.weakly_connected and r.balanced
    assert r.clique_constant is None and r.min_positive_influence == 0.5


def test_classify_disconnected():
    r = classify(gen_influence("disconnected", 4))
    assert not r.weakly_connected and not r.strongly_connected and r.balanced


def test_classify_unrelenting():
    r = classify(gen_influence("unrelenting", 4))
    assert not r.balanced and r.weakly_connected and not r.strongly_connected


@pytest.mark.parametrize("c", [0.1, 0.5, 1.0])
def test_classify_clique(c):
    r = classify(gen_influence("clique", 7, c))
    assert r.strongly_connected and r.balanced and r.clique_constant == c


def test_classify_zero_graph():
    r = classify(InfluenceGraph.zeros(3))
    assert not r.weakly_connected and r.balanced and r.min_positive_influence is None


def test_product_influence():
    I = gen_influence("circular", 3, 0.5)
    p = product_influence(I, [0, 1, 2])
    assert p.product_influence == 0.25 and p.size == 2
    assert product_influence(gen_influence("clique", 4, 1.0), [2, 0]).product_influence == 1.0
    with pytest.raises(NotAPathError):
        product_influence(I, [0, 2])
    with pytest.raises(InvalidPathError):
        product_influence(I, [0, 1, 0])
    with pytest.raises(InvalidPathError):
        product_influence(I, [0])


def test_shortest_path():
    I = gen_influence("circular", 5, 0.5)
    p = shortest_path(I, 1, 4)
    assert p.agents == (1, 2, 3, 4)
    assert shortest_path(gen_influence("disconnected", 4), 0, 3) is None


def test_tarjan_against_networkx(rng):
    for _ in range(100):
        n = int(rng.integers(1, 25))
        adj = rng.random((n, n)) < rng.uniform(0.02, 0.3)
        ours = sorted(tuple(c) for c in strongly_connected_components(adj))
        g = nx.DiGraph()
        g.add_nodes_from(range(n))
        g.add_edges_from(zip(*np.nonzero(adj)))
        theirs = sorted(tuple(sorted(c)) for c in nx.strongly_connected_components(g))
        assert ours == theirs


def test_tarjan_deep_chain():
    n = 5000
    adj = np.zeros((n, n), dtype=bool)
    adj[np.arange(n - 1), np.arange(1, n)] = True
    adj[n - 1, 0] = True
    assert len(strongly_connected_components(adj)) == 1


def test_random_circulation_balanced(rng):
    for _ in range(50):
        n = int(rng.integers(2, 15))
        I = random_circulation(rng, n, int(rng.integers(1, 6)))
        assert classify(I).balanced


def test_group_influence_conservation(rng):
    for _ in range(30):
        n = int(rng.integers(2, 10))
        w = random_circulation(rng, n, 4, spanning=True).weights
        for r in range(1, n):
            for A in itertools.combinations(range(n), r):
                B = [j for j in range(n) if j not in A]
                out_ = w[np.ix_(A, B)].sum()
                in_ = w[np.ix_(B, A)].sum()
                assert abs(out_ - in_) <= 1e-9


def test_random_influence_strongly_connected(rng):
    for _ in range(30):
        I = random_influence(rng, int(rng.integers(2, 20)), 0.05, strongly_connected=True)
        assert classify(I).strongly_connected
