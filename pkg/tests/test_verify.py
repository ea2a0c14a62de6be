import numpy as np
import pytest

from beliefpolar import (
    BeliefState,
    InfluenceGraph,
    SimulationTrace,
    classify,
    gen_influence,
    gen_initial_beliefs,
    product_influence,
    run,
)
from beliefpolar.errors import ParameterError, PreconditionError
from beliefpolar.graphs import random_circulation, random_influence, shortest_path
from beliefpolar.verify import (
    CheckReport,
    Violation,
    check_belief_bounds,
    check_cb_fixedpoint,
    check_conservation,
    check_geometric_gap,
    check_order_preservation,
    check_path_bound,
)


def clique_run(n=3, c=0.5, steps=20, B0=None):
    I = gen_influence("clique", n, c)
    B0 = B0 or BeliefState(np.linspace(0, 1, n))
    return run(B0, I, max_steps=steps), I


def test_report_invariant():
    with pytest.raises(ValueError):
        CheckReport("x", True, Violation(0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        CheckReport("x", False)


class TestBeliefBounds:
    def test_clique(self):
        assert check_belief_bounds(clique_run()[0]).passed

    def test_constant(self):
        assert check_belief_bounds(SimulationTrace.from_states([[0.4, 0.4]] * 3)).passed

    def test_injected_violation(self):
        rep = check_belief_bounds(SimulationTrace.from_states([[0.5], [0.7]]))
        assert not rep.passed
        v = rep.first_violation
        assert v.t == 0 and v.agent == 0 and v.lhs == 0.7 and v.rhs == 0.5 and v.slack < 0

    def test_too_short(self):
        with pytest.raises(ParameterError):
            check_belief_bounds(SimulationTrace.from_states([[0.5]]))

    def test_any_graph(self, rng):
        for _ in range(20):
            I = random_influence(rng, int(rng.integers(1, 12)), 0.3)
            for kind in ("regular", "confirmation_bias"):
                assert check_belief_bounds(run(BeliefState(rng.random(I.n)), I, kind, max_steps=30)).passed


class TestOrderPreservation:
    def test_clique(self):
        tr, I = clique_run()
        assert check_order_preservation(tr, classify(I)).passed

    def test_single_agent(self):
        tr = SimulationTrace.from_states([[0.3], [0.3]])
        rep = classify(gen_influence("clique", 2, 0.5))
        assert check_order_preservation(tr, rep).passed

    def test_circular_precondition(self):
        I = gen_influence("circular", 12, 0.5)
        tr = run(gen_initial_beliefs("uniform", 12), I, max_steps=10)
        with pytest.raises(PreconditionError):
            check_order_preservation(tr, classify(I))

    def test_detects_swap(self):
        tr = SimulationTrace.from_states([[0.2, 0.8], [0.6, 0.4]])
        rep = check_order_preservation(tr, classify(gen_influence("clique", 2, 0.5)))
        assert not rep.passed and rep.first_violation.t == 0


class TestConservation:
    def test_circular(self):
        I = gen_influence("circular", 8, 0.5)
        tr = run(gen_initial_beliefs("mild", 8), I, max_steps=200)
        assert check_conservation(tr, classify(I)).passed

    def test_zero_graph(self):
        I = InfluenceGraph.zeros(4)
        tr = run(BeliefState([0.1, 0.2, 0.3, 0.9]), I, max_steps=5)
        assert check_conservation(tr, classify(I)).passed

    def test_unrelenting_precondition(self):
        I = gen_influence("unrelenting", 5)
        tr = run(gen_initial_beliefs("uniform", 5), I, max_steps=5)
        with pytest.raises(PreconditionError):
            check_conservation(tr, classify(I))

    def test_cb_precondition(self):
        I = gen_influence("clique", 3, 0.5)
        tr = run(BeliefState([0, 0.5, 1]), I, "confirmation_bias", max_steps=3)
        with pytest.raises(PreconditionError):
            check_conservation(tr, classify(I))

    def test_detects_drift(self):
        I = gen_influence("clique", 2, 0.5)
        tr = SimulationTrace.from_states([[0.2, 0.8], [0.5, 0.6]])
        assert not check_conservation(tr, classify(I)).passed


class TestGeometricGap:
    def test_two_steps(self):
        tr, _ = clique_run(3, 0.5, 2)
        assert tr.gaps()[2] == 0.25
        assert check_geometric_gap(tr, 0.5).passed

    def test_c1(self):
        tr, _ = clique_run(5, 1.0, 4)
        assert np.all(tr.gaps()[1:] <= 1e-15)
        assert check_geometric_gap(tr, 1.0).passed

    def test_consensus_start(self):
        tr, _ = clique_run(4, 0.3, 10, BeliefState([0.6] * 4))
        assert check_geometric_gap(tr, 0.3).passed and np.all(tr.gaps() == 0)

    def test_non_clique(self):
        I = gen_influence("circular", 4, 0.5)
        tr = run(gen_initial_beliefs("uniform", 4), I, max_steps=4)
        with pytest.raises(PreconditionError):
            check_geometric_gap(tr, 0.5)

    def test_wrong_constant_fails(self):
        tr = SimulationTrace.from_states([[0, 1], [0.25, 0.75]])
        assert not check_geometric_gap(tr, 0.9).passed


class TestPathBound:
    def test_circular_example(self):
        I = gen_influence("circular", 3, 0.5)
        tr = run(BeliefState([0, 0.5, 1]), I, max_steps=6)
        p = product_influence(I, [0, 1, 2])
        assert check_path_bound(tr, I, p, 0).passed

    def test_consensus(self):
        I = gen_influence("circular", 4, 0.5)
        tr = run(BeliefState([0.3] * 4), I, max_steps=6)
        assert check_path_bound(tr, I, product_influence(I, [1, 2, 3]), 1).passed

    def test_too_short(self):
        I = gen_influence("circular", 3, 0.5)
        tr = run(BeliefState([0, 0.5, 1]), I, max_steps=2)
        with pytest.raises(ParameterError):
            check_path_bound(tr, I, product_influence(I, [0, 1, 2]), 0)

    def test_not_strongly_connected(self):
        I = gen_influence("unrelenting", 4)
        tr = run(gen_initial_beliefs("uniform", 4), I, max_steps=5)
        with pytest.raises(PreconditionError):
            check_path_bound(tr, I, product_influence(I, [0, 1]), 0)

    @pytest.mark.parametrize("kind", ["regular", "confirmation_bias"])
    def test_random_graphs(self, rng, kind):
        checked = 0
        while checked < 100:
            n = int(rng.integers(2, 10))
            I = random_influence(rng, n, float(rng.uniform(0.05, 0.5)), strongly_connected=True)
            tr = run(BeliefState(rng.random(n)), I, kind, max_steps=3 * n)
            t = int(rng.integers(0, n))
            i, j = rng.choice(n, size=2, replace=False)
            p = shortest_path(I, int(i), int(j))
            assert check_path_bound(tr, I, p, t).passed
            checked += 1

    def test_detects_violation(self):
        I = gen_influence("clique", 2, 1.0)
        # agent 1 stays at the maximum despite being pulled down by agent 0
        tr = SimulationTrace.from_states([[0.0, 1.0], [0.0, 1.0], [0.0, 1.0]])
        rep = check_path_bound(tr, I, product_influence(I, [0, 1]), 0)
        assert not rep.passed and rep.first_violation.agent == 1


class TestCbFixedpoint:
    def test_two_agents(self):
        assert check_cb_fixedpoint(BeliefState([0, 1]), gen_influence("clique", 2, 1.0)).passed

    def test_all_ones(self, rng):
        I = random_influence(rng, 3, 0.9)
        assert check_cb_fixedpoint(BeliefState([1, 1, 1]), I).passed

    def test_interior_precondition(self):
        with pytest.raises(PreconditionError):
            check_cb_fixedpoint(BeliefState([0.5, 1]), gen_influence("clique", 2, 1.0))

    def test_random_extreme_configurations(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 12))
            I = InfluenceGraph(rng.random((n, n)) * (1 - np.eye(n)))
            assert check_cb_fixedpoint(BeliefState(rng.integers(0, 2, n).astype(float)), I).passed


def test_checkers_do_not_mutate(rng):
    I = random_circulation(rng, 6, 3, spanning=True)
    tr = run(BeliefState(rng.random(6)), I, max_steps=20)
    before = tr.beliefs.copy()
    check_belief_bounds(tr)
    check_conservation(tr, classify(I))
    check_path_bound(tr, I, shortest_path(I, 0, 5), 2)
    assert np.array_equal(before, tr.beliefs)


def test_soundness_random_cliques(rng):
    for _ in range(50):
        n, C = int(rng.integers(2, 31)), float(rng.uniform(0.01, 1.0))
        I = gen_influence("clique", n, C)
        tr = run(BeliefState(rng.random(n)), I, max_steps=60)
        rep = classify(I)
        for r in (
            check_belief_bounds(tr),
            check_order_preservation(tr, rep),
            check_conservation(tr, rep),
            check_geometric_gap(tr, C),
        ):
            assert r.passed, r.summary()


def test_soundness_balanced_graphs(rng):
    for _ in range(50):
        n = int(rng.integers(2, 21))
        I = random_circulation(rng, n, n, min_weight=0.2, spanning=True)
        tr = run(BeliefState(rng.random(n)), I, max_steps=10_000)
        assert check_conservation(tr, classify(I)).passed
        assert tr.gaps()[-1] < 1e-6
