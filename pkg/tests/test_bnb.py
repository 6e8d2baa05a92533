"""Branch and bound on small MILPs, cross-checked against scipy's HiGHS."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import Bounds, LinearConstraint, milp

from dmpc.bnb import SolveOptions, SolveStatus, relaxation_bound, solve
from dmpc.milp import Relation

from conftest import make_milp


def scipy_reference(problem):
    lo = np.where(problem.relations == Relation.EQ, problem.b, -np.inf)
    cons = LinearConstraint(problem.A, lo, problem.b)
    return milp(
        problem.c,
        constraints=[cons] if problem.n_rows else [],
        bounds=Bounds(problem.lb, problem.ub),
        integrality=problem.is_int.astype(int),
    )


def knapsack():
    # max 5a + 4b + 3c st 2a + 3b + c <= 5, binary
    return make_milp([-5.0, -4.0, -3.0], [[2.0, 3.0, 1.0]], [Relation.LE],
                     [5.0], [0.0] * 3, [1.0] * 3, [True] * 3)


def test_knapsack_optimum():
    res = solve(knapsack())
    assert res.status is SolveStatus.OPTIMAL
    assert res.objective == pytest.approx(-9.0)
    np.testing.assert_allclose(res.point, [1.0, 1.0, 0.0], atol=1e-9)


def test_root_bound_below_optimum():
    prob = knapsack()
    root = relaxation_bound(prob)
    res = solve(prob)
    assert root <= res.objective + 1e-9


def test_bound_history_is_monotone():
    res = solve(knapsack())
    hist = res.bound_history
    assert hist
    assert all(b2 >= b1 - 1e-9 for b1, b2 in zip(hist, hist[1:]))
    assert res.best_bound == pytest.approx(res.objective, abs=1e-9)


def test_gap_closes_at_optimality():
    res = solve(knapsack())
    assert res.gap_percent == pytest.approx(0.0, abs=1e-9)


def test_node_limit_reports_partial_result():
    prob = knapsack()
    res = solve(prob, SolveOptions(node_limit=1))
    assert res.nodes_explored == 1
    assert res.best_bound <= -9.0 + 1e-9
    if res.objective is not None:
        assert res.gap_percent >= 0.0


def test_infeasible_milp():
    prob = make_milp([1.0], [[1.0], [-1.0]], [Relation.LE, Relation.LE],
                     [0.2, -0.8], [0.0], [1.0], [True])  # 0.8 <= x <= 0.2
    assert solve(prob).status is SolveStatus.INFEASIBLE


def test_continuous_subset_stays_continuous():
    # one binary, one continuous; optimum needs the fractional part
    prob = make_milp([-1.0, -1.0], [[1.0, 1.0]], [Relation.LE], [1.5],
                     [0.0, 0.0], [1.0, 2.0], [True, False])
    res = solve(prob)
    assert res.status is SolveStatus.OPTIMAL
    assert res.objective == pytest.approx(-1.5)
    assert res.point[0] == pytest.approx(round(res.point[0]), abs=1e-6)


def test_determinism_identical_reruns():
    prob = knapsack()
    a = solve(prob)
    b = solve(prob)
    assert a.nodes_explored == b.nodes_explored
    assert a.bound_history == b.bound_history
    np.testing.assert_array_equal(a.point, b.point)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=99_999))
def test_random_milps_match_scipy(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    m = int(rng.integers(1, 5))
    is_int = rng.random(n) < 0.7
    prob = make_milp(
        np.round(rng.standard_normal(n), 3),
        np.round(rng.standard_normal((m, n)), 3),
        rng.choice([int(Relation.LE), int(Relation.EQ)], size=m,
                   p=[0.85, 0.15]),
        np.round(rng.standard_normal(m) + 1.0, 3),
        np.zeros(n),
        np.where(is_int, 1.0, float(rng.integers(1, 4))),
        is_int,
    )
    mine = solve(prob)
    ref = scipy_reference(prob)
    if ref.status == 2:
        assert mine.status is SolveStatus.INFEASIBLE
    elif ref.status == 0:
        assert mine.status is SolveStatus.OPTIMAL
        assert mine.objective == pytest.approx(ref.fun, abs=1e-6, rel=1e-6)
