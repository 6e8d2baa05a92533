"""Big-M and hull reformulations against the brute-force oracle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dmpc.bnb import SolveStatus, relaxation_bound, solve
from dmpc.gdp import brute_force_solve
from dmpc.instances import random_gdp
from dmpc.reformulate import (
    BigMStrategy,
    cnf_to_linear,
    indicator_columns,
    selection_from_point,
    to_bigm,
    to_hull,
)

from conftest import two_box_model


def test_bigm_solves_two_box():
    res = solve(to_bigm(two_box_model()))
    assert res.status is SolveStatus.OPTIMAL
    assert res.objective == pytest.approx(1.0, abs=1e-8)


def test_hull_solves_two_box():
    res = solve(to_hull(two_box_model()))
    assert res.status is SolveStatus.OPTIMAL
    assert res.objective == pytest.approx(1.0, abs=1e-8)


def test_hull_root_at_least_bigm_root():
    m = two_box_model()
    hull_root = relaxation_bound(to_hull(m))
    bigm_root = relaxation_bound(to_bigm(m, BigMStrategy.fixed(1e4)))
    assert hull_root >= bigm_root - 1e-9


def test_indicator_columns_cover_all_disjuncts():
    prob = to_hull(two_box_model())
    cols = indicator_columns(prob)
    assert len(cols) == 2
    assert {ref.disjunction for ref in cols} == {0}
    for col in cols.values():
        assert prob.is_int[col]


def test_selection_from_point_reads_binaries():
    prob = to_bigm(two_box_model())
    res = solve(prob)
    assert selection_from_point(prob, res.point) == (0,)
    assert selection_from_point(prob, res.point) == brute_force_solve(
        two_box_model()).selection


def test_cnf_rows_cut_off_forbidden_selection():
    from dmpc.gdp import CnfClause, IndicatorRef

    clause = CnfClause(literals=((IndicatorRef(0, 0), False),))
    cols = {IndicatorRef(0, 0): 3, IndicatorRef(0, 1): 4}
    rows = cnf_to_linear([clause], cols)
    assert len(rows) == 1
    coeffs, rhs = rows[0]
    # not-s[0,0]: (1 - s3) >= 1, normalized as s3 <= 0
    s = np.zeros(5)
    s[3] = 1.0
    assert sum(c * s[j] for j, c in coeffs.items()) > rhs + 1e-12
    s[3] = 0.0
    assert sum(c * s[j] for j, c in coeffs.items()) <= rhs + 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_reformulations_match_oracle(seed):
    model = random_gdp(np.random.default_rng(seed))
    ref = brute_force_solve(model)
    for reform in (to_bigm, to_hull):
        res = solve(reform(model))
        if ref.status is SolveStatus.INFEASIBLE:
            assert res.status is SolveStatus.INFEASIBLE
        else:
            assert res.status is SolveStatus.OPTIMAL
            assert res.objective == pytest.approx(ref.objective, abs=1e-6)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_hull_never_weaker_at_the_root(seed):
    model = random_gdp(np.random.default_rng(seed))
    hull_root = relaxation_bound(to_hull(model))
    bigm_root = relaxation_bound(to_bigm(model, BigMStrategy.fixed(1e4)))
    if np.isfinite(hull_root) and np.isfinite(bigm_root):
        assert hull_root >= bigm_root - 1e-9


def test_hull_disaggregated_point_recovers_selection():
    model = two_box_model(costs=(10.0, 3.0))
    prob = to_hull(model)
    res = solve(prob)
    assert res.status is SolveStatus.OPTIMAL
    assert selection_from_point(prob, res.point) == (1,)
