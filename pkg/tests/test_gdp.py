"""Model layer: construction, validation, evaluation, brute force."""

import dataclasses

import numpy as np
import pytest

from dmpc.bnb import SolveStatus
from dmpc.gdp import (
    AffineExpr,
    CnfClause,
    Disjunct,
    Disjunction,
    GdpModel,
    IndicatorRef,
    LinConstraint,
    Variable,
    brute_force_solve,
    evaluate_assignment,
    selection_lp,
    validate,
)
from dmpc.milp import Relation
from dmpc.simplex import LpStatus, solve_lp

from conftest import two_box_model


def test_validate_clean_model():
    assert validate(two_box_model()) == []


def test_validate_flags_unbounded_variable():
    m = dataclasses.replace(
        two_box_model(), variables=(Variable("x", -np.inf, np.inf),)
    )
    assert any("bound" in p.lower() for p in validate(m))


def test_validate_flags_out_of_range_slot():
    bad = LinConstraint(AffineExpr.of({5: 1.0}))
    m = two_box_model(extra_global=(bad,))
    assert validate(m) != []


def test_evaluate_assignment_uses_selected_constraints():
    m = two_box_model()
    ok = evaluate_assignment(m, (0,), np.array([0.5]))
    assert ok.feasible
    assert ok.objective == pytest.approx(0.5 + 1.0)
    # same point fails under the high box
    assert not evaluate_assignment(m, (1,), np.array([0.5])).feasible


def test_brute_force_picks_cheaper_disjunct():
    res = brute_force_solve(two_box_model())
    assert res.status is SolveStatus.OPTIMAL
    assert res.objective == pytest.approx(1.0)  # x = 0 plus fixed cost 1
    assert res.selection == (0,)


def test_brute_force_respects_fixed_costs():
    # low box expensive enough that the high box wins despite larger x
    res = brute_force_solve(two_box_model(costs=(10.0, 3.0)))
    assert res.objective == pytest.approx(4.0 + 3.0)
    assert res.selection == (1,)


def test_brute_force_honours_propositions():
    m = two_box_model()
    # clause satisfied only when the low disjunct is NOT selected
    veto = CnfClause(literals=((IndicatorRef(0, 0), False),))
    m = dataclasses.replace(m, propositions=(veto,))
    res = brute_force_solve(m)
    assert res.selection == (1,)


def test_selection_lp_restricts_to_chosen_disjunct():
    lp = selection_lp(two_box_model(), (1,))
    res = solve_lp(lp)
    assert res.status is LpStatus.OPTIMAL
    assert res.objective == pytest.approx(4.0 + 3.0)


def test_infeasible_selection_vs_whole_model():
    # global cap x <= 0.5 kills the high box but not the low one
    cap = LinConstraint(AffineExpr.of({0: 1.0}, -0.5))
    m = two_box_model(extra_global=(cap,))
    res = solve_lp(selection_lp(m, (1,)))
    assert res.status is LpStatus.INFEASIBLE
    full = brute_force_solve(m)
    assert full.status is SolveStatus.OPTIMAL
    assert full.selection == (0,)


def test_brute_force_reports_infeasible_model():
    # cap below both boxes' reach is impossible under either disjunct
    cap = LinConstraint(AffineExpr.of({0: -1.0}, 2.0), Relation.LE)  # x >= 2
    cap2 = LinConstraint(AffineExpr.of({0: 1.0}, -3.0))              # x <= 3
    m = two_box_model(extra_global=(cap, cap2))
    res = brute_force_solve(m)
    assert res.status is SolveStatus.INFEASIBLE
    assert res.objective is None


def test_cnf_clause_satisfied():
    cl = CnfClause(literals=((IndicatorRef(0, 0), True),
                             (IndicatorRef(1, 1), False)))
    assert cl.satisfied((0, 0))
    assert cl.satisfied((1, 0))
    assert not cl.satisfied((1, 1))


def test_affine_expr_merges_and_drops_zeros():
    e = AffineExpr.of({0: 1.0, 1: 0.0, 2: -2.0}, 5.0)
    slots = {v.index for v, _ in e.terms}
    assert slots == {0, 2}
    assert e.evaluate(np.array([1.0, 99.0, 0.5])) == pytest.approx(5.0)
