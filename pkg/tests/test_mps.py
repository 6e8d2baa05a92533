"""MPS writer and reader: format shape and round-trip fidelity."""

import io

import numpy as np
import pytest

from dmpc.bnb import solve
from dmpc.milp import Relation
from dmpc.mps import export_mps, read_mps
from dmpc.reformulate import to_hull
from dmpc.thermostat import build_thermostat_mpc

from conftest import make_milp, two_box_model


def small_problem():
    return make_milp([-5.0, -4.0, -3.0], [[2.0, 3.0, 1.0]], [Relation.LE],
                     [5.0], [0.0] * 3, [1.0] * 3, [True, True, False])


def test_export_sections_in_order():
    buf = io.StringIO()
    export_mps(small_problem(), buf)
    text = buf.getvalue()
    order = [text.index(tok) for tok in
             ("NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA")]
    assert order == sorted(order)
    assert "MARKER" in text  # integer block present


def test_round_trip_small():
    prob = small_problem()
    buf = io.StringIO()
    export_mps(prob, buf)
    buf.seek(0)
    back = read_mps(buf)
    np.testing.assert_allclose(back.c, prob.c)
    np.testing.assert_allclose(back.A, prob.A)
    np.testing.assert_allclose(back.b, prob.b)
    np.testing.assert_array_equal(back.relations, prob.relations)
    np.testing.assert_allclose(back.lb, prob.lb)
    np.testing.assert_allclose(back.ub, prob.ub)
    np.testing.assert_array_equal(back.is_int, prob.is_int)


def test_round_trip_preserves_optimum():
    prob = to_hull(two_box_model())
    buf = io.StringIO()
    export_mps(prob, buf)
    buf.seek(0)
    back = read_mps(buf)
    a = solve(prob)
    b = solve(back)
    assert b.objective == pytest.approx(a.objective, abs=1e-9)


def test_thermostat_export_round_trip():
    prob = build_thermostat_mpc(np.full(4, 21.0), 0, 3, variant="gdp_hull")
    buf = io.StringIO()
    export_mps(prob, buf)
    buf.seek(0)
    back = read_mps(buf)
    assert back.n_vars == prob.n_vars
    assert back.n_rows == prob.n_rows
    a = solve(prob)
    b = solve(back)
    assert b.objective == pytest.approx(a.objective, abs=1e-6)


def test_fixed_format_data_lines_indented():
    buf = io.StringIO()
    export_mps(small_problem(), buf)
    for line in buf.getvalue().splitlines():
        if line.startswith(("NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS",
                            "RANGES", "ENDATA")):
            continue
        assert line.startswith(" ")


def test_objective_constant_survives():
    prob = small_problem()
    prob.obj_const = 2.5
    buf = io.StringIO()
    export_mps(prob, buf)
    buf.seek(0)
    back = read_mps(buf)
    assert back.obj_const == pytest.approx(2.5)
