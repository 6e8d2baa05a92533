"""Seeded random GDP instances for self-tests and property suites.

The generator keeps instances small enough for brute force (every
selection enumerated) while still covering the interesting structure:
mixed constraint senses in global and local rows, fixed costs, negative
bounds, indicator-only disjuncts and occasional CNF clauses that may
make the whole instance infeasible.
"""

from __future__ import annotations

import numpy as np

from .gdp import (
    AffineExpr,
    CnfClause,
    Disjunct,
    Disjunction,
    GdpModel,
    IndicatorRef,
    LinConstraint,
    Variable,
)
from .milp import Relation

__all__ = ["random_gdp"]


def _affine(rng, n, bias=0.0):
    k = int(rng.integers(1, min(n, 3) + 1))
    cols = rng.choice(n, size=k, replace=False)
    coeffs = {int(j): float(np.round(rng.uniform(-2, 2), 3)) for j in cols}
    return AffineExpr.of(coeffs, float(np.round(rng.uniform(-2, 2) + bias, 3)))


def _constraint(rng, n, witness):
    """A row that the witness point satisfies, with a random sense."""
    expr = _affine(rng, n)
    val = expr.evaluate(witness)
    u = rng.random()
    if u < 0.45:
        shift = float(np.round(rng.uniform(0.0, 1.5), 3))
        return LinConstraint(
            AffineExpr(expr.terms, expr.constant - val - shift), Relation.LE
        )
    if u < 0.9:
        shift = float(np.round(rng.uniform(0.0, 1.5), 3))
        return LinConstraint(
            AffineExpr(expr.terms, expr.constant - val + shift), Relation.GE
        )
    return LinConstraint(AffineExpr(expr.terms, expr.constant - val), Relation.EQ)


def random_gdp(rng: np.random.Generator) -> GdpModel:
    """One random instance: <= 6 vars, <= 4 disjunctions x <= 3 disjuncts."""
    n = int(rng.integers(2, 7))
    lb = np.round(rng.uniform(-5, 0, n), 2)
    ub = lb + np.round(rng.uniform(1, 8, n), 2)
    variables = tuple(
        Variable(f"v{j}", float(lb[j]), float(ub[j])) for j in range(n)
    )
    witness = rng.uniform(lb, ub)

    n_global = int(rng.integers(0, 4))
    global_rows = tuple(_constraint(rng, n, witness) for _ in range(n_global))

    disjunctions = []
    n_dis = int(rng.integers(1, 5))
    for d in range(n_dis):
        n_dj = int(rng.integers(2, 4))
        disjuncts = []
        for i in range(n_dj):
            n_local = int(rng.integers(0, 3))
            # locals anchored near a disjunct-specific point: disjuncts
            # genuinely disagree about where y may live
            pt = rng.uniform(lb, ub)
            rows = tuple(_constraint(rng, n, pt) for _ in range(n_local))
            cost = float(np.round(rng.uniform(0, 3), 3))
            disjuncts.append(Disjunct(f"d{d}_{i}", rows, cost))
        disjunctions.append(Disjunction(tuple(disjuncts)))

    clauses = []
    if rng.random() < 0.4 and n_dis >= 2:
        for _ in range(int(rng.integers(1, 3))):
            picks = rng.choice(n_dis, size=2, replace=False)
            lits = []
            for d in picks:
                i = int(rng.integers(0, len(disjunctions[d].disjuncts)))
                lits.append((IndicatorRef(int(d), i), bool(rng.random() < 0.7)))
            clauses.append(CnfClause(tuple(lits)))

    return GdpModel(
        variables=variables,
        objective=_affine(rng, n),
        global_constraints=global_rows,
        disjunctions=tuple(disjunctions),
        propositions=tuple(clauses),
    )
