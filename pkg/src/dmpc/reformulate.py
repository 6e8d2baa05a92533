"""Lowering of GDP models to mixed-integer linear programs.

Two reformulations are provided. Both introduce one binary indicator per
disjunct, an exactly-one row per disjunction, and one row per CNF clause.
They differ in how local constraints are gated:

* big-M: each local row ``r(y) <= 0`` becomes ``r(y) <= M (1 - s)``, with
  ``M`` either a fixed value or computed exactly as the supremum of the
  row's affine expression over the variable box;
* convex hull: each disjunction gets disaggregated copies of the variables
  its local constraints touch, an aggregation row ``y = sum_i y_i``,
  exactly linearized perspective rows ``a . y_i + k s_i (<=|==) 0`` and
  indicator-scaled bound rows ``l s_i <= y_i <= u s_i``. No division is
  involved anywhere; for affine rows the perspective is plain coefficient
  substitution.

The hull model's LP relaxation is never looser than the big-M model's,
which is the property the branch-and-bound study quantifies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gdp import AffineExpr, CnfClause, GdpModel, IndicatorRef, validate
from .milp import MilpProblem, Relation

__all__ = [
    "BigMStrategy",
    "cnf_to_linear",
    "to_bigm",
    "to_hull",
    "indicator_columns",
]


@dataclass(frozen=True)
class BigMStrategy:
    """How to pick the relaxation constant M for big-M rows.

    ``fixed(M)`` uses one value everywhere; ``from_bounds()`` computes a
    per-row M as the exact supremum of the row expression over the
    variable box, which requires every participating bound to be finite.
    """

    mode: str = "from_bounds"
    M: float | None = None

    def __post_init__(self):
        if self.mode not in ("fixed", "from_bounds"):
            raise ValueError(f"unknown big-M mode {self.mode!r}")
        if self.mode == "fixed" and not (self.M is not None and self.M > 0):
            raise ValueError("fixed big-M requires M > 0")

    @staticmethod
    def fixed(M: float) -> "BigMStrategy":
        return BigMStrategy("fixed", float(M))

    @staticmethod
    def from_bounds() -> "BigMStrategy":
        return BigMStrategy("from_bounds", None)


def _le_rows(con):
    """Normalize a constraint to a list of expressions meaning expr <= 0."""
    expr = con.expr
    neg = AffineExpr(
        tuple((v, -c) for v, c in expr.terms), -expr.constant
    )
    if con.relation == Relation.LE:
        return [expr]
    if con.relation == Relation.GE:
        return [neg]
    return [expr, neg]


def cnf_to_linear(clauses, indicator_map) -> list:
    """Linearize CNF clauses over mapped binary columns.

    Each clause ``(or of literals)`` becomes
    ``sum_pos s + sum_neg (1 - s) >= 1`` and is returned in <=-normalized
    form as ``(coeffs, rhs)`` with ``coeffs`` a {column: value} dict and
    the row meaning ``sum coeffs . s <= rhs``.
    """
    rows = []
    for clause in clauses:
        coeffs: dict = {}
        n_neg = 0
        for ref, positive in clause.literals:
            if ref not in indicator_map:
                raise ValueError(f"unmapped indicator {ref}")
            col = indicator_map[ref]
            if positive:
                coeffs[col] = coeffs.get(col, 0.0) - 1.0
            else:
                coeffs[col] = coeffs.get(col, 0.0) + 1.0
                n_neg += 1
        rows.append((coeffs, float(n_neg - 1)))
    return rows


def _require_valid(model: GdpModel):
    problems = validate(model)
    if problems:
        raise ValueError("invalid model: " + "; ".join(problems))


def to_bigm(model: GdpModel, strategy: BigMStrategy | None = None) -> MilpProblem:
    """Big-M reformulation of a valid GDP model.

    Column order: the continuous variables in model order, then one binary
    per disjunct (disjunction-major). Local GE rows are negated, local EQ
    rows become a relaxed pair, and each resulting <=-row gains an
    ``+ M s`` term so it is inert while its indicator is 0.
    """
    _require_valid(model)
    strategy = strategy or BigMStrategy.from_bounds()
    n = model.n_vars
    lb0, ub0 = model.bounds()

    ind_map, s_labels = {}, []
    col = n
    for d, dis in enumerate(model.disjunctions):
        for i in range(len(dis.disjuncts)):
            ind_map[IndicatorRef(d, i)] = col
            s_labels.append(f"s[{d},{i}]")
            col += 1
    n_tot = col

    rows, rels, rhs, row_labels = [], [], [], []

    def emit(coeffs: dict, relation, rhs_val, label):
        row = np.zeros(n_tot)
        for j, c in coeffs.items():
            row[j] += c
        rows.append(row)
        rels.append(relation)
        rhs.append(float(rhs_val))
        row_labels.append(label)

    for k, con in enumerate(model.global_constraints):
        coeffs = {v.index: c for v, c in con.expr.terms}
        if con.relation == Relation.GE:
            emit({j: -c for j, c in coeffs.items()}, Relation.LE,
                 con.expr.constant, f"g[{k}]")
        else:
            rel = Relation.LE if con.relation == Relation.LE else Relation.EQ
            emit(coeffs, rel, -con.expr.constant, f"g[{k}]")

    for d, dis in enumerate(model.disjunctions):
        for i, dj in enumerate(dis.disjuncts):
            s_col = ind_map[IndicatorRef(d, i)]
            for k, con in enumerate(dj.local_constraints):
                for h, expr in enumerate(_le_rows(con)):
                    if strategy.mode == "fixed":
                        M = strategy.M
                    else:
                        for v, c in expr.terms:
                            if c != 0.0 and not (
                                math.isfinite(lb0[v.index])
                                and math.isfinite(ub0[v.index])
                            ):
                                raise ValueError(
                                    "from_bounds big-M needs finite bounds on "
                                    f"variable {v.index}"
                                )
                        M = expr.box_range(lb0, ub0)[1]
                    # a.y + k <= M (1 - s)  ->  a.y + M s <= M - k
                    coeffs = {v.index: c for v, c in expr.terms}
                    coeffs[s_col] = coeffs.get(s_col, 0.0) + M
                    emit(coeffs, Relation.LE, M - expr.constant,
                         f"bigm[{d},{i},{k}.{h}]")
        emit({ind_map[IndicatorRef(d, i)]: 1.0
              for i in range(len(dis.disjuncts))},
             Relation.EQ, 1.0, f"xor[{d}]")

    for k, (coeffs, b) in enumerate(
        cnf_to_linear(model.propositions, ind_map)
    ):
        emit(coeffs, Relation.LE, b, f"cnf[{k}]")

    c_vec = np.zeros(n_tot)
    c_vec[:n] = model.objective.to_dense(n)
    for d, dis in enumerate(model.disjunctions):
        for i, dj in enumerate(dis.disjuncts):
            c_vec[ind_map[IndicatorRef(d, i)]] += dj.fixed_cost

    lb = np.concatenate([lb0, np.zeros(n_tot - n)])
    ub = np.concatenate([ub0, np.ones(n_tot - n)])
    is_int = np.zeros(n_tot, dtype=bool)
    is_int[n:] = True

    return MilpProblem(
        c=c_vec,
        obj_const=model.objective.constant,
        A=np.array(rows).reshape(len(rows), n_tot),
        relations=np.array(rels, dtype=np.int8),
        b=np.array(rhs, dtype=float),
        lb=lb,
        ub=ub,
        is_int=is_int,
        labels=[v.name for v in model.variables] + s_labels,
        row_labels=row_labels,
    )


def to_hull(model: GdpModel) -> MilpProblem:
    """Convex-hull reformulation of a valid GDP model.

    Column order: the continuous variables, then per disjunction its
    binaries followed by the disaggregated copies of the variables that
    appear in that disjunction's local constraints (disjunct-major, then
    variable). A zero-valued side of a bound row collapses into the
    disaggregated column's own bound instead of emitting a row.
    """
    _require_valid(model)
    n = model.n_vars
    lb0, ub0 = model.bounds()

    ind_map: dict = {}
    copy_col: dict = {}  # (d, i, var) -> column
    labels = [v.name for v in model.variables]
    col = n
    scopes = []
    for d, dis in enumerate(model.disjunctions):
        scope = sorted(
            {
                v.index
                for dj in dis.disjuncts
                for con in dj.local_constraints
                for v, c in con.expr.terms
                if c != 0.0
            }
        )
        scopes.append(scope)
        for i in range(len(dis.disjuncts)):
            ind_map[IndicatorRef(d, i)] = col
            labels.append(f"s[{d},{i}]")
            col += 1
        for i in range(len(dis.disjuncts)):
            for j in scope:
                copy_col[(d, i, j)] = col
                labels.append(f"{model.variables[j].name}@d{d}:{i}")
                col += 1
    n_tot = col

    rows, rels, rhs, row_labels = [], [], [], []

    def emit(coeffs: dict, relation, rhs_val, label):
        row = np.zeros(n_tot)
        for j, c in coeffs.items():
            row[j] += c
        rows.append(row)
        rels.append(relation)
        rhs.append(float(rhs_val))
        row_labels.append(label)

    for k, con in enumerate(model.global_constraints):
        coeffs = {v.index: c for v, c in con.expr.terms}
        if con.relation == Relation.GE:
            emit({j: -c for j, c in coeffs.items()}, Relation.LE,
                 con.expr.constant, f"g[{k}]")
        else:
            rel = Relation.LE if con.relation == Relation.LE else Relation.EQ
            emit(coeffs, rel, -con.expr.constant, f"g[{k}]")

    lb = np.concatenate([lb0, np.zeros(n_tot - n)])
    ub = np.concatenate([ub0, np.ones(n_tot - n)])

    for d, dis in enumerate(model.disjunctions):
        scope = scopes[d]
        L = len(dis.disjuncts)
        # aggregation y = sum of copies
        for j in scope:
            coeffs = {j: 1.0}
            for i in range(L):
                coeffs[copy_col[(d, i, j)]] = -1.0
            emit(coeffs, Relation.EQ, 0.0, f"agg[{d},{j}]")
        # perspective rows: affine gating by exact coefficient substitution
        for i, dj in enumerate(dis.disjuncts):
            s_col = ind_map[IndicatorRef(d, i)]
            for k, con in enumerate(dj.local_constraints):
                coeffs = {
                    copy_col[(d, i, v.index)]: c for v, c in con.expr.terms
                }
                coeffs[s_col] = coeffs.get(s_col, 0.0) + con.expr.constant
                if con.relation == Relation.LE:
                    emit(coeffs, Relation.LE, 0.0, f"persp[{d},{i},{k}]")
                elif con.relation == Relation.GE:
                    emit({j: -c for j, c in coeffs.items()}, Relation.LE,
                         0.0, f"persp[{d},{i},{k}]")
                else:
                    emit(coeffs, Relation.EQ, 0.0, f"persp[{d},{i},{k}]")
            # bound rows l s <= y_i <= u s; zero sides fold into the column
            for j in scope:
                cc = copy_col[(d, i, j)]
                lo, hi = lb0[j], ub0[j]
                lb[cc] = min(lo, 0.0)
                ub[cc] = max(hi, 0.0)
                if lo != 0.0:
                    emit({s_col: lo, cc: -1.0}, Relation.LE, 0.0,
                         f"lbnd[{d},{i},{j}]")
                if hi != 0.0:
                    emit({cc: 1.0, s_col: -hi}, Relation.LE, 0.0,
                         f"ubnd[{d},{i},{j}]")
        emit({ind_map[IndicatorRef(d, i)]: 1.0 for i in range(L)},
             Relation.EQ, 1.0, f"xor[{d}]")

    for k, (coeffs, b) in enumerate(
        cnf_to_linear(model.propositions, ind_map)
    ):
        emit(coeffs, Relation.LE, b, f"cnf[{k}]")

    c_vec = np.zeros(n_tot)
    c_vec[:n] = model.objective.to_dense(n)
    for d, dis in enumerate(model.disjunctions):
        for i, dj in enumerate(dis.disjuncts):
            c_vec[ind_map[IndicatorRef(d, i)]] += dj.fixed_cost

    is_int = np.zeros(n_tot, dtype=bool)
    for c in ind_map.values():
        is_int[c] = True

    return MilpProblem(
        c=c_vec,
        obj_const=model.objective.constant,
        A=np.array(rows).reshape(len(rows), n_tot),
        relations=np.array(rels, dtype=np.int8),
        b=np.array(rhs, dtype=float),
        lb=lb,
        ub=ub,
        is_int=is_int,
        labels=labels,
        row_labels=row_labels,
    )


def indicator_columns(problem: MilpProblem) -> dict:
    """Recover the IndicatorRef -> column map from a reformulated problem.

    Both reformulations label indicator columns ``s[d,i]``; anything
    without that label pattern is skipped.
    """
    out = {}
    for col, label in enumerate(problem.labels):
        if label.startswith("s[") and label.endswith("]"):
            try:
                d, i = label[2:-1].split(",")
                out[IndicatorRef(int(d), int(i))] = col
            except ValueError:
                continue
    return out


def selection_from_point(problem: MilpProblem, point) -> tuple:
    """Active disjunct per disjunction, read off a solved MILP point.

    Picks the largest indicator value in each group, so it also works on
    points whose binaries carry rounding noise.
    """
    groups: dict = {}
    for ref, col in indicator_columns(problem).items():
        groups.setdefault(ref.disjunction, []).append((ref.disjunct, col))
    selection = []
    for d in sorted(groups):
        members = sorted(groups[d])
        best = max(members, key=lambda item: point[item[1]])
        selection.append(best[0])
    return tuple(selection)
