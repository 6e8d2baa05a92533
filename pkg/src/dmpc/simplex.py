"""Bounded-variable revised simplex solver.

Solves the continuous relaxation of a :class:`~dmpc.milp.MilpProblem`:

    minimize    c @ x + const
    subject to  A x (<=|==) b,   lb <= x <= ub

The implementation is a two-phase primal simplex over the extended system
``[A | I]`` with one logical column per row (slack for LE rows, fixed at
zero for EQ rows) and one implicit artificial column per row for the
phase-1 start. The basis inverse is maintained as a sparse LU
factorization plus a product-form eta file, refactorized periodically.

Pricing is Dantzig (most negative reduced cost) with Bland's rule as an
anti-cycling fallback after a run of degenerate pivots. A dual simplex
drives warm re-solves after bound changes: bound edits never disturb dual
feasibility of an optimal basis, which makes the engine cheap to reuse
across branch-and-bound nodes and across perturbed MPC instances.

All tie-breaking rules are deterministic (first maximum / lowest index),
so identical inputs reproduce identical pivot sequences bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .milp import MilpProblem, Relation

__all__ = ["LpStatus", "LpResult", "Basis", "SimplexEngine", "solve_lp", "check_point"]

FEAS_TOL = 1e-7      # primal feasibility / optimality tolerance
PIVOT_TOL = 1e-9     # smallest usable pivot element
DEG_EPS = 1e-10      # step size below which a pivot counts as degenerate
BLAND_AFTER = 1000   # consecutive degenerate pivots before Bland's rule
MAX_ITER = 50_000    # per-solve pivot budget
ETA_MAX = 160        # eta-file length between refactorizations
DUAL_STALL_AFTER = 300  # warm dual pivots without progress before going cold

# column status codes
_AT_LOWER = 0
_AT_UPPER = 1
_FREE = 2
_BASIC = 3


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


@dataclass
class LpResult:
    """Outcome of one LP solve.

    ``point`` and ``objective`` are populated for OPTIMAL and, as a best
    effort, for ITERATION_LIMIT. ``dual_objective`` is the value of the
    final dual certificate; at optimality it matches ``objective``.
    """

    status: LpStatus
    point: np.ndarray | None
    objective: float | None
    iterations: int
    dual_objective: float | None = None


@dataclass
class Basis:
    """Snapshot of a basis: basic column indices plus all column statuses."""

    basis: np.ndarray
    vstat: np.ndarray


def check_point(problem: MilpProblem, point) -> float:
    """Maximum signed violation of rows and bounds at ``point``.

    A value <= 0 means the point is feasible; equality rows contribute the
    absolute residual.
    """
    x = np.asarray(point, dtype=float)
    worst = -math.inf
    if problem.n_vars:
        worst = max(worst, float(np.max(problem.lb - x)))
        worst = max(worst, float(np.max(x - problem.ub)))
    if problem.n_rows:
        res = problem.A @ x - problem.b
        le = problem.relations == Relation.LE
        if np.any(le):
            worst = max(worst, float(np.max(res[le])))
        if np.any(~le):
            worst = max(worst, float(np.max(np.abs(res[~le]))))
    return worst


class SimplexEngine:
    """Reusable simplex state for one problem's row structure.

    The engine owns the factorized basis; consecutive calls to
    :meth:`solve` with modified variable bounds re-solve with the dual
    simplex from the current basis instead of starting cold.
    """

    def __init__(self, problem: MilpProblem):
        self.problem = problem
        self.n = problem.n_vars
        self.m = problem.n_rows
        # sparse column/row forms: pricing and residuals cost O(nnz), and
        # long-horizon MPC matrices are far too empty to keep dense
        self.A_csc = sp.csc_matrix(np.asarray(problem.A, dtype=float))
        self.A_csc.eliminate_zeros()
        self.A_csr = self.A_csc.tocsr()
        self.AT_csr = self.A_csc.T.tocsr()
        self.b = np.asarray(problem.b, dtype=float).copy()
        self.obj_const = float(problem.obj_const)
        n, m = self.n, self.m
        self.nt = n + 2 * m  # structurals, logicals, artificials

        self.c2 = np.zeros(self.nt)
        self.c2[:n] = problem.c
        self.art_sign = np.ones(m)

        # logical bounds: slack in [0, inf) for LE rows, fixed 0 for EQ
        self.log_lb = np.zeros(m)
        self.log_ub = np.where(
            np.asarray(problem.relations) == Relation.LE, math.inf, 0.0
        )

        self.lb = np.empty(self.nt)
        self.ub = np.empty(self.nt)
        self._set_struct_bounds(problem.lb, problem.ub)
        self.lb[n : n + m] = self.log_lb
        self.ub[n : n + m] = self.log_ub
        self.lb[n + m :] = 0.0
        self.ub[n + m :] = 0.0

        self.basis = np.empty(m, dtype=np.int64)
        self.vstat = np.empty(self.nt, dtype=np.int8)
        self.x = np.zeros(self.nt)
        self._lu = None
        self._etas: list = []
        self._have_basis = False
        self._fresh = False
        self._iters = 0
        self._bland = False
        self._deg_run = 0
        self._fb_depth = 0

    # ---------------------------------------------------------------- setup

    def _set_struct_bounds(self, lb, ub):
        self.lb[: self.n] = lb
        self.ub[: self.n] = ub

    def _column(self, j: int) -> np.ndarray:
        n, m = self.n, self.m
        col = np.zeros(m)
        if j < n:
            lo, hi = self.A_csc.indptr[j], self.A_csc.indptr[j + 1]
            col[self.A_csc.indices[lo:hi]] = self.A_csc.data[lo:hi]
        elif j < n + m:
            col[j - n] = 1.0
        else:
            col[j - n - m] = self.art_sign[j - n - m]
        return col

    def _refactor(self):
        """Rebuild the sparse LU of the current basis; clear the eta file."""
        m = self.m
        if m == 0:
            self._fresh = True
            return
        rows, cols, data = [], [], []
        n = self.n
        indptr, indices, vals = self.A_csc.indptr, self.A_csc.indices, self.A_csc.data
        for i, j in enumerate(self.basis):
            if j < n:
                lo, hi = indptr[j], indptr[j + 1]
                rows.extend(indices[lo:hi].tolist())
                cols.extend([i] * (hi - lo))
                data.extend(vals[lo:hi].tolist())
            elif j < n + m:
                rows.append(j - n)
                cols.append(i)
                data.append(1.0)
            else:
                rows.append(j - n - m)
                cols.append(i)
                data.append(self.art_sign[j - n - m])
        B = sp.coo_matrix((data, (rows, cols)), shape=(m, m)).tocsc()
        self._lu = splu(B, permc_spec="COLAMD")
        self._etas = []
        self._fresh = True

    def _ftran(self, rhs: np.ndarray) -> np.ndarray:
        v = self._lu.solve(rhs)
        for p, w in self._etas:
            t = v[p] / w[p]
            v -= t * w
            v[p] = t
        return v

    def _btran(self, rhs: np.ndarray) -> np.ndarray:
        v = rhs.copy()
        for p, w in reversed(self._etas):
            v[p] = (v[p] - (w @ v - w[p] * v[p])) / w[p]
        return self._lu.solve(v, trans="T")

    def _recompute_basics(self):
        """x_B = B^-1 (b - N x_N) from scratch."""
        if self.m == 0:
            return
        xx = self.x.copy()
        xx[self.basis] = 0.0
        n, m = self.n, self.m
        r = self.b - (self.A_csr @ xx[:n] + xx[n : n + m] + self.art_sign * xx[n + m :])
        self.x[self.basis] = self._ftran(r)

    def _reduced_costs(self, c: np.ndarray) -> np.ndarray:
        n, m = self.n, self.m
        if m == 0:
            return c.copy()
        y = self._btran(c[self.basis])
        d = np.empty(self.nt)
        d[:n] = c[:n] - self.AT_csr @ y
        d[n : n + m] = c[n : n + m] - y
        d[n + m :] = c[n + m :] - y * self.art_sign
        return d

    # ---------------------------------------------------------- public API

    def snapshot_basis(self) -> Basis:
        return Basis(self.basis.copy(), self.vstat.copy())

    def load_basis(self, snap: Basis):
        self.basis = snap.basis.copy()
        self.vstat = snap.vstat.copy()
        self._have_basis = True
        self._fresh = False

    def solve(self, lb=None, ub=None, warm: bool = True) -> LpResult:
        """Solve with optionally overridden structural bounds.

        With ``warm`` true and a basis left over from an earlier optimal
        solve, re-solves with the dual simplex; otherwise runs the
        two-phase primal from an artificial start.
        """
        p = self.problem
        self._set_struct_bounds(
            p.lb if lb is None else lb, p.ub if ub is None else ub
        )
        self._iters = 0
        self._bland = False
        self._deg_run = 0

        if np.any(self.lb[: self.n] > self.ub[: self.n]):
            return LpResult(LpStatus.INFEASIBLE, None, None, 0)
        if self.m == 0:
            return self._solve_unconstrained()

        # artificials must stay pinned at zero outside a phase-1 run
        self.lb[self.n + self.m :] = 0.0
        self.ub[self.n + self.m :] = 0.0

        if warm and self._have_basis:
            res = self._dual_solve()
            if res is not None:
                return res
        return self._cold_solve()

    # ------------------------------------------------------------ cold path

    def _solve_unconstrained(self) -> LpResult:
        c = self.c2[: self.n]
        lo, hi = self.lb[: self.n], self.ub[: self.n]
        x = np.where(np.isfinite(lo), lo, np.where(np.isfinite(hi), hi, 0.0))
        x = np.where(c > 0, lo, np.where(c < 0, hi, x))
        if np.any(~np.isfinite(x)):
            return LpResult(LpStatus.UNBOUNDED, None, None, 0)
        self.x[: self.n] = x
        obj = float(c @ x) + self.obj_const
        return LpResult(LpStatus.OPTIMAL, x.copy(), obj, 0, dual_objective=obj)

    def _start_artificial(self):
        n, m = self.n, self.m
        lo, hi = self.lb, self.ub
        x = np.zeros(self.nt)
        stat = np.full(self.nt, _AT_LOWER, dtype=np.int8)
        finite_lo = np.isfinite(lo)
        finite_hi = np.isfinite(hi)
        x[:] = np.where(finite_lo, lo, np.where(finite_hi, hi, 0.0))
        stat[~finite_lo & finite_hi] = _AT_UPPER
        stat[~finite_lo & ~finite_hi] = _FREE
        x[~finite_lo & ~finite_hi] = 0.0

        r = self.b - self.A_csr @ x[:n]
        self.art_sign = np.where(r >= 0, 1.0, -1.0)
        arts = np.arange(n + m, n + 2 * m)
        x[arts] = np.abs(r)
        stat[arts] = _BASIC
        self.basis = arts.astype(np.int64)
        self.vstat = stat
        self.x = x
        self.lb[n + m :] = 0.0
        self.ub[n + m :] = math.inf
        self._have_basis = True
        self._refactor()

    def _cold_solve(self) -> LpResult:
        n, m = self.n, self.m
        self._start_artificial()

        c1 = np.zeros(self.nt)
        c1[n + m :] = 1.0
        # absolute: big-M rows inflate |b| and must not loosen feasibility
        p1tol = FEAS_TOL
        status = self._primal_loop(c1, phase_one=True, stop_tol=p1tol)
        if status == LpStatus.ITERATION_LIMIT:
            return self._limit_result()
        infeas = float(self.x[n + m :].sum())
        if infeas > p1tol:
            return LpResult(LpStatus.INFEASIBLE, None, None, self._iters)

        # pin artificials at zero for phase 2 and beyond
        self.ub[n + m :] = 0.0
        self.x[n + m :] = np.where(
            self.vstat[n + m :] == _BASIC, self.x[n + m :], 0.0
        )

        status = self._primal_loop(self.c2, phase_one=False)
        if status == LpStatus.ITERATION_LIMIT:
            return self._limit_result()
        if status == LpStatus.UNBOUNDED:
            return LpResult(LpStatus.UNBOUNDED, None, None, self._iters)
        return self._optimal_result()

    # --------------------------------------------------------- primal loop

    def _primal_loop(self, c, phase_one: bool, stop_tol: float = 0.0) -> LpStatus:
        n, m = self.n, self.m
        movable = self.ub > self.lb  # fixed columns can never enter
        while True:
            if self._iters >= MAX_ITER:
                return LpStatus.ITERATION_LIMIT
            if len(self._etas) >= ETA_MAX or not self._fresh:
                self._refactor()
                self._recompute_basics()
            if phase_one and float(self.x[n + m :].sum()) <= stop_tol:
                return LpStatus.OPTIMAL

            d = self._reduced_costs(c)
            stat = self.vstat
            score = np.full(self.nt, -math.inf)
            at_lo = stat == _AT_LOWER
            at_hi = stat == _AT_UPPER
            free = stat == _FREE
            score[at_lo] = -d[at_lo]
            score[at_hi] = d[at_hi]
            score[free] = np.abs(d[free])
            score[~movable] = -math.inf
            score[stat == _BASIC] = -math.inf

            if self._bland:
                elig = np.flatnonzero(score > FEAS_TOL)
                if elig.size == 0:
                    return LpStatus.OPTIMAL
                q = int(elig[0])
            else:
                q = int(np.argmax(score))
                if score[q] <= FEAS_TOL:
                    return LpStatus.OPTIMAL

            t_dir = 1.0
            if stat[q] == _AT_UPPER or (stat[q] == _FREE and d[q] > 0):
                t_dir = -1.0

            w = self._ftran(self._column(q))
            step = self._ratio_and_pivot(q, t_dir, w)
            if step is None:
                if phase_one:
                    # numerically impossible; force a clean restart
                    self._refactor()
                    self._recompute_basics()
                    continue
                return LpStatus.UNBOUNDED

    def _ratio_and_pivot(self, q: int, t_dir: float, w: np.ndarray):
        """Bounded-variable Harris ratio test, then pivot or bound flip.

        Two passes: blocking ratios relaxed by the feasibility tolerance
        set the largest admissible step, and among rows whose true ratio
        fits under it the largest pivot element wins. Returns the step
        length, or None when the move is unbounded.
        """
        xB = self.x[self.basis]
        lbB = self.lb[self.basis]
        ubB = self.ub[self.basis]
        rates = t_dir * w

        deltas = np.full(self.m, math.inf)
        relaxed = np.full(self.m, math.inf)
        blk_lo = rates > PIVOT_TOL
        blk_hi = rates < -PIVOT_TOL
        with np.errstate(invalid="ignore"):
            deltas[blk_lo] = (xB[blk_lo] - lbB[blk_lo]) / rates[blk_lo]
            deltas[blk_hi] = (xB[blk_hi] - ubB[blk_hi]) / rates[blk_hi]
            relaxed[blk_lo] = (xB[blk_lo] - lbB[blk_lo] + FEAS_TOL) / rates[blk_lo]
            relaxed[blk_hi] = (xB[blk_hi] - ubB[blk_hi] - FEAS_TOL) / rates[blk_hi]
        deltas = np.maximum(deltas, 0.0)
        np.nan_to_num(deltas, copy=False, nan=math.inf, posinf=math.inf)
        np.nan_to_num(relaxed, copy=False, nan=math.inf, posinf=math.inf)

        own_range = self.ub[q] - self.lb[q]
        theta_max = float(np.min(relaxed)) if self.m else math.inf
        if not math.isfinite(min(theta_max, own_range)):
            return None

        if self._bland:
            d_true = float(np.min(deltas)) if self.m else math.inf
            cand_idx = np.flatnonzero(deltas <= d_true)
            if math.isfinite(d_true) and cand_idx.size:
                r = int(cand_idx[np.argmin(self.basis[cand_idx])])
                d_basic = float(deltas[r])
            else:
                r, d_basic = -1, math.inf
        else:
            cand = deltas <= theta_max
            scores = np.where(cand, np.abs(rates), -1.0)
            r = int(np.argmax(scores))
            d_basic = float(deltas[r]) if scores[r] > 0 else math.inf

        delta = min(d_basic, own_range)
        if not math.isfinite(delta):
            return None

        self._deg_run = self._deg_run + 1 if delta <= DEG_EPS else 0
        if self._deg_run >= BLAND_AFTER:
            self._bland = True
        elif self._deg_run == 0:
            self._bland = False

        if own_range <= d_basic + 1e-12:
            # entering variable flips to its opposite bound; basis unchanged
            delta = own_range
            self.x[self.basis] = xB - delta * rates
            if self.vstat[q] == _AT_LOWER:
                self.x[q] = self.ub[q]
                self.vstat[q] = _AT_UPPER
            else:
                self.x[q] = self.lb[q]
                self.vstat[q] = _AT_LOWER
            self._iters += 1
            return delta

        delta = d_basic
        leave = int(self.basis[r])

        self.x[self.basis] = xB - delta * rates
        self.x[q] = self.x[q] + t_dir * delta
        if rates[r] > 0:
            self.x[leave] = self.lb[leave]
            self.vstat[leave] = _AT_LOWER if self.lb[leave] > -math.inf else _FREE
        else:
            self.x[leave] = self.ub[leave]
            self.vstat[leave] = _AT_UPPER if self.ub[leave] < math.inf else _FREE
        self.basis[r] = q
        self.vstat[q] = _BASIC
        self._etas.append((r, w.copy()))
        if abs(w[r]) < 1e-5 * max(1.0, float(np.max(np.abs(w)))):
            self._fresh = False  # marginal pivot: refactor before trusting it
        self._iters += 1
        return delta

    # ----------------------------------------------------------- dual path

    def _dual_solve(self):
        """Warm re-solve after bound edits; None means fall back to cold."""
        n, m = self.n, self.m
        if not self._fresh:
            try:
                self._refactor()
            except RuntimeError:
                return None
        # re-snap nonbasics onto their (possibly moved) bounds
        at_lo = self.vstat == _AT_LOWER
        at_hi = self.vstat == _AT_UPPER
        if np.any(at_lo & ~np.isfinite(self.lb)) or np.any(
            at_hi & ~np.isfinite(self.ub)
        ):
            return None
        self.x[at_lo] = self.lb[at_lo]
        self.x[at_hi] = self.ub[at_hi]

        d = self._reduced_costs(self.c2)
        # bound changes keep reduced costs intact, but a variable fixed in
        # one subtree and released in another can sit on the wrong bound
        # for its reduced cost; flipping it restores dual feasibility
        lo_bad = at_lo & (d < -1e-6) & (self.ub > self.lb)
        hi_bad = at_hi & (d > 1e-6)
        if np.any((lo_bad & ~np.isfinite(self.ub))
                  | (hi_bad & ~np.isfinite(self.lb))):
            return None
        if np.any(lo_bad):
            self.vstat[lo_bad] = _AT_UPPER
            self.x[lo_bad] = self.ub[lo_bad]
        if np.any(hi_bad):
            self.vstat[hi_bad] = _AT_LOWER
            self.x[hi_bad] = self.lb[hi_bad]
        self._recompute_basics()

        # a healthy warm re-solve needs far fewer pivots than a cold run;
        # cap the budget by size and bail early when infeasibility stalls
        budget = min(MAX_ITER // 2, max(500, 2 * (self.m + self.n)))
        best_tot = math.inf
        stall = 0
        deg_run = 0
        bland = False
        d_exact = True  # d recomputed from a fresh factorization
        while True:
            if self._iters >= budget:
                return None
            if len(self._etas) >= ETA_MAX or not self._fresh:
                self._refactor()
                self._recompute_basics()
                d = self._reduced_costs(self.c2)
                d_exact = True

            xB = self.x[self.basis]
            v_lo = self.lb[self.basis] - xB
            v_hi = xB - self.ub[self.basis]
            viol = np.maximum(v_lo, v_hi)
            r = int(np.argmax(viol)) if bland is False else int(
                np.argmax(viol > FEAS_TOL)
            )
            if viol[r] <= FEAS_TOL:
                return self._optimal_result()
            tot = float(np.sum(np.maximum(viol, 0.0)))
            if tot < best_tot - 1e-9:
                best_tot = tot
                stall = 0
            else:
                stall += 1
                if stall >= DUAL_STALL_AFTER:
                    return None
            leaving_low = v_lo[r] >= v_hi[r]

            e = np.zeros(m)
            e[r] = 1.0
            rho = self._btran(e)
            alpha = np.empty(self.nt)
            alpha[:n] = self.AT_csr @ rho
            alpha[n : n + m] = rho
            alpha[n + m :] = rho * self.art_sign

            stat = self.vstat
            lo_nb = (stat == _AT_LOWER) & (self.ub > self.lb)
            hi_nb = stat == _AT_UPPER
            fr_nb = stat == _FREE
            if leaving_low:
                elig = (
                    (lo_nb & (alpha < -PIVOT_TOL))
                    | (hi_nb & (alpha > PIVOT_TOL))
                    | (fr_nb & (np.abs(alpha) > PIVOT_TOL))
                )
            else:
                elig = (
                    (lo_nb & (alpha > PIVOT_TOL))
                    | (hi_nb & (alpha < -PIVOT_TOL))
                    | (fr_nb & (np.abs(alpha) > PIVOT_TOL))
                )
            if not np.any(elig):
                # only certify infeasibility from exact data
                if self._etas or not d_exact:
                    self._refactor()
                    self._recompute_basics()
                    d = self._reduced_costs(self.c2)
                    d_exact = True
                    continue
                return LpResult(LpStatus.INFEASIBLE, None, None, self._iters)

            with np.errstate(divide="ignore", invalid="ignore"):
                mag = np.where(lo_nb, d, np.where(hi_nb, -d, 0.0))
                aa = np.abs(alpha)
                ratios = np.where(elig, np.maximum(mag, 0.0) / aa, math.inf)
                relaxed = np.where(elig, (np.maximum(mag, 0.0) + FEAS_TOL) / aa,
                                   math.inf)
            if bland:
                q = int(np.flatnonzero(elig)[0])
            else:
                # Harris: largest pivot among columns within the relaxed window
                theta_max = float(np.min(relaxed))
                pick = np.where(elig & (ratios <= theta_max), aa, -1.0)
                q = int(np.argmax(pick))

            w = self._ftran(self._column(q))
            piv = float(w[r])
            if abs(piv) < PIVOT_TOL or piv * alpha[q] <= 0.0:
                # BTRAN row and FTRAN column disagree: etas went stale
                if not self._etas and d_exact:
                    return None  # inconsistent even when fresh; go cold
                self._refactor()
                self._recompute_basics()
                d = self._reduced_costs(self.c2)
                d_exact = True
                continue

            theta_d = d[q] / piv
            bound_r = (
                self.lb[self.basis[r]] if leaving_low else self.ub[self.basis[r]]
            )
            tau = (xB[r] - bound_r) / piv
            leave = int(self.basis[r])
            self.x[self.basis] = xB - tau * w
            self.x[q] = self.x[q] + tau
            self.x[leave] = bound_r
            self.vstat[leave] = _AT_LOWER if leaving_low else _AT_UPPER
            self.basis[r] = q
            self.vstat[q] = _BASIC
            self._etas.append((r, w.copy()))
            if abs(piv) < 1e-5 * max(1.0, float(np.max(np.abs(w)))):
                self._fresh = False
            self._iters += 1

            d = d - theta_d * alpha
            d[q] = 0.0
            d[leave] = -theta_d
            d_exact = False

            deg_run = deg_run + 1 if abs(theta_d) <= DEG_EPS else 0
            if deg_run >= BLAND_AFTER:
                bland = True
            elif deg_run == 0:
                bland = False

    # -------------------------------------------------------------- results

    def _objective(self) -> float:
        return float(self.c2[: self.n] @ self.x[: self.n]) + self.obj_const

    def _verify(self) -> bool:
        n, m = self.n, self.m
        res = self.b - (
            self.A_csr @ self.x[:n]
            + self.x[n : n + m]
            + self.art_sign * self.x[n + m :]
        )
        if float(np.max(np.abs(res), initial=0.0)) > 1e-6:
            return False
        if float(np.max(self.lb - self.x, initial=0.0)) > 1e-6:
            return False
        if float(np.max(self.x - self.ub, initial=0.0)) > 1e-6:
            return False
        return True

    def _optimal_result(self) -> LpResult:
        if not self._verify():
            self._refactor()
            self._recompute_basics()
            if not self._verify():
                if self._fb_depth >= 1:
                    # a cold restart already failed to verify; do not trust
                    # this point enough to call it optimal
                    return self._limit_result()
                self._have_basis = False
                self._fb_depth += 1
                try:
                    return self._cold_solve()
                finally:
                    self._fb_depth -= 1
        d = self._reduced_costs(self.c2)
        nb = self.vstat != _BASIC
        dual = float(
            self._btran(self.c2[self.basis]) @ self.b + d[nb] @ self.x[nb]
            if self.m
            else 0.0
        ) + self.obj_const
        obj = self._objective()
        return LpResult(
            LpStatus.OPTIMAL,
            self.x[: self.n].copy(),
            obj,
            self._iters,
            dual_objective=dual,
        )

    def _limit_result(self) -> LpResult:
        return LpResult(
            LpStatus.ITERATION_LIMIT,
            self.x[: self.n].copy(),
            self._objective(),
            self._iters,
        )


def solve_lp(problem: MilpProblem, warm_start: Basis | None = None) -> LpResult:
    """One-shot LP solve of the problem's continuous relaxation.

    Parameters
    ----------
    problem : MilpProblem
        Integrality flags are ignored.
    warm_start : Basis, optional
        Basis snapshot from a previous engine; the solve then starts dual.
    """
    engine = SimplexEngine(problem)
    if warm_start is not None:
        engine.load_basis(warm_start)
        return engine.solve(warm=True)
    return engine.solve(warm=False)
