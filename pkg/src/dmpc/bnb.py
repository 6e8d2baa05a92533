"""Branch and bound for mixed-binary linear programs.

Plain LP-based branch and bound: best-bound node selection (FIFO on
ties), most-fractional branching (lowest column on ties), no cuts, no
presolve, no rounding heuristics. One simplex engine is shared by every
node; since branching only moves bounds, each node re-solves warm with
the dual simplex from whatever basis the previous node left behind.

Nodes are kept lazily: a node is enqueued as the chain of bound changes
along its path plus its parent's LP value, and is only solved when it is
dequeued. ``nodes_explored`` counts dequeued-and-solved nodes, so the
root counts as 1 and nodes pruned by bound before solving do not count.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .milp import MilpProblem
from .mps import export_mps  # noqa: F401  (part of this module's surface)
from .simplex import LpStatus, SimplexEngine

__all__ = [
    "SolveStatus",
    "SolveOptions",
    "SolveResult",
    "solve",
    "relaxation_bound",
    "export_mps",
]


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    FEASIBLE_LIMIT = "feasible_limit"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class SolveOptions:
    rel_gap_tol: float = 1e-6
    int_tol: float = 1e-6
    node_limit: int | None = None
    time_limit: float | None = None

    def __post_init__(self):
        if self.rel_gap_tol < 0 or self.int_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.node_limit is not None and self.node_limit < 1:
            raise ValueError("node_limit must be at least 1")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")


@dataclass
class SolveResult:
    """Outcome of a MILP (or brute-force GDP) solve.

    ``best_bound`` is a valid lower bound on the optimum; ``gap_percent``
    is ``100 (objective - best_bound) / max(|objective|, 1e-12)`` and is
    +inf when there is no incumbent. ``bound_history`` records the global
    bound after each solved node, starting at the root relaxation value.
    """

    status: SolveStatus
    point: np.ndarray | None
    objective: float | None
    best_bound: float
    nodes_explored: int
    gap_percent: float
    bound_history: list = field(default_factory=list)
    selection: tuple | None = None


def _gap_percent(objective, bound) -> float:
    if objective is None:
        return math.inf
    return 100.0 * (objective - bound) / max(abs(objective), 1e-12)


def relaxation_bound(problem: MilpProblem, engine: SimplexEngine | None = None) -> float:
    """Optimal value of the LP relaxation.

    +inf if the relaxation is infeasible, -inf if it is unbounded or the
    iteration limit was hit before optimality.
    """
    eng = engine or SimplexEngine(problem)
    res = eng.solve(lb=problem.lb, ub=problem.ub, warm=engine is not None)
    if res.status == LpStatus.OPTIMAL:
        return res.objective
    if res.status == LpStatus.INFEASIBLE:
        return math.inf
    return -math.inf


def solve(
    problem: MilpProblem,
    options: SolveOptions | None = None,
    engine: SimplexEngine | None = None,
) -> SolveResult:
    """Solve a mixed-binary LP to the requested gap or limit.

    Passing ``engine`` reuses an existing simplex engine (and its basis)
    for the root solve, which is how the closed-loop controller and the
    gap study warm-start consecutive instances.
    """
    opts = options or SolveOptions()
    diagnostics = problem.validate()
    if diagnostics:
        raise ValueError("invalid problem: " + "; ".join(diagnostics))

    eng = engine or SimplexEngine(problem)
    t0 = time.monotonic()
    root_lb = np.asarray(problem.lb, dtype=float).copy()
    root_ub = np.asarray(problem.ub, dtype=float).copy()
    int_cols = np.flatnonzero(problem.is_int)

    incumbent = None
    z = math.inf
    best_gap_bound = None  # set when stopping because the gap closed
    nodes = 0
    hist: list = []
    limit_hit = False
    unbounded = False

    heap: list = [(-math.inf, 0, ())]
    seq = 1

    def record_bound(fallback):
        g = heap[0][0] if heap else (z if incumbent is not None else fallback)
        if hist:
            g = max(g, hist[-1])
        if incumbent is not None:
            g = min(g, z)
        hist.append(g)

    while heap:
        if opts.node_limit is not None and nodes >= opts.node_limit:
            limit_hit = True
            break
        if opts.time_limit is not None and time.monotonic() - t0 > opts.time_limit:
            limit_hit = True
            break

        est, _, changes = heapq.heappop(heap)
        if incumbent is not None:
            if est >= z - 1e-9:
                continue
            if _gap_percent(z, est) <= 100.0 * opts.rel_gap_tol:
                best_gap_bound = est
                break

        lb, ub = root_lb.copy(), root_ub.copy()
        for col, lo, hi in changes:
            lb[col], ub[col] = lo, hi

        res = eng.solve(lb=lb, ub=ub, warm=True)
        nodes += 1

        if res.status == LpStatus.ITERATION_LIMIT:
            heapq.heappush(heap, (est, -1, changes))
            limit_hit = True
            break
        if res.status == LpStatus.UNBOUNDED:
            unbounded = True
            break
        if res.status == LpStatus.INFEASIBLE:
            record_bound(math.inf)
            continue

        val = res.objective
        if incumbent is not None and val >= z - 1e-9:
            record_bound(val)
            continue

        x = res.point
        dist = np.abs(x[int_cols] - np.round(x[int_cols])) if int_cols.size else np.empty(0)
        dmax = float(dist.max(initial=0.0))
        if dmax <= opts.int_tol:
            cand_val, cand_pt = val, x
            branch_anyway = False
            if dmax > 0.0:
                # re-solve with the binaries pinned: a point integral only
                # to tolerance can hide M * tol of constraint slack, so the
                # incumbent must come from an exactly pinned solve
                rvals = np.round(x[int_cols])
                plb, pub = lb.copy(), ub.copy()
                plb[int_cols] = rvals
                pub[int_cols] = rvals
                pres = eng.solve(lb=plb, ub=pub, warm=True)
                if pres.status == LpStatus.OPTIMAL:
                    cand_val, cand_pt = pres.objective, pres.point
                    branch_anyway = cand_val > val + 1e-9
                else:
                    cand_pt = None
                    branch_anyway = True
            if cand_pt is not None and cand_val < z:
                z = cand_val
                incumbent = cand_pt.copy()
            if not branch_anyway or (incumbent is not None and val >= z - 1e-9):
                record_bound(val)
                continue

        col = int(int_cols[int(np.argmax(dist))])
        xj = float(x[col])
        down = changes + ((col, lb[col], math.floor(xj)),)
        up = changes + ((col, math.ceil(xj), ub[col]),)
        heapq.heappush(heap, (val, seq, down))
        heapq.heappush(heap, (val, seq + 1, up))
        seq += 2
        record_bound(val)

    if unbounded:
        return SolveResult(
            SolveStatus.UNBOUNDED, None, None, -math.inf, nodes, math.inf, hist
        )

    if incumbent is None:
        if limit_hit or heap:
            bb = heap[0][0] if heap else -math.inf
            return SolveResult(
                SolveStatus.FEASIBLE_LIMIT, None, None, bb, nodes, math.inf, hist
            )
        return SolveResult(
            SolveStatus.INFEASIBLE, None, None, math.inf, nodes, math.inf, hist
        )

    if best_gap_bound is not None:
        bb = min(best_gap_bound, z)
        status = SolveStatus.OPTIMAL
    elif limit_hit or heap:
        bb = min(heap[0][0], z) if heap else z
        status = SolveStatus.FEASIBLE_LIMIT
        if _gap_percent(z, bb) <= 100.0 * opts.rel_gap_tol:
            status = SolveStatus.OPTIMAL
    else:
        bb = z
        status = SolveStatus.OPTIMAL

    if hist:
        hist[-1] = max(hist[-1], min(bb, z))
    return SolveResult(status, incumbent, z, bb, nodes, _gap_percent(z, bb), hist)
