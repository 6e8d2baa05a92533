"""Closed-loop simulation harness: RTC baseline and receding-horizon MPC.

Both controllers drive the same plant: the four-state building stepped
exactly one period at a time, with the relay executing all switching.
The MPC variant only moves the setpoint; the relay then reacts to it.
Traces log, per period, the temperature seen by the relay, the setpoint
in effect, the relay state, the heat input it implies, the comfort
violation, and the running energy total. An independent auditor
re-derives the energy recursion and the relay recursion from the raw
columns.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field

import numpy as np

from .bnb import SolveOptions, SolveResult, SolveStatus, solve
from .pwa import PwaRegime, PwaSystem, simulate_pwa_step
from .reformulate import selection_from_point
from .simplex import SimplexEngine
from .thermostat import (
    OFF,
    ON,
    OPERATING_MODES,
    BuildingModel,
    TEMP_MAX,
    TEMP_MIN,
    ThermostatLayout,
    ThermostatParams,
    build_thermostat_mpc,
    default_building,
    relay_switch,
)

__all__ = [
    "Scenario",
    "SolveRecord",
    "ClosedLoopTrace",
    "building_system",
    "simulate_rtc",
    "simulate_dmpc",
    "write_trace_csv",
    "read_trace_rows",
    "audit_rows",
    "audit_trace",
    "comfort_violation",
]

TRACE_HEADER = ("t", "minutes", "T_indoor", "r", "s", "u_watts", "slack",
                "energy_kwh_cum")

# tie nudge: the MILP's weak mode guards overlap the relay's strict ones
# exactly on the switching boundary, and simplex vertices land there
SETPOINT_TIE_EPS = 1e-6


@dataclass(frozen=True)
class Scenario:
    building: BuildingModel = field(default_factory=default_building)
    params: ThermostatParams = field(default_factory=ThermostatParams)
    x0: tuple = (21.0, 21.0, 21.0, 21.0)
    periods: int = 480
    start_time: str = "07:00"

    def __post_init__(self):
        if self.periods < 1:
            raise ValueError("periods must be at least 1")


@dataclass(frozen=True)
class SolveRecord:
    period: int
    status: SolveStatus
    objective: float | None
    gap_percent: float
    wall_time: float  # recorded, never serialized or asserted


@dataclass
class ClosedLoopTrace:
    dt_minutes: float
    t: list = field(default_factory=list)
    T_indoor: list = field(default_factory=list)
    r: list = field(default_factory=list)
    s: list = field(default_factory=list)
    u_watts: list = field(default_factory=list)
    slack: list = field(default_factory=list)
    energy_kwh_cum: list = field(default_factory=list)
    solves: list = field(default_factory=list)

    @property
    def energy_kwh(self) -> float:
        return self.energy_kwh_cum[-1] if self.energy_kwh_cum else 0.0

    @property
    def total_slack(self) -> float:
        return sum(self.slack)

    def append(self, t, T, r, s, u, slack, energy):
        self.t.append(t)
        self.T_indoor.append(T)
        self.r.append(r)
        self.s.append(s)
        self.u_watts.append(u)
        self.slack.append(slack)
        self.energy_kwh_cum.append(energy)


def building_system(building: BuildingModel | None = None,
                    params: ThermostatParams | None = None) -> PwaSystem:
    """The plant as a one-regime PWA system (heat input is the only input)."""
    b = building if building is not None else default_building()
    p = params if params is not None else ThermostatParams()
    regime = PwaRegime(
        "building",
        np.asarray(b.A, dtype=float),
        np.asarray(b.B, dtype=float).reshape(-1, 1),
        np.zeros((4, 1)),
        np.array([[0.0, 0.0, 0.0, 1.0]]),
        np.zeros((1, 1)),
    )
    return PwaSystem(
        (regime,),
        (np.full(4, TEMP_MIN), np.full(4, TEMP_MAX)),
        (np.zeros(1), np.array([p.u_max])),
    )


def comfort_violation(T: float, params: ThermostatParams) -> float:
    lo = params.T_set - params.theta
    hi = params.T_set + params.theta
    return max(0.0, lo - T, T - hi)


def _energy_step(u: float, dt_minutes: float) -> float:
    return u * (dt_minutes / 60.0) / 1000.0


def simulate_rtc(scenario: Scenario | None = None) -> ClosedLoopTrace:
    """Relay thermostat control with the setpoint parked at T_set."""
    sc = scenario if scenario is not None else Scenario()
    p = sc.params
    system = building_system(sc.building, p)
    trace = ClosedLoopTrace(dt_minutes=sc.building.dt_minutes)
    x = np.asarray(sc.x0, dtype=float).copy()
    s = p.s0
    r = p.T_set
    energy = 0.0
    for t in range(sc.periods):
        T = float(x[3])
        u = p.u_max if s == ON else 0.0
        energy = energy + _energy_step(u, sc.building.dt_minutes)
        trace.append(t, T, r, s, u, comfort_violation(T, p), energy)
        s = relay_switch(s, T, r, p.gamma)
        x, _ = simulate_pwa_step(system, x, [u], None, 0)
    return trace


def _applied_setpoint(planned_r: float, planned_mode: int, T: float,
                      gamma: float) -> float:
    """Nudge ties off the switching boundary toward the planned outcome.

    Switch modes sit on the inclusive side of the relay law and need no
    help; stay modes rely on a strict inequality the MILP relaxed, so an
    exact boundary hit would flip the relay against the plan.
    """
    mode = OPERATING_MODES[planned_mode]
    if mode.s_now == ON and mode.s_next == ON and planned_r <= T - gamma:
        return T - gamma + SETPOINT_TIE_EPS
    if mode.s_now == OFF and mode.s_next == OFF and planned_r >= T + gamma:
        return T + gamma - SETPOINT_TIE_EPS
    return planned_r


class _MpcController:
    """Receding-horizon setpoint planner with cross-solve basis reuse."""

    def __init__(self, params: ThermostatParams, building: BuildingModel,
                 N: int, variant: str, bigm: float):
        self.params = params
        self.building = building
        self.N = N
        self.variant = variant
        self.bigm = bigm
        self.layout = ThermostatLayout(N)
        self._basis = None

    def plan(self, x, s: int, period: int):
        problem = build_thermostat_mpc(
            x, s, self.N, self.params, self.variant, self.bigm, self.building
        )
        engine = SimplexEngine(problem)
        if self._basis is not None:
            engine.load_basis(self._basis)
        t0 = time.perf_counter()
        res = solve(problem, SolveOptions(), engine=engine)
        wall = time.perf_counter() - t0
        if res.status is not SolveStatus.OPTIMAL or res.point is None:
            raise RuntimeError(
                f"MPC solve failed at period {period}: {res.status.name}"
            )
        self._basis = engine.snapshot_basis()
        record = SolveRecord(period, res.status, res.objective,
                             res.gap_percent, wall)
        lay = self.layout
        setpoints = [float(res.point[lay.r_index(k)]) for k in range(self.N)]
        modes = selection_from_point(problem, res.point)
        return setpoints, modes, record


def simulate_dmpc(
    scenario: Scenario | None = None,
    N: int = 10,
    M: int = 1,
    variant: str = "gdp_hull",
    bigm: float = 1e4,
    apply_sequence: bool = False,
) -> ClosedLoopTrace:
    """Receding-horizon MPC: re-plan every M periods, relay does the rest.

    Default policy holds the first computed setpoint until the next
    evaluation; ``apply_sequence`` plays out the planned setpoints
    instead.
    """
    if N < 1 or M < 1:
        raise ValueError("N and M must be at least 1")
    sc = scenario if scenario is not None else Scenario()
    p = sc.params
    system = building_system(sc.building, p)
    controller = _MpcController(p, sc.building, N, variant, bigm)
    trace = ClosedLoopTrace(dt_minutes=sc.building.dt_minutes)

    x = np.asarray(sc.x0, dtype=float).copy()
    s = p.s0
    energy = 0.0
    setpoints: list = []
    modes: tuple = ()
    hold = p.T_set
    for t in range(sc.periods):
        T = float(x[3])
        if t % M == 0:
            setpoints, modes, record = controller.plan(x, s, t)
            trace.solves.append(record)
        k = t % M
        if apply_sequence:
            j = min(k, len(setpoints) - 1)
            r = _applied_setpoint(setpoints[j], modes[j], T, p.gamma)
        else:
            if k == 0:
                hold = _applied_setpoint(setpoints[0], modes[0], T, p.gamma)
            r = hold
        u = p.u_max if s == ON else 0.0
        energy = energy + _energy_step(u, sc.building.dt_minutes)
        trace.append(t, T, r, s, u, comfort_violation(T, p), energy)
        s = relay_switch(s, T, r, p.gamma)
        x, _ = simulate_pwa_step(system, x, [u], None, 0)
    return trace


# ------------------------------------------------------------------ trace I/O

def _cell(v) -> str:
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def write_trace_csv(trace: ClosedLoopTrace, destination) -> None:
    """CSV with shortest-round-trip floats, so audits survive the file."""
    owns = isinstance(destination, (str, bytes))
    fh = open(destination, "w", newline="") if owns else destination
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        for i in range(len(trace.t)):
            w.writerow([
                trace.t[i],
                _cell(trace.t[i] * trace.dt_minutes),
                _cell(trace.T_indoor[i]),
                _cell(trace.r[i]),
                trace.s[i],
                _cell(trace.u_watts[i]),
                _cell(trace.slack[i]),
                _cell(trace.energy_kwh_cum[i]),
            ])
    finally:
        if owns:
            fh.close()


def read_trace_rows(source) -> list:
    """Rows of a trace CSV as dicts with floats restored exactly."""
    owns = isinstance(source, (str, bytes))
    fh = open(source, newline="") if owns else source
    try:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != TRACE_HEADER:
            raise ValueError("unexpected trace header")
        rows = []
        for rec in reader:
            rows.append({
                "t": int(rec["t"]),
                "minutes": float(rec["minutes"]),
                "T_indoor": float(rec["T_indoor"]),
                "r": float(rec["r"]),
                "s": int(rec["s"]),
                "u_watts": float(rec["u_watts"]),
                "slack": float(rec["slack"]),
                "energy_kwh_cum": float(rec["energy_kwh_cum"]),
            })
        return rows
    finally:
        if owns:
            fh.close()


def audit_rows(rows, gamma: float, dt_minutes: float = 0.25) -> list:
    """Re-derive the trace invariants from raw columns.

    Returns a list of violation messages; empty means the trace passes.
    The energy recursion is checked for exact equality because both
    sides fold the same floats in the same order.
    """
    problems = []
    energy = 0.0
    for i, row in enumerate(rows):
        energy = energy + _energy_step(row["u_watts"], dt_minutes)
        if row["energy_kwh_cum"] != energy:
            problems.append(
                f"row {i}: energy_kwh_cum {row['energy_kwh_cum']!r} "
                f"!= recomputed {energy!r}"
            )
            energy = row["energy_kwh_cum"]
    for i in range(len(rows) - 1):
        want = relay_switch(rows[i]["s"], rows[i]["T_indoor"],
                            rows[i]["r"], gamma)
        if rows[i + 1]["s"] != want:
            problems.append(
                f"row {i + 1}: relay state {rows[i + 1]['s']} != "
                f"relay_switch of row {i} ({want})"
            )
    return problems


def audit_trace(trace: ClosedLoopTrace, gamma: float) -> list:
    buf = io.StringIO()
    write_trace_csv(trace, buf)
    buf.seek(0)
    return audit_rows(read_trace_rows(buf), gamma, trace.dt_minutes)
