"""Closed-loop simulation: RTC baseline, D-MPC loop, trace I/O, auditor."""

import dataclasses
import io
import math

import pytest

from dmpc.simulate import (
    TRACE_HEADER,
    Scenario,
    audit_rows,
    audit_trace,
    comfort_violation,
    read_trace_rows,
    simulate_dmpc,
    simulate_rtc,
    write_trace_csv,
)
from dmpc.thermostat import OFF, ON, ThermostatParams


def _csv_text(trace) -> str:
    buf = io.StringIO()
    write_trace_csv(trace, buf)
    return buf.getvalue()


def test_trace_header_contract():
    assert TRACE_HEADER == ("t", "minutes", "T_indoor", "r", "s", "u_watts",
                            "slack", "energy_kwh_cum")


def test_scenario_rejects_empty_horizon():
    with pytest.raises(ValueError):
        Scenario(periods=0)


def test_rtc_infinite_band_off_never_heats():
    sc = Scenario(params=ThermostatParams(gamma=math.inf), periods=120)
    trace = simulate_rtc(sc)
    assert trace.energy_kwh == 0.0
    assert all(s == OFF for s in trace.s)


def test_rtc_forced_on_full_power():
    sc = Scenario(params=ThermostatParams(gamma=math.inf, s0=ON),
                  periods=480)
    trace = simulate_rtc(sc)
    # 480 periods of 4 kW for 15 s each
    assert trace.energy_kwh == pytest.approx(8.0, abs=1e-9)
    assert all(s == ON for s in trace.s)


def test_rtc_default_day_cycles():
    trace = simulate_rtc(Scenario(periods=480))
    assert len(trace.t) == 480
    assert 0.0 < trace.energy_kwh < 8.0
    assert len(set(trace.s)) == 2  # the relay actually switches
    assert audit_trace(trace, trace_gamma()) == []


def trace_gamma() -> float:
    return ThermostatParams().gamma


def test_slack_column_matches_comfort_recomputation():
    sc = Scenario(x0=(19.0, 19.0, 19.0, 19.0), periods=200)
    trace = simulate_rtc(sc)
    p = sc.params
    recomputed = sum(comfort_violation(T, p) for T in trace.T_indoor)
    assert trace.total_slack == pytest.approx(recomputed, abs=1e-6)
    assert trace.total_slack > 0.0  # cold start spends time below the band


def test_csv_round_trip_exact():
    trace = simulate_rtc(Scenario(periods=50))
    rows = read_trace_rows(io.StringIO(_csv_text(trace)))
    assert len(rows) == 50
    for i, row in enumerate(rows):
        assert row["t"] == trace.t[i]
        assert row["T_indoor"] == trace.T_indoor[i]
        assert row["r"] == trace.r[i]
        assert row["s"] == trace.s[i]
        assert row["u_watts"] == trace.u_watts[i]
        assert row["slack"] == trace.slack[i]
        assert row["energy_kwh_cum"] == trace.energy_kwh_cum[i]


def test_csv_bytes_deterministic():
    a = _csv_text(simulate_rtc(Scenario(periods=64)))
    b = _csv_text(simulate_rtc(Scenario(periods=64)))
    assert a == b


def test_reader_rejects_foreign_header():
    with pytest.raises(ValueError):
        read_trace_rows(io.StringIO("a,b,c\n1,2,3\n"))


def test_audit_catches_energy_tampering():
    trace = simulate_rtc(Scenario(periods=40))
    rows = read_trace_rows(io.StringIO(_csv_text(trace)))
    rows[7]["energy_kwh_cum"] += 1e-3
    problems = audit_rows(rows, trace_gamma(), trace.dt_minutes)
    assert any("row 7" in msg and "energy" in msg for msg in problems)


def test_audit_catches_relay_tampering():
    trace = simulate_rtc(Scenario(x0=(19.0,) * 4, periods=40))
    rows = read_trace_rows(io.StringIO(_csv_text(trace)))
    rows[5]["s"] = 1 - rows[5]["s"]
    problems = audit_rows(rows, trace_gamma(), trace.dt_minutes)
    assert any("relay state" in msg for msg in problems)


def test_dmpc_short_run_audits_clean():
    sc = Scenario(periods=12)
    trace = simulate_dmpc(sc, N=4, M=2)
    assert len(trace.t) == 12
    assert len(trace.solves) == 6  # one plan every M periods
    assert audit_trace(trace, sc.params.gamma) == []
    assert trace.energy_kwh >= 0.0


def test_dmpc_rejects_bad_window():
    with pytest.raises(ValueError):
        simulate_dmpc(Scenario(periods=4), N=0, M=1)
    with pytest.raises(ValueError):
        simulate_dmpc(Scenario(periods=4), N=2, M=0)


def test_dmpc_variants_agree_on_quiet_start():
    # warm start inside the band: every variant should plan no heating
    sc = Scenario(periods=8)
    hull = simulate_dmpc(sc, N=3, M=1, variant="hull")
    bigm = simulate_dmpc(sc, N=3, M=1, variant="bigm")
    assert hull.energy_kwh == pytest.approx(bigm.energy_kwh, abs=1e-9)
    assert hull.s == bigm.s


def test_apply_sequence_path_runs_and_audits():
    sc = Scenario(x0=(20.0,) * 4, periods=12)
    trace = simulate_dmpc(sc, N=4, M=3, apply_sequence=True)
    assert len(trace.t) == 12
    assert len(trace.solves) == 4
    assert audit_trace(trace, sc.params.gamma) == []


def test_dmpc_determinism():
    sc = Scenario(x0=(20.5,) * 4, periods=10)
    a = _csv_text(simulate_dmpc(sc, N=4, M=2))
    b = _csv_text(simulate_dmpc(sc, N=4, M=2))
    assert a == b


def test_solve_records_shape():
    trace = simulate_dmpc(Scenario(periods=6), N=3, M=2)
    for rec in trace.solves:
        assert rec.period % 2 == 0
        assert rec.gap_percent == pytest.approx(0.0, abs=1e-9)
        assert rec.objective is not None


def test_trace_mutation_detected_after_file_round_trip(tmp_path):
    path = tmp_path / "trace.csv"
    trace = simulate_rtc(Scenario(periods=30))
    write_trace_csv(trace, str(path))
    text = path.read_text()
    assert text.splitlines()[0] == ",".join(TRACE_HEADER)
    rows = read_trace_rows(str(path))
    assert audit_rows(rows, trace_gamma(), trace.dt_minutes) == []
