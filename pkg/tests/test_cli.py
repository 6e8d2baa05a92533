"""Command-line interface, exercised in-process through main()."""

import json

import pytest

from dmpc.cli import _read_config, main


def test_read_config_parses_and_normalizes(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nmode = rtc\napply-sequence = yes\n\nN=4\n")
    values = _read_config(str(cfg))
    assert values == {"mode": "rtc", "apply_sequence": "yes", "N": "4"}


def test_read_config_rejects_garbage(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("mode rtc\n")
    with pytest.raises(ValueError, match="run.cfg:1"):
        _read_config(str(cfg))


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--does-not-exist"])
    assert exc.value.code == 2


def test_simulate_rtc_writes_trace(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["simulate", "--mode", "rtc", "--periods", "40",
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 41
    assert lines[0].startswith("t,minutes,T_indoor")


def test_simulate_default_period_count(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["simulate", "--mode", "rtc", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 481


def test_simulate_runtime_error_reports_and_fails(tmp_path, capsys):
    rc = main(["simulate", "--mode", "dmpc", "--N", "0", "--periods", "4",
               "--out", str(tmp_path / "t.csv")])
    assert rc == 1
    assert capsys.readouterr().err.startswith("error:")


def test_simulate_unreadable_config_fails(tmp_path, capsys):
    rc = main(["simulate", "--config", str(tmp_path / "absent.cfg")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_config_supplies_flags_and_flags_win(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("mode = rtc\nperiods = 20\n")
    out1 = tmp_path / "a.csv"
    assert main(["simulate", "--config", str(cfg), "--out", str(out1)]) == 0
    assert len(out1.read_text().splitlines()) == 21
    out2 = tmp_path / "b.csv"
    assert main(["simulate", "--config", str(cfg), "--periods", "10",
                 "--out", str(out2)]) == 0
    assert len(out2.read_text().splitlines()) == 11


def test_simulate_dmpc_small(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["simulate", "--mode", "dmpc", "--N", "3", "--M", "2",
                 "--periods", "6", "--variant", "bigm",
                 "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 7


def test_export_writes_mps(tmp_path):
    out = tmp_path / "m.mps"
    assert main(["export", "--variant", "hull", "--N", "2",
                 "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("NAME")
    assert text.rstrip().endswith("ENDATA")


def test_gapstudy_with_config(tmp_path):
    cfg = tmp_path / "study.cfg"
    cfg.write_text("instance-count = 1\nhorizons = 30\nnode-limit = 1\n")
    out = tmp_path / "report.json"
    assert main(["gapstudy", "--config", str(cfg), "--seed", "5",
                 "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["config"]["seed"] == 5
    assert report["config"]["instance_count"] == 1
    assert len(report["instances"]) == 1
