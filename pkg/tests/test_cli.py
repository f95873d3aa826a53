from __future__ import annotations

import json
import subprocess
import sys

import pytest

from gevrey_lab.cli import main


def _write(tmp_path, payload, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return p


def test_appendix_defaults_exit_zero(tmp_path):
    assert main(["appendix", "--out", str(tmp_path), "-q"]) == 0
    doc = json.loads((tmp_path / "appendix.json").read_text())
    assert doc["chainHolds"] and doc["diagonalViolations"] == 0
    assert (tmp_path / "chain.csv").read_text().startswith("# gevrey-lab ")


def test_malformed_alpha_exit_two_with_path(tmp_path, capsys):
    cfg = _write(tmp_path, {"damping": {"alpha": 1.5}})
    assert main(["fit", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert "damping.alpha" in capsys.readouterr().err


def test_missing_config_exit_two(tmp_path, capsys):
    assert main(["fit", "--out", str(tmp_path)]) == 2
    assert "--config" in capsys.readouterr().err


def test_bad_seed_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["appendix", "--seed", "-3"])
    assert exc.value.code == 2


def test_fit_passes_and_writes_curve(tmp_path):
    # the trend threshold is calibrated on the default window k in [20, 200]
    cfg = _write(tmp_path, {"damping": {"alpha": 0.5}})
    assert main(["fit", "--config", str(cfg), "--out", str(tmp_path), "-q"]) == 0
    doc = json.loads((tmp_path / "fit.json").read_text())
    assert doc["exitCode"] == 0 and doc["fits"][0]["pass"]
    lines = (tmp_path / "curve.csv").read_text().splitlines()
    assert lines[1] == "t,k,logM" and len(lines) == 2 + 181


def test_fit_detects_wrong_order(tmp_path):
    # claiming a smaller order than the data has is a theorem-check failure
    cfg = _write(tmp_path, {"damping": {"alpha": 0.5}, "fit": {"sigma": 1.0}})
    assert main(["fit", "--config", str(cfg), "--out", str(tmp_path), "-q"]) == 1


def test_truncation_guard_exit_three(tmp_path):
    cfg = _write(tmp_path, {"damping": {"alpha": 0.75}, "spectrum": {"modes": 100, "auto_modes": False}})
    assert main(["fit", "--config", str(cfg), "--out", str(tmp_path), "-q"]) == 3
    assert "TruncationError" in json.loads((tmp_path / "fit.json").read_text())["guard"]


def test_energy_command(tmp_path):
    cfg = _write(tmp_path, {"damping": {"alpha": 0.7}, "spectrum": {"modes": 100}})
    assert main(["energy", "--config", str(cfg), "--out", str(tmp_path), "-q"]) == 0
    assert (tmp_path / "energy.csv").read_text().splitlines()[1].startswith("t,phi,dphiFd")


def test_counterexample_needs_counterexample_data(tmp_path):
    cfg = _write(tmp_path, {"damping": {"alpha": 0.75}})
    assert main(["counterexample", "--config", str(cfg), "--out", str(tmp_path), "-q"]) == 2


def test_counterexample_command(tmp_path):
    cfg = _write(tmp_path, {"damping": {"alpha": 0.75},
                            "data": {"kind": "counterexample", "variant": "overdamped"},
                            "lower_bound": {"k_max": 100}})
    assert main(["counterexample", "--config", str(cfg), "--out", str(tmp_path), "-q"]) == 0
    doc = json.loads((tmp_path / "counterexample.json").read_text())
    assert abs(doc["lowerBound"]["fittedExponent"] - 4.0) < 0.2


def test_wave_command(tmp_path):
    cfg = _write(tmp_path, {"damping": {"alpha": 0.5}, "wave": {"p_max": 100, "grid_points": 65}})
    assert main(["wave", "--config", str(cfg), "--out", str(tmp_path), "-q"]) == 0
    assert (tmp_path / "derivatives.csv").exists() and (tmp_path / "snapshot.csv").exists()


def test_wave_embedding_needs_strided_data(tmp_path):
    cfg = _write(tmp_path, {"damping": {"alpha": 0.75}, "wave": {"embed": 3}})
    assert main(["wave", "--config", str(cfg), "--out", str(tmp_path), "-q"]) == 2


def test_simulate_is_byte_reproducible(tmp_path):
    cfg = _write(tmp_path, {"damping": {"alpha": 0.5}, "fit": {"k_max": 60}, "times": [0.5, 1.0]})
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--config", str(cfg), "--out", str(a), "--seed", "7", "-q"]) == 0
    assert main(["simulate", "--config", str(cfg), "--out", str(b), "--seed", "7", "-q"]) == 0
    for name in ("curve.csv", "state.csv", "simulate.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    c = tmp_path / "c"
    main(["simulate", "--config", str(cfg), "--out", str(c), "--seed", "8", "-q"])
    assert (a / "curve.csv").read_bytes() != (c / "curve.csv").read_bytes()


def test_console_script_module_entry(tmp_path):
    out = subprocess.run([sys.executable, "-m", "gevrey_lab.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "gevrey-lab" in out.stdout
