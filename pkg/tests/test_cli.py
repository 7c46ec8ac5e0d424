"""Tests for s2rkit.cli."""
import json
import math

import pytest

from s2rkit import cli
from s2rkit.schema import ReproductionReportSchema, ReproductionRowSchema
from s2rkit.service import PackingService


def test_volume_plain(capsys):
    assert cli.main(["volume", "--rho", "0.7853981634"]) == 0
    out = capsys.readouterr().out
    assert "volume: 1.947358" in out
    assert "volume_slab:" in out


def test_volume_zero(capsys):
    assert cli.main(["volume", "--rho", "0"]) == 0
    assert "volume: 0.0" in capsys.readouterr().out


def test_volume_out_of_range_exits_with_domain_code(capsys):
    assert cli.main(["volume", "--rho", "3.2"]) == 2
    err = capsys.readouterr().err
    assert "rho < pi" in err


def test_volume_json_manifest(capsys):
    assert cli.main(["volume", "--rho", "1.0", "--json", "--tol-abs", "1e-13"]) == 0
    manifest = json.loads(capsys.readouterr().out)
    assert manifest["command"] == "volume"
    assert manifest["parameters"]["rho"] == 1.0
    assert manifest["tolerances"]["abs_tol"] == 1e-13
    assert manifest["results"]["volume"] == pytest.approx(manifest["results"]["volume_slab"], rel=1e-8)
    assert manifest["duration_seconds"] >= 0


def test_distance(capsys):
    argv = ["distance", "--phi", "0", "1.5707963267948966", "--theta", "0", "0", "--t", "0", "1", "--json"]
    assert cli.main(argv) == 0
    results = json.loads(capsys.readouterr().out)["results"]
    assert results["distance"] == pytest.approx(math.hypot(math.pi / 2, 1.0))


@pytest.mark.parametrize("q, classes", [(2, 4), (4, 6)])
def test_frobenius(capsys, q, classes):
    assert cli.main(["frobenius", "--q", str(q), "--json"]) == 0
    results = json.loads(capsys.readouterr().out)["results"]
    assert len(results["classes"]) == classes
    assert any(c["label"] == "4q.I.2" and c["representative"] == ["0", "0", "1/2"] for c in results["classes"])


def test_frobenius_small_q(capsys):
    assert cli.main(["frobenius", "--q", "1"]) == 2
    assert "q must be at least 2" in capsys.readouterr().err


def test_orbit_default_window(capsys):
    tau = repr(math.pi / math.sqrt(3))
    assert cli.main(["orbit", "--tau", tau, "--json"]) == 0
    assert len(json.loads(capsys.readouterr().out)["results"]) == 5


def test_optimize_tau_mode(capsys):
    assert cli.main(["optimize", "--mode", "tau", "--phi", "0", "--theta", "1.5707963267948966", "--json"]) == 0
    results = json.loads(capsys.readouterr().out)["results"]
    assert results["tau"] == pytest.approx(math.pi / math.sqrt(3), abs=1e-8)
    assert results["touching_number"] == 4


def test_optimize_tau_mode_needs_kernel(capsys):
    assert cli.main(["optimize", "--mode", "tau"]) == 2
    assert "--phi" in capsys.readouterr().err


def test_optimize_fixed_mode(capsys):
    argv = ["optimize", "--mode", "fixed", "--phi", "1.5707963267948966", "--theta", "0", "--tau", "3.141592653589793"]
    assert cli.main(argv) == 0
    assert "density: 0.696349" in capsys.readouterr().out


def test_export_sphere(tmp_path, capsys):
    out = tmp_path / "ball.obj"
    assert cli.main(["export-sphere", "--rho", "0.5", "--resolution", "4", "--out", str(out)]) == 0
    assert out.exists()
    assert "spheres: 1" in capsys.readouterr().out


def test_export_sphere_unwritable(tmp_path, capsys):
    assert cli.main(["export-sphere", "--rho", "0.5", "--out", str(tmp_path)]) == 3
    assert "Cannot write mesh file" in capsys.readouterr().err


def _report(ok: bool) -> ReproductionReportSchema:
    row = ReproductionRowSchema(
        name="vertex-A3",
        computed={"phi": None, "theta": 1.5, "R": 1.8, "volume": 20.0, "density": 0.8},
        published={"phi": None, "theta": 1.5, "R": 1.8, "volume": 20.0, "density": 0.87757183},
        deltas={"phi": None, "theta": 0.0, "R": 0.0, "volume": 0.0, "density": 0.07757183},
        ok=ok,
    )
    return ReproductionReportSchema(rows=[row], best_multiply_transitive="vertex-A3", ok=ok, notes=["n"])


@pytest.mark.parametrize("ok, code, banner", [(True, 0, "reproduction OK"), (False, 1, "reproduction MISMATCH")])
def test_reproduce_exit_code(monkeypatch, capsys, ok, code, banner):
    monkeypatch.setattr(PackingService, "reproduce", lambda self: _report(ok))
    assert cli.main(["reproduce"]) == code
    out = capsys.readouterr().out
    assert banner in out
    assert "vertex-A3" in out


def test_missing_subcommand():
    with pytest.raises(SystemExit):
        cli.main([])


def test_distance_with_large_fiber_offset(capsys):
    argv = ["distance", "--phi", "0", "0.5", "--theta", "0", "0", "--t", "0", "800", "--json"]
    assert cli.main(argv) == 0
    results = json.loads(capsys.readouterr().out)["results"]
    assert results["distance"] == pytest.approx(math.hypot(0.5, 800.0))
    assert results["agreement"] < 1e-6


def test_q_defaults_to_settings(capsys):
    assert cli.main(["frobenius", "--json"]) == 0
    manifest = json.loads(capsys.readouterr().out)
    assert manifest["parameters"]["q"] == 2
    assert manifest["results"]["q"] == 2
    assert len(manifest["results"]["classes"]) == 4
