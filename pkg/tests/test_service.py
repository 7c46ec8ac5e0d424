"""Tests for s2rkit.service.PackingService."""
import math

import pytest

from s2rkit import DomainError, EmbeddabilityError, FiberedPoint, PackingService
from s2rkit.schema import PackingResultSchema, RunManifest
from s2rkit.service import PUBLISHED_Q2, REFERENCE_DENSITIES


@pytest.fixture
def service(packing_settings) -> PackingService:
    return PackingService(packing_settings)


def test_volume_report(service):
    report = service.volume(math.pi / 4)
    assert report.volume == pytest.approx(1.94735865, abs=1e-6)
    assert report.agreement <= 1e-8 * report.volume
    assert report.abs_tol == 1e-12


def test_volume_report_rejects_large_radius(service):
    with pytest.raises(EmbeddabilityError):
        service.volume(3.2)


def test_distance_report(service):
    report = service.distance(FiberedPoint(0.0, 0.0, 0.0), FiberedPoint(math.pi / 2, 0.0, 1.0))
    assert report.distance == pytest.approx(math.hypot(math.pi / 2, 1.0))
    assert report.agreement <= 1e-9


def test_frobenius_report_uses_rational_strings(service):
    report = service.frobenius(4)
    assert len(report.classes) == 6
    flagged = [c for c in report.classes if c.label == "4q.I.2"]
    assert flagged[0].representative == ["0", "0", "1/2"]
    assert ["1/2", "1/2", "1/2"] in report.raw


def test_orbit_report(service):
    tau = math.pi / math.sqrt(3)
    points = service.orbit(2, tau, FiberedPoint(0.0, math.pi / 2), 2 * tau)
    assert len(points) == 5
    assert points[2].label == "1"


def test_evaluate_matches_optimize_tau(service):
    tuned = service.optimize_tau(2, FiberedPoint(math.pi / 2, 0.0))
    fixed = service.evaluate(2, FiberedPoint(math.pi / 2, 0.0), math.pi)
    assert isinstance(tuned, PackingResultSchema)
    assert tuned.tau == pytest.approx(math.pi, abs=1e-8)
    assert tuned.density == pytest.approx(fixed.density, abs=1e-9)
    assert fixed.K.phi == pytest.approx(math.pi / 2)


def test_export_sphere_requires_tau_for_words(service, tmp_path):
    with pytest.raises(DomainError):
        service.export_sphere(tmp_path / "a.obj", 0.5, FiberedPoint(0.0, 0.0), word="g1")
    with pytest.raises(DomainError):
        service.export_sphere(tmp_path / "a.obj", 0.5, FiberedPoint(0.0, 0.0), whole_orbit=True)


def test_export_sphere_counts(service, tmp_path):
    out = tmp_path / "one.obj"
    assert service.export_sphere(out, 0.5, FiberedPoint(0.2, 0.1), resolution=4) == 1
    assert out.read_text(encoding="utf-8").startswith("#")
    tau = math.pi / math.sqrt(3)
    count = service.export_sphere(
        tmp_path / "orbit.obj", tau, FiberedPoint(0.0, math.pi / 2), resolution=4, tau=tau, whole_orbit=True
    )
    assert count == 5


def test_published_table():
    assert [row.name for row in PUBLISHED_Q2] == [
        "simply-transitive-opt",
        "simply-transitive-equator",
        "edge-endpoint-A2",
        "vertex-A3",
    ]
    assert REFERENCE_DENSITIES["Euclidean (Kepler)"] == pytest.approx(0.74048049, abs=1e-8)


def test_manifest_serializes_full_precision():
    manifest = RunManifest(
        command="volume",
        parameters={"rho": 0.1},
        tolerances={"abs_tol": 1e-12},
        version="0.1.0",
        duration_seconds=0.01,
        results={"volume": 1 / 3},
    )
    assert "0.3333333333333333" in manifest.model_dump_json()


@pytest.mark.slow
def test_reproduce_matches_published_values(service):
    report = service.reproduce()
    assert report.ok, [r for r in report.rows if not r.ok]
    assert report.best_multiply_transitive == "vertex-A3"
    rows = {r.name: r for r in report.rows}
    assert rows["vertex-A3"].computed["phi"] is None
    assert rows["vertex-A3"].deltas["density"] <= 1e-6
    assert any("0.87499429" in note for note in report.notes)
    # idempotent
    assert service.reproduce() == report
