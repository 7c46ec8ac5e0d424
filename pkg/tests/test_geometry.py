"""Tests for s2rkit.geometry."""
import math

import numpy as np
import pytest

from s2rkit import DomainError, FiberedPoint, GeodesicParams, ModelPoint, distance, distance_by_shooting
from s2rkit.geometry import (
    ORIGIN,
    frame_to_origin,
    from_model,
    geodesic_point,
    normalize_point,
    spherical_angle,
    to_model,
)


def _random_points(rng: np.random.Generator, n: int) -> list[FiberedPoint]:
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    t = rng.uniform(-3.0, 3.0, size=n)
    return [FiberedPoint.from_unit_vector(v[i], float(t[i])) for i in range(n)]


def test_distance_examples():
    assert distance(ORIGIN, FiberedPoint(math.pi / 2, 0.0)) == pytest.approx(math.pi / 2, abs=1e-15)
    assert distance(ORIGIN, FiberedPoint(0.0, 0.0, 3.0)) == pytest.approx(3.0, abs=1e-15)
    assert distance(ORIGIN, FiberedPoint(math.pi, 0.0, 0.0)) == pytest.approx(math.pi, abs=1e-15)
    assert distance(FiberedPoint(0.0, math.pi / 2, 0.0), FiberedPoint(0.0, -math.pi / 2, 1.0)) == pytest.approx(
        math.hypot(math.pi, 1.0)
    )


def test_spherical_angle_is_stable_for_close_points():
    a = FiberedPoint(0.3, 0.2)
    b = FiberedPoint(0.3 + 1e-9, 0.2)
    assert spherical_angle(a, b) == pytest.approx(1e-9 * math.cos(0.2), rel=1e-6)


def test_metric_axioms_on_random_triples():
    rng = np.random.default_rng(20240611)
    pts = _random_points(rng, 3000)
    for a, b, c in zip(pts[0::3], pts[1::3], pts[2::3]):
        ab, bc, ac = distance(a, b), distance(b, c), distance(a, c)
        assert distance(a, a) == 0.0
        assert ab == pytest.approx(distance(b, a), abs=1e-14)
        assert ab >= 0.0
        assert ac <= ab + bc + 1e-12


def test_distance_matches_geodesic_shooting():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 100:
        a, b = _random_points(rng, 2)
        if spherical_angle(a, b) > math.pi - 1e-3:
            continue
        assert distance_by_shooting(a, b) == pytest.approx(distance(a, b), abs=1e-9)
        checked += 1


def test_shooting_pure_fiber_motion():
    a = FiberedPoint(0.4, -0.1, 0.5)
    b = FiberedPoint(0.4, -0.1, -1.25)
    assert distance_by_shooting(a, b) == pytest.approx(1.75, abs=1e-15)


def test_geodesic_point_examples():
    start = geodesic_point(GeodesicParams(0.7, 0.3, 0.0))
    assert start.as_array() == pytest.approx([1.0, 0.0, 0.0])
    up = geodesic_point(GeodesicParams(0.0, math.pi / 2, 2.0))
    assert up.as_array() == pytest.approx([math.exp(2.0), 0.0, 0.0])
    side = geodesic_point(GeodesicParams(0.0, 0.0, math.pi / 2))
    assert side.as_array() == pytest.approx([0.0, 1.0, 0.0], abs=1e-15)


@pytest.mark.parametrize("u, v, tau", [(0.0, 0.0, 1.0), (1.2, -0.4, 2.5), (-2.0, 0.9, 3.0), (0.5, 1.3, 0.1)])
def test_geodesic_is_unit_speed(u, v, tau):
    p = from_model(geodesic_point(GeodesicParams(u, v, tau)))
    assert distance(ORIGIN, p) == pytest.approx(tau, abs=1e-12)
    assert p.t == pytest.approx(tau * math.sin(v), abs=1e-12)


def test_geodesic_params_reject_negative_length():
    with pytest.raises(DomainError):
        GeodesicParams(0.0, 0.0, -1.0)


def test_model_round_trip():
    rng = np.random.default_rng(3)
    for p in _random_points(rng, 50):
        m = to_model(p)
        assert np.linalg.norm(m.as_array()) == pytest.approx(math.exp(p.t))
        back = from_model(m)
        assert distance(p, back) == pytest.approx(0.0, abs=1e-12)


def test_from_model_rejects_origin_and_nan():
    with pytest.raises(DomainError):
        from_model(ModelPoint(0.0, 0.0, 0.0))
    with pytest.raises(DomainError):
        from_model(ModelPoint(float("nan"), 0.0, 1.0))


def test_normalize_point_wraps_longitude():
    p = normalize_point(FiberedPoint(3 * math.pi / 2, 0.25, 1.0))
    assert p.phi == pytest.approx(-math.pi / 2)
    assert p.theta == pytest.approx(0.25)
    assert p.t == 1.0
    inside = FiberedPoint(0.1, 0.2, 0.3)
    assert normalize_point(inside) is inside


def test_normalize_point_folds_latitude_over_the_pole():
    p = normalize_point(FiberedPoint(0.0, math.pi / 2 + 0.1))
    assert p.theta == pytest.approx(math.pi / 2 - 0.1)
    assert abs(p.phi) == pytest.approx(math.pi)


def test_normalize_point_rejects_non_finite():
    with pytest.raises(DomainError):
        normalize_point(FiberedPoint(float("inf"), 0.0))


def test_frame_to_origin_is_orthogonal():
    for p in (FiberedPoint(0.3, 0.4), FiberedPoint(0.0, math.pi / 2), FiberedPoint(-2.0, -0.7)):
        S = frame_to_origin(p)
        assert S @ S.T == pytest.approx(np.eye(3), abs=1e-14)
        assert p.unit_vector() @ S == pytest.approx([1.0, 0.0, 0.0], abs=1e-14)


def test_pole_to_pole_distance():
    north = FiberedPoint(0.0, math.pi / 2, 0.0)
    south = FiberedPoint(0.0, -math.pi / 2, math.pi / math.sqrt(3))
    assert distance(north, south) == pytest.approx(2 * math.pi / math.sqrt(3), abs=1e-14)
    assert distance_by_shooting(north, south) == pytest.approx(2 * math.pi / math.sqrt(3), abs=1e-9)


@pytest.mark.parametrize("dt", [50.0, 800.0, -800.0])
def test_shooting_handles_large_fiber_offsets(dt):
    a = FiberedPoint(0.0, 0.0, 0.0)
    b = FiberedPoint(0.5, 0.0, dt)
    assert distance_by_shooting(a, b) == pytest.approx(math.hypot(0.5, dt), rel=1e-10)


def test_model_point_out_of_float_range():
    with pytest.raises(DomainError):
        to_model(FiberedPoint(0.0, 0.0, 710.0))
    with pytest.raises(DomainError):
        geodesic_point(GeodesicParams(0.0, math.pi / 2, 800.0))
