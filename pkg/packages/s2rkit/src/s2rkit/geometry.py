"""
Points, the affine model and geodesics of S²×ℝ.

A point is a sphere point given in geographic coordinates plus a fiber
coordinate t. The model embeds it radially: sphere direction scaled by e^t.
Geodesics are unit speed, so distance is sqrt(sigma² + dt²) where sigma is
the great-circle angle between the sphere parts.
"""
from __future__ import annotations

from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy.optimize import least_squares

from .errors import DomainError, NumericError

logger = logging.getLogger(__name__)

_POLE_EPS = 1e-15


@dataclass(frozen=True)
class FiberedPoint:
    phi: float
    theta: float
    t: float = 0.0

    def unit_vector(self) -> np.ndarray:
        c = math.cos(self.theta)
        return np.array([math.cos(self.phi) * c, math.sin(self.phi) * c, math.sin(self.theta)])

    @classmethod
    def from_unit_vector(cls, v: np.ndarray, t: float = 0.0) -> FiberedPoint:
        x, y, z = (float(c) for c in v)
        rho_xy = math.hypot(x, y)
        theta = math.atan2(z, rho_xy)
        phi = math.atan2(y, x) if rho_xy > _POLE_EPS else 0.0
        if phi <= -math.pi:
            phi += 2 * math.pi
        return cls(phi, theta, t)


@dataclass(frozen=True)
class ModelPoint:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class GeodesicParams:
    u: float
    v: float
    tau: float

    def __post_init__(self) -> None:
        if self.tau < 0:
            raise DomainError("Geodesic arc length tau must be non-negative.")


ORIGIN = FiberedPoint(0.0, 0.0, 0.0)


def _require_finite(*values: float) -> None:
    if not all(math.isfinite(v) for v in values):
        raise DomainError("Point coordinates must be finite.")


def normalize_point(p: FiberedPoint) -> FiberedPoint:
    _require_finite(p.phi, p.theta, p.t)
    if -math.pi < p.phi <= math.pi and -math.pi / 2 <= p.theta <= math.pi / 2:
        return p
    return FiberedPoint.from_unit_vector(p.unit_vector(), p.t)


def _radius(t: float) -> float:
    try:
        return math.exp(t)
    except OverflowError:
        raise DomainError(f"Fiber coordinate t = {t!r} has no finite model point.") from None


def to_model(p: FiberedPoint) -> ModelPoint:
    x, y, z = _radius(p.t) * p.unit_vector()
    return ModelPoint(float(x), float(y), float(z))


def from_model(m: ModelPoint) -> FiberedPoint:
    _require_finite(m.x, m.y, m.z)
    v = m.as_array()
    r = float(np.linalg.norm(v))
    if r == 0.0:
        raise DomainError("The model origin (0, 0, 0) does not represent a point.")
    return FiberedPoint.from_unit_vector(v / r, math.log(r))


def _geodesic_polar(u: float, v: float, tau: float) -> tuple[np.ndarray, float]:
    # (sphere direction, log of model radius)
    arc = tau * math.cos(v)
    direction = np.array([math.cos(arc), math.sin(arc) * math.cos(u), math.sin(arc) * math.sin(u)])
    return direction, tau * math.sin(v)


def geodesic_point(g: GeodesicParams) -> ModelPoint:
    """Unit-speed geodesic leaving the model point (1, 0, 0)."""
    direction, log_r = _geodesic_polar(g.u, g.v, g.tau)
    x, y, z = _radius(log_r) * direction
    return ModelPoint(float(x), float(y), float(z))


def sphere_angle(a: np.ndarray, b: np.ndarray) -> float:
    return math.atan2(float(np.linalg.norm(np.cross(a, b))), float(np.dot(a, b)))


def spherical_angle(a: FiberedPoint, b: FiberedPoint) -> float:
    return sphere_angle(a.unit_vector(), b.unit_vector())


def distance(a: FiberedPoint, b: FiberedPoint) -> float:
    return math.hypot(spherical_angle(a, b), a.t - b.t)


def frame_to_origin(p: FiberedPoint) -> np.ndarray:
    """
    Orthogonal S with p.unit_vector() @ S == (1, 0, 0).

    Points act as row vectors, so the columns of S are an orthonormal frame
    whose first member is p.
    """
    a = p.unit_vector()
    helper = np.eye(3)[int(np.argmin(np.abs(a)))]
    b = np.cross(a, helper)
    b /= np.linalg.norm(b)
    c = np.cross(a, b)
    return np.column_stack([a, b, c])


def distance_by_shooting(a: FiberedPoint, b: FiberedPoint) -> float:
    """
    Distance found by shooting the model geodesic from a to b.

    Moves a to the origin, fixes the longitude u from the target direction and
    solves the geodesic equations for (v, tau). Independent of `distance`.
    The model target is matched as sphere direction plus log-radius, so large
    fiber offsets stay finite.
    """
    _require_finite(a.phi, a.theta, a.t, b.phi, b.theta, b.t)
    target_dir = b.unit_vector() @ frame_to_origin(a)
    dt = b.t - a.t

    lateral = math.hypot(target_dir[1], target_dir[2])
    if lateral < 1e-14 and target_dir[0] > 0:
        # same sphere point: pure fiber motion
        return abs(dt)

    u = math.atan2(target_dir[2], target_dir[1])
    chord = float(np.linalg.norm(target_dir - np.array([1.0, 0.0, 0.0])))

    def residual(x: np.ndarray) -> np.ndarray:
        direction, log_r = _geodesic_polar(u, float(x[0]), max(float(x[1]), 0.0))
        return np.append(direction - target_dir, log_r - dt)

    x0 = np.array([math.atan2(dt, chord), math.hypot(dt, chord)])
    res = least_squares(
        residual,
        x0,
        bounds=([-math.pi / 2, 0.0], [math.pi / 2, np.inf]),
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=2000,
    )
    worst = float(np.max(np.abs(res.fun)))
    if worst > 1e-10 * max(1.0, abs(dt)):
        raise NumericError(
            "Geodesic shooting did not converge.",
            {"status": res.status, "message": res.message, "residual": worst, "x": res.x.tolist()},
        )
    logger.debug("shooting converged in %d evaluations", res.nfev)
    return float(res.x[1])
