"""Volumes of geodesic balls, spherical base areas and S²×ℝ prisms."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from numpy.typing import ArrayLike
from scipy import integrate

from .errors import DomainError, EmbeddabilityError, NumericError
from .settings import QuadratureConfig


@dataclass(frozen=True)
class BallSpec:
    rho: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.rho) or self.rho < 0:
            raise DomainError(f"Ball radius must be a non-negative number, got {self.rho!r}.")
        if self.rho >= math.pi:
            raise EmbeddabilityError(self.rho)


def _quad(func, a: float, b: float, q: QuadratureConfig) -> float:
    value, err = integrate.quad(func, a, b, epsabs=q.abs_tol, epsrel=q.rel_tol, limit=q.max_depth)
    if err > max(q.abs_tol, q.rel_tol * abs(value)) * 100:
        raise NumericError(
            "Adaptive quadrature did not reach the requested tolerance.",
            {"value": value, "error_estimate": err, "interval": (a, b)},
        )
    return value


def ball_volume(b: BallSpec, q: QuadratureConfig | None = None) -> float:
    """
    Volume of B(rho) as 2*pi * int_0^rho int_{-pi/2}^{pi/2} tau*sin(tau*cos v) dv dtau.

    The integrand is non-negative for tau < pi, so the absolute value of the
    general formula is dropped.
    """
    q = q or QuadratureConfig()
    if b.rho == 0:
        return 0.0

    def shell(tau: float) -> float:
        return _quad(lambda v: tau * math.sin(tau * math.cos(v)), -math.pi / 2, math.pi / 2, q)

    return 2 * math.pi * _quad(shell, 0.0, b.rho, q)


def ball_volume_slab(b: BallSpec, q: QuadratureConfig | None = None) -> float:
    """
    Volume of B(rho) sliced along the fiber.

    The slice at height t is a spherical cap of angular radius sqrt(rho² - t²),
    area 2*pi*(1 - cos s) = 4*pi*sin²(s/2).
    """
    q = q or QuadratureConfig()
    if b.rho == 0:
        return 0.0
    rho2 = b.rho * b.rho

    def cap(t: float) -> float:
        s = math.sqrt(max(rho2 - t * t, 0.0))
        return 4 * math.pi * math.sin(s / 2) ** 2

    return 2 * _quad(cap, 0.0, b.rho, q)


@lru_cache(maxsize=8)
def _gauss_legendre(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(2 * nodes)
    # the integrand is even; keep the positive half
    keep = x > 0
    return x[keep], 2 * w[keep]


def ball_volumes(rhos: ArrayLike, nodes: int = 48) -> np.ndarray:
    """
    Vectorized slab volume by fixed Gauss-Legendre quadrature.

    With t = rho*x the slab integrand is an entire function of x, so a few
    dozen nodes are exact to rounding for every embedded radius.
    """
    r = np.asarray(rhos, dtype=float)
    if np.any(r < 0) or np.any(r >= math.pi):
        raise EmbeddabilityError(float(r.max() if np.any(r >= math.pi) else r.min()))
    x, w = _gauss_legendre(nodes)
    s = r[..., None] * np.sqrt(1.0 - x * x)
    caps = 4 * math.pi * np.sin(s / 2) ** 2
    return r * (caps @ w)


def spherical_triangle_area(alpha: float, beta: float, gamma: float) -> float:
    for angle in (alpha, beta, gamma):
        if not 0 < angle < math.pi:
            raise DomainError(f"Spherical triangle angles must lie in (0, pi), got {angle!r}.")
    excess = alpha + beta + gamma - math.pi
    if excess <= 0:
        raise DomainError("Spherical triangle angles must have positive excess over pi.")
    return excess


def spherical_digon_area(alpha: float) -> float:
    if not 0 < alpha <= math.pi:
        raise DomainError(f"Digon angle must lie in (0, pi], got {alpha!r}.")
    return 2 * alpha


def prism_volume(base_area: float, height: float) -> float:
    if base_area <= 0 or height <= 0:
        raise DomainError("Prism base area and height must be positive.")
    return base_area * height


def fundamental_triangle_area(q: int) -> float:
    """Area of the (pi/q, pi/2, pi/2) triangle of the point group."""
    return spherical_triangle_area(math.pi / q, math.pi / 2, math.pi / 2)
