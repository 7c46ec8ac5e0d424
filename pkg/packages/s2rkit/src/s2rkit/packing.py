"""
Ball packings generated by the space groups 4q.I.2.

The packing radius of a kernel point K is half the distance to its nearest
orbit point outside the stabilizer. The density is the ball volume over the
stabilizer-weighted volume of the fundamental prism,
Vol(B(R)) / (|Gamma_K| * area(triangle) * 2*tau).

Optimizers work on fiber constraint families: the orbit of K under the
unit-glide group, collapsed so that for every glide tau each family sits at
distance sqrt(sigma² + (m*tau)²). Breakpoints between families are then
known in closed form.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import heapq
import logging
import math
from typing import Literal, Optional, Sequence

import numpy as np
from scipy.optimize import least_squares, minimize, minimize_scalar

from .errors import DomainError, EmbeddabilityError
from .geometry import FiberedPoint, distance, normalize_point, sphere_angle
from .settings import PackingSettings, QuadratureConfig, SearchSettings, Tolerances
from .symmetry import (
    OrbitPoint,
    SpaceGroup,
    orbit,
    space_group_4q_i_2,
    stabilizer_order,
    triangle_vertices,
)
from .volume import BallSpec, ball_volume, ball_volumes, fundamental_triangle_area

logger = logging.getLogger(__name__)

_EDGE = 1e-12
VERTEX_NAMES = ("A1", "A2", "A3")


def in_closed_triangle(K: FiberedPoint, q: int, tol: float = 1e-9) -> bool:
    if K.theta >= math.pi / 2 - tol:
        return True
    return -tol <= K.theta and -tol <= K.phi <= math.pi / q + tol


@dataclass(frozen=True)
class PackingConfig:
    K: FiberedPoint
    tau: float
    q: int = 2

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise DomainError(f"Glide parameter tau must be positive, got {self.tau!r}.")
        K = normalize_point(self.K)
        if abs(K.t) > _EDGE:
            raise DomainError("Kernel point must lie in the base plane t = 0.")
        if not in_closed_triangle(K, self.q):
            raise DomainError(f"Kernel point {K} is outside the fundamental triangle for q={self.q}.")
        object.__setattr__(self, "K", K)

    @cached_property
    def group(self) -> SpaceGroup:
        return space_group_4q_i_2(self.q, self.tau)

    @property
    def fiber_period(self) -> float:
        return 2 * self.tau

    @property
    def fiber_window(self) -> float:
        return 2 * self.fiber_period + 2 * math.pi


@dataclass(frozen=True)
class PackingResult:
    K: FiberedPoint
    R: float
    tau: float
    q: int
    stabilizer_order: int
    volume: float
    density: float
    touching_number: int
    binding_constraints: tuple[str, ...]


@dataclass(frozen=True)
class _Scan:
    neighbors: tuple[tuple[float, OrbitPoint], ...]

    @property
    def R(self) -> float:
        return self.neighbors[0][0] / 2

    def within(self, gap: float) -> list[OrbitPoint]:
        limit = 2 * self.R + gap
        return [p for d, p in self.neighbors if d <= limit]


def _scan(c: PackingConfig, tol: Tolerances) -> _Scan:
    points = orbit(c.group, c.K, c.fiber_window, tol.dedup)
    ranked = sorted(
        ((distance(c.K, p.point), p) for p in points),
        key=lambda item: (item[0], item[1].label),
    )
    neighbors = tuple((d, p) for d, p in ranked if d > tol.dedup)
    if not neighbors:
        raise DomainError("Orbit window contains no neighbor of the kernel point.")
    return _Scan(neighbors)


def max_radius(c: PackingConfig, tol: Tolerances | None = None) -> tuple[float, tuple[str, ...]]:
    tol = tol or Tolerances()
    scan = _scan(c, tol)
    return scan.R, tuple(p.label for p in scan.within(tol.binding))


def touching_number(c: PackingConfig, tol: Tolerances | None = None) -> int:
    tol = tol or Tolerances()
    return len(_scan(c, tol).within(tol.touching))


def density(
    c: PackingConfig,
    quadrature: QuadratureConfig | None = None,
    tol: Tolerances | None = None,
) -> PackingResult:
    tol = tol or Tolerances()
    scan = _scan(c, tol)
    R = scan.R
    if R >= math.pi:
        raise EmbeddabilityError(R)
    stab = stabilizer_order(c.group, c.K, tol.dedup)
    volume = ball_volume(BallSpec(R), quadrature)
    cell = stab * fundamental_triangle_area(c.q) * c.fiber_period
    return PackingResult(
        K=c.K,
        R=R,
        tau=c.tau,
        q=c.q,
        stabilizer_order=stab,
        volume=volume,
        density=volume / cell,
        touching_number=len(scan.within(tol.touching)),
        binding_constraints=tuple(p.label for p in scan.within(tol.binding)),
    )


@dataclass(frozen=True, eq=False)
class FiberConstraint:
    label: str
    S: np.ndarray
    m: int
    multiplicity: int

    def sigma(self, v: np.ndarray) -> float:
        return sphere_angle(v, v @ self.S)

    def distance(self, v: np.ndarray, tau: float) -> float:
        return math.hypot(self.sigma(v), self.m * tau)


def fiber_constraints(q: int, K: FiberedPoint, tol: Tolerances | None = None) -> list[FiberConstraint]:
    """
    Orbit of K (t = 0) under the unit-glide group, one family per sphere image.

    Only the smallest fiber multiple of each sphere image can be nearest, so
    larger ones are dropped.
    """
    tol = tol or Tolerances()
    unit = space_group_4q_i_2(q, 1.0)
    v = K.unit_vector()
    families: dict[tuple[float, ...], list[OrbitPoint]] = {}
    for p in orbit(unit, K, 2.0, tol.dedup):
        m = round(p.point.t)
        w = p.point.unit_vector()
        if m == 0 and np.linalg.norm(w - v) <= tol.dedup:
            continue
        key = tuple(round(float(c), 9) + 0.0 for c in w)
        families.setdefault(key, []).append(p)

    out = []
    for members in families.values():
        m_min = min(abs(round(p.point.t)) for p in members)
        nearest = [p for p in members if abs(round(p.point.t)) == m_min]
        nearest.sort(key=lambda p: (len(p.label), p.label))
        out.append(FiberConstraint(nearest[0].label, nearest[0].isometry.S, m_min, len(nearest)))
    return out


class TauProfile:
    """Packing radius and density of a fixed kernel point as functions of tau."""

    def __init__(self, q: int, K: FiberedPoint, search: SearchSettings, tol: Tolerances):
        self.q = q
        self.K = K
        self.search = search
        self.constraints = fiber_constraints(q, K, tol)
        v = K.unit_vector()
        self.sigma = np.array([c.sigma(v) for c in self.constraints])
        self.m = np.array([c.m for c in self.constraints], dtype=float)
        self.stabilizer = stabilizer_order(space_group_4q_i_2(q, 1.0), K, tol.dedup)
        self.area = fundamental_triangle_area(q)

    def radius(self, tau: np.ndarray | float) -> np.ndarray:
        t = np.atleast_1d(np.asarray(tau, dtype=float))
        d = np.hypot(self.sigma[None, :], self.m[None, :] * t[:, None])
        return 0.5 * d.min(axis=1)

    def active(self, tau: float) -> int:
        return int(np.argmin(np.hypot(self.sigma, self.m * tau)))

    def density(self, tau: np.ndarray | float) -> np.ndarray:
        t = np.atleast_1d(np.asarray(tau, dtype=float))
        R = self.radius(t)
        ok = R < math.pi - 1e-12
        out = np.zeros_like(t)
        if np.any(ok):
            out[ok] = ball_volumes(R[ok], self.search.gauss_nodes) / (self.stabilizer * self.area * 2 * t[ok])
        return out

    def knots(self) -> np.ndarray:
        s2, m2 = self.sigma**2, self.m**2
        cand = [self.search.tau_max]
        n = len(self.sigma)
        for i in range(n):
            if self.m[i] > 0:
                # the family alone would reach the embeddability bound here
                reach = 4 * math.pi**2 - s2[i]
                if reach > 0:
                    cand.append(math.sqrt(reach) / self.m[i])
            for j in range(i + 1, n):
                dm = m2[i] - m2[j]
                if dm != 0:
                    x = (s2[j] - s2[i]) / dm
                    if x > 0:
                        cand.append(math.sqrt(x))
        knots = np.unique(np.array(cand))
        return knots[(knots > 0) & (knots <= self.search.tau_max)]

    def best(self, refine: bool = True) -> tuple[float, float]:
        """(tau*, density) maximizing density; breakpoints are evaluated exactly."""
        knots = self.knots()
        grid = np.concatenate([[knots[0] * 1e-3], knots])
        values = self.density(grid)
        i = int(np.argmax(values))
        best_tau, best_val = float(grid[i]), float(values[i])
        if not refine:
            return best_tau, best_val

        # one smooth piece per run of equal active family
        pieces: list[tuple[float, float, int]] = []
        for a, b in zip(grid[:-1], grid[1:]):
            fam = self.active(0.5 * (a + b))
            if pieces and pieces[-1][2] == fam:
                pieces[-1] = (pieces[-1][0], float(b), fam)
            else:
                pieces.append((float(a), float(b), fam))

        for a, b, fam in pieces:
            if self.m[fam] == 0:
                # constant radius on this piece, density decreases in tau
                continue
            res = minimize_scalar(
                lambda x: -float(self.density(x)[0]),
                bounds=(a, b),
                method="bounded",
                options={"xatol": self.search.scalar_xatol},
            )
            if -res.fun > best_val:
                best_tau, best_val = float(res.x), float(-res.fun)
        return best_tau, best_val


def _settings(settings: PackingSettings | None) -> PackingSettings:
    return settings or PackingSettings()


def optimize_tau(
    q: int, K: FiberedPoint, settings: PackingSettings | None = None
) -> tuple[float, PackingResult]:
    s = _settings(settings)
    K = PackingConfig(K, 1.0, q).K
    profile = TauProfile(q, K, s.search, s.tolerances)
    tau, _ = profile.best(refine=True)
    result = density(PackingConfig(K, tau, q), s.quadrature, s.tolerances)
    logger.debug("optimize_tau K=%s -> tau=%.12g density=%.12g", K, tau, result.density)
    return tau, result


def _kernel(phi: float, theta: float) -> FiberedPoint:
    return FiberedPoint(phi, theta, 0.0)


def _simply_transitive_value(q: int, x: Sequence[float], s: PackingSettings, refine: bool) -> float:
    phi, theta = float(x[0]), abs(float(x[1]))
    if not (0.0 < phi < math.pi / q and theta < math.pi / 2):
        return 0.0
    return TauProfile(q, _kernel(phi, theta), s.search, s.tolerances).best(refine)[1]


def _polish(q: int, K: FiberedPoint, s: PackingSettings) -> Optional[FiberedPoint]:
    """Solve the binding families as equalities in (phi, theta, tau, R)."""
    profile = TauProfile(q, K, s.search, s.tolerances)
    tau, _ = profile.best(refine=True)
    R = float(profile.radius(tau)[0])
    v = K.unit_vector()
    binding = [c for c in profile.constraints if abs(c.distance(v, tau) - 2 * R) <= 1e-5 * (1 + R)]
    if len(binding) < 4:
        return None

    def residual(x: np.ndarray) -> np.ndarray:
        w = _kernel(x[0], x[1]).unit_vector()
        return np.array([c.distance(w, x[2]) - 2 * x[3] for c in binding])

    sol = least_squares(residual, [K.phi, K.theta, tau, R], xtol=1e-15, ftol=1e-15, gtol=1e-15)
    if float(np.max(np.abs(sol.fun))) > 1e-12:
        logger.debug("polish rejected: residual %.3g", float(np.max(np.abs(sol.fun))))
        return None
    polished = _kernel(float(sol.x[0]), abs(float(sol.x[1])))
    if not polish_is_feasible(profile.constraints, polished, float(sol.x[2]), float(sol.x[3]), s.tolerances):
        logger.debug("polish rejected: a non-binding family is closer than 2R")
        return None
    return polished


def polish_is_feasible(
    constraints: Sequence[FiberConstraint], K: FiberedPoint, tau: float, R: float, tol: Tolerances
) -> bool:
    """Every constraint family keeps distance at least 2R from K, up to the feasibility tolerance."""
    w = K.unit_vector()
    return all(c.distance(w, tau) >= 2 * R - tol.feasibility for c in constraints)


def optimize_simply_transitive(q: int = 2, settings: PackingSettings | None = None) -> PackingResult:
    """Densest packing with trivial stabilizer: grid, Nelder-Mead, then active-set polish."""
    s = _settings(settings)
    if q < 2:
        raise DomainError(f"Point group parameter q must be at least 2, got {q}.")
    n = s.search.grid_size
    h_phi, h_theta = math.pi / q / n, math.pi / 2 / n

    scored = []
    for i in range(n):
        for j in range(n):
            x = ((i + 0.5) * h_phi, j * h_theta)
            scored.append((_simply_transitive_value(q, x, s, refine=False), x))
    seeds = heapq.nlargest(s.search.refine_seeds, scored)
    logger.info("coarse grid %dx%d best density %.8f at %s", n, n, seeds[0][0], seeds[0][1])

    best_val, best_x = -1.0, seeds[0][1]
    for _, x0 in seeds:
        simplex = np.array([x0, (x0[0] + h_phi, x0[1]), (x0[0], x0[1] + h_theta)])
        res = minimize(
            lambda x: -_simply_transitive_value(q, x, s, refine=True),
            np.array(x0),
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "xatol": s.search.nm_xatol,
                "fatol": s.search.nm_fatol,
                "maxiter": s.search.nm_maxiter,
            },
        )
        if -res.fun > best_val:
            best_val, best_x = float(-res.fun), (float(res.x[0]), abs(float(res.x[1])))
    logger.info("Nelder-Mead best density %.10f at %s", best_val, best_x)

    K = _kernel(*best_x)
    polished = _polish(q, K, s)
    if polished is not None:
        value = _simply_transitive_value(q, (polished.phi, polished.theta), s, refine=True)
        if value >= best_val - 1e-12:
            logger.info("polish accepted: density %.12f -> %.12f", best_val, value)
            K = polished
    return optimize_tau(q, K, s)[1]


@dataclass(frozen=True)
class StratumResult:
    name: str
    kind: Literal["edge", "vertex"]
    stabilizer_order: int
    result: PackingResult


@dataclass(frozen=True)
class MultiplyTransitiveOutcome:
    strata: tuple[StratumResult, ...]

    @property
    def best(self) -> StratumResult:
        return max(self.strata, key=lambda st: st.result.density)

    def stratum(self, name: str) -> StratumResult:
        for st in self.strata:
            if st.name == name:
                return st
        raise KeyError(name)


def _slerp(a: np.ndarray, b: np.ndarray, s: float) -> FiberedPoint:
    omega = sphere_angle(a, b)
    w = (math.sin((1 - s) * omega) * a + math.sin(s * omega) * b) / math.sin(omega)
    return FiberedPoint.from_unit_vector(w / np.linalg.norm(w))


def _edge_search(q: int, a: np.ndarray, b: np.ndarray, edge_stab: int, s: PackingSettings) -> FiberedPoint:
    unit = space_group_4q_i_2(q, 1.0)
    samples = np.linspace(0.0, 1.0, s.search.edge_samples)

    def value(x: float) -> float:
        K = _slerp(a, b, x)
        if stabilizer_order(unit, K, s.tolerances.dedup) != edge_stab:
            return -1.0
        return TauProfile(q, K, s.search, s.tolerances).best(refine=True)[1]

    values = [value(x) for x in samples]
    i = int(np.argmax(values))
    best_x, best_val = float(samples[i]), values[i]
    lo, hi = samples[max(i - 1, 0)], samples[min(i + 1, len(samples) - 1)]
    res = minimize_scalar(lambda x: -value(x), bounds=(lo, hi), method="bounded",
                          options={"xatol": s.search.scalar_xatol})
    if -res.fun > best_val:
        best_x = float(res.x)
    return _slerp(a, b, best_x)


def optimize_multiply_transitive(q: int = 2, settings: PackingSettings | None = None) -> MultiplyTransitiveOutcome:
    """Best packing on every side and vertex of the fundamental triangle with nontrivial stabilizer."""
    s = _settings(settings)
    if q < 2:
        raise DomainError(f"Point group parameter q must be at least 2, got {q}.")
    unit = space_group_4q_i_2(q, 1.0)
    vertices = dict(zip(VERTEX_NAMES, triangle_vertices(q)))
    strata: list[StratumResult] = []

    for first, second in (("A1", "A2"), ("A2", "A3"), ("A1", "A3")):
        a, b = vertices[first].unit_vector(), vertices[second].unit_vector()
        stab = stabilizer_order(unit, _slerp(a, b, 0.5), s.tolerances.dedup)
        if stab == 1:
            logger.info("side %s%s has trivial stabilizer; it belongs to the simply transitive search", first, second)
            continue
        K = _edge_search(q, a, b, stab, s)
        _, result = optimize_tau(q, K, s)
        strata.append(StratumResult(f"edge-{first}{second}", "edge", stab, result))

    for name, K in vertices.items():
        _, result = optimize_tau(q, K, s)
        strata.append(StratumResult(f"vertex-{name}", "vertex", result.stabilizer_order, result))

    outcome = MultiplyTransitiveOutcome(tuple(strata))
    logger.info("best multiply transitive stratum %s density %.10f", outcome.best.name, outcome.best.result.density)
    return outcome
