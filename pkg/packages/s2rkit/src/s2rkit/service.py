from __future__ import annotations

from dataclasses import dataclass
import logging
import math
from pathlib import Path
from typing import Optional

from .errors import DomainError
from .geometry import FiberedPoint, distance, distance_by_shooting, normalize_point
from .mesh import geodesic_sphere, orbit_spheres, write_obj
from .packing import (
    PackingConfig,
    PackingResult,
    density,
    optimize_multiply_transitive,
    optimize_simply_transitive,
    optimize_tau,
)
from .schema import (
    DistanceReportSchema,
    FrobeniusReportSchema,
    MultiplyTransitiveSchema,
    OrbitPointSchema,
    PackingResultSchema,
    PointSchema,
    ReproductionReportSchema,
    ReproductionRowSchema,
    StratumSchema,
    VolumeReportSchema,
)
from .settings import PackingSettings
from .symmetry import frobenius_solve, orbit, space_group_4q_i_2
from .volume import BallSpec, ball_volume, ball_volume_slab

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PublishedRow:
    name: str
    phi: Optional[float]
    theta: float
    R: float
    volume: float
    density: float


# published q = 2 optima; phi is meaningless at the pole
PUBLISHED_Q2 = (
    PublishedRow("simply-transitive-opt", math.pi / 4, 0.55737781, 0.64360446, 1.08624788, 0.53722971),
    PublishedRow("simply-transitive-equator", math.pi / 4, 0.0, math.pi / 4, 1.94735865, 0.39461737),
    PublishedRow("edge-endpoint-A2", math.pi / 2, 0.0, math.pi / 2, 13.74539472, 0.69634983),
    PublishedRow("vertex-A3", None, math.pi / 2, 1.81379936, 20.00238509, 0.87757183),
)

ABSTRACT_DENSITY = 0.87499429

REFERENCE_DENSITIES = {
    "Nil geodesic balls": 0.78085,
    "H2xR geodesic balls": 0.60726,
    "S2xR earlier lattice-like packing": 0.82445,
    "S2xR earlier fibre-type packing": 0.80408,
    "Euclidean (Kepler)": math.pi / math.sqrt(18),
    "H3 horoballs": 0.85327613,
}


def _row(published: PublishedRow, result: PackingResult, tol: float) -> ReproductionRowSchema:
    computed = {
        "phi": None if published.phi is None else result.K.phi,
        "theta": result.K.theta,
        "R": result.R,
        "volume": result.volume,
        "density": result.density,
    }
    reference = {
        "phi": published.phi,
        "theta": published.theta,
        "R": published.R,
        "volume": published.volume,
        "density": published.density,
    }
    deltas = {
        key: None if reference[key] is None else abs(computed[key] - reference[key])  # type: ignore[operator]
        for key in computed
    }
    ok = all(d is None or d <= tol for d in deltas.values())
    return ReproductionRowSchema(name=published.name, computed=computed, published=reference, deltas=deltas, ok=ok)


class PackingService:
    """Entry point shared by the command line and the HTTP router."""

    def __init__(self, settings: PackingSettings | None = None):
        self.settings = settings or PackingSettings()

    def volume(self, rho: float) -> VolumeReportSchema:
        ball = BallSpec(rho)
        quad = self.settings.quadrature
        v = ball_volume(ball, quad)
        slab = ball_volume_slab(ball, quad)
        return VolumeReportSchema(
            rho=rho,
            volume=v,
            volume_slab=slab,
            agreement=abs(v - slab),
            abs_tol=quad.abs_tol,
            rel_tol=quad.rel_tol,
        )

    def distance(self, a: FiberedPoint, b: FiberedPoint) -> DistanceReportSchema:
        a, b = normalize_point(a), normalize_point(b)
        d = distance(a, b)
        shot = distance_by_shooting(a, b)
        return DistanceReportSchema(
            a=PointSchema.from_point(a),
            b=PointSchema.from_point(b),
            distance=d,
            distance_by_shooting=shot,
            agreement=abs(d - shot),
        )

    def frobenius(self, q: int) -> FrobeniusReportSchema:
        return FrobeniusReportSchema.from_solution(frobenius_solve(q))

    def orbit(self, q: int, tau: float, K: FiberedPoint, fiber_window: float) -> list[OrbitPointSchema]:
        group = space_group_4q_i_2(q, tau)
        points = orbit(group, normalize_point(K), fiber_window, self.settings.tolerances.dedup)
        return [OrbitPointSchema.from_orbit_point(p) for p in points]

    def evaluate(self, q: int, K: FiberedPoint, tau: float) -> PackingResultSchema:
        result = density(PackingConfig(K, tau, q), self.settings.quadrature, self.settings.tolerances)
        return PackingResultSchema.from_result(result)

    def optimize_tau(self, q: int, K: FiberedPoint) -> PackingResultSchema:
        _, result = optimize_tau(q, K, self.settings)
        return PackingResultSchema.from_result(result)

    def optimize_simply(self, q: int) -> PackingResultSchema:
        return PackingResultSchema.from_result(optimize_simply_transitive(q, self.settings))

    def optimize_multiply(self, q: int) -> MultiplyTransitiveSchema:
        outcome = optimize_multiply_transitive(q, self.settings)
        return MultiplyTransitiveSchema(
            strata=[StratumSchema.from_stratum(st) for st in outcome.strata],
            best=outcome.best.name,
        )

    def reproduce(self) -> ReproductionReportSchema:
        """Recompute the q = 2 optima and compare them with the published values."""
        s = self.settings
        tol = s.tolerances.reproduction
        simply = optimize_simply_transitive(2, s)
        equator = density(PackingConfig(FiberedPoint(math.pi / 4, 0.0), math.pi / 2, 2), s.quadrature, s.tolerances)
        multiply = optimize_multiply_transitive(2, s)
        computed = {
            "simply-transitive-opt": simply,
            "simply-transitive-equator": equator,
            "edge-endpoint-A2": multiply.stratum("edge-A2A3").result,
            "vertex-A3": multiply.stratum("vertex-A3").result,
        }
        rows = [_row(p, computed[p.name], tol) for p in PUBLISHED_Q2]

        densities = [computed[name].density for name in (
            "vertex-A3", "edge-endpoint-A2", "simply-transitive-opt", "simply-transitive-equator"
        )]
        ordered = all(a > b for a, b in zip(densities, densities[1:]))
        best = multiply.best.name
        notes = [
            f"A second published figure {ABSTRACT_DENSITY} for vertex-A3 disagrees with 0.87757183; rows compare against 0.87757183.",
        ]
        notes += [f"reference density {name}: {value!r}" for name, value in REFERENCE_DENSITIES.items()]
        ok = all(r.ok for r in rows) and ordered and best == "vertex-A3"
        if not ok:
            logger.warning("reproduction mismatch: ordered=%s best=%s", ordered, best)
        return ReproductionReportSchema(rows=rows, best_multiply_transitive=best, ok=ok, notes=notes)

    def export_sphere(
        self,
        out: str | Path,
        rho: float,
        center: FiberedPoint,
        resolution: int = 24,
        word: str = "1",
        q: int = 2,
        tau: float | None = None,
        whole_orbit: bool = False,
    ) -> int:
        """Write one sphere (moved by `word`) or the whole orbit of `center`; returns the sphere count."""
        center = normalize_point(center)
        if tau is None:
            if whole_orbit or word != "1":
                raise DomainError("A glide parameter tau is required for group words and orbit export.")
            meshes = [geodesic_sphere(center, rho, resolution, name=word)]
        elif whole_orbit:
            meshes = orbit_spheres(center, rho, q, tau, resolution)
        else:
            isometry = space_group_4q_i_2(q, tau).isometry_for(word)
            meshes = [geodesic_sphere(center, rho, resolution, isometry, name=word)]
        write_obj(meshes, out)
        logger.info("wrote %d sphere(s) to %s", len(meshes), out)
        return len(meshes)
