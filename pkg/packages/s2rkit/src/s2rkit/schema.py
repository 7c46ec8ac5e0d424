from __future__ import annotations

from fractions import Fraction
from typing import Any, Literal, Optional, Sequence

from pydantic import BaseModel, Field

from .geometry import FiberedPoint
from .packing import PackingResult, StratumResult
from .symmetry import FrobeniusSolution, OrbitPoint


def _rational(x: Fraction) -> str:
    return str(x)


def _triple(parts: Sequence[Fraction]) -> list[str]:
    return [_rational(x) for x in parts]


class PointSchema(BaseModel):
    phi: float
    theta: float
    t: float = 0.0

    @classmethod
    def from_point(cls, p: FiberedPoint) -> PointSchema:
        return cls(phi=p.phi, theta=p.theta, t=p.t)

    def to_point(self) -> FiberedPoint:
        return FiberedPoint(self.phi, self.theta, self.t)


class PackingResultSchema(BaseModel):
    K: PointSchema
    R: float
    tau: float
    q: int
    stabilizer_order: int
    volume: float
    density: float
    touching_number: int
    binding_constraints: list[str]

    @classmethod
    def from_result(cls, r: PackingResult) -> PackingResultSchema:
        return cls(
            K=PointSchema.from_point(r.K),
            R=r.R,
            tau=r.tau,
            q=r.q,
            stabilizer_order=r.stabilizer_order,
            volume=r.volume,
            density=r.density,
            touching_number=r.touching_number,
            binding_constraints=list(r.binding_constraints),
        )


class StratumSchema(BaseModel):
    name: str
    kind: Literal["edge", "vertex"]
    stabilizer_order: int
    result: PackingResultSchema

    @classmethod
    def from_stratum(cls, st: StratumResult) -> StratumSchema:
        return cls(
            name=st.name,
            kind=st.kind,
            stabilizer_order=st.stabilizer_order,
            result=PackingResultSchema.from_result(st.result),
        )


class MultiplyTransitiveSchema(BaseModel):
    strata: list[StratumSchema]
    best: str


class FrobeniusClassSchema(BaseModel):
    representative: list[str]
    members: list[list[str]]
    label: Optional[str] = None


class FrobeniusReportSchema(BaseModel):
    q: int
    raw: list[list[str]]
    classes: list[FrobeniusClassSchema]

    @classmethod
    def from_solution(cls, sol: FrobeniusSolution) -> FrobeniusReportSchema:
        return cls(
            q=sol.q,
            raw=[_triple(p) for p in sol.raw],
            classes=[
                FrobeniusClassSchema(
                    representative=_triple(c.representative),
                    members=[_triple(m) for m in c.members],
                    label=c.label,
                )
                for c in sol.classes
            ],
        )


class VolumeReportSchema(BaseModel):
    rho: float
    volume: float
    volume_slab: float
    agreement: float
    abs_tol: float
    rel_tol: float


class DistanceReportSchema(BaseModel):
    a: PointSchema
    b: PointSchema
    distance: float
    distance_by_shooting: float
    agreement: float


class OrbitPointSchema(BaseModel):
    label: str
    point: PointSchema

    @classmethod
    def from_orbit_point(cls, p: OrbitPoint) -> OrbitPointSchema:
        return cls(label=p.label, point=PointSchema.from_point(p.point))


class ReproductionRowSchema(BaseModel):
    name: str
    computed: dict[str, Optional[float]]
    published: dict[str, Optional[float]]
    deltas: dict[str, Optional[float]]
    ok: bool


class ReproductionReportSchema(BaseModel):
    rows: list[ReproductionRowSchema]
    best_multiply_transitive: str
    ok: bool
    notes: list[str] = Field(default_factory=list)


class RunManifest(BaseModel):
    command: str
    parameters: dict[str, Any]
    tolerances: dict[str, float]
    version: str
    duration_seconds: float
    results: Any


# request bodies for the HTTP surface

class DistanceInSchema(BaseModel):
    a: PointSchema
    b: PointSchema


class OrbitInSchema(BaseModel):
    q: int = 2
    tau: float
    K: PointSchema
    fiber_window: float


class TauInSchema(BaseModel):
    q: int = 2
    K: PointSchema
