from __future__ import annotations

from typing import Callable, TypeVar

from fastapi import APIRouter, Depends, HTTPException, Query, status

from ..errors import DomainError, NumericError, S2RError
from ..schema import (
    DistanceInSchema,
    DistanceReportSchema,
    FrobeniusReportSchema,
    OrbitInSchema,
    OrbitPointSchema,
    PackingResultSchema,
    ReproductionReportSchema,
    TauInSchema,
    VolumeReportSchema,
)
from ..service import PackingService
from ..settings import PackingSettings

T = TypeVar("T")


def _run(call: Callable[[], T]) -> T:
    try:
        return call()
    except DomainError as exc:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=exc.detail) from exc
    except NumericError as exc:
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail={"message": exc.detail, "diagnostics": {k: repr(v) for k, v in exc.diagnostics.items()}},
        ) from exc
    except S2RError as exc:
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=exc.detail) from exc


def build_packing_router(*, settings: PackingSettings | None = None) -> APIRouter:
    """
    Read-only packing queries over HTTP.

    Every handler returns the same schema the CLI prints with --json.
    """
    router = APIRouter()
    settings = settings or PackingSettings()

    def _svc() -> PackingService:
        return PackingService(settings)

    @router.get("/volume", response_model=VolumeReportSchema)
    def volume(rho: float = Query(...), svc: PackingService = Depends(_svc)):
        return _run(lambda: svc.volume(rho))

    @router.post("/distance", response_model=DistanceReportSchema)
    def distance(data: DistanceInSchema, svc: PackingService = Depends(_svc)):
        return _run(lambda: svc.distance(data.a.to_point(), data.b.to_point()))

    @router.get("/frobenius", response_model=FrobeniusReportSchema)
    def frobenius(q: int = Query(2), svc: PackingService = Depends(_svc)):
        return _run(lambda: svc.frobenius(q))

    @router.post("/orbit", response_model=list[OrbitPointSchema])
    def orbit(data: OrbitInSchema, svc: PackingService = Depends(_svc)):
        return _run(lambda: svc.orbit(data.q, data.tau, data.K.to_point(), data.fiber_window))

    @router.post("/optimize/tau", response_model=PackingResultSchema)
    def optimize_tau(data: TauInSchema, svc: PackingService = Depends(_svc)):
        return _run(lambda: svc.optimize_tau(data.q, data.K.to_point()))

    @router.get("/reproduce", response_model=ReproductionReportSchema)
    def reproduce(svc: PackingService = Depends(_svc)):
        return _run(svc.reproduce)

    return router
