from dataclasses import dataclass, field
import math

from .errors import DomainError


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    # QUADPACK subinterval limit
    max_depth: int = 200

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("Quadrature tolerances must be positive.")
        if self.max_depth < 1:
            raise DomainError("Quadrature max_depth must be at least 1.")


@dataclass(frozen=True)
class SearchSettings:
    grid_size: int = 64
    refine_seeds: int = 4

    nm_xatol: float = 1e-11
    nm_fatol: float = 1e-15
    nm_maxiter: int = 4000

    scalar_xatol: float = 1e-13
    edge_samples: int = 129
    gauss_nodes: int = 48

    tau_max: float = 4 * math.pi


@dataclass(frozen=True)
class Tolerances:
    dedup: float = 1e-10
    binding: float = 1e-9
    touching: float = 1e-7
    feasibility: float = 1e-9
    reproduction: float = 1e-6


@dataclass(frozen=True)
class PackingSettings:
    q: int = 2
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    search: SearchSettings = field(default_factory=SearchSettings)
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self) -> None:
        if self.q < 2:
            raise DomainError(f"Point group parameter q must be at least 2, got {self.q}.")
