__version__ = "0.1.0"

from .errors import DomainError, EmbeddabilityError, ExportError, NumericError, S2RError
from .geometry import FiberedPoint, ModelPoint, GeodesicParams, distance, distance_by_shooting
from .packing import (
    PackingConfig,
    PackingResult,
    density,
    max_radius,
    optimize_multiply_transitive,
    optimize_simply_transitive,
    optimize_tau,
    touching_number,
)
from .service import PackingService
from .settings import PackingSettings, QuadratureConfig, SearchSettings, Tolerances
from .symmetry import build_point_group, frobenius_solve, orbit, space_group_4q_i_2, stabilizer_order
from .volume import BallSpec, ball_volume, ball_volume_slab

__all__ = [
    "__version__",
    "BallSpec",
    "DomainError",
    "EmbeddabilityError",
    "ExportError",
    "FiberedPoint",
    "GeodesicParams",
    "ModelPoint",
    "NumericError",
    "PackingConfig",
    "PackingResult",
    "PackingService",
    "PackingSettings",
    "QuadratureConfig",
    "S2RError",
    "SearchSettings",
    "Tolerances",
    "ball_volume",
    "ball_volume_slab",
    "build_point_group",
    "density",
    "distance",
    "distance_by_shooting",
    "frobenius_solve",
    "max_radius",
    "optimize_multiply_transitive",
    "optimize_simply_transitive",
    "optimize_tau",
    "orbit",
    "space_group_4q_i_2",
    "stabilizer_order",
    "touching_number",
]
