"""Triangulated geodesic spheres in the affine model, written as Wavefront OBJ."""
from __future__ import annotations

from dataclasses import dataclass
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError, ExportError
from .geometry import FiberedPoint, GeodesicParams, frame_to_origin, from_model, geodesic_point, to_model
from .symmetry import IDENTITY, Isometry, apply_isometry, compose_isometry, orbit, space_group_4q_i_2
from .volume import BallSpec


@dataclass(frozen=True, eq=False)
class Mesh:
    name: str
    vertices: np.ndarray
    faces: np.ndarray


def _uv_faces(nu: int, nv: int) -> np.ndarray:
    # vertex 0 is the v = -pi/2 pole, then nv - 1 rings of nu, then the v = pi/2 pole
    top = 1 + (nv - 1) * nu
    faces = []
    for i in range(nu):
        j = (i + 1) % nu
        faces.append((0, 1 + j, 1 + i))
        faces.append((top, 1 + (nv - 2) * nu + i, 1 + (nv - 2) * nu + j))
    for ring in range(nv - 2):
        base, nxt = 1 + ring * nu, 1 + (ring + 1) * nu
        for i in range(nu):
            j = (i + 1) % nu
            faces.append((base + i, base + j, nxt + j))
            faces.append((base + i, nxt + j, nxt + i))
    return np.array(faces, dtype=int)


def geodesic_sphere(
    center: FiberedPoint,
    rho: float,
    resolution: int = 24,
    isometry: Isometry | None = None,
    name: str = "sphere",
) -> Mesh:
    """
    Sphere of radius rho about center, traced by the geodesics leaving the
    model point (1, 0, 0) and moved into place, then by `isometry`.
    """
    BallSpec(rho)
    if resolution < 3:
        raise DomainError("Mesh resolution must be at least 3.")
    nu, nv = 2 * resolution, resolution
    placement = compose_isometry(Isometry(frame_to_origin(center).T, 1, center.t), isometry or IDENTITY)

    altitudes = [-math.pi / 2] + [-math.pi / 2 + math.pi * k / nv for k in range(1, nv)] + [math.pi / 2]
    params = [GeodesicParams(0.0, altitudes[0], rho)]
    for v in altitudes[1:-1]:
        params.extend(GeodesicParams(-math.pi + 2 * math.pi * i / nu, v, rho) for i in range(nu))
    params.append(GeodesicParams(0.0, altitudes[-1], rho))

    vertices = np.array([
        to_model(apply_isometry(placement, from_model(geodesic_point(g)))).as_array() for g in params
    ])
    return Mesh(name, vertices, _uv_faces(nu, nv))


def orbit_spheres(
    K: FiberedPoint,
    R: float,
    q: int,
    tau: float,
    resolution: int = 24,
    fiber_window: float | None = None,
) -> list[Mesh]:
    """One sphere per orbit point of K with |t| <= fiber_window (one fiber period by default)."""
    group = space_group_4q_i_2(q, tau)
    window = fiber_window if fiber_window is not None else group.fiber_period
    return [
        geodesic_sphere(K, R, resolution, p.isometry, name=p.label)
        for p in orbit(group, K, window)
    ]


def write_obj(meshes: Sequence[Mesh], path: str | Path) -> None:
    lines = ["# geodesic spheres of S2xR in the affine model", f"# objects: {len(meshes)}"]
    offset = 1
    for mesh in meshes:
        lines.append(f"o {mesh.name}")
        lines.extend(f"v {x!r} {y!r} {z!r}" for x, y, z in mesh.vertices.tolist())
        lines.extend(f"f {a + offset} {b + offset} {c + offset}" for a, b, c in mesh.faces.tolist())
        offset += len(mesh.vertices)
    try:
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ExportError(f"Cannot write mesh file {path}: {exc}") from exc
