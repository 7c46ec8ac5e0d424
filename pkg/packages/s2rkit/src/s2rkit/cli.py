from __future__ import annotations

import argparse
from dataclasses import asdict, replace
import logging
import math
import sys
import time
from typing import Any, Callable, Sequence

from pydantic import BaseModel

from .errors import DomainError, S2RError
from .geometry import FiberedPoint
from .schema import ReproductionReportSchema, RunManifest
from .service import PackingService
from .settings import PackingSettings


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print the run manifest as JSON.")
    common.add_argument("--tol-abs", type=float, help="Absolute quadrature tolerance.")
    common.add_argument("--tol-rel", type=float, help="Relative quadrature tolerance.")
    common.add_argument("-v", "--verbose", action="count", default=0, help="Log progress to stderr (-vv for debug).")
    return common


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="s2rkit",
        description="Geodesic ball packings of S2xR under the space groups 4q.I.2.",
    )
    common = _common_options()
    subparsers = parser.add_subparsers(dest="command", required=True)

    volume = subparsers.add_parser("volume", parents=[common], help="Volume of a geodesic ball.")
    volume.add_argument("--rho", type=float, required=True, help="Ball radius, 0 <= rho < pi.")

    dist = subparsers.add_parser("distance", parents=[common], help="Distance between two points.")
    dist.add_argument("--phi", type=float, nargs=2, required=True, metavar=("A", "B"))
    dist.add_argument("--theta", type=float, nargs=2, required=True, metavar=("A", "B"))
    dist.add_argument("--t", type=float, nargs=2, default=[0.0, 0.0], metavar=("A", "B"))

    frob = subparsers.add_parser("frobenius", parents=[common], help="Solve the Frobenius congruences.")
    frob.add_argument("--q", type=int, help="Point group parameter (default: settings q).")

    orb = subparsers.add_parser("orbit", parents=[common], help="List orbit points of a kernel point.")
    orb.add_argument("--q", type=int, help="Point group parameter (default: settings q).")
    orb.add_argument("--tau", type=float, required=True, help="Glide parameter; the fiber period is 2*tau.")
    orb.add_argument("--phi", type=float, default=0.0)
    orb.add_argument("--theta", type=float, default=math.pi / 2)
    orb.add_argument("--window", type=float, help="Fiber window |t| <= window (default: one fiber period).")

    opt = subparsers.add_parser("optimize", parents=[common], help="Run a packing optimizer.")
    opt.add_argument("--mode", choices=("simply", "multiply", "tau", "fixed"), default="simply")
    opt.add_argument("--q", type=int, help="Point group parameter (default: settings q).")
    opt.add_argument("--phi", type=float, help="Kernel longitude (modes tau and fixed).")
    opt.add_argument("--theta", type=float, help="Kernel latitude (modes tau and fixed).")
    opt.add_argument("--tau", type=float, help="Glide parameter (mode fixed).")

    subparsers.add_parser("reproduce", parents=[common], help="Recompute the published q = 2 optima.")

    export = subparsers.add_parser("export-sphere", parents=[common], help="Write geodesic spheres as an OBJ mesh.")
    export.add_argument("--rho", type=float, required=True)
    export.add_argument("--phi", type=float, default=0.0)
    export.add_argument("--theta", type=float, default=0.0)
    export.add_argument("--t", type=float, default=0.0)
    export.add_argument("--resolution", type=int, default=24)
    export.add_argument("--word", default="1", help='Group word moving the sphere, e.g. "g1g3*T^1".')
    export.add_argument("--q", type=int, help="Point group parameter (default: settings q).")
    export.add_argument("--tau", type=float, help="Glide parameter, needed with --word or --orbit.")
    export.add_argument("--orbit", action="store_true", help="Export every orbit sphere within one fiber period.")
    export.add_argument("--out", required=True, help="Output .obj file.")

    return parser


def _settings(args: argparse.Namespace) -> PackingSettings:
    settings = PackingSettings()
    overrides = {}
    if args.tol_abs is not None:
        overrides["abs_tol"] = args.tol_abs
    if args.tol_rel is not None:
        overrides["rel_tol"] = args.tol_rel
    if overrides:
        settings = replace(settings, quadrature=replace(settings.quadrature, **overrides))
    if getattr(args, "q", None) is not None:
        settings = replace(settings, q=args.q)
    return settings


def _kernel(args: argparse.Namespace) -> FiberedPoint:
    if args.phi is None or args.theta is None:
        raise DomainError("--phi and --theta are required for this mode.")
    return FiberedPoint(args.phi, args.theta)


def _payload(result: Any) -> Any:
    if isinstance(result, BaseModel):
        return result.model_dump(mode="json")
    if isinstance(result, list):
        return [_payload(r) for r in result]
    return result


def _print_plain(value: Any, indent: str = "") -> None:
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)):
                print(f"{indent}{key}:")
                _print_plain(item, indent + "  ")
            else:
                print(f"{indent}{key}: {item!r}")
    elif isinstance(value, list):
        for i, item in enumerate(value):
            if isinstance(item, (dict, list)):
                print(f"{indent}- [{i}]")
                _print_plain(item, indent + "  ")
            else:
                print(f"{indent}- {item!r}")
    else:
        print(f"{indent}{value!r}")


def _print_reproduction(report: ReproductionReportSchema) -> None:
    keys = ("phi", "theta", "R", "volume", "density")
    print(f"{'row':<28}{'quantity':<10}{'computed':>22}{'published':>14}{'delta':>12}")
    for row in report.rows:
        for key in keys:
            computed, published, delta = row.computed[key], row.published[key], row.deltas[key]
            if published is None:
                continue
            print(f"{row.name:<28}{key:<10}{computed!r:>22}{published:>14.8f}{delta:>12.2e}")
        print(f"{row.name:<28}{'ok':<10}{str(row.ok):>22}")
    print(f"best multiply transitive stratum: {report.best_multiply_transitive}")
    for note in report.notes:
        print(f"note: {note}")
    print("reproduction OK" if report.ok else "reproduction MISMATCH")


def _command_volume(svc: PackingService, args: argparse.Namespace) -> tuple[Any, int]:
    return svc.volume(args.rho), 0


def _command_distance(svc: PackingService, args: argparse.Namespace) -> tuple[Any, int]:
    a = FiberedPoint(args.phi[0], args.theta[0], args.t[0])
    b = FiberedPoint(args.phi[1], args.theta[1], args.t[1])
    return svc.distance(a, b), 0


def _command_frobenius(svc: PackingService, args: argparse.Namespace) -> tuple[Any, int]:
    return svc.frobenius(svc.settings.q), 0


def _command_orbit(svc: PackingService, args: argparse.Namespace) -> tuple[Any, int]:
    window = args.window if args.window is not None else 2 * args.tau
    return svc.orbit(svc.settings.q, args.tau, FiberedPoint(args.phi, args.theta), window), 0


def _command_optimize(svc: PackingService, args: argparse.Namespace) -> tuple[Any, int]:
    if args.mode == "simply":
        return svc.optimize_simply(svc.settings.q), 0
    if args.mode == "multiply":
        return svc.optimize_multiply(svc.settings.q), 0
    if args.mode == "tau":
        return svc.optimize_tau(svc.settings.q, _kernel(args)), 0
    if args.tau is None:
        raise DomainError("--tau is required for mode fixed.")
    return svc.evaluate(svc.settings.q, _kernel(args), args.tau), 0


def _command_reproduce(svc: PackingService, args: argparse.Namespace) -> tuple[Any, int]:
    report = svc.reproduce()
    return report, 0 if report.ok else 1


def _command_export_sphere(svc: PackingService, args: argparse.Namespace) -> tuple[Any, int]:
    count = svc.export_sphere(
        args.out,
        args.rho,
        FiberedPoint(args.phi, args.theta, args.t),
        resolution=args.resolution,
        word=args.word,
        q=svc.settings.q,
        tau=args.tau,
        whole_orbit=args.orbit,
    )
    return {"out": args.out, "spheres": count}, 0


COMMANDS: dict[str, Callable[[PackingService, argparse.Namespace], tuple[Any, int]]] = {
    "volume": _command_volume,
    "distance": _command_distance,
    "frobenius": _command_frobenius,
    "orbit": _command_orbit,
    "optimize": _command_optimize,
    "reproduce": _command_reproduce,
    "export-sphere": _command_export_sphere,
}


def _configure_logging(verbosity: int) -> None:
    if verbosity <= 0:
        return
    logging.basicConfig(
        level=logging.DEBUG if verbosity > 1 else logging.INFO,
        stream=sys.stderr,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    started = time.perf_counter()
    try:
        settings = _settings(args)
        svc = PackingService(settings)
        result, code = COMMANDS[args.command](svc, args)
    except S2RError as exc:
        print(f"s2rkit {args.command}: {exc.detail}", file=sys.stderr)
        return exc.exit_code

    if args.json:
        from . import __version__

        parameters = {
            key: value
            for key, value in vars(args).items()
            if key not in ("command", "json", "verbose", "tol_abs", "tol_rel")
        }
        if "q" in parameters:
            parameters["q"] = settings.q
        manifest = RunManifest(
            command=args.command,
            parameters=parameters,
            tolerances={**asdict(settings.quadrature), **asdict(settings.tolerances)},
            version=__version__,
            duration_seconds=time.perf_counter() - started,
            results=_payload(result),
        )
        print(manifest.model_dump_json(indent=2))
    elif isinstance(result, ReproductionReportSchema):
        _print_reproduction(result)
    else:
        _print_plain(_payload(result))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
