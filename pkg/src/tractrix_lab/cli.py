"""Command-line surface: curve specs in, CSV/JSON reports and SVG figures out.

Exit codes: 0 success, 2 validation failure (bad flags, bad curve, violated
precondition), 3 numerical-residual failure (fit or scan did not converge).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from ._io import atomic_write_text, fmt17
from .dynamics import (
    BikeParams,
    ConfigLoop,
    integrate_steering,
    loop_identity,
    random_config_loop,
    rear_track,
    area_between_tracks,
)
from .errors import ResidualError, ValidationError
from .geom import FrontTrack, Geometry, make_curve
from .menzin import menzin_verify
from .moebius import monodromy
from .noneuclid import develop_hyperbolic, geodesic_circle, stargazing_residual
from .planimeter import error_scan, measure
from .svg import Dots, Polyline, RefCircle, render

_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


def _apply_thread_cap() -> None:
    cap = os.environ.get("TRACTRIX_LAB_THREADS")
    if cap:
        for var in _THREAD_VARS:
            os.environ.setdefault(var, cap)


def _emit(text: str, path: str | None) -> None:
    if path:
        atomic_write_text(path, text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _geometry(name: str) -> Geometry:
    try:
        return Geometry(name)
    except ValueError:
        raise ValidationError(f"unknown geometry {name!r}") from None


def _load_curve(path: str, geometry: str | None = None) -> FrontTrack:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read curve spec {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"curve spec {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ValidationError("curve spec must be a JSON object")
    if data.get("kind") == "geodesic-circle":
        geo = _geometry(data.get("geometry", geometry or "spherical"))
        return geodesic_circle(float(data["rho"]), geo,
                               traversals=int(data.get("traversals", 1)))
    track = make_curve(data)
    if geometry and geometry != Geometry.EUCLIDEAN.value:
        track = track.reinterpreted(_geometry(geometry))
    return track


def _params(track: FrontTrack, ell: float, steps: int) -> BikeParams:
    return BikeParams(ell=ell, geometry=track.geometry, steps_per_traversal=steps)


# -- subcommands -------------------------------------------------------------


def _cmd_trace(args) -> int:
    track = _load_curve(args.input)
    if track.geometry is not Geometry.EUCLIDEAN:
        raise ValidationError("trace reconstructs the planar rear path; "
                              "curved geometries report through monodromy/develop")
    sol = integrate_steering(track, _params(track, args.ell, args.steps), args.alpha0)
    rt = rear_track(sol)
    area = area_between_tracks(sol)
    summary = {
        "final_alpha": sol.final_alpha,
        "signed_rear_length": rt.signed_length,
        "cusps": len(rt.cusp_times),
        "area_between_tracks": area,
        "rear_closed": rt.closed,
    }
    print(json.dumps(summary, indent=2))
    if args.csv:
        lines = ["t,x,y,alpha,cos_alpha"]
        for ti, (x, y), al in zip(sol.t, rt.points, sol.alpha):
            lines.append(",".join(fmt17(v) for v in (ti, x, y, al, math.cos(al))))
        _emit("\n".join(lines) + "\n", args.csv)
    if args.svg:
        _, front = track.sample(2048)
        if len(rt.cusp_times):
            idx = np.clip(np.searchsorted(sol.t, rt.cusp_times), 0, len(sol.t) - 1)
            cusp_pts = rt.points[idx]
        else:
            cusp_pts = np.empty((0, 2))
        doc = render([
            Polyline(front, color="#1f6fb4", label="front"),
            Polyline(rt.points, color="#d0443a", label="rear"),
            Dots(cusp_pts, color="#222222"),
        ], title=f"rear track at ell={args.ell:g}")
        _emit(doc, args.svg)
    return 0


def _cmd_monodromy(args) -> int:
    track = _load_curve(args.input, args.geometry)
    rep = monodromy(track, _params(track, args.ell, args.steps))
    _emit(rep.to_json(indent=2), args.out)
    return 0


def _parse_placement(raw: str):
    if raw in ("normal", "centroid"):
        return raw
    try:
        return float(raw)
    except ValueError:
        raise ValidationError(
            f"placement must be 'normal', 'centroid', or an angle, got {raw!r}") from None


def _cmd_planimeter(args) -> int:
    track = _load_curve(args.input)
    placement = _parse_placement(args.placement)
    if args.ells:
        lengths = [float(v) for v in args.ells.split(",")]
        bases = [float(v) for v in args.bases.split(",")] if args.bases else [0.0]
        table = error_scan(track, lengths, bases, placement=placement,
                           steps_per_traversal=args.steps)
        _emit(table.to_csv(), args.out)
        return 0
    if args.ell is None:
        raise ValidationError("planimeter needs --ell (single reading) or --ells (scan)")
    reading = measure(track, args.ell, base=args.base, placement=placement,
                      steps_per_traversal=args.steps)
    payload = {
        "deflection": reading.deflection,
        "estimate": reading.estimate,
        "exact_area": reading.exact_area,
        "correction_estimate": reading.correction_estimate,
        "residual_error": reading.residual_error,
        "base_param": reading.base_param,
        "base_point": list(reading.base_point),
        "ell": reading.ell,
        "placement": reading.placement,
        "mean_square_radius": reading.mean_square_radius,
        "rear_area": reading.rear_area,
        "closure_defect": reading.closure_defect,
    }
    _emit(json.dumps(payload, indent=2), args.out)
    return 0


def _cmd_menzin(args) -> int:
    track = _load_curve(args.input)
    rep = menzin_verify(track, tol=args.tol, steps_per_traversal=args.steps)
    _emit(rep.to_json(indent=2), args.out)
    if args.csv:
        _emit(rep.classification_csv(), args.csv)
    if args.svg:
        _, front = track.sample(2048)
        elements = [Polyline(front, color="#1f6fb4", width=1.4, label="front")]
        if rep.ell0 is not None:
            r = rep.min_osculating_radius
            ells = np.linspace(0.35 * r, 0.98 * rep.ell0, args.nested)
            for i, ell in enumerate(ells):
                mrep = monodromy(track, _params(track, float(ell), args.steps))
                if not mrep.fixed_points:
                    continue
                sol = integrate_steering(track, _params(track, float(ell), args.steps),
                                         mrep.fixed_points[0].angle)
                rt = rear_track(sol)
                elements.append(Polyline(
                    rt.points, color="#d0443a", width=0.7 + 0.5 * i / max(1, len(ells) - 1),
                    label=f"rear ell={ell:.3g}"))
        _emit(render(elements, title="nested rear tracks"), args.svg)
    return 0 if rep.ok else 3


def _cmd_develop(args) -> int:
    if args.input:
        track = _load_curve(args.input)
        curve = develop_hyperbolic(track, n_steps=args.steps)
    elif args.constant_k is not None:
        if args.length is None:
            raise ValidationError("--constant-k needs --length")
        kk = args.constant_k
        curve = develop_hyperbolic(lambda t: np.full_like(np.asarray(t, float), kk),
                                   args.length, n_steps=args.steps)
    else:
        raise ValidationError("develop needs --input or --constant-k")
    dist, frame = curve.closure_gap()
    summary = {
        "length": float(curve.t[-1]),
        "closure_distance": dist,
        "frame_gap": frame,
        "frame_defect": curve.frame_defect(),
    }
    if args.star is not None:
        summary["stargazing_residual"] = stargazing_residual(curve, args.star)
    print(json.dumps(summary, indent=2))
    if args.csv:
        _emit(curve.to_csv(), args.csv)
    if args.svg:
        doc = render([
            RefCircle((0.0, 0.0), 1.0),
            Polyline(curve.poincare(), color="#8a63c9", label="development"),
        ], title="Poincare disk")
        _emit(doc, args.svg)
    return 0


def _cmd_loopcheck(args) -> int:
    if args.input:
        with open(args.input) as fh:
            data = json.load(fh)

        def coeffs(part):
            return (float(part.get("a0", 0.0)),
                    np.asarray(part.get("cos", []), dtype=float),
                    np.asarray(part.get("sin", []), dtype=float))

        loop = ConfigLoop.from_fourier(
            coeffs(data["x"]), coeffs(data["y"]), coeffs(data["theta"]),
            winding=int(data.get("winding", 0)), n=args.steps)
    else:
        rng = np.random.default_rng(args.seed)
        loop = random_config_loop(rng, n=args.steps)
    check = loop_identity(loop, args.ell)
    payload = {
        "ell": check.ell,
        "area_front": check.area_front,
        "area_rear": check.area_rear,
        "lambda_integral": check.lambda_integral,
        "dtheta_integral": check.dtheta_integral,
        "lhs": check.lhs,
        "rhs": check.rhs,
        "residual": check.lhs - check.rhs,
    }
    _emit(json.dumps(payload, indent=2), args.out)
    return 0


# -- parser ------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tractrix-lab",
        description="Bicycle kinematics: rear tracks, monodromy, planimeter, "
                    "critical wheelbase, curved-plane analogues.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, ell_required=True):
        p.add_argument("--input", required=True, help="curve spec JSON path")
        if ell_required:
            p.add_argument("--ell", type=float, required=True, help="wheelbase")
        p.add_argument("--steps", type=int, default=4096,
                       help="integration steps per traversal (default 4096)")

    p = sub.add_parser("trace", help="integrate the rear track, emit CSV/SVG")
    common(p)
    p.add_argument("--alpha0", type=float, default=0.5 * math.pi,
                   help="initial steering angle (default pi/2)")
    p.add_argument("--csv", help="rear-track CSV output path")
    p.add_argument("--svg", help="figure output path")
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("monodromy", help="fit and classify the monodromy")
    common(p)
    p.add_argument("--geometry", choices=[g.value for g in Geometry], default=None,
                   help="reinterpret the curvature profile in this geometry")
    p.add_argument("--out", help="JSON output path (default stdout)")
    p.set_defaults(func=_cmd_monodromy)

    p = sub.add_parser("planimeter", help="simulate hatchet-planimeter readings")
    p.add_argument("--input", required=True)
    p.add_argument("--ell", type=float, help="rod length for a single reading")
    p.add_argument("--base", type=float, default=0.0, help="base point arc length")
    p.add_argument("--placement", default="normal",
                   help="'normal', 'centroid', or an absolute rod angle")
    p.add_argument("--ells", help="comma list of rod lengths: emit an error-scan CSV")
    p.add_argument("--bases", help="comma list of base points for the scan")
    p.add_argument("--steps", type=int, default=4096)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_planimeter)

    p = sub.add_parser("menzin", help="critical wheelbase + area bound report")
    p.add_argument("--input", required=True)
    p.add_argument("--tol", type=float, default=None, help="bisection tolerance")
    p.add_argument("--steps", type=int, default=4096)
    p.add_argument("--out", help="report JSON path (default stdout)")
    p.add_argument("--csv", help="classification-curve CSV path")
    p.add_argument("--svg", help="nested rear-track figure path")
    p.add_argument("--nested", type=int, default=5, help="rear tracks in the figure")
    p.set_defaults(func=_cmd_menzin)

    p = sub.add_parser("develop", help="develop a curvature profile into the hyperbolic plane")
    p.add_argument("--input", help="curve spec JSON (its curvature is developed)")
    p.add_argument("--constant-k", type=float, help="constant curvature value")
    p.add_argument("--length", type=float, help="development length for --constant-k")
    p.add_argument("--star", type=float, help="ideal-point angle: report stargazing residual")
    p.add_argument("--steps", type=int, default=8192)
    p.add_argument("--csv", help="hyperboloid-coordinates CSV path")
    p.add_argument("--svg", help="Poincare-disk figure path")
    p.set_defaults(func=_cmd_develop)

    p = sub.add_parser("loopcheck", help="rod-area identity on a configuration loop")
    p.add_argument("--input", help="loop JSON (x/y/theta Fourier blocks)")
    p.add_argument("--ell", type=float, required=True)
    p.add_argument("--seed", type=int, default=0, help="seed for a random loop (no --input)")
    p.add_argument("--steps", type=int, default=4096)
    p.add_argument("--out", help="JSON output path (default stdout)")
    p.set_defaults(func=_cmd_loopcheck)

    return parser


def main(argv=None) -> int:
    _apply_thread_cap()
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResidualError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
