"""Bicycle dynamics on the sphere and the hyperbolic plane.

The steering equation keeps its form in every constant-curvature plane; only
the coefficient in front of ``sin(alpha)`` changes (1/ell, cot ell, coth ell).
This module supplies curved front tracks (geodesic circles), Gauss-Bonnet
areas, the development of a curvature profile into the hyperboloid model of
the hyperbolic plane, the stargazing angle along a developed curve, and the
area-threshold hyperbolicity check in both curved geometries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._io import fmt17
from ._num import panel_quad
from .dynamics import BikeParams
from .errors import ValidationError
from .geom import TWO_PI, FrontTrack, Geometry
from .moebius import MapClass, MonodromyReport, monodromy

# the hyperbolic unit bicycle: coth(ell) -> 1 as ell -> infinity, and the
# steering equation degenerates to alpha' = k - sin(alpha)
UNIT_WHEELBASE = math.inf


def geodesic_circle(rho: float, geometry: Geometry, traversals: int = 1) -> FrontTrack:
    """Circle of intrinsic radius ``rho`` as a front track in ``geometry``.

    The geodesic curvature (cot rho on the sphere, coth rho in the
    hyperbolic plane) is what the dynamics consumes; the stored positions
    are a flat chart circle of matching circumference, used for drawing
    only.
    """
    if geometry is Geometry.SPHERICAL:
        if not 0.0 < rho < math.pi:
            raise ValidationError(f"spherical radius must lie in (0, pi), got {rho}")
        k = 1.0 / math.tan(rho)
        chart_r = math.sin(rho)
    elif geometry is Geometry.HYPERBOLIC:
        if not rho > 0.0:
            raise ValidationError(f"hyperbolic radius must be positive, got {rho}")
        k = 1.0 / math.tanh(rho)
        chart_r = math.sinh(rho)
    else:
        if not rho > 0.0:
            raise ValidationError(f"radius must be positive, got {rho}")
        k = 1.0 / rho
        chart_r = rho
    period = TWO_PI * chart_r

    def pos(t):
        ang = t / chart_r
        return chart_r * np.stack([np.cos(ang), np.sin(ang)], axis=-1)

    def tan(t):
        return t / chart_r + 0.5 * math.pi

    def cur(t):
        return np.full_like(np.asarray(t, dtype=float), k)

    return FrontTrack(period, pos, tan, cur, closed=True, traversals=traversals,
                      geometry=geometry, label=f"geodesic-circle rho={rho:g} ({geometry.value})")


def geodesic_area(track: FrontTrack) -> float:
    """Enclosed area by Gauss-Bonnet: ``2*pi - \\oint k`` on the sphere,
    ``\\oint k - 2*pi`` in the hyperbolic plane.

    Convention: the region on the left of the positively-oriented curve;
    simple curves only (single turning).
    """
    if track.geometry is Geometry.EUCLIDEAN:
        raise ValidationError("Gauss-Bonnet area is for curved geometries; "
                              "use enclosed_area in the plane")
    if not track.closed or track.turning_single != 1:
        raise ValidationError("Gauss-Bonnet area needs a simple positively-oriented curve")
    total_k = panel_quad(track.curvature, 0.0, track.period, track.breakpoints)
    if track.geometry is Geometry.SPHERICAL:
        return TWO_PI - total_k
    return total_k - TWO_PI


# -- hyperboloid-model development ------------------------------------------


def mink(u, v):
    """Minkowski pairing with signature (+, -, -) on index 0,1,2."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 0] - u[..., 1] * v[..., 1] - u[..., 2] * v[..., 2]


def _renormalize(p, t, n):
    # Minkowski Gram-Schmidt: p timelike (norm +1), t and n spacelike (norm -1)
    p = p / math.sqrt(mink(p, p))
    t = t - mink(t, p) * p
    t = t / math.sqrt(-mink(t, t))
    n = n - mink(n, p) * p + mink(n, t) * t
    n = n / math.sqrt(-mink(n, n))
    return p, t, n


DEFAULT_FRAME = (np.array([1.0, 0.0, 0.0]),
                 np.array([0.0, 1.0, 0.0]),
                 np.array([0.0, 0.0, 1.0]))


@dataclass(frozen=True)
class HCurve:
    """Arc-length curve on the upper hyperboloid sheet with its Frenet frame."""

    t: np.ndarray
    points: np.ndarray  # (n+1, 3), <P,P> = 1, x0 > 0
    tangents: np.ndarray  # <T,T> = -1
    normals: np.ndarray  # <N,N> = -1
    curvature: np.ndarray  # geodesic curvature samples at t

    def frame_defect(self) -> float:
        """Worst deviation of the Minkowski Gram matrix from diag(1,-1,-1)."""
        devs = [
            np.abs(mink(self.points, self.points) - 1.0),
            np.abs(mink(self.tangents, self.tangents) + 1.0),
            np.abs(mink(self.normals, self.normals) + 1.0),
            np.abs(mink(self.points, self.tangents)),
            np.abs(mink(self.points, self.normals)),
            np.abs(mink(self.tangents, self.normals)),
        ]
        return float(max(d.max() for d in devs))

    def closure_gap(self) -> tuple[float, float]:
        """(hyperbolic endpoint distance, frame mismatch) between the two ends."""
        c = max(1.0, float(mink(self.points[0], self.points[-1])))
        dist = math.acosh(c)
        frame = max(float(np.abs(self.tangents[-1] - self.tangents[0]).max()),
                    float(np.abs(self.normals[-1] - self.normals[0]).max()))
        return dist, frame

    def poincare(self) -> np.ndarray:
        """Projection to the Poincare disk, (x1, x2) / (1 + x0)."""
        return self.points[:, 1:] / (1.0 + self.points[:, :1])

    def to_csv(self) -> str:
        lines = ["t,x0,x1,x2"]
        for ti, p in zip(self.t, self.points):
            lines.append(",".join(fmt17(v) for v in (ti, p[0], p[1], p[2])))
        return "\n".join(lines) + "\n"


def develop_hyperbolic(k, length: float | None = None, *, n_steps: int | None = None,
                       initial_frame=None) -> HCurve:
    """Integrate the hyperboloid Frenet system for a given curvature profile.

    ``k`` is a vectorized curvature function of arc length, or any front
    track (its curvature function and total length are used). The system
    ``P' = T, T' = P + k N, N' = -k T`` preserves the Minkowski frame; RK4
    drift is wiped by re-orthonormalizing after every step.
    """
    if hasattr(k, "curvature"):
        if length is None:
            length = k.total_length
        k_fn = k.curvature
    else:
        if length is None:
            raise ValidationError("develop_hyperbolic needs a length when k is a bare function")
        k_fn = k
    if not length > 0.0:
        raise ValidationError("development length must be positive")
    n = n_steps if n_steps is not None else max(4096, int(math.ceil(256.0 * length)))
    grid = np.linspace(0.0, float(length), 2 * n + 1)
    k_half = np.broadcast_to(np.asarray(k_fn(grid), dtype=float), grid.shape)

    if initial_frame is None:
        p, tv, nv = DEFAULT_FRAME
    else:
        p, tv, nv = (np.asarray(v, dtype=float) for v in initial_frame)
        if abs(mink(p, p) - 1.0) > 1e-6 or abs(mink(tv, tv) + 1.0) > 1e-6:
            raise ValidationError("initial frame is not Minkowski-orthonormal")
    p, tv, nv = _renormalize(p.copy(), tv.copy(), nv.copy())

    h = float(length) / n
    pts = np.empty((n + 1, 3))
    tans = np.empty((n + 1, 3))
    nors = np.empty((n + 1, 3))
    pts[0], tans[0], nors[0] = p, tv, nv

    def deriv(kk, state):
        p_, t_, n_ = state
        return np.stack([t_, p_ + kk * n_, -kk * t_])

    state = np.stack([p, tv, nv])
    for j in range(n):
        k0, km, k1 = k_half[2 * j], k_half[2 * j + 1], k_half[2 * j + 2]
        s1 = deriv(k0, state)
        s2 = deriv(km, state + 0.5 * h * s1)
        s3 = deriv(km, state + 0.5 * h * s2)
        s4 = deriv(k1, state + h * s3)
        state = state + (h / 6.0) * (s1 + 2.0 * s2 + 2.0 * s3 + s4)
        state = np.stack(_renormalize(state[0], state[1], state[2]))
        pts[j + 1], tans[j + 1], nors[j + 1] = state

    return HCurve(np.linspace(0.0, float(length), n + 1), pts, tans, nors, k_half[::2].copy())


def star_direction(psi: float) -> np.ndarray:
    """Null direction (1, cos psi, sin psi) for the ideal point at angle psi."""
    return np.array([1.0, math.cos(psi), math.sin(psi)])


def stargazing_angle(curve: HCurve, star) -> np.ndarray:
    """Angle between the curve's tangent and the geodesic ray from a fixed star.

    ``star`` is an ideal point: a nonzero Minkowski-null 3-vector, or a
    bare angle ``psi`` meaning ``(1, cos psi, sin psi)``. ``alpha = 0``
    when the curve recedes straight from the star, and the samples satisfy
    the unit-bicycle equation ``alpha' = k - sin(alpha)``; the returned
    branch is unwrapped so it can be differenced.
    """
    s = star_direction(float(star)) if np.isscalar(star) else np.asarray(star, dtype=float)
    norm2 = float(s[0] ** 2 + s[1] ** 2 + s[2] ** 2)
    if norm2 == 0.0 or abs(float(mink(s, s))) > 1e-9 * norm2:
        raise ValidationError("star must be a nonzero Minkowski-null direction")
    s = s / s[0]  # normalize to x0 = 1 (upper light cone)
    a = mink(curve.points, s)  # always positive on the upper sheet
    # alpha = 0 means the tangent points straight away from the star: the
    # star is the rear wheel pushed to infinity, the geodesic from it the rod
    cos_a = mink(curve.tangents, s) / a
    sin_a = -mink(curve.normals, s) / a
    return np.unwrap(np.arctan2(sin_a, cos_a))


def stargazing_residual(curve: HCurve, star) -> float:
    """Worst central-difference violation of ``alpha' = k - sin(alpha)``."""
    alpha = stargazing_angle(curve, star)
    h = curve.t[1] - curve.t[0]
    lhs = (alpha[2:] - alpha[:-2]) / (2.0 * h)
    rhs = curve.curvature[1:-1] - np.sin(alpha[1:-1])
    return float(np.abs(lhs - rhs).max())


def concentric_rear_radius(rho: float, ell: float, geometry: Geometry) -> float:
    """Radius of the invariant rear circle behind a front geodesic circle.

    At the attracting steering angle the rod stays tangent to a concentric
    circle, and the right-triangle relation of the geometry gives its
    radius: ``sqrt(rho^2 - ell^2)``, ``acos(cos rho / cos ell)``,
    ``acosh(cosh rho / cosh ell)``. No real solution means the monodromy is
    not hyperbolic at this wheelbase.
    """
    geometry.check_wheelbase(ell)
    if geometry is Geometry.EUCLIDEAN:
        if ell >= rho:
            raise ValidationError("no invariant rear circle: wheelbase reaches the center")
        return math.sqrt(rho**2 - ell**2)
    if geometry is Geometry.SPHERICAL:
        c = math.cos(rho) / math.cos(ell)
        if not -1.0 < c < 1.0 or ell >= 0.5 * math.pi:
            raise ValidationError("no invariant rear circle at this spherical wheelbase")
        return math.acos(c)
    c = math.cosh(rho) / math.cosh(ell)
    if c < 1.0:
        raise ValidationError("no invariant rear circle: wheelbase exceeds the front radius")
    return math.acosh(c)


# -- area-threshold hyperbolicity -------------------------------------------


def unit_bicycle_monodromy(track: FrontTrack, steps_per_traversal: int = 4096) -> MonodromyReport:
    """Monodromy of ``alpha' = k - sin(alpha)``, the infinite-wheelbase
    hyperbolic bicycle, for any closed curvature profile."""
    ht = track if track.geometry is Geometry.HYPERBOLIC else track.reinterpreted(Geometry.HYPERBOLIC)
    params = BikeParams(ell=UNIT_WHEELBASE, geometry=Geometry.HYPERBOLIC,
                        steps_per_traversal=steps_per_traversal)
    return monodromy(ht, params)


@dataclass(frozen=True)
class HPZReport:
    """Outcome of the curved-plane area-threshold check at one wheelbase."""

    geometry: str
    ell: float
    area: float
    threshold: float  # 2*pi*(1 - cos ell) or 2*pi*(cosh ell - 1)
    area_hypothesis: bool  # area > threshold
    convexity_ok: bool
    map_class: str
    trace: float
    distance_to_identity: float
    status: str  # "confirmed" | "not applicable" | "refuted"

    @property
    def applicable(self) -> bool:
        return self.area_hypothesis and self.convexity_ok

    @property
    def ok(self) -> bool:
        return self.status != "refuted"

    def to_dict(self) -> dict:
        out = {f: getattr(self, f) for f in (
            "geometry", "ell", "area", "threshold", "area_hypothesis",
            "convexity_ok", "map_class", "trace", "distance_to_identity", "status")}
        out["applicable"] = self.applicable
        return out


def hpz_verify(track: FrontTrack, geometry: Geometry, ell: float,
               steps_per_traversal: int = 4096) -> HPZReport:
    """Check the curved-plane hyperbolicity criterion at wheelbase ``ell``.

    When the enclosed area exceeds the area of the wheelbase disk
    (2*pi*(1 - cos ell) on the sphere, 2*pi*(cosh ell - 1) in the
    hyperbolic plane) and the track satisfies the convexity hypothesis
    (geodesically convex / geodesic curvature > 1), the monodromy must be
    hyperbolic. A violated hypothesis is reported as not applicable, never
    as a failure; the monodromy is computed and reported either way.
    """
    if geometry is Geometry.EUCLIDEAN:
        raise ValidationError("the area-threshold criterion concerns curved geometries")
    if track.geometry is not geometry:
        raise ValidationError(
            f"track geometry {track.geometry.value} does not match requested {geometry.value}"
        )
    area = geodesic_area(track)
    k_min = track.curvature_range()[0]
    if geometry is Geometry.SPHERICAL:
        threshold = TWO_PI * (1.0 - math.cos(ell))
        convex_ok = k_min > 0.0
    else:
        threshold = TWO_PI * (math.cosh(ell) - 1.0)
        convex_ok = k_min > 1.0
    rep = monodromy(track, BikeParams(ell=ell, geometry=geometry,
                                      steps_per_traversal=steps_per_traversal))
    hypothesis = area > threshold
    if not (hypothesis and convex_ok):
        status = "not applicable"
    elif rep.map_class is MapClass.HYPERBOLIC:
        status = "confirmed"
    else:
        status = "refuted"
    return HPZReport(
        geometry=geometry.value,
        ell=float(ell),
        area=area,
        threshold=threshold,
        area_hypothesis=hypothesis,
        convexity_ok=convex_ok,
        map_class=rep.map_class.value,
        trace=rep.trace,
        distance_to_identity=rep.map.distance_to_identity(),
        status=status,
    )
