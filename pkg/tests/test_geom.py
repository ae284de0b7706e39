"""Front-track constructions: lengths, areas, curvature, support functions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import ellipe

import tractrix_lab as tl
from tractrix_lab.geom import Geometry

from conftest import random_convex_spec

TWO_PI = 2.0 * math.pi


# -- circles and ellipses ----------------------------------------------------


def test_circle_basic(circle2):
    assert circle2.total_length == pytest.approx(4.0 * math.pi, rel=1e-12)
    assert tl.enclosed_area(circle2) == pytest.approx(4.0 * math.pi, rel=1e-10)
    t = np.linspace(0.0, circle2.total_length, 37)
    assert np.allclose(circle2.curvature(t), 0.5)
    assert np.allclose(np.linalg.norm(circle2.position(t), axis=1), 2.0)
    assert circle2.turning_number == 1
    assert circle2.convex


def test_circle_reversed():
    rev = tl.make_curve({"kind": "circle", "r": 2.0, "orientation": -1})
    assert tl.enclosed_area(rev) == pytest.approx(-4.0 * math.pi, rel=1e-10)
    assert rev.turning_number == -1
    assert np.allclose(rev.curvature(np.linspace(0, 1, 5)), -0.5)


def test_circle_off_center():
    c = tl.make_curve({"kind": "circle", "r": 1.5, "center": [3.0, -2.0]})
    assert tl.enclosed_area(c) == pytest.approx(math.pi * 2.25, rel=1e-10)
    assert np.allclose(tl.area_centroid(c), [3.0, -2.0], atol=1e-9)


def test_ellipse_oracles(ellipse21):
    # perimeter of the 2x1 ellipse: 4 a E(e^2), e^2 = 1 - b^2/a^2
    perimeter = 4.0 * 2.0 * ellipe(0.75)
    assert ellipse21.total_length == pytest.approx(perimeter, rel=1e-10)
    assert tl.enclosed_area(ellipse21) == pytest.approx(2.0 * math.pi, rel=1e-10)
    k_min, k_max = ellipse21.curvature_range()
    assert k_min == pytest.approx(0.25, rel=1e-8)  # b / a^2
    assert k_max == pytest.approx(2.0, rel=1e-8)  # a / b^2


def test_arc_length_parametrization(ellipse21):
    t = np.linspace(0.1, ellipse21.total_length - 0.1, 25)
    h = 1e-6
    speed = np.linalg.norm(
        (ellipse21.position(t + h) - ellipse21.position(t - h)) / (2 * h), axis=1)
    assert np.allclose(speed, 1.0, atol=1e-7)
    # tangent angle derivative is the signed curvature
    dphi = (ellipse21.tangent_angle(t + h) - ellipse21.tangent_angle(t - h)) / (2 * h)
    assert np.allclose(dphi, ellipse21.curvature(t), atol=1e-5)


def test_traversals_extend_the_path():
    twice = tl.make_curve({"kind": "circle", "r": 1.0, "traversals": 2})
    assert twice.total_length == pytest.approx(2.0 * TWO_PI, rel=1e-12)
    assert twice.period == pytest.approx(TWO_PI, rel=1e-12)
    assert twice.turning_number == 2
    p = twice.position(np.array([0.5, TWO_PI + 0.5]))
    assert np.allclose(p[0], p[1], atol=1e-12)


# -- polylines ---------------------------------------------------------------


def test_polyline_square():
    sq = tl.make_curve({"kind": "polyline",
                        "vertices": [[1, 1], [-1, 1], [-1, -1], [1, -1]]})
    # corners get a default micro-fillet of 1e-3 * diameter
    rf = 1e-3 * 2.0 * math.sqrt(2.0)
    assert sq.total_length == pytest.approx(8.0 - 4.0 * rf * (2.0 - math.pi / 2.0), rel=1e-10)
    assert tl.enclosed_area(sq) == pytest.approx(4.0 - (4.0 - math.pi) * rf * rf, rel=1e-8)
    assert sq.turning_number == 1
    assert not sq.convex  # flat edges: k = 0


def test_polyline_fillet():
    r = 0.3
    sq = tl.make_curve({"kind": "polyline", "fillet_radius": r,
                        "vertices": [[1, 1], [-1, 1], [-1, -1], [1, -1]]})
    assert sq.total_length == pytest.approx(4 * (2 - 2 * r) + TWO_PI * r, rel=1e-10)
    assert tl.enclosed_area(sq) == pytest.approx(4.0 - (4.0 - math.pi) * r * r, rel=1e-8)
    k_min, k_max = sq.curvature_range()
    assert k_min == pytest.approx(0.0, abs=1e-12)
    assert k_max == pytest.approx(1.0 / r, rel=1e-9)


def test_polyline_rejects_degenerate():
    with pytest.raises(tl.InvalidCurveError):
        tl.make_curve({"kind": "polyline", "vertices": [[0, 0], [1, 0]]})
    with pytest.raises(tl.InvalidCurveError):
        tl.make_curve({"kind": "polyline", "vertices": [[0, 0], [1, 0], [2, 0]]})
    with pytest.raises(tl.InvalidCurveError):
        tl.make_curve({"kind": "polyline", "fillet_radius": 5.0,
                       "vertices": [[1, 1], [-1, 1], [-1, -1], [1, -1]]})


# -- sampled curves ----------------------------------------------------------


def test_samples_rebuild_ellipse(ellipse21):
    t, pts = ellipse21.sample(400)
    rebuilt = tl.make_curve({"kind": "samples", "points": pts[:-1].tolist()})
    assert rebuilt.total_length == pytest.approx(ellipse21.total_length, rel=1e-5)
    assert tl.enclosed_area(rebuilt) == pytest.approx(2.0 * math.pi, rel=1e-5)


def test_samples_open_polyline():
    pts = [[0, 0], [1, 0.2], [2, 0], [3, 0.4]]
    open_track = tl.make_curve({"kind": "samples", "points": pts, "closed": False})
    assert not open_track.closed
    with pytest.raises(tl.ValidationError):
        tl.enclosed_area(open_track)


def test_samples_reject_duplicates():
    with pytest.raises(tl.InvalidCurveError):
        tl.make_curve({"kind": "samples", "points": [[0, 0], [1, 0], [1, 0], [0, 1]]})


# -- line segments -----------------------------------------------------------


def test_line_segment():
    seg = tl.make_curve({"kind": "line", "start": [1.0, 2.0], "end": [4.0, 6.0]})
    assert seg.total_length == pytest.approx(5.0, rel=1e-12)
    assert not seg.closed
    assert np.allclose(seg.position(5.0), [4.0, 6.0], atol=1e-12)
    assert np.allclose(seg.curvature(np.linspace(0, 5, 7)), 0.0)


# -- spec validation ---------------------------------------------------------


def test_make_curve_rejections():
    with pytest.raises(tl.InvalidCurveError):
        tl.make_curve({"kind": "heptagram"})
    with pytest.raises(tl.InvalidCurveError):
        tl.make_curve({"kind": "circle", "r": 1.0, "radius": 1.0})
    with pytest.raises(tl.InvalidCurveError):
        tl.make_curve({"kind": "circle", "r": -1.0})
    with pytest.raises(tl.InvalidCurveError):
        tl.make_curve({"kind": "ellipse", "a": 2.0})
    with pytest.raises(tl.InvalidCurveError):
        # second harmonic too strong: p + p'' changes sign
        tl.make_curve({"kind": "fourier-support", "a0": 1.0, "cos": [0.0, 0.5]})


def test_make_curve_accepts_json_text():
    c = tl.make_curve('{"kind": "circle", "r": 1.0}')
    assert c.total_length == pytest.approx(TWO_PI, rel=1e-12)


# -- rigid motions and reinterpretation --------------------------------------


def test_transformed_invariants(ellipse21):
    moved = ellipse21.transformed(rotation=0.7, translation=(3.0, -1.0))
    assert moved.total_length == pytest.approx(ellipse21.total_length, rel=1e-12)
    assert tl.enclosed_area(moved) == pytest.approx(tl.enclosed_area(ellipse21), rel=1e-10)
    t = np.linspace(0.0, moved.total_length, 17)
    assert np.allclose(moved.curvature(t), ellipse21.curvature(t), atol=1e-12)
    assert np.allclose(tl.area_centroid(moved), [3.0, -1.0], atol=1e-8)


def test_reinterpreted_keeps_chart(ellipse21):
    h = ellipse21.reinterpreted(Geometry.HYPERBOLIC)
    assert h.geometry is Geometry.HYPERBOLIC
    t = np.linspace(0.0, 1.0, 9)
    assert np.allclose(h.curvature(t), ellipse21.curvature(t), atol=1e-15)
    assert np.allclose(h.position(t), ellipse21.position(t), atol=1e-15)


# -- support functions -------------------------------------------------------


def test_support_function_of_circle(unit_circle):
    p = tl.support_function(unit_circle)
    length, area = tl.support_length_area(p)
    assert length == pytest.approx(TWO_PI, rel=1e-9)
    assert area == pytest.approx(math.pi, rel=1e-9)
    assert tl.isoperimetric_defect(p) == pytest.approx(0.0, abs=1e-8)


def test_support_function_translation_rule(unit_circle):
    # moving the anchor to (cx, cy) adds cx cos + cy sin to the support values
    p = tl.support_function(unit_circle, origin=(0.25, -0.4))
    phi = np.linspace(0.0, TWO_PI, 64, endpoint=False)
    expected = 1.0 - 0.25 * np.cos(phi) + 0.4 * np.sin(phi)
    assert np.allclose(p.value(phi), expected, atol=1e-8)
    # length and signed area do not see the anchor
    length, area = tl.support_length_area(p)
    assert length == pytest.approx(TWO_PI, rel=1e-9)
    assert area == pytest.approx(math.pi, rel=1e-9)


def test_support_round_trip(ellipse21):
    p = tl.support_function(ellipse21)
    # centroid anchor kills the first harmonic
    assert abs(p.cos_coeffs[0]) < 1e-9
    assert abs(p.sin_coeffs[0]) < 1e-9
    length, area = tl.support_length_area(p)
    assert length == pytest.approx(ellipse21.total_length, rel=1e-8)
    assert area == pytest.approx(2.0 * math.pi, rel=1e-8)
    # envelope points lie on the ellipse: (x/2)^2 + y^2 = 1
    xy = p.envelope(np.linspace(0.0, TWO_PI, 128, endpoint=False))
    assert np.allclose((xy[:, 0] / 2.0) ** 2 + xy[:, 1] ** 2, 1.0, atol=1e-6)


def test_wavefront_defect_invariance(ellipse21):
    p = tl.support_function(ellipse21)
    base = tl.isoperimetric_defect(p)
    for t in (0.05, 0.2, 0.5):
        inner = tl.wavefront(p, t)
        assert tl.isoperimetric_defect(inner) == pytest.approx(base, abs=1e-8)
        length, _ = tl.support_length_area(inner)
        assert length == pytest.approx(ellipse21.total_length - TWO_PI * t, rel=1e-8)


def test_support_function_rejects_nonconvex():
    sq = tl.make_curve({"kind": "polyline",
                        "vertices": [[1, 1], [-1, 1], [-1, -1], [1, -1]]})
    with pytest.raises(tl.ValidationError):
        tl.support_function(sq)


def test_mean_square_radius_disk(unit_circle):
    # uniform unit disk about its center: <r^2> = 1/2
    assert tl.mean_square_radius(unit_circle) == pytest.approx(0.5, rel=1e-9)


# -- properties over random convex specs -------------------------------------


@settings(max_examples=8, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**31 - 1))
def test_random_support_specs_are_convex(seed):
    spec = random_convex_spec(np.random.default_rng(seed))
    track = tl.make_curve(spec)
    assert track.convex
    assert tl.enclosed_area(track) > 0.0
    p = tl.support_function(track, n_grid=1024, n_harmonics=32)
    length, area = tl.support_length_area(p)
    assert length == pytest.approx(track.total_length, rel=1e-6)
    assert area == pytest.approx(tl.enclosed_area(track), rel=1e-6)
    assert tl.isoperimetric_defect(p) >= -1e-8
