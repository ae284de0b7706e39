"""Minimal hand-emitted SVG: polylines, dots, and reference circles.

Figures are assembled from world-coordinate elements; the renderer computes
the bounding box, pads it, and emits a y-up viewBox (SVG's y axis is
flipped by a transform so geometry reads like the plane).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

PALETTE = ("#1f6fb4", "#d0443a", "#2e9e4f", "#8a63c9", "#c98a1f", "#5aa7a7")


@dataclass(frozen=True)
class Polyline:
    points: np.ndarray  # (n, 2)
    color: str = PALETTE[0]
    width: float = 1.0  # multiples of the base stroke
    dashed: bool = False
    label: str = ""


@dataclass(frozen=True)
class Dots:
    points: np.ndarray  # (n, 2)
    color: str = "#222222"
    radius: float = 1.0  # multiples of the base dot radius


@dataclass(frozen=True)
class RefCircle:
    center: tuple[float, float]
    r: float
    color: str = "#999999"


def _fmt(v: float) -> str:
    return f"{v:.5g}"


def render(elements: Sequence[Polyline | Dots | RefCircle], *, size: int = 720,
           margin: float = 0.06, title: str = "") -> str:
    """Lay world-coordinate elements onto an SVG canvas of width ``size``."""
    xs, ys = [], []
    for el in elements:
        if isinstance(el, RefCircle):
            xs += [el.center[0] - el.r, el.center[0] + el.r]
            ys += [el.center[1] - el.r, el.center[1] + el.r]
        else:
            pts = np.asarray(el.points, dtype=float).reshape(-1, 2)
            if len(pts):
                xs += [pts[:, 0].min(), pts[:, 0].max()]
                ys += [pts[:, 1].min(), pts[:, 1].max()]
    if not xs:
        xs = ys = [-1.0, 1.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-9)
    pad = margin * span
    x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    w, h = x1 - x0, y1 - y0
    height = int(round(size * h / w))
    stroke = 0.0022 * span
    dot_r = 0.006 * span

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{height}" '
        f'viewBox="{_fmt(x0)} {_fmt(-y1)} {_fmt(w)} {_fmt(h)}">',
        '<g transform="scale(1,-1)">',
    ]
    if title:
        out.append(f"<!-- {title} -->")
    legend = []
    for el in elements:
        if isinstance(el, RefCircle):
            out.append(
                f'<circle cx="{_fmt(el.center[0])}" cy="{_fmt(el.center[1])}" r="{_fmt(el.r)}" '
                f'fill="none" stroke="{el.color}" stroke-width="{_fmt(0.6 * stroke)}" '
                f'stroke-dasharray="{_fmt(4 * stroke)} {_fmt(3 * stroke)}"/>')
        elif isinstance(el, Dots):
            pts = np.asarray(el.points, dtype=float).reshape(-1, 2)
            for p in pts:
                out.append(
                    f'<circle cx="{_fmt(p[0])}" cy="{_fmt(p[1])}" '
                    f'r="{_fmt(el.radius * dot_r)}" fill="{el.color}"/>')
        else:
            pts = np.asarray(el.points, dtype=float).reshape(-1, 2)
            if len(pts) < 2:
                continue
            coords = " ".join(f"{_fmt(p[0])},{_fmt(p[1])}" for p in pts)
            dash = (f' stroke-dasharray="{_fmt(5 * stroke)} {_fmt(4 * stroke)}"'
                    if el.dashed else "")
            out.append(
                f'<polyline points="{coords}" fill="none" stroke="{el.color}" '
                f'stroke-width="{_fmt(el.width * stroke)}" stroke-linejoin="round"{dash}/>')
            if el.label:
                legend.append((el.label, el.color))
    out.append("</g>")
    # legend in screen coordinates, top-left
    for i, (label, color) in enumerate(legend):
        yy = -y1 + (1.8 + 2.2 * i) * 0.022 * span
        out.append(
            f'<g transform="translate({_fmt(x0 + 0.03 * span)},{_fmt(yy)})">'
            f'<rect x="0" y="{_fmt(-0.011 * span)}" width="{_fmt(0.028 * span)}" '
            f'height="{_fmt(0.0045 * span)}" fill="{color}"/>'
            f'<text x="{_fmt(0.038 * span)}" y="0" font-family="sans-serif" '
            f'font-size="{_fmt(0.022 * span)}" fill="#333333">{label}</text></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
