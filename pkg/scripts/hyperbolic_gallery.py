"""Poincare-disk gallery of hyperbolic developments, plus a stargazing check.

Constant-curvature profiles develop to circles when k > 1 (drawn closed),
to a horocycle-like arc at k = 1, and the euclidean 2x1 ellipse develops
to an open curve that fails to close. The stargazing series recomputes
the steering law alpha' = k - sin(alpha) purely from hyperboloid geometry
on the k = 2/sqrt(3) circle.

Writes ``out/poincare_gallery.svg`` and ``out/stargazing.csv``.
"""

import math
from pathlib import Path

import numpy as np

import tractrix_lab as tl
from tractrix_lab.svg import PALETTE, Polyline, RefCircle, render

OUT = Path(__file__).resolve().parent / "out"
SQRT3 = math.sqrt(3.0)


def main() -> None:
    OUT.mkdir(exist_ok=True)
    elements = [RefCircle((0.0, 0.0), 1.0)]

    profiles = [  # (label, k, length)
        ("k=2.5", 2.5, 2.0 * math.pi / math.sqrt(2.5**2 - 1.0)),
        ("k=2/sqrt(3)", 2.0 / SQRT3, 2.0 * math.pi * SQRT3),
        ("k=1.1", 1.1, 2.0 * math.pi / math.sqrt(1.1**2 - 1.0)),
        ("k=1 horocycle", 1.0, 12.0),
    ]
    print(f"{'profile':<15} {'closure':>10} {'frame gap':>10}")
    for (label, k, length), color in zip(profiles, PALETTE):
        curve = tl.develop_hyperbolic(lambda t, kk=k: np.full_like(t, kk), length)
        dist, frame = curve.closure_gap()
        elements.append(Polyline(curve.poincare(), color=color, label=label))
        print(f"{label:<15} {dist:10.2e} {frame:10.2e}")

    ellipse = tl.make_curve({"kind": "ellipse", "a": 2.0, "b": 1.0})
    dev = tl.develop_hyperbolic(ellipse)
    dist, _ = dev.closure_gap()
    elements.append(Polyline(dev.poincare(), color=PALETTE[4], dashed=True,
                             label="ellipse 2x1"))
    print(f"{'ellipse 2x1':<15} {dist:10.2e} {'(open)':>10}")

    svg_path = OUT / "poincare_gallery.svg"
    svg_path.write_text(render(elements))

    # stargazing on the closed k = 2/sqrt(3) circle
    circle = tl.develop_hyperbolic(lambda t: np.full_like(t, 2.0 / SQRT3),
                                   2.0 * math.pi * SQRT3)
    alpha = tl.stargazing_angle(circle, tl.star_direction(0.0))
    residual = tl.stargazing_residual(circle, tl.star_direction(0.0))
    csv_path = OUT / "stargazing.csv"
    csv_path.write_text("t,alpha\n" + "\n".join(
        f"{t!r},{a!r}" for t, a in zip(circle.t, alpha)) + "\n")
    print(f"\nstargazing steering residual: {residual:.2e}")
    print(f"wrote {svg_path} and {csv_path}")


if __name__ == "__main__":
    main()
