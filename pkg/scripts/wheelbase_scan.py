"""Critical wheelbase across an ellipse family, against the area bound.

For semi-axes (1, b) the scan locates the first parabolic wheelbase ell0
and tabulates it next to sqrt(A/pi), the radius of the area-equivalent
disk; the conjectured inequality A <= pi ell0^2 keeps the last column
nonnegative up to scan resolution, tight exactly at b = 1. One full
classification curve is written for the most eccentric member.

Writes ``out/wheelbase_family.csv`` and ``out/classification_b0.5.csv``.
"""

import math
from pathlib import Path

import numpy as np

import tractrix_lab as tl

OUT = Path(__file__).resolve().parent / "out"
STEPS = 2048


def main() -> None:
    OUT.mkdir(exist_ok=True)
    rows = ["b,area,r_min,ell0,sqrt_a_over_pi,bound_margin"]
    print(f"{'b':>5} {'area':>8} {'r_min':>7} {'ell0':>9} {'sqrt(A/pi)':>11} {'margin':>10}")
    for b in np.linspace(1.0, 0.5, 6):
        track = tl.make_curve({"kind": "ellipse", "a": 1.0, "b": float(b)})
        area = tl.enclosed_area(track)
        r_min = tl.min_osculating_radius(track)
        ell0 = tl.critical_length(track, steps_per_traversal=STEPS)
        equiv = math.sqrt(area / math.pi)
        margin = math.pi * ell0**2 - area
        rows.append(f"{b:.2f},{area!r},{r_min!r},{ell0!r},{equiv!r},{margin!r}")
        print(f"{b:5.2f} {area:8.4f} {r_min:7.4f} {ell0:9.6f} {equiv:11.6f} {margin:10.3e}")
    family = OUT / "wheelbase_family.csv"
    family.write_text("\n".join(rows) + "\n")

    report = tl.menzin_verify(tl.make_curve({"kind": "ellipse", "a": 1.0, "b": 0.5}),
                              steps_per_traversal=STEPS)
    classification = OUT / "classification_b0.5.csv"
    classification.write_text(report.classification_csv())
    print(f"\nb=0.50 stages: " + ", ".join(
        f"{c.name}={'ok' if c.passed else 'FAIL'}" for c in report.checks))
    print(f"wrote {family} and {classification}")


if __name__ == "__main__":
    main()
