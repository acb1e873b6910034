"""One-variable factors: constant curvature from a single coordinate.

When the factor depends on t alone (or x alone) the constant-curvature
condition reduces to an ODE whose solutions split into two branches:

* a sech^2 branch, positive on the whole line, and
* a sec^2 branch, positive on a strip between two poles.

``timelike_factor(c1=-4, c2=0, target=2)`` lands exactly on sec^2(t),
the global factor of the maximally symmetric R = 2 surface; its strip
is |t| < pi/2.  Branch selection is driven by the signs of the
parameters, and parameter combinations that would make the factor
non-positive are rejected rather than silently clipped.

The script prints the branch algebra and writes the strip's
constant-interval diagram to ``demos/output/``.
"""

from pathlib import Path

import numpy as np

from lorentz2d import (
    BranchYieldsNonPositive,
    Rectangle,
    constancy_report,
    export,
    extract_level_sets,
    sample_grid,
    spacelike_factor,
    timelike_factor,
    unparse,
)

OUTPUT = Path(__file__).resolve().parent / "output"
LEVELS = (-2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0)


def branches() -> None:
    positive = timelike_factor(c1=-4.0, c2=0.0, target=2.0)
    print(f"timelike, target R = 2:  {unparse(positive.expression)}"
          f"  on {positive.domain!r}")

    negative = timelike_factor(c1=4.0, c2=0.0, target=-2.0)
    print(f"timelike, target R = -2: {unparse(negative.expression)}"
          f"  on the full plane")

    space = spacelike_factor(d1=4.0, d2=0.0, target=1.0)
    print(f"spacelike, target R = 1: {unparse(space.expression)}")

    try:
        timelike_factor(c1=4.0, c2=0.0, target=2.0)
    except BranchYieldsNonPositive as err:
        print(f"rejected branch: {err}")


def verify_and_draw() -> None:
    factor = timelike_factor(c1=-4.0, c2=0.0, target=2.0)
    window = Rectangle(-1.5, 1.5, 0.0, 6.0)
    grid = sample_grid(factor, domain=window, resolution=(60, 60))
    report = constancy_report(grid, tolerance=1e-9)
    print(f"max |R - 2| on the strip window: "
          f"{report.max_abs_deviation:.3e} (passed = {report.passed})")

    OUTPUT.mkdir(exist_ok=True)
    contour_grid = sample_grid(factor, domain=window, resolution=(250, 250),
                               with_ricci=False)
    path = export(extract_level_sets(contour_grid, LEVELS), "svg",
                  OUTPUT / "positive_curvature_strip.svg")
    print(f"wrote {path}")

    worst = float(np.max(np.abs(grid.ricci - 2.0)))
    assert worst < 1e-9


def main() -> None:
    branches()
    verify_and_draw()


if __name__ == "__main__":
    main()
