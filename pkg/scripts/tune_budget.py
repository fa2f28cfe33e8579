#!/usr/bin/env python3
"""Budget sweep on the plane-wave benchmark.

Measures the relative L2(x, t) error of the contour evaluator against the
exact plane wave for a ladder of quadrature budgets, printing an
error/runtime table.  The default budget in the library was chosen from this
table: the smallest rung that meets 1e-3 within the 60 s single-thread cap.

Usage: python3 scripts/tune_budget.py [--quick]
"""

import argparse
import time

from hnls_utm import DispersionParams, QuadratureBudget, solve_full
from hnls_utm.presets import plane_wave_data, plane_wave_field

LADDER = [
    (8000, 20.0, 4000),
    (16000, 24.0, 8000),
    (24000, 30.0, 12000),
    (40000, 30.0, 20000),
    (64000, 36.0, 32000),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true",
                    help="only the first three rungs")
    args = ap.parse_args()

    params = DispersionParams(1.0, 0.0, 0.0)
    ell, horizon, a = 1.0, 0.5, 2.0
    data = plane_wave_data(params, ell, horizon, a)
    grid = (97, 33)

    rungs = LADDER[:3] if args.quick else LADDER
    print("%10s %8s %10s %12s %8s" % ("contour", "window", "real-axis",
                                      "rel L2 err", "secs"))
    for cn, win, rn in rungs:
        budget = QuadratureBudget(contour_nodes=cn, real_axis_window=win,
                                  real_axis_nodes=rn)
        t0 = time.time()
        field = solve_full(data, grid, budget)
        dt = time.time() - t0
        exact = plane_wave_field(params, a, field.x_grid, field.t_grid)
        err = field.relative_l2_gap(exact)
        print("%10d %8.1f %10d %12.3e %8.1f" % (cn, win, rn, err, dt))


if __name__ == "__main__":
    main()
