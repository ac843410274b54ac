"""Time the tensor-product quadrature sum on the numba and numpy backends.

    python3 benchmarks/bench_quadrature.py [--repeat 5] [--csv out.csv]

Both backends are called explicitly, so the QUARTIC_HEAT_DISABLE_JIT flag
does not matter here. The first numba call (compilation or cache load) is
reported separately and excluded from the timings.
"""

import argparse
import csv
import sys
import time

import numpy as np

from quartic_heat import Coefficients, optimal_shift
from quartic_heat.kernels import tensor_sum
from quartic_heat.quadrature import _panel_rule, plan_domain

CASES = [
    # beta, x, lambda
    (-0.5, (1.0, 1.0), 20.0),
    (4.0, (1.0, 0.0), 20.0),
    (1.5, (0.7, 0.3), 20.0),
]
NODES = 16


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--panels", type=int, nargs="+", default=[8, 16, 32, 64])
    ap.add_argument("--csv", help="also write the table here")
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    c = Coefficients(1.0, 0.0, 1.0)
    pts, w = _panel_rule(2, NODES, 3.0)
    tensor_sum(pts, w, pts, w, np.ones(2), np.zeros(2), 1.0, 1.0, 0.0, 1.0, backend="numba")
    print(f"numba first call (compile or cache load): {time.perf_counter() - t0:.2f} s")

    rows = []
    header = ("beta", "lambda", "panels", "points", "numpy_s", "numba_s", "speedup", "rel_diff")
    print("{:>6} {:>7} {:>7} {:>9} {:>10} {:>10} {:>8} {:>10}".format(*header))
    for beta, x, lam in CASES:
        c = Coefficients(1.0, beta, 1.0)
        x = np.asarray(x)
        eta = optimal_shift(c, x)
        radius, peak, _ = plan_domain(c, x, lam, eta)
        for panels in args.panels:
            pts, w = _panel_rule(panels, NODES, radius)

            def run(backend):
                return tensor_sum(pts, w, pts, w, x, eta, lam, 1.0, beta, 1.0, shift=lam * peak, backend=backend)

            t_np, (v_np, _) = best_of(lambda: run("numpy"), args.repeat)
            t_nb, (v_nb, _) = best_of(lambda: run("numba"), args.repeat)
            rel = abs(v_np - v_nb) / abs(v_np)
            row = (beta, lam, panels, len(pts) ** 2, t_np, t_nb, t_np / t_nb, rel)
            rows.append(row)
            print("{:>6g} {:>7g} {:>7d} {:>9d} {:>10.4f} {:>10.4f} {:>8.2f} {:>10.1e}".format(*row))

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(header)
            wr.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
