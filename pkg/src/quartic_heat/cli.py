"""quartic-heat command line.

Exit codes: 0 success, 1 property failure, 2 usage or domain error,
3 numeric tolerance failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List, Optional

import numpy as np

from . import __version__
from .field import CoefficientField, FieldFormatError, analyze_field
from .finsler import ConvergenceError
from .quadrature import QuadratureSpec, ToleranceError, green_function, lambda_of_t
from .saddle import UnsupportedConfiguration, estimate_for
from .sweep import SweepConfig, run_sweep
from .symbol import Coefficients, EllipticityError
from . import verify as verify_mod

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_USAGE = 2
EXIT_TOLERANCE = 3


class UsageError(Exception):
    pass


def _vec2(text: str):
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}") from None
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    return tuple(parts)


def _positive(text: str) -> float:
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _add_coeffs(p):
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=1.0)


def _add_quadrature(p):
    p.add_argument("--method", choices=("auto", "direct", "shifted"), default="auto")
    p.add_argument("--tol", type=_positive, default=1e-8, help="target relative tolerance")


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _coeffs(args) -> Coefficients:
    return Coefficients(args.alpha, args.beta, args.gamma)


def _direction_point(args, c: Coefficients):
    if args.x is not None:
        return np.asarray(args.x, dtype=float)
    if args.direction == "axis":
        return np.array([1.0, 0.0]) * c.frame
    if args.direction == "bisector":
        return np.array([1.0, 1.0]) * c.frame
    raise UsageError("give --x or --direction")


def cmd_kernel(args) -> int:
    c = _coeffs(args)
    spec = QuadratureSpec(target_rel_tol=args.tol)
    kv = green_function(c, args.x, args.t, spec, args.method)
    lines = [
        f"G(x={args.x[0]:g},{args.x[1]:g}; t={args.t:g}) = {kv.value:.15g}",
        f"estimated_error = {kv.estimated_error:.3e}",
        f"method = {kv.method} (lambda = {lambda_of_t(args.t):.6g}, panels/axis = {kv.panels_per_axis})",
    ]
    print("\n".join(lines))
    if not kv.converged:
        print(f"tolerance {args.tol:g} not reached", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_asymptotic(args) -> int:
    c = _coeffs(args)
    x = _direction_point(args, c)
    est = estimate_for(c, x)
    report = {"x": list(map(float, x)), **est.as_dict()}
    if args.t is not None:
        lam = lambda_of_t(args.t)
        report["at"] = {"t": args.t, "lambda": lam, "G_model": float(est.g_model(args.t)), "F_model": float(est.f_model(lam))}
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_compare(args) -> int:
    c = _coeffs(args)
    if args.x is not None:
        direction = tuple(args.x)
    elif args.direction in ("axis", "bisector"):
        direction = args.direction
    else:
        raise UsageError("give --x or --direction")
    cfg = SweepConfig(
        beta=args.beta,
        direction=direction,
        lambda_min=args.lambda_min,
        lambda_max=args.lambda_max,
        lambda_steps=args.steps,
        method=args.method,
        out=args.out,
        alpha=c.alpha,
        gamma=c.gamma,
        tol=args.tol,
    )
    res = run_sweep(cfg)
    _emit(res.to_csv(), args.out)
    if not res.all_converged:
        bad = res.lambdas[~res.converged]
        print(f"tolerance {args.tol:g} not reached at lambda = {bad[0]:g} ({bad.size} points)", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_verify(args) -> int:
    reports = verify_mod.run(args.suite, seed=args.seed, tol=args.tol)
    summary = {
        "seed": args.seed,
        "passed": all(r.passed for r in reports),
        "suites": [r.as_dict() for r in reports],
    }
    _emit(json.dumps(summary, indent=2, sort_keys=True) + "\n", args.out)
    for r in reports:
        fail = r.first_failure()
        if fail is not None:
            print(
                f"FAIL {r.suite}.{fail.name}: max error {fail.max_error:.3e} > {fail.tolerance:.1e}; "
                f"counterexample {json.dumps(fail.counterexample)}",
                file=sys.stderr,
            )
            return EXIT_PROPERTY
    return EXIT_OK


def cmd_field(args) -> int:
    if args.preset:
        f = CoefficientField.preset(args.preset)
    elif args.csv:
        f = CoefficientField.from_csv(args.csv)
    else:
        raise UsageError("give a CSV path or --preset")
    rep = analyze_field(f)
    _emit(json.dumps(rep.as_dict(), indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quartic-heat",
        description="Heat kernels of the quartic operator with symbol "
        "alpha xi1^4 + 2 beta xi1^2 xi2^2 + gamma xi2^4.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", help="evaluate G(x, t) by quadrature")
    _add_coeffs(p)
    p.add_argument("--x", type=_vec2, required=True, metavar="X1,X2")
    p.add_argument("--t", type=_positive, required=True)
    _add_quadrature(p)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("asymptotic", help="print the short-time model at x")
    _add_coeffs(p)
    p.add_argument("--x", type=_vec2, metavar="X1,X2")
    p.add_argument("--direction", choices=("axis", "bisector"))
    p.add_argument("--t", type=_positive)
    p.set_defaults(func=cmd_asymptotic)

    p = sub.add_parser("compare", help="CSV sweep of scaled F(lambda) against the model")
    _add_coeffs(p)
    p.add_argument("--x", type=_vec2, metavar="X1,X2")
    p.add_argument("--direction", choices=("axis", "bisector"))
    p.add_argument("--lambda-min", type=float, default=5.0)
    p.add_argument("--lambda-max", type=float, default=25.0)
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("--out")
    _add_quadrature(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="run seeded property suites")
    p.add_argument("suite", nargs="?", default="all", choices=(*verify_mod.SUITES, "all"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=_positive, default=None, help="identity tolerance override")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("field", help="k*, sigma* and regime counts of a coefficient field")
    p.add_argument("csv", nargs="?", help="CSV with columns x1,x2,alpha,beta,gamma")
    p.add_argument("--preset", choices=("constant", "linear_beta", "wavy"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_field)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EllipticityError, UnsupportedConfiguration, FieldFormatError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ToleranceError, ConvergenceError) as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except ArithmeticError as exc:
        # a structural check on the saddle data failed
        print(f"property failure: {exc}", file=sys.stderr)
        return EXIT_PROPERTY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
