"""lambda sweeps comparing the quadrature oracle with the asymptotic model.

Both curves are divided by the model's envelope amplitude lam^-1 e^(-rate lam),
so the model column is just its bracket (1, 1 + cos or cos) and the numeric
column shows how far F has settled onto it.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from .quadrature import QuadratureSpec, f_lambda
from .saddle import AsymptoticEstimate, estimate_for
from .symbol import Coefficients

CSV_VERSION = "quartic-heat v1"
CSV_COLUMNS = ("lambda", "F_numeric_scaled", "G_asymptotic_scaled", "abs_diff")


@dataclass(frozen=True)
class SweepConfig:
    beta: float
    direction: Union[str, Tuple[float, float]] = "axis"  # "axis" | "bisector" | (x1, x2)
    lambda_min: float = 5.0
    lambda_max: float = 25.0
    lambda_steps: int = 201
    method: str = "auto"
    out: Optional[str] = None
    alpha: float = 1.0
    gamma: float = 1.0
    tol: float = 1e-8

    def __post_init__(self):
        if not self.lambda_min >= 1:
            raise ValueError(f"lambda_min must be >= 1, got {self.lambda_min}")
        if not self.lambda_max > self.lambda_min:
            raise ValueError("lambda_max must exceed lambda_min")
        if self.lambda_steps < 2:
            raise ValueError(f"lambda_steps must be >= 2, got {self.lambda_steps}")
        if self.method not in ("auto", "direct", "shifted"):
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def coefficients(self) -> Coefficients:
        return Coefficients(self.alpha, self.beta, self.gamma)

    @property
    def point(self) -> np.ndarray:
        c = self.coefficients
        if self.direction == "axis":
            return np.array([1.0, 0.0]) * c.frame
        if self.direction == "bisector":
            return np.array([1.0, 1.0]) * c.frame
        return np.asarray(self.direction, dtype=float)

    @property
    def direction_label(self) -> str:
        if isinstance(self.direction, str):
            return self.direction
        return "generic({:g},{:g})".format(*self.direction)

    @property
    def lambdas(self) -> np.ndarray:
        return np.linspace(self.lambda_min, self.lambda_max, self.lambda_steps)


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    estimate: AsymptoticEstimate
    lambdas: np.ndarray
    f_values: np.ndarray
    f_errors: np.ndarray
    converged: np.ndarray
    numeric_scaled: np.ndarray
    model_scaled: np.ndarray

    @property
    def abs_diff(self) -> np.ndarray:
        return np.abs(self.numeric_scaled - self.model_scaled)

    @property
    def all_converged(self) -> bool:
        return bool(np.all(self.converged))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# {CSV_VERSION}, beta={self.config.beta!r}, direction={self.config.direction_label}\n")
        buf.write(",".join(CSV_COLUMNS) + "\n")
        for row in zip(self.lambdas, self.numeric_scaled, self.model_scaled, self.abs_diff):
            buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
        return buf.getvalue()


def run_sweep(config: SweepConfig, spec: Optional[QuadratureSpec] = None) -> SweepResult:
    c = config.coefficients
    x = config.point
    est = estimate_for(c, x)
    spec = spec or QuadratureSpec(target_rel_tol=config.tol)
    lams = config.lambdas
    vals = [f_lambda(c, x, float(lam), config.method, spec) for lam in lams]
    f = np.array([v.value for v in vals])
    scale = est.scale(lams)
    return SweepResult(
        config=config,
        estimate=est,
        lambdas=lams,
        f_values=f,
        f_errors=np.array([v.estimated_error for v in vals]),
        converged=np.array([v.converged for v in vals]),
        numeric_scaled=f * scale,
        model_scaled=est.bracket(lams),
    )


def envelope_slope(lams, diff) -> float:
    """Log-log slope through the local maxima of |diff| (all points if there are < 2)."""
    lams = np.asarray(lams, dtype=float)
    d = np.abs(np.asarray(diff, dtype=float))
    inner = np.nonzero((d[1:-1] >= d[:-2]) & (d[1:-1] >= d[2:]))[0] + 1
    idx = inner if len(inner) >= 2 else np.arange(len(d))
    return float(np.polyfit(np.log(lams[idx]), np.log(d[idx]), 1)[0])


def value_at(lams, values, lam: float) -> float:
    i = int(np.argmin(np.abs(np.asarray(lams) - lam)))
    if not math.isclose(float(lams[i]), lam, rel_tol=0, abs_tol=1e-9):
        raise ValueError(f"lambda={lam} is not a grid point of the sweep")
    return float(values[i])


def format_rows(rows: List[Tuple[float, ...]]) -> str:
    return "\n".join(",".join(f"{v:.17g}" for v in r) for r in rows)
