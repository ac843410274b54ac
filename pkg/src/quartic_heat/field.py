"""Sampled coefficient fields: the constants k*, sigma* and a sharpness probe.

A field is a finite set of (alpha, beta, gamma) samples attached to points of
the plane. sup/inf over the field are max/min over the samples; nothing is
interpolated between them.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .finsler import distance_d0
from .quadrature import QuadratureSpec, ToleranceError, green_function, lambda_of_t, t_of_lambda
from .saddle import UnsupportedConfiguration, estimate_for, supported_direction
from .symbol import Coefficients, EllipticityError, classify, k_of_q, sigma_of_k

CSV_COLUMNS = ("x1", "x2", "alpha", "beta", "gamma")


class FieldFormatError(ValueError):
    """Malformed field description (bad CSV, empty grid, unknown preset)."""


@dataclass(frozen=True)
class CoefficientField:
    points: np.ndarray  # (n, 2)
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    name: str = "grid"

    def __post_init__(self):
        n = len(self.alpha)
        if n == 0:
            raise FieldFormatError("coefficient field has no samples")
        if not (len(self.beta) == len(self.gamma) == len(self.points) == n):
            raise FieldFormatError("coefficient arrays and points differ in length")

    def __len__(self):
        return len(self.alpha)

    @property
    def Q(self) -> np.ndarray:
        return self.beta / np.sqrt(self.alpha * self.gamma)

    @classmethod
    def from_arrays(cls, points, alpha, beta, gamma, name="grid") -> "CoefficientField":
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        arrs = [np.atleast_1d(np.asarray(a, dtype=float)) for a in (alpha, beta, gamma)]
        return cls(pts, *arrs, name=name)

    @classmethod
    def constant(cls, alpha=1.0, beta=0.0, gamma=1.0, n: int = 5) -> "CoefficientField":
        g = np.linspace(0.0, 1.0, n)
        X1, X2 = np.meshgrid(g, g, indexing="ij")
        pts = np.column_stack([X1.ravel(), X2.ravel()])
        ones = np.ones(len(pts))
        return cls(pts, alpha * ones, beta * ones, gamma * ones, name="constant")

    @classmethod
    def preset(cls, name: str, n: int = 21, **params) -> "CoefficientField":
        """Analytic families on the unit square sampled on an n x n grid.

        * ``constant``: alpha, beta, gamma
        * ``linear_beta``: alpha = gamma = 1, beta from beta0 (x1 = 0) to beta1 (x1 = 1)
        * ``wavy``: alpha = 1 + a sin(2 pi x1), gamma = 1 + a cos(2 pi x2),
          beta = b0 + b1 sin(2 pi x1) sin(2 pi x2)
        """
        g = np.linspace(0.0, 1.0, n)
        X1, X2 = (m.ravel() for m in np.meshgrid(g, g, indexing="ij"))
        pts = np.column_stack([X1, X2])
        ones = np.ones_like(X1)
        if name == "constant":
            a, b, c = params.get("alpha", 1.0), params.get("beta", 0.0), params.get("gamma", 1.0)
            return cls(pts, a * ones, b * ones, c * ones, name=name)
        if name == "linear_beta":
            b0, b1 = params.get("beta0", -0.5), params.get("beta1", 4.0)
            return cls(pts, ones, b0 + (b1 - b0) * X1, ones.copy(), name=name)
        if name == "wavy":
            a = params.get("a", 0.3)
            b0, b1 = params.get("b0", 1.0), params.get("b1", 1.5)
            s1, s2 = np.sin(2 * np.pi * X1), np.sin(2 * np.pi * X2)
            return cls(pts, 1 + a * s1, b0 + b1 * s1 * s2, 1 + a * np.cos(2 * np.pi * X2), name=name)
        raise FieldFormatError(f"unknown preset {name!r}; choose constant, linear_beta or wavy")

    @classmethod
    def from_csv(cls, path) -> "CoefficientField":
        """Read columns x1, x2, alpha, beta, gamma (header row required)."""
        with open(path, newline="") as fh:
            reader = csv.DictReader(row for row in fh if not row.lstrip().startswith("#"))
            header = reader.fieldnames
            if header is None:
                raise FieldFormatError(f"{path}: empty file")
            header = [h.strip() for h in header]
            missing = [col for col in CSV_COLUMNS if col not in header]
            if missing:
                raise FieldFormatError(f"{path}: missing column(s) {', '.join(missing)}")
            reader.fieldnames = header
            rows = []
            for lineno, row in enumerate(reader, start=2):
                try:
                    rows.append([float(row[col]) for col in CSV_COLUMNS])
                except (TypeError, ValueError):
                    raise FieldFormatError(f"{path}:{lineno}: non-numeric or missing value") from None
        if not rows:
            raise FieldFormatError(f"{path}: no samples")
        data = np.array(rows)
        return cls(data[:, :2], data[:, 2], data[:, 3], data[:, 4], name=str(path))


@dataclass(frozen=True)
class FieldReport:
    k_star: float
    sigma_star: float
    q_range: Tuple[float, float]
    regime_histogram: Dict[str, int]
    argmax_location: Tuple[float, float]
    n_samples: int

    def as_dict(self):
        return {
            "k_star": self.k_star,
            "sigma_star": self.sigma_star,
            "q_range": list(self.q_range),
            "regime_histogram": dict(self.regime_histogram),
            "argmax_location": list(self.argmax_location),
            "n_samples": self.n_samples,
        }


def analyze_field(f: CoefficientField) -> FieldReport:
    alpha, gamma = f.alpha, f.gamma
    bad = ~((alpha > 0) & (gamma > 0) & np.isfinite(f.beta))
    Q = np.where(bad, -np.inf, f.beta / np.sqrt(np.where(bad, 1.0, alpha * gamma)))
    bad |= ~(Q > -1)
    if np.any(bad):
        i = int(np.argmax(bad))
        p = f.points[i]
        raise EllipticityError(
            f"non-elliptic sample at x=({p[0]:g}, {p[1]:g}): "
            f"alpha={alpha[i]:g}, beta={f.beta[i]:g}, gamma={gamma[i]:g}"
        )
    k = k_of_q(Q)
    i_max = int(np.argmax(k))
    k_star = float(k[i_max])
    hist: Dict[str, int] = {}
    for q in Q:
        key = str(classify(float(q)))
        hist[key] = hist.get(key, 0) + 1
    return FieldReport(
        k_star=k_star,
        sigma_star=float(sigma_of_k(k_star)),
        q_range=(float(Q.min()), float(Q.max())),
        regime_histogram=dict(sorted(hist.items())),
        argmax_location=(float(f.points[i_max, 0]), float(f.points[i_max, 1])),
        n_samples=len(f),
    )


@dataclass(frozen=True)
class BoundFit:
    rate: float  # fitted r in ln(|G| t^(1/3)) = const - r d0^(4/3) t^(-1/3)
    sigma: float
    d0: float
    t_used: Tuple[float, float]
    peaks_only: bool

    @property
    def rel_error(self) -> float:
        return abs(self.rate - self.sigma) / self.sigma


def _check_bound_direction(c: Coefficients, x):
    Q = c.Q
    frame = supported_direction(c, x)
    if 0 < Q < 3:
        y = np.asarray(x, dtype=float) / c.frame
        ang = math.atan2(y[1], y[0])
        if abs(math.remainder(ang, math.pi / 4)) > 1e-12:
            raise UnsupportedConfiguration("for 0 < Q < 3 the direction must be a multiple of pi/4")
        return
    if frame is None or (frame.direction == "bisector" and Q > 0) or (frame.direction == "axis" and Q < 3):
        raise UnsupportedConfiguration(
            f"Q={Q:g}: use an axis direction when Q >= 3 and a bisector when Q <= 0"
        )


def gaussian_bound_check(
    c: Coefficients,
    x,
    t_sweep: Sequence[float],
    spec: QuadratureSpec = QuadratureSpec(),
) -> BoundFit:
    """Fit the Gaussian decay rate of G(x, t) at the two smallest t.

    For oscillating kernels the t values are replaced by the cosine peaks of
    the asymptotic model lying inside the sweep, so the fit follows the
    envelope rather than the oscillation.
    """
    x = np.asarray(x, dtype=float)
    _check_bound_direction(c, x)
    ts = np.sort(np.asarray(t_sweep, dtype=float))
    if len(ts) < 2 or ts[0] <= 0:
        raise ValueError("t_sweep needs at least two positive times")
    est = estimate_for(c, x)
    peaks_only = est.oscillation_form != "none"
    if peaks_only:
        lam_hi, lam_lo = lambda_of_t(ts[0]), lambda_of_t(ts[-1])
        peaks = est.peaks(lam_lo, lam_hi)
        if len(peaks) < 2:
            raise ValueError("sweep spans fewer than two cosine peaks")
        ts = np.sort(t_of_lambda(np.asarray(peaks)))
    t_pair = ts[:2]
    logs = []
    for i, t in enumerate(t_pair):
        kv = green_function(c, x, float(t), spec)
        if i == 0 and not kv.converged:
            raise ToleranceError(f"oracle missed tolerance at t={t:g}", kv)
        logs.append(math.log(abs(kv.value)) + math.log(t) / 3.0)
    d0 = distance_d0(c, x)
    u = d0 ** (4.0 / 3.0) * t_pair ** (-1.0 / 3.0)
    slope = np.polyfit(u, np.array(logs), 1)[0]
    return BoundFit(
        rate=float(-slope),
        sigma=float(c.sigma),
        d0=float(d0),
        t_used=(float(t_pair[0]), float(t_pair[1])),
        peaks_only=peaks_only,
    )
