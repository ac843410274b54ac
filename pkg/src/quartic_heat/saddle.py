"""Saddle points of phi(z) = i x.z - A(z)/4 and steepest-descent estimates.

Supported configurations (in the normalized frame alpha = gamma = 1):

* Q <= 0, x on a bisector  -> pair z0+- (plus z*+- when Q = 0)
* Q >= 3, x on an axis     -> pair z0+- (plus z*+- when Q = 3)
* 0 < Q < 3, any x != 0    -> pair z*+- = (+-sqrt(3)/2 + i/2) q(x)

Each saddle contributes (2 pi / lam) det(phi'')^(-1/2) exp(lam phi) with the
principal square root; conjugate pairs add up to twice the real part.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.optimize import minimize

from .finsler import dual_maximizer, solve_q
from .symbol import Coefficients, eval_symbol_complex, eval_symbol_real, real_part_expansion

SQRT3 = math.sqrt(3.0)


class UnsupportedConfiguration(ValueError):
    """(Q, x) outside the configurations with a proven saddle set."""


def phi(c: Coefficients, x, z):
    z = np.asarray(z, dtype=complex)
    return 1j * (z @ np.asarray(x, dtype=float)) - 0.25 * eval_symbol_complex(c, z)


def grad_phi(c: Coefficients, x, z):
    z1, z2 = np.asarray(z, dtype=complex)
    return np.array(
        [
            1j * x[0] - (c.alpha * z1**3 + c.beta * z1 * z2**2),
            1j * x[1] - (c.beta * z1**2 * z2 + c.gamma * z2**3),
        ]
    )


def hessian_phi(c: Coefficients, z):
    z1, z2 = np.asarray(z, dtype=complex)
    off = -2 * c.beta * z1 * z2
    return np.array(
        [
            [-(3 * c.alpha * z1**2 + c.beta * z2**2), off],
            [off, -(c.beta * z1**2 + 3 * c.gamma * z2**2)],
        ]
    )


def hessian_det(c: Coefficients, z) -> complex:
    h = hessian_phi(c, z)
    return complex(h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0])


@dataclass(frozen=True)
class SaddlePoint:
    location: np.ndarray
    phi_value: complex
    hessian_det: complex
    kind: str  # "dominant_pair" | "bifurcation_extra_pair"
    closed_form_det: Optional[complex] = None
    closed_form_phi: Optional[complex] = None
    x: tuple = field(default=(0.0, 0.0))

    def residual(self, c: Coefficients) -> float:
        return float(np.max(np.abs(grad_phi(c, self.x, self.location))))


def contribution(sp: SaddlePoint, lam: float) -> complex:
    """(2 pi / lam) det^(-1/2) exp(lam phi) with the principal root."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if sp.hessian_det == 0:
        raise ZeroDivisionError("degenerate saddle point (zero Hessian determinant)")
    return 2 * math.pi / lam / cmath.sqrt(sp.hessian_det) * cmath.exp(lam * sp.phi_value)


def pair_total(sp_plus: SaddlePoint, lam: float) -> float:
    return 2.0 * contribution(sp_plus, lam).real


# --- configuration handling -------------------------------------------------


@dataclass(frozen=True)
class _Frame:
    direction: str  # "axis" | "bisector" | "generic"
    s: float  # scale along the canonical direction in the normalized frame


def supported_direction(c: Coefficients, x) -> Optional[_Frame]:
    """Classify x in the normalized frame; None when x is neither axis nor bisector."""
    y = np.asarray(x, dtype=float) / c.frame
    a1, a2 = abs(y[0]), abs(y[1])
    scale = max(a1, a2)
    if scale == 0:
        return None
    if min(a1, a2) <= 1e-14 * scale:
        return _Frame("axis", scale)
    if abs(a1 - a2) <= 1e-14 * scale:
        return _Frame("bisector", a1)
    return None


def _check_direction(Q: float, direction: str):
    if direction == "bisector" and Q <= 0:
        return
    if direction == "axis" and Q >= 3:
        return
    raise UnsupportedConfiguration(
        f"no proven saddle set for Q={Q:g} on the {direction}; use Q<=0 with a bisector, "
        "Q>=3 with an axis, or ep_estimate for 0<Q<3"
    )


def _normalized_saddles(beta: float, direction: str):
    """Closed-form saddles for alpha = gamma = 1, x = (1,1) or (1,0).

    Returns (x, [(z, phi, det, kind), ...]) listing the '+' member of each pair
    followed by the '-' member.
    """
    b = beta
    out = []
    if direction == "bisector":
        x = (1.0, 1.0)
        ratio = ((1 + b) / (1 - b)) ** (1.0 / 3.0)
        xi0 = 0.5 * math.sqrt(3 - b) / ((1 + b) ** (1 / 6) * (1 - b) ** (1 / 3)) * np.array([1.0, -1.0])
        eta0 = 0.5 * ratio * np.array([1.0, 1.0])
        phi0 = -0.75 * ratio
        det0 = 3 * (3 - b) * (1 + b) ** (1 / 3) / (1 - b) ** (1 / 3)
        out += [(xi0 + 1j * eta0, phi0, det0, "dominant_pair"), (-xi0 + 1j * eta0, phi0, det0, "dominant_pair")]
        if b == 0:
            xs = 0.5 * SQRT3 * np.array([1.0, 1.0])
            ps = complex(-0.75, 0.75 * SQRT3)
            ds = 9 * cmath.exp(2j * math.pi / 3)
            out += [
                (xs + 1j * eta0, ps, ds, "bifurcation_extra_pair"),
                (-xs + 1j * eta0, ps.conjugate(), ds.conjugate(), "bifurcation_extra_pair"),
            ]
    else:
        x = (1.0, 0.0)
        m = (b * b - 1) ** (-1.0 / 3.0)
        xi0 = m * np.array([0.0, math.sqrt(b)])
        eta0 = m * np.array([1.0, 0.0])
        phi0 = -0.75 * m
        det0 = 6 * b * m
        out += [(xi0 + 1j * eta0, phi0, det0, "dominant_pair"), (-xi0 + 1j * eta0, phi0, det0, "dominant_pair")]
        if b == 3:
            xs = np.array([0.5 * SQRT3, 0.0])
            ps = complex(-0.375, 0.375 * SQRT3)
            ds = 9 * cmath.exp(2j * math.pi / 3)
            out += [
                (xs + 1j * eta0, ps, ds, "bifurcation_extra_pair"),
                (-xs + 1j * eta0, ps.conjugate(), ds.conjugate(), "bifurcation_extra_pair"),
            ]
    return x, out


def saddle_set(c: Coefficients, direction: str) -> List[SaddlePoint]:
    """Contributing saddles for x = D (1,1) (bisector) or D (1,0) (axis).

    D = diag(alpha^(1/4), gamma^(1/4)) maps to the normalized symbol, so for
    alpha = gamma = 1 the point is exactly (1,1) or (1,0). Locations, phi
    values and determinants are computed from phi itself and checked against
    the closed forms.
    """
    if direction not in ("axis", "bisector"):
        raise UnsupportedConfiguration(f"direction must be 'axis' or 'bisector', got {direction!r}")
    Q = c.Q
    _check_direction(Q, direction)
    xn, raw = _normalized_saddles(Q, direction)
    D = c.frame
    x = tuple(np.asarray(xn) * D)
    jac = math.sqrt(c.alpha * c.gamma)
    points = []
    for zn, ph, det, kind in raw:
        z = zn / D
        sp = SaddlePoint(
            location=z,
            phi_value=complex(phi(c, x, z)),
            hessian_det=hessian_det(c, z),
            kind=kind,
            closed_form_det=complex(det) * jac,
            closed_form_phi=complex(ph),
            x=x,
        )
        points.append(sp)
    return points


def optimal_shift(c: Coefficients, x) -> np.ndarray:
    """Imaginary shift eta0 of the integration plane for the point x.

    Minimizes the bound max_xi Re phi(xi + i eta) <= -x.eta + (k/4) A(eta):
    eta0 = r e_theta*, where theta* maximizes x.e / A(e)^(1/4) (the p*
    direction) and r^3 = x.e / (k A(e)). On the supported configurations this
    is Im of the contributing saddles; elsewhere it still bounds the integrand
    by the Gaussian rate exp(-lam (3/4) k^(-1/3) d0(x)^(4/3)).
    """
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        return np.zeros(2)
    _, theta = dual_maximizer(c, x)
    e = np.array([math.cos(theta), math.sin(theta)])
    r = (float(x @ e) / (c.k * float(eval_symbol_real(c, e)))) ** (1.0 / 3.0)
    return r * e


# --- asymptotic models ------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticEstimate:
    """F(lam) ~ amplitude * lam^power * exp(-rate lam) * bracket(lam).

    bracket is 1, 1 + cos(B lam + C) or cos(B lam + C) per ``oscillation_form``.
    """

    exp_rate_lambda: float
    amplitude: float
    power: float = -1.0
    oscillation_freq: float = 0.0
    oscillation_phase: float = 0.0
    oscillation_form: str = "none"  # "none" | "one_plus_cos" | "cos"
    case: str = ""

    def bracket(self, lam):
        lam = np.asarray(lam, dtype=float)
        arg = self.oscillation_freq * lam + self.oscillation_phase
        if self.oscillation_form == "none":
            return np.ones_like(lam)
        if self.oscillation_form == "one_plus_cos":
            return 1.0 + np.cos(arg)
        return np.cos(arg)

    def f_model(self, lam):
        lam = np.asarray(lam, dtype=float)
        return self.amplitude * lam**self.power * np.exp(-self.exp_rate_lambda * lam) * self.bracket(lam)

    def scale(self, lam):
        """Factor turning F into the bracket: lam^-power e^(rate lam) / amplitude."""
        lam = np.asarray(lam, dtype=float)
        return lam ** (-self.power) * np.exp(self.exp_rate_lambda * lam) / self.amplitude

    def peaks(self, lam_min: float, lam_max: float):
        """lam in [lam_min, lam_max] where the cosine equals +1."""
        if self.oscillation_form == "none":
            return np.array([])
        B, C = self.oscillation_freq, self.oscillation_phase
        k0 = math.ceil((B * lam_min + C) / (2 * math.pi))
        k1 = math.floor((B * lam_max + C) / (2 * math.pi))
        return (2 * math.pi * np.arange(k0, k1 + 1) - C) / B

    def troughs(self, lam_min: float, lam_max: float):
        """lam in [lam_min, lam_max] where the cosine equals -1."""
        if self.oscillation_form == "none":
            return np.array([])
        B, C = self.oscillation_freq, self.oscillation_phase
        k0 = math.ceil((B * lam_min + C - math.pi) / (2 * math.pi))
        k1 = math.floor((B * lam_max + C - math.pi) / (2 * math.pi))
        return (2 * math.pi * np.arange(k0, k1 + 1) + math.pi - C) / B

    # G(x, t) ~ g_prefactor t^(-1/3) exp(-g_rate t^(-1/3)) bracket, with lam = (4t)^(-1/3)
    @property
    def g_prefactor(self) -> float:
        return self.amplitude * 4 ** (-1 / 3) / (4 * math.pi**2)

    @property
    def g_rate(self) -> float:
        return self.exp_rate_lambda * 4 ** (-1 / 3)

    @property
    def g_freq(self) -> float:
        return self.oscillation_freq * 4 ** (-1 / 3)

    def g_model(self, t):
        t = np.asarray(t, dtype=float)
        lam = (4 * t) ** (-1 / 3)
        return lam**2 * self.f_model(lam) / (4 * math.pi**2)

    def as_dict(self):
        return {
            "case": self.case,
            "F": {
                "rate": self.exp_rate_lambda,
                "power": self.power,
                "amplitude": self.amplitude,
                "freq": self.oscillation_freq,
                "phase": self.oscillation_phase,
                "form": self.oscillation_form,
            },
            "G": {
                "prefactor": self.g_prefactor,
                "t_power": -1.0 / 3.0,
                "rate": self.g_rate,
                "freq": self.g_freq,
                "phase": self.oscillation_phase,
                "form": self.oscillation_form,
            },
        }


def _normalized_model(beta: float, direction: str) -> AsymptoticEstimate:
    """F-space formulas for s = 1, alpha = gamma = 1."""
    b = beta
    four_pi = 4 * math.pi
    if direction == "bisector":
        if b < 0:
            return AsymptoticEstimate(
                exp_rate_lambda=0.75 * ((1 + b) / (1 - b)) ** (1 / 3),
                amplitude=four_pi * (1 - b) ** (1 / 6) / (SQRT3 * (3 - b) ** 0.5 * (1 + b) ** (1 / 6)),
                case="bisector_subconvex",
            )
        return AsymptoticEstimate(
            exp_rate_lambda=0.75,
            amplitude=four_pi / 3,
            oscillation_freq=0.75 * SQRT3,
            oscillation_phase=-math.pi / 3,
            oscillation_form="one_plus_cos",
            case="bisector_touching",
        )
    if b == 3:
        return AsymptoticEstimate(
            exp_rate_lambda=0.375,
            amplitude=four_pi / 3,
            oscillation_freq=0.375 * SQRT3,
            oscillation_phase=-math.pi / 3,
            oscillation_form="one_plus_cos",
            case="axis_touching",
        )
    return AsymptoticEstimate(
        exp_rate_lambda=0.75 * (b * b - 1) ** (-1 / 3),
        amplitude=four_pi * (6 * b) ** -0.5 * (b * b - 1) ** (1 / 6),
        case="axis_superconvex",
    )


def theorem2_estimate(c: Coefficients, x, s: float = 1.0) -> AsymptoticEstimate:
    """Short-time model of F(lam) at the point s*x for Q <= 0 or Q >= 3.

    x must lie on a bisector (Q <= 0) or an axis (Q >= 3) of the normalized
    frame. Uses F_{s x}(lam) = s^(2/3) F_x(s^(4/3) lam) and
    F_c = (alpha gamma)^(-1/4) F_normalized.
    """
    pt = float(s) * np.asarray(x, dtype=float)
    frame = supported_direction(c, pt)
    if frame is None:
        raise UnsupportedConfiguration(f"x={tuple(pt)} is neither on an axis nor a bisector")
    Q = c.Q
    _check_direction(Q, frame.direction)
    base = _normalized_model(Q, frame.direction)
    sc = frame.s
    s43 = sc ** (4 / 3)
    return AsymptoticEstimate(
        exp_rate_lambda=base.exp_rate_lambda * s43,
        amplitude=base.amplitude * sc ** (-2 / 3) * (c.alpha * c.gamma) ** -0.25,
        oscillation_freq=base.oscillation_freq * s43,
        oscillation_phase=base.oscillation_phase,
        oscillation_form=base.oscillation_form,
        case=base.case,
    )


@dataclass(frozen=True)
class GenericPointData:
    q: np.ndarray
    a_of_q: float
    saddle: SaddlePoint
    h: float
    estimate: AsymptoticEstimate


def ep_analysis(c: Coefficients, x, arg_tol: float = 1e-8) -> GenericPointData:
    """Strongly convex case 0 < Q < 3: saddles z*+- = (+-sqrt3/2 + i/2) q(x)."""
    x = np.asarray(x, dtype=float)
    q = solve_q(c, x)
    aq = float(eval_symbol_real(c, q))
    z = complex(0.5 * SQRT3, 0.5) * q
    det = hessian_det(c, z)
    arg = cmath.phase(det)
    if abs(arg - 2 * math.pi / 3) > arg_tol:
        raise ArithmeticError(f"arg det(phi'') at z*+ is {arg!r}, expected 2 pi/3")
    h = abs(det) ** 0.75
    sp = SaddlePoint(
        location=z,
        phi_value=complex(phi(c, x, z)),
        hessian_det=det,
        kind="dominant_pair",
        closed_form_phi=complex(-0.375 * aq, 0.375 * SQRT3 * aq),
        x=tuple(x),
    )
    est = AsymptoticEstimate(
        exp_rate_lambda=0.375 * aq,
        amplitude=4 * math.pi * h ** (-2 / 3),
        oscillation_freq=0.375 * SQRT3 * aq,
        oscillation_phase=-math.pi / 3,
        oscillation_form="cos",
        case="generic",
    )
    return GenericPointData(q=q, a_of_q=aq, saddle=sp, h=h, estimate=est)


def ep_estimate(c: Coefficients, x) -> AsymptoticEstimate:
    return ep_analysis(c, x).estimate


def estimate_for(c: Coefficients, x) -> AsymptoticEstimate:
    """The axis or bisector model, or the generic-point model when 0 < Q < 3."""
    if 0 < c.Q < 3:
        return ep_estimate(c, x)
    return theorem2_estimate(c, x)


# --- equality locus ---------------------------------------------------------


@dataclass(frozen=True)
class EqualityLocusReport:
    eta0: np.ndarray
    offset: float  # |Re A(z0+)|
    expected_zeros: np.ndarray
    zero_residuals: np.ndarray
    grid_min: float
    found_zeros: np.ndarray
    phi_height_excess: float  # max over grid of Re phi - Re phi(z0+)

    @property
    def n_zeros(self) -> int:
        return len(self.found_zeros)


def _expected_zero_set(c: Coefficients, x):
    Q = c.Q
    if 0 < Q < 3:
        d = ep_analysis(c, x)
        z = d.saddle.location
        return np.array([z.real, -z.real]), z.imag
    frame = supported_direction(c, x)
    if frame is None or frame.s != 1.0:
        raise UnsupportedConfiguration("equality locus needs x = D (1,1) or D (1,0)")
    pts = saddle_set(c, frame.direction)
    return np.array([p.location.real for p in pts]), pts[0].location.imag


def equality_locus_check(c: Coefficients, x=None, n_grid: int = 201) -> EqualityLocusReport:
    """Check Re A(xi + i eta0) + |Re A(z0+)| >= 0 with zeros only at the saddles.

    Samples the left side on an n_grid^2 xi-grid, polishes every grid local
    minimum with BFGS, and reports the distinct zeros found.
    """
    Q = c.Q
    if x is None:
        if Q <= 0:
            x = np.array([1.0, 1.0]) * c.frame
        elif Q >= 3:
            x = np.array([1.0, 0.0]) * c.frame
        else:
            raise UnsupportedConfiguration("pass x explicitly for 0 < Q < 3")
    x = np.asarray(x, dtype=float)
    zeros, eta0 = _expected_zero_set(c, x)
    z0 = zeros[0] + 1j * eta0
    offset = -float(eval_symbol_complex(c, z0).real)

    def v(xi):
        return real_part_expansion(c, xi, np.broadcast_to(eta0, np.shape(xi))) + offset

    residuals = np.abs(v(zeros))
    L = 1.5 * float(np.max(np.abs(zeros))) + 0.5
    g = np.linspace(-L, L, n_grid)
    X1, X2 = np.meshgrid(g, g, indexing="ij")
    vals = v(np.stack([X1, X2], axis=-1))
    core = vals[1:-1, 1:-1]
    is_min = np.ones_like(core, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                is_min &= core <= vals[1 + di : n_grid - 1 + di, 1 + dj : n_grid - 1 + dj]
    found = []
    scale = max(offset, 1.0)
    for i, j in zip(*np.nonzero(is_min)):
        start = np.array([g[i + 1], g[j + 1]])
        res = minimize(lambda p: float(v(p)), start, method="BFGS", options={"gtol": 1e-14})
        if res.fun <= 1e-10 * scale and not any(np.linalg.norm(res.x - f) < 1e-4 for f in found):
            found.append(res.x)
    height = 0.25 * (-vals)  # Re phi(z) - Re phi(z0+) = -v/4
    return EqualityLocusReport(
        eta0=np.asarray(eta0),
        offset=offset,
        expected_zeros=zeros,
        zero_residuals=residuals,
        grid_min=float(vals.min()),
        found_zeros=np.array(found),
        phi_height_excess=float(height.max()),
    )
