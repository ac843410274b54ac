"""High-accuracy quadrature oracle for the heat kernel and F(lambda).

    G(x, t)   = (2 pi)^-2 int exp(i xi.x - t A(xi)) dxi
    F(lambda) = int exp(lambda (i x.xi - A(xi)/4)) dxi
    G(x, t)   = (2 pi)^-2 (4t)^(-2/3) F((4t)^(-1/3))

F is integrated with tensor Gauss-Legendre panels over a square, either on
R^2 ("direct") or on the shifted plane R^2 + i eta ("shifted"). The two are
equal by Cauchy's theorem; the shifted form avoids the cancellation that
ruins the direct form once F is exponentially small compared with its
integrand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import integrate

from . import kernels
from .symbol import Coefficients, ellipticity_constant

DIRECT_LAMBDA_MAX = 8.0
# envelope ratio (relative to the contour's peak) below which the plane is cut
TAIL_TOL = 1e-17
NOISE_FACTOR = 64 * np.finfo(float).eps
# the direct contour is given up once its integrand outweighs the answer by this
CANCELLATION_LIMIT = 1e12


class ToleranceError(RuntimeError):
    """Requested accuracy not reached; carries the best available value."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class CancellationError(ToleranceError):
    """Direct-contour integrand dwarfs the answer; use the shifted contour."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature layout; ``None`` fields are chosen automatically per call."""

    truncation_radius: Optional[float] = None
    panels_per_axis: Optional[int] = None
    nodes_per_panel: int = 16
    contour_shift: Optional[tuple] = None
    target_rel_tol: float = 1e-8
    max_refinements: int = 5
    backend: Optional[str] = None


@dataclass(frozen=True)
class KernelValue:
    value: float
    estimated_error: float
    method: str
    converged: bool = True
    imag_residue: float = 0.0
    panels_per_axis: int = 0
    truncation_radius: float = 0.0
    contour_shift: tuple = (0.0, 0.0)
    abs_integral: float = 0.0

    @property
    def rel_error(self) -> float:
        return self.estimated_error / abs(self.value) if self.value else math.inf


@lru_cache(maxsize=64)
def _panel_rule(panels: int, nodes: int, radius: float):
    """Composite Gauss-Legendre rule on [-radius, radius]."""
    t, w = np.polynomial.legendre.leggauss(nodes)
    h = 2.0 * radius / panels
    left = -radius + h * np.arange(panels)
    pts = (left[:, None] + 0.5 * h * (t[None, :] + 1.0)).ravel()
    wts = np.tile(0.5 * h * w, panels)
    pts.setflags(write=False)
    wts.setflags(write=False)
    return pts, wts


def _phi(c: Coefficients, x, z1, z2):
    s1, s2 = z1 * z1, z2 * z2
    return 1j * (x[0] * z1 + x[1] * z2) - 0.25 * (c.alpha * s1 * s1 + 2 * c.beta * s1 * s2 + c.gamma * s2 * s2)


def _grad_phi_norm(c: Coefficients, x, z1, z2):
    g1 = 1j * x[0] - (c.alpha * z1**3 + c.beta * z1 * z2 * z2)
    g2 = 1j * x[1] - (c.beta * z1 * z1 * z2 + c.gamma * z2**3)
    return np.sqrt(np.abs(g1) ** 2 + np.abs(g2) ** 2)


def _ring_profile(c, x, eta, radii, n_angles=256):
    th = np.linspace(0.0, 2 * np.pi, n_angles, endpoint=False)
    z1 = radii[:, None] * np.cos(th)[None, :] + 1j * eta[0]
    z2 = radii[:, None] * np.sin(th)[None, :] + 1j * eta[1]
    re = _phi(c, x, z1, z2).real
    return re.max(axis=1), _grad_phi_norm(c, x, z1, z2).max(axis=1)


def plan_domain(c: Coefficients, x, lam: float, eta, tail_tol: float = TAIL_TOL):
    """Choose (radius, peak height, max |grad phi|) for the contour R^2 + i eta.

    The radius is the smallest ring radius beyond which
    exp(lam * (Re phi - peak)) stays below ``tail_tol`` on every sampled ring.
    Beyond the direct-contour radius (A(xi) >= c_ell |xi|^4) the quartic term
    dominates, so the scan window is grown until its outer part is clear.
    """
    x = np.asarray(x, dtype=float)
    eta = np.asarray(eta, dtype=float)
    log_tail = math.log(tail_tol)
    c_ell = ellipticity_constant(c)
    r_direct = (4.0 * -log_tail / (lam * c_ell)) ** 0.25
    if not np.any(eta):
        peak = 0.0
        radii = np.linspace(0.0, r_direct, 64)
        _, grad = _ring_profile(c, x, eta, radii)
        return r_direct, peak, float(lam * grad.max())

    r_max = r_direct + 4.0 * float(np.hypot(*eta)) + 1.0
    for _ in range(20):
        radii = np.linspace(0.0, r_max, 400)
        height, grad = _ring_profile(c, x, eta, radii)
        peak = float(height.max())
        live = lam * (height - peak) >= log_tail
        last = int(np.nonzero(live)[0].max())
        if last < 0.8 * (len(radii) - 1):
            radius = float(radii[min(last + 1, len(radii) - 1)])
            return radius, peak, float(lam * grad[: last + 2].max())
        r_max *= 1.5
    raise ToleranceError("could not bound the contour envelope")


def _initial_panels(radius, freq, nodes):
    # the largest |grad phi| sits in the far tail where the integrand is
    # already negligible, so start near one node per wavelength there and let
    # the doubling loop refine
    n_total = 2.0 * radius * freq / (2 * np.pi) / 8.0
    return max(4, int(math.ceil(n_total / nodes)))


def _integrate(c, x, lam, eta, spec: QuadratureSpec, method: str) -> KernelValue:
    x = np.asarray(x, dtype=float)
    eta = np.asarray(eta, dtype=float)
    radius, peak, freq = plan_domain(c, x, lam, eta)
    if spec.truncation_radius is not None:
        radius = float(spec.truncation_radius)
    n = spec.nodes_per_panel
    panels = spec.panels_per_axis or _initial_panels(radius, freq, n)
    shift = lam * peak
    scale = math.exp(shift)

    def level(p):
        pts, wts = _panel_rule(p, n, radius)
        return kernels.tensor_sum(
            pts, wts, pts, wts, x, eta, lam, c.alpha, c.beta, c.gamma, shift=shift, backend=spec.backend
        )

    prev, _ = level(panels)
    for _ in range(spec.max_refinements):
        panels *= 2
        cur, l1 = level(panels)
        floor = NOISE_FACTOR * l1
        diff = abs(cur - prev)
        if diff <= max(spec.target_rel_tol * abs(cur.real), floor):
            # refining further cannot get below the rounding floor
            break
        prev = cur
    err = (max(diff, floor) + abs(cur.imag)) * scale
    converged = err <= spec.target_rel_tol * abs(cur.real) * scale
    return KernelValue(
        value=cur.real * scale,
        estimated_error=err,
        method=method,
        converged=bool(converged),
        imag_residue=abs(cur.imag) * scale,
        panels_per_axis=panels,
        truncation_radius=radius,
        contour_shift=(float(eta[0]), float(eta[1])),
        abs_integral=l1 * scale,
    )


def _check_lambda(lam):
    if not lam > 0 or not math.isfinite(lam):
        raise ValueError(f"lambda must be positive and finite, got {lam}")


def f_lambda_direct(c: Coefficients, x, lam: float, spec: QuadratureSpec = QuadratureSpec()) -> KernelValue:
    """F(lambda) on the real plane. Trustworthy while F is not tiny vs. its integrand.

    Raises CancellationError (carrying the value) when the L1 norm of the
    integrand exceeds |F| by more than CANCELLATION_LIMIT.
    """
    _check_lambda(lam)
    kv = _integrate(c, x, lam, (0.0, 0.0), spec, "direct")
    if kv.abs_integral > CANCELLATION_LIMIT * abs(kv.value):
        ratio = kv.abs_integral / abs(kv.value) if kv.value else math.inf
        raise CancellationError(
            f"direct contour cancels {ratio:.1e}-fold at lambda={lam:g}; "
            "use the shifted contour",
            kv,
        )
    return kv


def f_lambda_shifted(c: Coefficients, x, lam: float, eta0=None, spec: QuadratureSpec = QuadratureSpec()) -> KernelValue:
    """F(lambda) on R^2 + i eta0; ``eta0=None`` picks the saddle-point shift."""
    _check_lambda(lam)
    if eta0 is None:
        eta0 = spec.contour_shift
    if eta0 is None:
        from .saddle import optimal_shift

        eta0 = optimal_shift(c, x)
    return _integrate(c, x, lam, eta0, spec, "shifted")


def f_lambda(c: Coefficients, x, lam: float, method: str = "auto", spec: QuadratureSpec = QuadratureSpec()) -> KernelValue:
    if method == "auto":
        method = "direct" if lam <= DIRECT_LAMBDA_MAX and spec.contour_shift is None else "shifted"
    if method == "direct":
        return f_lambda_direct(c, x, lam, spec)
    if method == "shifted":
        return f_lambda_shifted(c, x, lam, None, spec)
    raise ValueError(f"unknown method {method!r}")


def lambda_of_t(t: float) -> float:
    return (4.0 * t) ** (-1.0 / 3.0)


def t_of_lambda(lam: float) -> float:
    return 0.25 * lam**-3


def green_from_f(f_value: float, t: float) -> float:
    return f_value / ((2 * np.pi) ** 2 * (4.0 * t) ** (2.0 / 3.0))


def green_function(c: Coefficients, x, t: float, spec: QuadratureSpec = QuadratureSpec(), method: str = "auto") -> KernelValue:
    """Heat kernel G(x, t) through the F(lambda) representation."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    fv = f_lambda(c, x, lambda_of_t(t), method, spec)
    factor = 1.0 / ((2 * np.pi) ** 2 * (4.0 * t) ** (2.0 / 3.0))
    return replace(
        fv,
        value=fv.value * factor,
        estimated_error=fv.estimated_error * factor,
        imag_residue=fv.imag_residue * factor,
        abs_integral=fv.abs_integral * factor,
    )


def kernel_1d(x1: float, t: float, rtol: float = 1e-12) -> float:
    """(2 pi)^-1 int exp(i xi x1 - t xi^4) dxi for the 1D quartic symbol.

    Integrated by adaptive quadrature (QUADPACK) on the line Im xi = eta,
    eta = sign(x1) |x1|^(1/3) / (2 (4t)^(1/3)), which passes through the
    contributing saddle points. Independent of the 2D panel machinery.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    x1 = abs(float(x1))  # even in x1
    eta = 0.5 * (x1 / (4.0 * t)) ** (1.0 / 3.0) if x1 else 0.0

    def expo(u):
        z = u + 1j * eta
        return 1j * z * x1 - t * z**4

    peak = max(expo(u).real for u in np.linspace(0.0, 4.0 * max(eta, t**-0.25), 401))

    def f(u):
        # the integrand at -u is the conjugate of that at u; fold onto u >= 0
        return 2.0 * math.exp(expo(u).real - peak) * math.cos(expo(u).imag)

    # Re(expo) peaks near u = sqrt(3) eta, then falls off like -t u^4
    reach = 2.0 * math.sqrt(3.0) * eta + t**-0.25
    while (expo(reach).real - peak) > -45.0:
        reach *= 1.5
    val, _ = integrate.quad(f, 0.0, reach, epsabs=0.0, epsrel=rtol, limit=500)
    return val * math.exp(peak) / (2.0 * math.pi)
