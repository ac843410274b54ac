"""Quasi-norm p = A^(1/4), its dual p*, and the distance d0 = p*.

p* is computed by brute maximization over the unit circle: a dense angular
scan picks the best bracket and a bounded 1D search polishes it. The
function theta -> x . e_theta / A(e_theta)^(1/4) has at most eight
stationary points, so a 4096-point scan cannot lose the global maximum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .symbol import Coefficients, eval_symbol_real

SCAN_POINTS = 4096
ANGLE_TOL = 1e-12


class ConvergenceError(RuntimeError):
    pass


def quasi_norm_p(c: Coefficients, xi):
    return eval_symbol_real(c, xi) ** 0.25


def _unit(theta):
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def _ratio(c: Coefficients, x, theta):
    e = _unit(theta)
    return (e @ x) / eval_symbol_real(c, e) ** 0.25


def dual_maximizer(c: Coefficients, x, scan_points: int = SCAN_POINTS):
    """Return ``(p*(x), theta*)`` with theta* the maximizing direction."""
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        return 0.0, 0.0
    thetas = np.linspace(0.0, 2 * np.pi, scan_points, endpoint=False)
    vals = _ratio(c, x, thetas)
    i = int(np.argmax(vals))
    h = 2 * np.pi / scan_points
    lo, hi = thetas[i] - h, thetas[i] + h
    res = minimize_scalar(
        lambda th: -_ratio(c, x, np.asarray(th)),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": ANGLE_TOL, "maxiter": 500},
    )
    if not res.success:
        raise ConvergenceError(f"p* refinement failed: {res.message}")
    best = -res.fun
    if best < vals[i]:
        # the scan node itself beat the polished point (flat maximum)
        return float(vals[i]), float(thetas[i])
    return float(best), float(res.x)


def dual_norm_p_star(c: Coefficients, x) -> float:
    """p*(x) = max over xi != 0 of x . xi / p(xi)."""
    return dual_maximizer(c, x)[0]


def closed_form_d0(c: Coefficients, x):
    """Closed form of d0(x) when the maximizing direction is known, else None.

    In the normalized frame y = (alpha^(-1/4) x1, gamma^(-1/4) x2) the axes
    maximize for Q >= 0 and the bisectors for Q <= 3; there
    d0(x) = |y|^2 / p_normalized(y).
    """
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        return 0.0
    y = x / c.frame
    a1, a2 = abs(y[0]), abs(y[1])
    scale = max(a1, a2)
    on_axis = min(a1, a2) <= 1e-15 * scale
    on_bisector = abs(a1 - a2) <= 1e-15 * scale
    Q = c.Q
    if (on_axis and Q >= 0) or (on_bisector and Q <= 3):
        return float((y @ y) / eval_symbol_real(c.normalized, y) ** 0.25)
    return None


def distance_d0(c: Coefficients, x) -> float:
    closed = closed_form_d0(c, x)
    if closed is not None:
        return closed
    return dual_norm_p_star(c, x)


@dataclass(frozen=True)
class DirectionAnalysis:
    phi: float
    g_value: float
    g_prime: float
    is_equality_direction: bool


def g_and_derivative(c: Coefficients, phi: float, theta):
    """g(theta) = e_phi . e_theta / A(e_theta)^(1/4) and its theta-derivative."""
    theta = np.asarray(theta, dtype=float)
    ct, st = np.cos(theta), np.sin(theta)
    A = c.alpha * ct**4 + 2 * c.beta * ct**2 * st**2 + c.gamma * st**4
    dA = 4 * ct * st * (-c.alpha * ct**2 + c.beta * (ct**2 - st**2) + c.gamma * st**2)
    cosd = np.cos(phi - theta)
    g = cosd * A**-0.25
    gp = np.sin(phi - theta) * A**-0.25 - 0.25 * cosd * A**-1.25 * dA
    return g, gp


def direction_stationarity(c: Coefficients, phi: float, tol: float = 1e-12) -> DirectionAnalysis:
    """Evaluate g and g' at theta = phi.

    ``is_equality_direction`` flags g'(phi) = 0, i.e. theta = phi is a
    critical point of g; for alpha = gamma this is exactly sin 4 phi = 0.
    """
    g, gp = g_and_derivative(c, phi, phi)
    return DirectionAnalysis(float(phi), float(g), float(gp), bool(abs(gp) <= tol))


def quarter_gradient(c: Coefficients, q):
    q1, q2 = q
    return np.array(
        [
            c.alpha * q1**3 + c.beta * q1 * q2**2,
            c.beta * q1**2 * q2 + c.gamma * q2**3,
        ]
    )


def _quarter_jacobian(c: Coefficients, q):
    q1, q2 = q
    off = 2 * c.beta * q1 * q2
    return np.array(
        [
            [3 * c.alpha * q1**2 + c.beta * q2**2, off],
            [off, c.beta * q1**2 + 3 * c.gamma * q2**2],
        ]
    )


def solve_q(c: Coefficients, x, rtol: float = 1e-12, max_iter: int = 100) -> np.ndarray:
    """Solve (1/4) grad A(q) = x by damped Newton; needs 0 < Q < 3."""
    Q = c.Q
    if not 0 < Q < 3:
        raise ValueError(f"solve_q needs 0 < Q < 3 (strict convexity), got Q={Q}")
    x = np.asarray(x, dtype=float)
    nx = float(np.hypot(*x))
    if nx == 0:
        raise ValueError("solve_q needs x != 0")
    q = nx ** (1.0 / 3.0) * x / nx
    r = quarter_gradient(c, q) - x
    rn = float(np.hypot(*r))
    for _ in range(max_iter):
        if rn <= rtol * nx:
            return _polish(c, x, q, rn)
        step = np.linalg.solve(_quarter_jacobian(c, q), r)
        damp = 1.0
        while True:
            trial = q - damp * step
            rt = quarter_gradient(c, trial) - x
            rtn = float(np.hypot(*rt))
            if rtn < rn or damp < 1e-10:
                break
            damp *= 0.5
        if rtn >= rn:
            raise ConvergenceError(f"Newton stalled at residual {rn:.3e}")
        q, r, rn = trial, rt, rtn
    if rn <= rtol * nx:
        return _polish(c, x, q, rn)
    raise ConvergenceError(f"Newton did not converge in {max_iter} iterations (residual {rn:.3e})")


def _polish(c: Coefficients, x, q, rn):
    # one more full step squeezes out the last digits; keep it only if it helps
    trial = q - np.linalg.solve(_quarter_jacobian(c, q), quarter_gradient(c, q) - x)
    return trial if float(np.hypot(*(quarter_gradient(c, trial) - x))) < rn else q


def check_aq_distance(c: Coefficients, x) -> float:
    """Relative residual |A(q(x)) - p*(x)^(4/3)| / p*(x)^(4/3)."""
    q = solve_q(c, x)
    target = dual_norm_p_star(c, x) ** (4.0 / 3.0)
    return abs(float(eval_symbol_real(c, q)) - target) / target
