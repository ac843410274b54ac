"""The quartic symbol A(xi) = alpha xi1^4 + 2 beta xi1^2 xi2^2 + gamma xi2^4.

Evaluation over R^2 and C^2, the convexity ratio Q = beta / sqrt(alpha gamma),
the sharp constants k(Q) and sigma(Q), and the sum-of-squares decompositions
that prove Re A(xi + i eta) >= -k A(eta).

All functions broadcast over a trailing axis of length 2 for vector inputs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np


class EllipticityError(ValueError):
    """Coefficients violate alpha > 0, gamma > 0, Q > -1."""


class Branch(str, enum.Enum):
    SUBCONVEX = "subconvex"  # -1 < Q < 0
    STRONGLY_CONVEX = "strongly_convex"  # 0 <= Q <= 3
    SUPERCONVEX = "superconvex"  # Q > 3


@dataclass(frozen=True)
class Regime:
    branch: Branch
    on_boundary: Optional[float] = None  # 0.0 or 3.0 when Q sits on an edge

    def __str__(self):
        if self.on_boundary is None:
            return self.branch.value
        return f"{self.branch.value}(Q={self.on_boundary:g})"


@dataclass(frozen=True)
class Coefficients:
    alpha: float = 1.0
    beta: float = 0.0
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise EllipticityError(f"{name}={v} is not finite")
        if self.alpha <= 0 or self.gamma <= 0:
            raise EllipticityError(
                f"alpha and gamma must be positive, got alpha={self.alpha}, gamma={self.gamma}"
            )
        if self.Q <= -1:
            raise EllipticityError(f"Q = beta/sqrt(alpha*gamma) = {self.Q} <= -1, not elliptic")

    @property
    def Q(self) -> float:
        return self.beta / np.sqrt(self.alpha * self.gamma)

    @property
    def regime(self) -> Regime:
        return classify(self.Q)

    @property
    def k(self) -> float:
        return k_of_q(self.Q)

    @property
    def sigma(self) -> float:
        return sigma_of_q(self.Q)

    @property
    def normalized(self) -> "Coefficients":
        """The (1, Q, 1) symbol obtained by rescaling xi1, xi2."""
        return Coefficients(1.0, self.Q, 1.0)

    @property
    def frame(self) -> np.ndarray:
        """Diagonal D with A(xi) = A_normalized(D xi)."""
        return np.array([self.alpha**0.25, self.gamma**0.25])


@dataclass(frozen=True)
class CoefficientBatch:
    """Many coefficient triples at once, for vectorized identity checks.

    Accepted wherever a function only needs alpha, beta, gamma and Q; the
    arrays broadcast against the leading axes of xi and eta.
    """

    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        a, b, g = (np.asarray(v, dtype=float) for v in (self.alpha, self.beta, self.gamma))
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "gamma", g)
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b)) and np.all(np.isfinite(g))):
            raise EllipticityError("non-finite coefficient in batch")
        if np.any(a <= 0) or np.any(g <= 0):
            raise EllipticityError("alpha and gamma must be positive")
        if np.any(self.Q <= -1):
            raise EllipticityError("batch contains Q <= -1")

    @property
    def Q(self) -> np.ndarray:
        return self.beta / np.sqrt(self.alpha * self.gamma)

    @property
    def k(self) -> np.ndarray:
        return k_of_q(self.Q)

    def __getitem__(self, idx) -> "CoefficientBatch":
        return CoefficientBatch(self.alpha[idx], self.beta[idx], self.gamma[idx])


def classify(Q: float) -> Regime:
    if Q <= -1:
        raise EllipticityError(f"Q = {Q} <= -1, not elliptic")
    if Q < 0:
        return Regime(Branch.SUBCONVEX)
    if Q == 0:
        return Regime(Branch.STRONGLY_CONVEX, 0.0)
    if Q < 3:
        return Regime(Branch.STRONGLY_CONVEX)
    if Q == 3:
        return Regime(Branch.STRONGLY_CONVEX, 3.0)
    return Regime(Branch.SUPERCONVEX)


def branch_of(Q) -> Branch:
    return classify(float(Q)).branch


def k_of_q(Q):
    """Sharp constant k in Re A(xi + i eta) >= -k A(eta); vectorized."""
    Q = np.asarray(Q, dtype=float)
    if np.any(Q <= -1):
        raise EllipticityError("Q <= -1 is not elliptic")
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.where(Q < 0, 8.0 * (1.0 - Q) / (1.0 + Q) ** 2, np.where(Q <= 3, 8.0, Q * Q - 1.0))
    return k[()] if k.ndim == 0 else k


def sigma_of_k(k):
    return 0.75 * (1.0 / (4.0 * np.asarray(k, dtype=float))) ** (1.0 / 3.0)


def sigma_of_q(Q):
    s = sigma_of_k(k_of_q(Q))
    return s[()] if np.ndim(s) == 0 else s


def convexity_data(c: Coefficients):
    """Return ``(Q, regime, k, sigma)`` for an elliptic coefficient triple."""
    Q = c.Q
    return Q, classify(Q), float(k_of_q(Q)), float(sigma_of_q(Q))


def _split(v):
    v = np.asarray(v)
    return v[..., 0], v[..., 1]


def eval_symbol_real(c: Coefficients, xi):
    x1, x2 = _split(np.asarray(xi, dtype=float))
    s1, s2 = x1 * x1, x2 * x2
    return c.alpha * s1 * s1 + 2.0 * c.beta * s1 * s2 + c.gamma * s2 * s2


def eval_symbol_complex(c: Coefficients, z):
    z1, z2 = _split(np.asarray(z, dtype=complex))
    s1, s2 = z1 * z1, z2 * z2
    return c.alpha * s1 * s1 + 2.0 * c.beta * s1 * s2 + c.gamma * s2 * s2


def real_part_expansion(c: Coefficients, xi, eta):
    """Re A(xi + i eta) written out as a real polynomial (no complex arithmetic)."""
    x1, x2 = _split(np.asarray(xi, dtype=float))
    e1, e2 = _split(np.asarray(eta, dtype=float))
    return (
        c.alpha * (x1**4 - 6 * x1**2 * e1**2 + e1**4)
        + 2 * c.beta * (x1**2 * x2**2 - x1**2 * e2**2 - x2**2 * e1**2 - 4 * x1 * x2 * e1 * e2 + e1**2 * e2**2)
        + c.gamma * (x2**4 - 6 * x2**2 * e2**2 + e2**4)
    )


def ellipticity_constant(c: Coefficients) -> float:
    """Largest c_ell we can certify with A(xi) >= c_ell |xi|^4.

    With u = sqrt(alpha) xi1^2, v = sqrt(gamma) xi2^2 we have
    A = u^2 + 2Quv + v^2 >= min(1, 1 + Q)(u^2 + v^2), and
    xi1^4 + xi2^4 >= |xi|^4 / 2.
    """
    return 0.5 * min(1.0, 1.0 + c.Q) * min(c.alpha, c.gamma)


def _natural_branch_codes(Q):
    Q = np.asarray(Q, dtype=float)
    return np.where(Q < 0, 0, np.where(Q <= 3, 1, 2))


_BRANCH_BY_CODE = (Branch.SUBCONVEX, Branch.STRONGLY_CONVEX, Branch.SUPERCONVEX)


def _resolve_branch(c, branch) -> Branch:
    """Branch whose identity is applied; one branch for a whole batch."""
    Q = np.asarray(c.Q, dtype=float)
    codes = _natural_branch_codes(Q)
    if branch is None:
        uniq = np.unique(codes)
        if len(uniq) != 1:
            raise ValueError("samples span several branches; split the batch or pass branch=")
        return _BRANCH_BY_CODE[int(uniq[0])]
    branch = Branch(branch)
    code = _BRANCH_BY_CODE.index(branch)
    ok = codes == code
    if branch is Branch.SUBCONVEX:
        ok |= Q == 0
    if branch is Branch.SUPERCONVEX:
        ok |= Q == 3
    if not np.all(ok):
        raise ValueError(f"branch {branch.value} does not apply at Q={Q[~ok].ravel()[0]}")
    return branch


def branch_k(Q, branch: Branch):
    if branch is Branch.SUBCONVEX:
        return 8.0 * (1.0 - Q) / (1.0 + Q) ** 2
    if branch is Branch.STRONGLY_CONVEX:
        return 8.0 + 0.0 * Q
    return Q * Q - 1.0


def lemma1_decomposition(c: Coefficients, xi, eta, branch=None):
    """Sum-of-squares form of Re A(xi + i eta) + k A(eta).

    Returns ``(lhs, terms)``: ``lhs`` computed directly from the symbol, and
    ``terms`` the signed square terms of the branch identity; ``sum(terms)``
    reconstructs ``lhs``. ``branch`` may be forced to the adjacent branch at
    Q = 0 (subconvex) or Q = 3 (superconvex), where both identities hold.
    """
    branch = _resolve_branch(c, branch)
    Q = c.Q
    k = branch_k(Q, branch)
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    x1, x2 = _split(xi)
    e1, e2 = _split(eta)
    a, g = c.alpha, c.gamma
    ra, rg = np.sqrt(a), np.sqrt(g)
    lhs = real_part_expansion(c, xi, eta) + k * eval_symbol_real(c, eta)

    if branch is Branch.SUBCONVEX:
        m = (3.0 - Q) / (1.0 + Q)
        terms = [
            (Q + 1) * a * (x1**2 - m * e1**2) ** 2,
            (Q + 1) * g * (x2**2 - m * e2**2) ** 2,
            -Q * (ra * x1**2 - rg * x2**2) ** 2,
            -2 * Q * (ra * x1 * e1 + rg * x2 * e2) ** 2,
            -2 * Q * ra * rg * (x1 * e2 + x2 * e1) ** 2,
            -Q * m * m * (ra * e1**2 - rg * e2**2) ** 2,
        ]
    elif branch is Branch.STRONGLY_CONVEX:
        u = ra * (x1**2 - 3 * e1**2)
        v = rg * (x2**2 - 3 * e2**2)
        terms = [
            Q / 3 * (u + v) ** 2,
            4 * Q / 3 * ra * rg * (x1 * x2 - 3 * e1 * e2) ** 2,
            (3 - Q) / 3 * (u * u + v * v),
        ]
    else:
        terms = [
            2 * (Q - 3) * (ra * x1 * e1 - rg * x2 * e2) ** 2,
            (ra * (x1**2 - Q * e1**2) + rg * (x2**2 - Q * e2**2)) ** 2,
            2 * (Q - 1) * ra * rg * (x1 * x2 - (Q + 3) / (Q - 1) * e1 * e2) ** 2,
            2 * (Q - 3) * (Q + 1) * (Q * Q + 3) / (Q - 1) * ra * rg * e1**2 * e2**2,
        ]
    return lhs, terms


def gamma_form(c: Coefficients, p, q=None, branch=None):
    """Sesquilinear form Gamma(p, q) on C^6; ``q`` defaults to ``p``.

    Broadcasts over leading axes of ``p`` and ``q`` (last axis has length 6).
    """
    branch = _resolve_branch(c, branch)
    Q = c.Q
    p = np.asarray(p, dtype=complex)
    q = p if q is None else np.asarray(q, dtype=complex)
    pq = p * np.conj(q)
    if branch is Branch.STRONGLY_CONVEX:
        cross = (p[..., 0] + p[..., 1]) * np.conj(q[..., 0] + q[..., 1])
        return (3 - Q) / 3 * (pq[..., 0] + pq[..., 1]) + Q / 3 * cross + 4 * Q / 3 * pq[..., 2]
    if branch is Branch.SUBCONVEX:
        w = (Q + 1, Q + 1, -Q, -2 * Q, -2 * Q, -Q * (3 - Q) ** 2 / (1 + Q) ** 2)
    else:
        w = (2 * (Q - 3), 1.0, 2 * (Q - 1), 2 * (Q - 3) / (Q - 1) * (Q + 1) * (Q * Q + 3))
    return sum(wi * pq[..., i] for i, wi in enumerate(w))


def p_vector(c: Coefficients, xi, eta, branch=None):
    """The real 6-vector p with Gamma(p, p) = Re A(xi + i eta) + k A(eta)."""
    branch = _resolve_branch(c, branch)
    Q = c.Q
    x1, x2 = _split(np.asarray(xi, dtype=float))
    e1, e2 = _split(np.asarray(eta, dtype=float))
    ra, rg = np.sqrt(c.alpha), np.sqrt(c.gamma)
    r4 = (c.alpha * c.gamma) ** 0.25
    zero = np.zeros_like(x1 * e1)
    if branch is Branch.SUBCONVEX:
        m = (3.0 - Q) / (1.0 + Q)
        comps = [
            ra * (x1**2 - m * e1**2),
            rg * (x2**2 - m * e2**2),
            ra * x1**2 - rg * x2**2,
            ra * x1 * e1 + rg * x2 * e2,
            r4 * (x1 * e2 + x2 * e1),
            ra * e1**2 - rg * e2**2,
        ]
    elif branch is Branch.STRONGLY_CONVEX:
        comps = [
            ra * (x1**2 - 3 * e1**2),
            rg * (x2**2 - 3 * e2**2),
            r4 * (x1 * x2 - 3 * e1 * e2),
            zero,
            zero,
            zero,
        ]
    else:
        comps = [
            ra * x1 * e1 - rg * x2 * e2,
            ra * (x1**2 - Q * e1**2) + rg * (x2**2 - Q * e2**2),
            r4 * (x1 * x2 - (Q + 3) / (Q - 1) * e1 * e2),
            r4 * e1 * e2,
            zero,
            zero,
        ]
    return np.stack([np.broadcast_to(v, zero.shape) + zero for v in comps], axis=-1)


def check_sg_identity(c: Coefficients, xi, eta, branch=None):
    """|Re A(xi + i eta) + k A(eta) - Gamma(p, p)|, elementwise."""
    lhs, _ = lemma1_decomposition(c, xi, eta, branch)
    p = p_vector(c, xi, eta, branch)
    return np.abs(lhs - gamma_form(c, p, branch=branch).real)
