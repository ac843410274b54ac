"""Seeded property suites over every module.

Each suite returns a :class:`SuiteReport`; a check records its worst error
and, when it fails, the first offending sample so it can be replayed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy.special import gamma as gamma_fn

from . import finsler, quadrature, saddle
from .symbol import (
    Branch,
    branch_k,
    CoefficientBatch,
    Coefficients,
    ellipticity_constant,
    eval_symbol_real,
    gamma_form,
    k_of_q,
    lemma1_decomposition,
    p_vector,
    sigma_of_k,
)

IDENTITY_TOL = 1e-10
SIGMA_MAX = 3 * 2 ** (1 / 3) / 16  # sigma at k = 8


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    n: int
    counterexample: Optional[dict] = None

    def as_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "n": self.n,
            "counterexample": self.counterexample,
        }


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Optional[CheckResult]:
        return next((c for c in self.checks if not c.passed), None)

    def as_dict(self):
        return {
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
        }


def _result(name, errors, tol, sample_of) -> CheckResult:
    errors = np.asarray(errors, dtype=float).ravel()
    bad = np.nonzero(~(errors <= tol))[0]
    worst = float(np.max(errors)) if errors.size else 0.0
    if bad.size:
        return CheckResult(name, False, worst, tol, errors.size, sample_of(int(bad[0])))
    return CheckResult(name, True, worst, tol, errors.size)


def _listify(d):
    return {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in d.items()}


# --- sampling ---------------------------------------------------------------


def sample_coefficients(rng, n, q_low, q_high, q_values=None) -> CoefficientBatch:
    """alpha, gamma log-uniform on [e^-2, e^2]; Q uniform or drawn from q_values."""
    a = np.exp(rng.uniform(-2.0, 2.0, n))
    g = np.exp(rng.uniform(-2.0, 2.0, n))
    if q_values is not None:
        # powers of 4 keep sqrt(alpha gamma) exact, so Q lands exactly on the listed values
        a = 4.0 ** rng.integers(-2, 3, n)
        g = 4.0 ** rng.integers(-2, 3, n)
        Q = rng.choice(np.asarray(q_values, dtype=float), n)
    else:
        Q = rng.uniform(q_low, q_high, n)
    return CoefficientBatch(a, Q * np.sqrt(a * g), g)


def identity_scale(c, lhs, eta, k):
    """max(|lhs|, k A(eta), 1): relative above 1, absolute near zero."""
    return np.maximum(np.maximum(np.abs(lhs), k * eval_symbol_real(c, eta)), 1.0)


_BRANCH_MASKS: Dict[Branch, Callable] = {
    Branch.SUBCONVEX: lambda Q: Q < 0,
    Branch.STRONGLY_CONVEX: lambda Q: (Q >= 0) & (Q <= 3),
    Branch.SUPERCONVEX: lambda Q: Q > 3,
}


def decomposition_errors(c: CoefficientBatch, xi, eta):
    """Per-sample (reconstruction rel. error, value / scale) over mixed branches."""
    Q = c.Q
    rel = np.empty(len(Q))
    low = np.empty(len(Q))
    for branch, mask_of in _BRANCH_MASKS.items():
        m = mask_of(Q)
        if not np.any(m):
            continue
        sub = c[m]
        lhs, terms = lemma1_decomposition(sub, xi[m], eta[m], branch)
        recon = np.sum(terms, axis=0)
        scale = identity_scale(sub, lhs, eta[m], branch_k(sub.Q, branch))
        rel[m] = np.abs(lhs - recon) / scale
        low[m] = lhs / scale
    return rel, low


def sg_errors(c: CoefficientBatch, xi, eta, branch):
    lhs, _ = lemma1_decomposition(c, xi, eta, branch)
    p = p_vector(c, xi, eta, branch)
    val = gamma_form(c, p, branch=branch).real
    return np.abs(lhs - val) / identity_scale(c, lhs, eta, branch_k(c.Q, branch))


# --- suites -----------------------------------------------------------------


def suite_identities(seed: int = 0, n: int = 20000, tol: float = IDENTITY_TOL) -> SuiteReport:
    rng = np.random.default_rng(seed)
    rep = SuiteReport("identities", seed)

    c = sample_coefficients(rng, n, -0.99, 10.0)
    xi, eta = rng.normal(size=(n, 2)), rng.normal(size=(n, 2))

    def sample(i):
        return _listify(
            {"alpha": c.alpha[i], "beta": c.beta[i], "gamma": c.gamma[i], "xi": xi[i], "eta": eta[i]}
        )

    rel, low = decomposition_errors(c, xi, eta)
    rep.checks.append(_result("decomposition_reconstruction", rel, tol, sample))
    rep.checks.append(_result("decomposition_nonnegative", np.maximum(-low, 0.0), tol, sample))

    regimes = [
        ("subconvex", Branch.SUBCONVEX, (-0.99, 0.0), None),
        ("strongly_convex", Branch.STRONGLY_CONVEX, (0.0, 3.0), None),
        ("superconvex", Branch.SUPERCONVEX, (3.0, 10.0), None),
        ("Q=0_as_subconvex", Branch.SUBCONVEX, None, [0.0]),
        ("Q=0_as_strongly_convex", Branch.STRONGLY_CONVEX, None, [0.0]),
        ("Q=3_as_strongly_convex", Branch.STRONGLY_CONVEX, None, [3.0]),
        ("Q=3_as_superconvex", Branch.SUPERCONVEX, None, [3.0]),
    ]
    m = max(n // 4, 1)
    for name, branch, rng_q, values in regimes:
        lo, hi = rng_q if rng_q else (0.0, 0.0)
        cb = sample_coefficients(rng, m, lo, hi, values)
        if rng_q and branch is Branch.SUBCONVEX:
            cb = cb[cb.Q < 0]
        if rng_q and branch is Branch.SUPERCONVEX:
            cb = cb[cb.Q > 3]
        x2, e2 = rng.normal(size=(len(cb.Q), 2)), rng.normal(size=(len(cb.Q), 2))
        err = sg_errors(cb, x2, e2, branch)
        rep.checks.append(
            _result(
                f"sg_identity[{name}]",
                err,
                tol,
                lambda i, cb=cb, x2=x2, e2=e2: _listify(
                    {"alpha": cb.alpha[i], "beta": cb.beta[i], "gamma": cb.gamma[i], "xi": x2[i], "eta": e2[i]}
                ),
            )
        )

    # A(xi) >= c_ell |xi|^4
    cs = sample_coefficients(rng, 2000, -0.99, 10.0)
    th = rng.uniform(0, 2 * np.pi, (2000, 64))
    worst = []
    for i in range(2000):
        ci = Coefficients(float(cs.alpha[i]), float(cs.beta[i]), float(cs.gamma[i]))
        e = np.stack([np.cos(th[i]), np.sin(th[i])], axis=-1)
        worst.append(max(0.0, float(np.max(ellipticity_constant(ci) - eval_symbol_real(ci, e)))))
    rep.checks.append(
        _result(
            "ellipticity_bound",
            worst,
            1e-14,
            lambda i: _listify({"alpha": cs.alpha[i], "beta": cs.beta[i], "gamma": cs.gamma[i]}),
        )
    )

    Q = rng.uniform(-0.999, 50.0, 10000)
    k = k_of_q(Q)
    s = sigma_of_k(k)
    rep.checks.append(
        _result("k_at_least_8", np.maximum(8.0 - k, 0.0), 1e-12, lambda i: {"Q": float(Q[i])})
    )
    rep.checks.append(
        _result("sigma_at_most_strongly_convex", np.maximum(s - SIGMA_MAX, 0.0), 1e-15, lambda i: {"Q": float(Q[i])})
    )
    return rep


def suite_finsler(seed: int = 0, n: int = 200, tol: float = IDENTITY_TOL) -> SuiteReport:
    rng = np.random.default_rng(seed)
    rep = SuiteReport("finsler", seed)

    # closed-form distance along the proven directions
    errs, cases = [], []
    for _ in range(n):
        Q = rng.uniform(-0.95, 8.0)
        a, g = np.exp(rng.uniform(-1, 1, 2))
        c = Coefficients(a, Q * math.sqrt(a * g), g)
        if Q >= 0 and (Q > 3 or rng.random() < 0.5):
            y = np.array([1.0, 0.0]) if rng.random() < 0.5 else np.array([0.0, -1.0])
        else:
            y = np.array([1.0, 1.0]) * rng.choice([-1.0, 1.0], 2)
        x = rng.uniform(0.2, 3.0) * y * c.frame
        closed = finsler.closed_form_d0(c, x)
        errs.append(abs(finsler.dual_norm_p_star(c, x) - closed) / closed)
        cases.append({"alpha": a, "beta": c.beta, "gamma": g, "x": x.tolist()})
    rep.checks.append(_result("closed_form_d0", errs, tol, lambda i: cases[i]))

    # x . xi <= p*(x) p(xi) and homogeneity p*(s x) = s p*(x)
    ineq, homog, cases = [], [], []
    for _ in range(n):
        Q = rng.uniform(-0.95, 8.0)
        g = rng.uniform(0.3, 3.0)
        c = Coefficients(1.0, Q * math.sqrt(g), g)
        x = rng.normal(size=2)
        xi = rng.normal(size=(32, 2))
        ps = finsler.dual_norm_p_star(c, x)
        excess = (xi @ x) - ps * finsler.quasi_norm_p(c, xi)
        ineq.append(max(0.0, float(excess.max())) / (ps * float(np.abs(xi).max())))
        s = rng.uniform(0.1, 10.0)
        homog.append(abs(finsler.dual_norm_p_star(c, s * x) - s * ps) / (s * ps))
        cases.append({"alpha": 1.0, "beta": c.beta, "gamma": g, "x": x.tolist()})
    rep.checks.append(_result("dual_inequality", ineq, 1e-12, lambda i: cases[i]))
    rep.checks.append(_result("p_star_homogeneity", homog, tol, lambda i: cases[i]))

    # stationarity of g at theta = phi: for alpha = gamma exactly sin 4 phi = 0
    phis = np.arange(16) * np.pi / 8
    stat = []
    for beta in (-0.5, 0.5, 1.5, 4.0):
        c = Coefficients(1.0, beta, 1.0)
        for ph in phis:
            flag = finsler.direction_stationarity(c, ph).is_equality_direction
            expected = abs(math.sin(4 * ph)) < 1e-9
            stat.append(0.0 if flag == expected else 1.0)
    rep.checks.append(_result("stationary_directions", stat, 0.5, lambda i: {"phi": float(phis[i % 16])}))

    # q(x) for 0 < Q < 3
    qres, aq, cases = [], [], []
    for _ in range(n):
        Q = rng.uniform(0.05, 2.95)
        g = rng.uniform(0.3, 3.0)
        c = Coefficients(1.0, Q * math.sqrt(g), g)
        x = rng.normal(size=2)
        q = finsler.solve_q(c, x)
        qres.append(float(np.linalg.norm(finsler.quarter_gradient(c, q) - x) / np.linalg.norm(x)))
        aq.append(finsler.check_aq_distance(c, x))
        cases.append({"alpha": 1.0, "beta": c.beta, "gamma": g, "x": x.tolist()})
    rep.checks.append(_result("solve_q_residual", qres, 1e-12, lambda i: cases[i]))
    rep.checks.append(_result("A_of_q_equals_p_star", aq, 1e-8, lambda i: cases[i]))
    return rep


def gamma_anchor() -> tuple:
    """(oracle value, 1D Gamma-function value) for beta = 0, x = 0, t = 1."""
    exact = (gamma_fn(1.25) / math.pi) ** 2
    val = quadrature.green_function(Coefficients(1.0, 0.0, 1.0), (0.0, 0.0), 1.0).value
    return val, exact


def separability_errors(rng, n: int):
    c = Coefficients(1.0, 0.0, 1.0)
    errs, cases = [], []
    for _ in range(n):
        x = rng.uniform(-2.0, 2.0, 2)
        t = 10 ** rng.uniform(-2.0, 0.5)
        g2 = quadrature.green_function(c, x, t).value
        g1 = quadrature.kernel_1d(x[0], t) * quadrature.kernel_1d(x[1], t)
        scale = quadrature.kernel_1d(0.0, t) ** 2
        errs.append(abs(g2 - g1) / max(abs(g1), 1e-300) if abs(g1) > 1e-6 * scale else abs(g2 - g1) / scale)
        cases.append({"x": x.tolist(), "t": t})
    return np.array(errs), cases


REFERENCE_CASES = ((-0.5, (1.0, 1.0)), (0.0, (1.0, 1.0)), (3.0, (1.0, 0.0)), (4.0, (1.0, 0.0)))


def contour_invariance_errors(lams=(2.0, 4.0, 6.0, 8.0)):
    errs, cases = [], []
    for beta, x in REFERENCE_CASES:
        c = Coefficients(1.0, beta, 1.0)
        for lam in lams:
            d = quadrature.f_lambda_direct(c, x, lam).value
            s = quadrature.f_lambda_shifted(c, x, lam).value
            errs.append(abs(d - s) / abs(s))
            cases.append({"beta": beta, "x": list(x), "lambda": lam})
    return np.array(errs), cases


def suite_quadrature(seed: int = 0, n: int = 20, tol: float = 1e-8) -> SuiteReport:
    rng = np.random.default_rng(seed)
    rep = SuiteReport("quadrature", seed)
    val, exact = gamma_anchor()
    rep.checks.append(_result("gamma_anchor", [abs(val - exact) / exact], tol, lambda i: {"value": val, "exact": exact}))
    errs, cases = separability_errors(rng, n)
    rep.checks.append(_result("separability", errs, tol, lambda i: cases[i]))
    errs, cases = contour_invariance_errors()
    rep.checks.append(_result("contour_invariance", errs, 1e-6, lambda i: cases[i]))
    return rep


def saddle_errors():
    """Rows of (label, residual, det error, cardinality ok, conjugate-pair error)."""
    rows = []
    betas_bis = (-0.9, -0.5, -0.2, 0.0)
    betas_axis = (3.0, 3.5, 4.0, 6.0, 10.0)
    for direction, betas in (("bisector", betas_bis), ("axis", betas_axis)):
        for beta in betas:
            for a, g in ((1.0, 1.0), (2.0, 0.5)):
                c = Coefficients(a, beta * math.sqrt(a * g), g)
                pts = saddle.saddle_set(c, direction)
                res = max(p.residual(c) for p in pts)
                det = max(abs(p.hessian_det - p.closed_form_det) / abs(p.closed_form_det) for p in pts)
                card = len(pts) == (4 if beta in (0.0, 3.0) else 2)
                # z and -conj(z) are both saddles with conjugate phi
                conj = 0.0
                for p in pts:
                    mirror = -np.conj(p.location)
                    conj = max(conj, min(float(np.linalg.norm(q.location - mirror)) for q in pts))
                rows.append((f"{direction} beta={beta} alpha={a} gamma={g}", res, det, card, conj))
    return rows


def suite_saddles(seed: int = 0, n: int = 20, tol: float = 1e-12) -> SuiteReport:
    rng = np.random.default_rng(seed)
    rep = SuiteReport("saddles", seed)
    rows = saddle_errors()
    labels = [r[0] for r in rows]
    rep.checks.append(_result("grad_residual", [r[1] for r in rows], tol, lambda i: {"case": labels[i]}))
    rep.checks.append(_result("det_closed_form", [r[2] for r in rows], 1e-10, lambda i: {"case": labels[i]}))
    rep.checks.append(
        _result("cardinality", [0.0 if r[3] else 1.0 for r in rows], 0.5, lambda i: {"case": labels[i]})
    )
    rep.checks.append(_result("conjugate_pairs", [r[4] for r in rows], 1e-12, lambda i: {"case": labels[i]}))

    res, arg, cases = [], [], []
    for _ in range(n):
        beta = rng.uniform(0.05, 2.95)
        x = rng.normal(size=2)
        c = Coefficients(1.0, beta, 1.0)
        d = saddle.ep_analysis(c, x, arg_tol=math.inf)
        res.append(d.saddle.residual(c))
        arg.append(abs(np.angle(d.saddle.hessian_det) - 2 * math.pi / 3))
        cases.append({"beta": beta, "x": x.tolist()})
    rep.checks.append(_result("ep_grad_residual", res, tol, lambda i: cases[i]))
    rep.checks.append(_result("ep_det_argument", arg, 1e-8, lambda i: cases[i]))
    return rep


SUITES = {
    "identities": suite_identities,
    "finsler": suite_finsler,
    "quadrature": suite_quadrature,
    "saddles": suite_saddles,
}


def run(suite: str = "all", seed: int = 0, tol: Optional[float] = None) -> List[SuiteReport]:
    names = list(SUITES) if suite == "all" else [suite]
    reports = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
        kwargs = {"seed": seed}
        if tol is not None and name in ("identities", "finsler"):
            kwargs["tol"] = tol
        reports.append(SUITES[name](**kwargs))
    return reports
