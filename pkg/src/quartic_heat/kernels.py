"""Hot loop of the 2D quadrature: tensor-product sum of exp(lambda * phi).

On the contour R^2 + i eta the exponent splits as
    lambda*phi(z) = a_i + b_j - (lambda*beta/2) * z1_i^2 * z2_j^2
with a_i, b_j depending on one axis only, so each grid point costs one
complex exponential. Both backends return per-row partial sums; the caller
reduces them with ``np.sum`` so the result does not depend on threading.
"""

import numpy as np

from ._jit import JIT_ENABLED, njit

ROW_CHUNK = 256


def _axis_terms(nodes, weights, eta, x, lam, coef, shift):
    z = nodes + 1j * eta
    zz = z * z
    expo = lam * (1j * x * z - 0.25 * coef * zz * zz) - shift
    return expo, zz, weights.astype(np.complex128)


def row_sums_numpy(a, s1, w1, b, s2, w2, cross):
    """Per-row sums of w1_i w2_j exp(a_i + b_j + cross s1_i s2_j) and of |.|."""
    n1 = a.shape[0]
    out = np.empty(n1, dtype=np.complex128)
    out_abs = np.empty(n1)
    for start in range(0, n1, ROW_CHUNK):
        stop = min(start + ROW_CHUNK, n1)
        e = a[start:stop, None] + b[None, :] + cross * np.outer(s1[start:stop], s2)
        t = np.exp(e) * w2[None, :]
        t *= w1[start:stop, None]
        out[start:stop] = t.sum(axis=1)
        out_abs[start:stop] = np.abs(t).sum(axis=1)
    return out, out_abs


@njit(cache=True)
def row_sums_numba(a, s1, w1, b, s2, w2, cross):
    # real arithmetic in the inner loop: one exp, one cos, one sin per point
    n1 = a.shape[0]
    n2 = b.shape[0]
    out = np.empty(n1, dtype=np.complex128)
    out_abs = np.empty(n1)
    br, bi = b.real.copy(), b.imag.copy()
    sr, si = s2.real.copy(), s2.imag.copy()
    wr = w2.real.copy()
    for i in range(n1):
        ci = cross * s1[i]
        cr, cim = ci.real, ci.imag
        ar, ai = a[i].real, a[i].imag
        acc_r = 0.0
        acc_i = 0.0
        acc_abs = 0.0
        for j in range(n2):
            er = ar + br[j] + cr * sr[j] - cim * si[j]
            ei = ai + bi[j] + cr * si[j] + cim * sr[j]
            m = wr[j] * np.exp(er)
            acc_r += m * np.cos(ei)
            acc_i += m * np.sin(ei)
            acc_abs += abs(m)
        out[i] = complex(acc_r, acc_i) * w1[i]
        out_abs[i] = acc_abs * abs(w1[i])
    return out, out_abs


def row_sums(a, s1, w1, b, s2, w2, cross, backend=None):
    if backend is None:
        backend = "numba" if JIT_ENABLED else "numpy"
    if backend == "numba":
        return row_sums_numba(a, s1, w1, b, s2, w2, cross)
    if backend == "numpy":
        return row_sums_numpy(a, s1, w1, b, s2, w2, cross)
    raise ValueError(f"unknown backend {backend!r}")


def tensor_sum(nodes1, w1, nodes2, w2, x, eta, lam, alpha, beta, gamma, shift=0.0, backend=None):
    """Sum of w1_i w2_j exp(lam * phi(z) - shift) over the grid.

    phi(z) = i x.z - A(z)/4 evaluated at z = (nodes1_i, nodes2_j) + i eta.
    Returns the complex sum and the sum of absolute values.
    """
    a, s1, c1 = _axis_terms(nodes1, w1, eta[0], x[0], lam, alpha, shift)
    b, s2, c2 = _axis_terms(nodes2, w2, eta[1], x[1], lam, gamma, 0.0)
    rows, rows_abs = row_sums(a, s1, c1, b, s2, c2, -0.5 * lam * beta, backend)
    return complex(np.sum(rows)), float(np.sum(rows_abs))
