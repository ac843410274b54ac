import os
import subprocess
import sys

import numpy as np
import pytest

from quartic_heat import Coefficients, eval_symbol_complex
from quartic_heat._jit import JIT_ENABLED, NUMBA_AVAILABLE
from quartic_heat.kernels import row_sums, tensor_sum


def brute_force(n1, w1, n2, w2, x, eta, lam, c, shift):
    Z1, Z2 = np.meshgrid(n1 + 1j * eta[0], n2 + 1j * eta[1], indexing="ij")
    z = np.stack([Z1, Z2], axis=-1)
    expo = lam * (1j * (x[0] * Z1 + x[1] * Z2) - 0.25 * eval_symbol_complex(c, z)) - shift
    t = np.exp(expo) * np.outer(w1, w2)
    return complex(t.sum()), float(np.abs(t).sum())


@pytest.fixture
def grid(rng):
    n1 = np.sort(rng.uniform(-3, 3, 37))
    n2 = np.sort(rng.uniform(-3, 3, 300))  # longer than one numpy row chunk
    return n1, rng.uniform(0, 1, 37), n2, rng.uniform(0, 1, 300)


@pytest.mark.parametrize("backend", ["numpy", "numba"])
@pytest.mark.parametrize("beta,eta,shift", [(0.0, (0, 0), 0.0), (-0.6, (0.4, 0.4), 0.3), (4.0, (0.5, 0.0), -1.0)])
def test_matches_brute_force(grid, backend, beta, eta, shift):
    if backend == "numba" and not NUMBA_AVAILABLE:
        pytest.skip("numba not installed")
    c = Coefficients(1.3, beta, 0.8)
    x, lam = np.array([0.9, -0.4]), 3.5
    got, got_abs = tensor_sum(*grid, x, np.array(eta, float), lam, c.alpha, c.beta, c.gamma, shift, backend)
    ref, ref_abs = brute_force(*grid, x, eta, lam, c, shift)
    assert got == pytest.approx(ref, rel=1e-12, abs=1e-12 * ref_abs)
    assert got_abs == pytest.approx(ref_abs, rel=1e-12)


@pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")
def test_backends_agree(grid):
    args = (*grid, np.array([1.0, 1.0]), np.array([0.5, 0.5]), 12.0, 1.0, 0.0, 1.0)
    a = tensor_sum(*args, backend="numpy")
    b = tensor_sum(*args, backend="numba")
    assert a[0] == pytest.approx(b[0], rel=1e-13, abs=1e-13 * a[1])


def test_unknown_backend():
    z = np.zeros(2, complex)
    with pytest.raises(ValueError):
        row_sums(z, z, z, z, z, z, 0.0, backend="cuda")


def test_env_flag_selects_numpy_path():
    code = (
        "from quartic_heat import _jit, green_function, Coefficients;"
        "print(_jit.JIT_ENABLED, repr(green_function(Coefficients(1, 2, 1), (0.3, 0.7), 0.05).value))"
    )
    values = {}
    for flag in ("1", "0"):
        env = dict(os.environ, QUARTIC_HEAT_DISABLE_JIT=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
        enabled, value = out.split()
        values[flag] = float(value)
        assert enabled == str(flag == "0" and NUMBA_AVAILABLE)
    assert values["1"] == pytest.approx(values["0"], rel=1e-13)


def test_default_follows_flag():
    flag = os.environ.get("QUARTIC_HEAT_DISABLE_JIT", "").strip().lower()
    assert JIT_ENABLED == (NUMBA_AVAILABLE and flag not in ("1", "true", "yes", "on"))
