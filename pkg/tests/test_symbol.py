import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quartic_heat import (
    Branch,
    CoefficientBatch,
    Coefficients,
    EllipticityError,
    check_sg_identity,
    classify,
    convexity_data,
    ellipticity_constant,
    eval_symbol_complex,
    eval_symbol_real,
    gamma_form,
    k_of_q,
    lemma1_decomposition,
    p_vector,
    real_part_expansion,
    sigma_of_q,
)

finite = st.floats(-3, 3, allow_nan=False)
vec2 = st.tuples(finite, finite).map(np.array)
qs = st.floats(-0.99, 10.0)


def coeffs(Q, alpha=1.0, gamma=1.0):
    return Coefficients(alpha, Q * math.sqrt(alpha * gamma), gamma)


def expansion_by_hand(c, xi, eta):
    # Re A(xi + i eta) from Re((a + ib)^4) = a^4 - 6a^2b^2 + b^4 and
    # Re((a+ib)^2 (c+id)^2) = (a^2-b^2)(c^2-d^2) - 4abcd
    (a, c1), (b, d) = (xi[0], eta[0]), (xi[1], eta[1])
    r1 = a**4 - 6 * a * a * c1 * c1 + c1**4
    r2 = b**4 - 6 * b * b * d * d + d**4
    mix = (a * a - c1 * c1) * (b * b - d * d) - 4 * a * c1 * b * d
    return c.alpha * r1 + 2 * c.beta * mix + c.gamma * r2


class TestCoefficients:
    def test_rejects_non_elliptic(self):
        with pytest.raises(EllipticityError):
            Coefficients(1, -1, 1)
        with pytest.raises(EllipticityError):
            Coefficients(1, -2, 1)
        with pytest.raises(EllipticityError):
            Coefficients(0, 0, 1)
        with pytest.raises(EllipticityError):
            Coefficients(1, float("nan"), 1)

    def test_regime_boundaries(self):
        assert classify(0.0).branch is Branch.STRONGLY_CONVEX and classify(0.0).on_boundary == 0.0
        assert classify(3.0).branch is Branch.STRONGLY_CONVEX and classify(3.0).on_boundary == 3.0
        assert classify(-0.5).branch is Branch.SUBCONVEX
        assert classify(2.0).on_boundary is None
        assert classify(3.5).branch is Branch.SUPERCONVEX

    def test_convexity_examples(self):
        Q, reg, k, s = convexity_data(Coefficients(1, 3, 1))
        assert (Q, k) == (3.0, 8.0)
        assert s == pytest.approx(3 / (8 * 4 ** (1 / 3)), rel=1e-15)
        assert s == pytest.approx(0.236235, abs=5e-7)
        Q, _, k, s = convexity_data(Coefficients(1, 4, 1))
        assert (Q, k) == (4.0, 15.0)
        assert s == pytest.approx(3 * 4 ** (-4 / 3) * 15 ** (-1 / 3), rel=1e-15)
        assert s == pytest.approx(0.75 / 60 ** (1 / 3), rel=1e-15)
        assert s == pytest.approx(0.191577, abs=5e-7)
        Q, _, k, _ = convexity_data(Coefficients(4, -1, 1))
        assert Q == -0.5 and k == pytest.approx(48.0, rel=1e-15)

    def test_k_continuous_at_boundaries(self):
        assert 8 * (1 - 0.0) / (1 + 0.0) ** 2 == 8.0 == k_of_q(0.0)
        assert 3.0**2 - 1 == 8.0 == k_of_q(3.0)
        eps = 1e-9
        assert k_of_q(-eps) == pytest.approx(8.0, rel=1e-7)
        assert k_of_q(3 + eps) == pytest.approx(8.0, rel=1e-7)

    def test_sigma_matches_k(self):
        Q = np.linspace(-0.95, 9, 50)
        np.testing.assert_allclose(sigma_of_q(Q), 0.75 * (4 * k_of_q(Q)) ** (-1 / 3), rtol=1e-15)


class TestEvaluation:
    def test_examples(self):
        assert eval_symbol_real(Coefficients(1, 0, 1), (1, 2)) == 17
        for b in (-0.5, 0.0, 2.0, 7.0):
            assert eval_symbol_real(Coefficients(1, b, 1), (1, 1)) == pytest.approx(2 + 2 * b)
        assert eval_symbol_real(Coefficients(1, 3, 1), (1, 0)) == 1
        assert eval_symbol_complex(Coefficients(1, 0, 1), (1j, 0)) == 1
        assert eval_symbol_complex(Coefficients(1, 1, 1), (1 + 1j, 0)) == -4

    def test_real_part_example(self):
        assert real_part_expansion(Coefficients(1, 1, 1), (1, 0), (1, 0)) == -4

    @given(qs, vec2, vec2)
    def test_expansion_matches_complex_and_hand(self, Q, xi, eta):
        c = coeffs(Q)
        val = real_part_expansion(c, xi, eta)
        scale = 1 + (np.abs(xi).sum() + np.abs(eta).sum()) ** 4 * (2 + abs(Q))
        assert abs(val - eval_symbol_complex(c, xi + 1j * eta).real) <= 1e-13 * scale
        assert abs(val - expansion_by_hand(c, xi, eta)) <= 1e-13 * scale

    @given(qs, vec2)
    def test_restrictions(self, Q, v):
        c = coeffs(Q, 2.0, 0.5)
        z = np.zeros(2)
        assert real_part_expansion(c, v, z) == pytest.approx(eval_symbol_real(c, v), rel=1e-13, abs=1e-13)
        assert real_part_expansion(c, z, v) == pytest.approx(eval_symbol_real(c, v), rel=1e-13, abs=1e-13)

    @given(qs, vec2, st.floats(0.1, 10))
    def test_homogeneity(self, Q, xi, s):
        c = coeffs(Q)
        assert eval_symbol_real(c, s * xi) == pytest.approx(s**4 * eval_symbol_real(c, xi), rel=1e-13, abs=1e-300)

    @given(qs, st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0, 2 * math.pi))
    def test_ellipticity_lower_bound(self, Q, a, g, th):
        c = coeffs(Q, a, g)
        e = np.array([math.cos(th), math.sin(th)])
        assert eval_symbol_real(c, e) >= ellipticity_constant(c) * (1 - 1e-14)

    def test_ellipticity_constant_is_attained(self):
        # alpha = gamma = 1, Q = -0.5: A(e) on the bisector is (2 + 2Q)/4 = 0.25 = c_ell
        c = Coefficients(1, -0.5, 1)
        e = np.array([1, 1]) / math.sqrt(2)
        assert eval_symbol_real(c, e) == pytest.approx(ellipticity_constant(c), rel=1e-15)


class TestDecomposition:
    def test_strongly_convex_example(self):
        lhs, terms = lemma1_decomposition(Coefficients(1, 1, 1), (1, 0), (1, 0))
        assert lhs == pytest.approx(4)
        np.testing.assert_allclose(terms, [4 / 3, 0, 8 / 3], rtol=1e-15)

    def test_zero_input(self):
        for b in (-0.5, 1.0, 5.0):
            lhs, terms = lemma1_decomposition(Coefficients(1, b, 1), (0, 0), (0, 0))
            assert lhs == 0 and sum(terms) == 0

    def test_superconvex_equality_point(self):
        m = 15 ** (-1 / 3)
        lhs, terms = lemma1_decomposition(Coefficients(1, 4, 1), (0, 2 * m), (m, 0))
        assert abs(lhs) < 1e-14
        assert all(abs(t) < 1e-14 for t in terms)

    @given(qs, st.floats(0.2, 5), st.floats(0.2, 5), vec2, vec2)
    def test_reconstruction_and_sign(self, Q, a, g, xi, eta):
        c = coeffs(Q, a, g)
        lhs, terms = lemma1_decomposition(c, xi, eta)
        scale = max(abs(lhs), c.k * eval_symbol_real(c, eta), 1.0)
        assert abs(lhs - sum(terms)) <= 1e-12 * scale
        assert lhs >= -1e-10 * scale
        # each square term carries a nonnegative weight on its own branch
        assert all(t >= -1e-12 * scale for t in terms)

    @pytest.mark.parametrize("Q,branch", [(0.0, "subconvex"), (0.0, "strongly_convex"), (3.0, "strongly_convex"), (3.0, "superconvex")])
    def test_boundary_from_both_branches(self, rng, Q, branch):
        c = Coefficients(4.0, Q * 2.0, 1.0)
        xi, eta = rng.normal(size=(500, 2)), rng.normal(size=(500, 2))
        lhs, terms = lemma1_decomposition(c, xi, eta, branch)
        np.testing.assert_allclose(lhs, np.sum(terms, axis=0), rtol=0, atol=1e-12 * np.max(np.abs(lhs)))
        assert np.all(check_sg_identity(c, xi, eta, branch) <= 1e-10 * (1 + np.abs(lhs)))

    def test_wrong_branch_rejected(self):
        with pytest.raises(ValueError):
            lemma1_decomposition(Coefficients(1, 1, 1), (1, 0), (0, 1), "superconvex")
        with pytest.raises(ValueError):
            lemma1_decomposition(Coefficients(1, -0.5, 1), (1, 0), (0, 1), "strongly_convex")

    def test_batch_matches_scalar(self, rng):
        Q = np.array([-0.5, -0.2, -0.9])
        batch = CoefficientBatch(np.ones(3), Q, np.ones(3))
        xi, eta = rng.normal(size=(3, 2)), rng.normal(size=(3, 2))
        lhs_b, _ = lemma1_decomposition(batch, xi, eta)
        for i in range(3):
            lhs, _ = lemma1_decomposition(Coefficients(1, Q[i], 1), xi[i], eta[i])
            assert lhs_b[i] == pytest.approx(lhs, rel=1e-15)

    def test_mixed_batch_needs_a_branch(self):
        with pytest.raises(ValueError):
            lemma1_decomposition(CoefficientBatch([1, 1], [-0.5, 4.0], [1, 1]), np.ones((2, 2)), np.ones((2, 2)))


class TestGammaForm:
    def test_examples(self):
        c = Coefficients(1, 3, 1)
        assert gamma_form(c, np.zeros(6)) == 0
        assert gamma_form(c, np.array([1, 1, 0, 0, 0, 0])) == pytest.approx(4)

    def test_p_vector_examples(self):
        np.testing.assert_array_equal(p_vector(Coefficients(1, 0, 1), (1, 0), (0, 0)), [1, 0, 0, 0, 0, 0])
        np.testing.assert_array_equal(p_vector(Coefficients(1, 2, 1), (0, 0), (0, 0)), np.zeros(6))
        np.testing.assert_allclose(p_vector(Coefficients(1, 4, 1), (1, 1), (1, 0)), [1, -2, 1, 0, 0, 0])

    @given(qs, st.lists(st.floats(-2, 2), min_size=12, max_size=12))
    def test_semidefinite_and_hermitian(self, Q, parts):
        c = coeffs(Q)
        p = np.array(parts[:6]) + 1j * np.array(parts[6:])
        q = np.array(parts[6:]) - 0.5j * np.array(parts[:6])
        val = gamma_form(c, p)
        assert abs(val.imag) <= 1e-12 * (1 + abs(val))
        assert val.real >= -1e-12 * (1 + np.sum(np.abs(p) ** 2))
        assert gamma_form(c, p, q) == pytest.approx(np.conj(gamma_form(c, q, p)), abs=1e-12)

    @given(qs, st.floats(0.2, 5), st.floats(0.2, 5), vec2, vec2)
    def test_sg_identity(self, Q, a, g, xi, eta):
        c = coeffs(Q, a, g)
        lhs, _ = lemma1_decomposition(c, xi, eta)
        assert check_sg_identity(c, xi, eta) <= 1e-10 * (1 + abs(lhs))
        assert check_sg_identity(c, (0, 0), (0, 0)) == 0
