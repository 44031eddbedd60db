"""Coefficient ring, differentiation, and root isolation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entroscale.errors import ZeroPolynomial
from entroscale.trigpoly import Root, TrigPoly

# frozen reference values (computed independently at 40-digit precision)
COS_KSTAR = -625.0 / 1248.0  # minimizer abscissa of the anisotropic dispersion
KSTAR = 2.0953205905997617


def rand_poly(rng, m=3, scale=1.0):
    return TrigPoly(rng.uniform(-scale, scale, m + 1), rng.uniform(-scale, scale, m))


class TestEval:
    def test_cos_at_zero(self):
        p = TrigPoly([0.0, 1.0])
        assert p.eval(0.0) == pytest.approx(1.0, abs=1e-15)

    def test_sine_line(self):
        # -2 c sin k with c = 1/50 at k = pi/2
        p = TrigPoly([0.0], [-2.0 / 50.0])
        assert p.eval(np.pi / 2) == pytest.approx(-0.04, abs=1e-15)

    def test_cosine_row_at_minimizer(self):
        # 1/2 + cos k at cos k = -625/1248 equals -1/1248 (rational arithmetic)
        p = TrigPoly([0.5, 1.0])
        k = np.arccos(COS_KSTAR)
        assert p.eval(k) == pytest.approx(-1.0 / 1248.0, abs=1e-12)

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(7)
        p = rand_poly(rng, 4)
        ks = rng.uniform(-np.pi, np.pi, 16)
        vec = p.eval(ks)
        for k, v in zip(ks, vec):
            assert v == pytest.approx(p.eval(float(k)), abs=1e-14)


class TestRing:
    def test_cos_squared(self):
        c = TrigPoly([0.0, 1.0])
        p = c.mul(c)  # 1/2 + cos(2k)/2
        assert np.allclose(p.cos_coeffs, [0.5, 0.0, 0.5], atol=1e-15)
        assert np.allclose(p.sin_coeffs, 0.0, atol=1e-15)

    def test_sin_times_cos(self):
        s = TrigPoly([0.0], [1.0])
        c = TrigPoly([0.0, 1.0])
        p = s.mul(c)  # sin(2k)/2
        assert np.allclose(p.cos_coeffs, [0.0, 0.0, 0.0], atol=1e-15)
        assert np.allclose(p.sin_coeffs, [0.0, 0.5], atol=1e-15)

    def test_shifted_cos_squared(self):
        # (1/2 + cos k)^2 = 3/4 + cos k + cos(2k)/2, checked on a 64-point grid too
        p = TrigPoly([0.5, 1.0])
        sq = p.mul(p)
        assert np.allclose(sq.cos_coeffs, [0.75, 1.0, 0.5], atol=1e-15)
        ks = np.linspace(-np.pi, np.pi, 64, endpoint=False)
        assert np.allclose(sq.eval(ks), p.eval(ks) ** 2, atol=1e-14)

    def test_degree_closure(self):
        rng = np.random.default_rng(3)
        p, q = rand_poly(rng, 3), rand_poly(rng, 2)
        assert p.mul(q).degree <= 5

    @given(
        a1=st.lists(st.floats(-2, 2), min_size=1, max_size=4),
        b1=st.lists(st.floats(-2, 2), min_size=0, max_size=3),
        a2=st.lists(st.floats(-2, 2), min_size=1, max_size=4),
        b2=st.lists(st.floats(-2, 2), min_size=0, max_size=3),
    )
    @settings(max_examples=60, deadline=None)
    def test_ring_homomorphism(self, a1, b1, a2, b2):
        p, q = TrigPoly(a1, b1), TrigPoly(a2, b2)
        ks = np.linspace(-np.pi, np.pi, 128, endpoint=False) + 0.013
        assert np.max(np.abs(p.mul(q).eval(ks) - p.eval(ks) * q.eval(ks))) < 1e-10

    def test_trimming_gives_minimal_degree(self):
        p = TrigPoly([1.0, 2.0, 1e-16], [0.0, 1e-15])
        assert p.degree == 1


class TestDerivative:
    def test_cos_to_minus_sin(self):
        d = TrigPoly([0.0, 1.0]).derivative()
        assert np.allclose(d.cos_coeffs, [0.0], atol=1e-15)
        assert np.allclose(d.sin_coeffs, [-1.0], atol=1e-15)

    def test_constant_to_zero(self):
        assert TrigPoly([3.0]).derivative().is_zero(1e-14)

    def test_double_frequency(self):
        # d/dk of -2 c sin(2k) = -4 c cos(2k)
        d = TrigPoly([0.0], [0.0, -2.0 * 0.3]).derivative()
        assert np.allclose(d.cos_coeffs, [0.0, 0.0, -4.0 * 0.3], atol=1e-15)

    def test_matches_finite_difference(self):
        rng = np.random.default_rng(11)
        p = rand_poly(rng, 4)
        dp = p.derivative()
        h = 1e-6
        scale = max(p.coeff_norm(), 1.0)
        for k in rng.uniform(-3, 3, 20):
            fd = (p.eval(k + h) - p.eval(k - h)) / (2 * h)
            assert abs(fd - dp.eval(k)) < 1e-6 * scale


class TestIsZero:
    def test_all_zero(self):
        assert TrigPoly([0.0, 0.0], [0.0]).is_zero(1e-14)

    def test_small_but_nonzero(self):
        assert not TrigPoly([0.0, 1e-3]).is_zero(1e-14)

    def test_product_rule_identity(self):
        # u * u' - (u^2)'/2 vanishes identically
        rng = np.random.default_rng(5)
        for _ in range(10):
            u = rand_poly(rng, 3)
            lhs = u.mul(u.derivative()) - u.mul(u).derivative().scale(0.5)
            assert lhs.is_zero(1e-12)


class TestRoots:
    def test_cos(self):
        angles = TrigPoly([0.0, 1.0]).root_angles()
        assert np.allclose(angles, [-np.pi / 2, np.pi / 2], atol=1e-12)

    def test_shifted_cos(self):
        angles = TrigPoly([0.5, 1.0]).root_angles()
        assert np.allclose(angles, [-2 * np.pi / 3, 2 * np.pi / 3], atol=1e-12)

    def test_sin_squared_touch_points(self):
        # sin^2 k = 1/2 - cos(2k)/2 touches zero at 0 and pi
        roots = TrigPoly([0.5, 0.0, -0.5]).roots()
        assert all(r.touch for r in roots)
        angles = sorted(r.angle for r in roots)
        assert np.allclose(angles, [0.0, np.pi], atol=1e-10)

    def test_known_factorization_complete_no_spurious(self):
        # cos k * (1/2 + cos k): exactly {±pi/2, ±2pi/3}, all simple
        p = TrigPoly([0.0, 1.0]).mul(TrigPoly([0.5, 1.0]))
        roots = p.roots()
        assert len(roots) == 4
        assert not any(r.touch for r in roots)
        expect = sorted([-2 * np.pi / 3, -np.pi / 2, np.pi / 2, 2 * np.pi / 3])
        assert np.allclose(sorted(r.angle for r in roots), expect, atol=1e-10)

    def test_anisotropic_velocity_boundary_angles(self):
        # -(u u')^2 for the anisotropic chain: quadruple-flat zeros at
        # {0, pi, ±k*} with cos k* = -625/1248; all must be flagged touch.
        uup = TrigPoly([0.0], [-0.5, -312.0 / 625.0])  # u u'
        q = -1.0 * uup.mul(uup)
        roots = q.roots()
        assert all(r.touch for r in roots)
        angles = sorted(r.angle for r in roots)
        assert np.allclose(angles, [-KSTAR, 0.0, KSTAR, np.pi], atol=1e-10)

    def test_zero_polynomial_raises(self):
        with pytest.raises(ZeroPolynomial):
            TrigPoly([0.0]).roots()

    def test_no_roots(self):
        assert TrigPoly([2.0, 1.0]).roots() == []

    def test_root_record_type(self):
        r = TrigPoly([0.0, 1.0]).roots()[0]
        assert isinstance(r, Root)


def test_sup_norm():
    p = TrigPoly([0.5, 1.0])  # max |1/2 + cos k| = 3/2
    assert p.sup_norm() == pytest.approx(1.5, abs=1e-12)
    s = TrigPoly([0.0], [-0.04])
    assert s.sup_norm() == pytest.approx(0.04, abs=1e-14)
