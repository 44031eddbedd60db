"""Partition, entropy density routes, Sigma, and the vanishing criterion."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entroscale.density import (
    DensityReport,
    MomentumPartition,
    partition_momentum,
    s_infinity,
    s_infinity_symmetric,
    sigma_set,
    tanh_form,
    vanishing_check,
)
from entroscale.entropy import LOG2
from entroscale.errors import AxiomViolation, NotSymmetric, WrongCase, WrongFermi
from entroscale.rlmover import (
    ChainModel,
    CustomOdd,
    FermiDirac,
    GroundStep,
    HalfConstant,
    HamiltonianCoeffs,
    StepSet,
    Temperatures,
)
from entroscale.toeplitz import window_entropy

# Frozen with 50-digit arithmetic, independently of the adaptive quadrature.
S_INF_XY_NESS = 0.36880743449394487  # couplings below, beta = (2, 5)
S_INF_XY_EQ_B1 = 0.61469659040638381
S_INF_XY_EQ_B2 = 0.48098699940185623
S_INF_CASE3_NESS = 0.20245655822950675  # u0 = -2 sin k, beta = (2, 5)
E_MIN = 0.03463176250725589
E_MAX = 1.5
K_STAR = 2.0953205905997617
A_BETA2 = 0.91212036920771735  # tanh(2 * 1.54 / 2)
A_BETA5 = 0.99909475555351893
ETA_A2 = 0.18026904472586240
ETA_A5 = 0.0039379158065507377

HALF_PI = math.pi / 2


def xy_model(beta_L=2.0, beta_R=5.0, fermi=None):
    h = HamiltonianCoeffs(1, {(2, 1): 1 / 50, (3, 0): 0.5, (3, 1): 0.5})
    return ChainModel(h, Temperatures(beta_L, beta_R), fermi or FermiDirac())


def case3_model(beta_L=2.0, beta_R=5.0, fermi=None):
    h = HamiltonianCoeffs(1, {(0, 1): 1.0})  # u0 = -2 sin k
    return ChainModel(h, Temperatures(beta_L, beta_R), fermi or FermiDirac())


def hopping_model():
    h = HamiltonianCoeffs(1, {(3, 1): 0.5})  # u3 = cos k, |u| vanishes at +-pi/2
    return ChainModel(h, Temperatures(2.0, 5.0), FermiDirac())


def arcs_close(got, expected, tol=1e-8):
    assert len(got) == len(expected)
    for (glo, ghi), (elo, ehi) in zip(got, expected):
        assert glo == pytest.approx(elo, abs=tol)
        assert ghi == pytest.approx(ehi, abs=tol)


class TestMomentumPartition:
    def test_xy_arcs(self):
        part = partition_momentum(xy_model())
        arcs_close(part.pi_L, [(-math.pi, -K_STAR), (0.0, K_STAR)])
        arcs_close(part.pi_R, [(-K_STAR, 0.0), (K_STAR, math.pi)])
        assert part.excluded == ()

    def test_xy_side_lengths_are_equal(self):
        part = partition_momentum(xy_model())
        assert part.length("L") == pytest.approx(math.pi, abs=1e-8)
        assert part.length("R") == pytest.approx(math.pi, abs=1e-8)

    def test_xy_stationary_angles(self):
        part = partition_momentum(xy_model())
        assert sorted(abs(t) for t in part.pi_0) == pytest.approx(
            [0.0, K_STAR, K_STAR, math.pi], abs=1e-8
        )

    def test_case3_right_movers(self):
        part = partition_momentum(case3_model())
        arcs_close(part.pi_R, [(-math.pi, -HALF_PI), (HALF_PI, math.pi)])
        arcs_close(part.pi_L, [(-HALF_PI, HALF_PI)])
        assert part.excluded == ()

    def test_hopping_chain_partition(self):
        part = partition_momentum(hopping_model())
        arcs_close(part.pi_R, [(-HALF_PI, 0.0), (HALF_PI, math.pi)])
        arcs_close(part.pi_L, [(-math.pi, -HALF_PI), (0.0, HALF_PI)])
        assert sorted(part.excluded) == pytest.approx([-HALF_PI, HALF_PI], abs=1e-9)
        assert sorted(abs(t) for t in part.pi_0) == pytest.approx(
            [0.0, math.pi], abs=1e-9
        )

    @pytest.mark.parametrize("model", [xy_model(), case3_model(), hopping_model()])
    def test_arcs_cover_the_circle(self, model):
        part = partition_momentum(model)
        assert part.length("L") + part.length("R") == pytest.approx(
            2 * math.pi, abs=1e-8
        )
        arcs = part.sided_arcs()
        for (_, hi, _), (lo, _, _) in zip(arcs, arcs[1:]):
            assert hi <= lo + 1e-9

    def test_partition_ignores_the_occupation(self):
        fd = partition_momentum(xy_model())
        gs = partition_momentum(xy_model(fermi=GroundStep()))
        assert fd == gs

    def test_wrong_case_is_rejected(self):
        h1 = HamiltonianCoeffs(1, {(1, 1): -0.5, (3, 0): 0.0, (3, 1): 0.5})
        model = ChainModel(h1, Temperatures(2.0, 5.0), FermiDirac())
        with pytest.raises(WrongCase):
            partition_momentum(model)


class TestSInfinity:
    def test_xy_ness_frozen_value(self):
        rep = s_infinity(xy_model())
        assert rep.s_infinity == pytest.approx(S_INF_XY_NESS, abs=1e-9)

    def test_two_term_split_is_consistent(self):
        rep = s_infinity(xy_model())
        s_L, s_R = rep.split
        assert s_L > 0 and s_R > 0
        assert s_L + s_R == pytest.approx(rep.s_infinity, abs=1e-9)

    @pytest.mark.parametrize(
        "beta, frozen",
        [(1.0, S_INF_XY_EQ_B1), (2.0, S_INF_XY_EQ_B2)],
    )
    def test_xy_equilibrium_frozen_values(self, beta, frozen):
        rep = s_infinity(xy_model(beta, beta))
        assert rep.s_infinity == pytest.approx(frozen, abs=1e-9)

    def test_case3_frozen_value(self):
        rep = s_infinity(case3_model())
        assert rep.s_infinity == pytest.approx(S_INF_CASE3_NESS, abs=1e-9)

    def test_half_constant_saturates_log2(self):
        rep = s_infinity(xy_model(fermi=HalfConstant()))
        assert rep.s_infinity == pytest.approx(LOG2, abs=1e-12)
        assert not rep.vanishing.vanishing

    def test_ground_state_density_vanishes(self):
        rep = s_infinity(xy_model(fermi=GroundStep()))
        assert rep.s_infinity <= 1e-12
        assert rep.vanishing.vanishing

    def test_report_carries_partition_and_sigma(self):
        rep = s_infinity(xy_model())
        assert isinstance(rep, DensityReport)
        assert isinstance(rep.partition, MomentumPartition)
        assert rep.sigma and rep.sigma[0][0] < rep.sigma[0][1]

    @pytest.mark.parametrize("model", [xy_model(), case3_model(), hopping_model()])
    def test_density_is_bounded(self, model):
        rep = s_infinity(model)
        assert 0.0 <= rep.s_infinity <= LOG2 + 1e-12

    def test_matches_extrapolated_window_entropy(self):
        model = xy_model()
        r128 = window_entropy(model, 128).per_site
        r256 = window_entropy(model, 256).per_site
        richardson = 2.0 * r256 - r128
        s = s_infinity(model).s_infinity
        assert abs(richardson - s) < 0.01 * s

    @settings(max_examples=20, deadline=None)
    @given(
        beta_L=st.floats(0.2, 4.0),
        ratio=st.floats(1.0, 5.0),
    )
    def test_density_bounds_hold_across_temperatures(self, beta_L, ratio):
        rep = s_infinity(xy_model(beta_L, beta_L * ratio))
        assert 0.0 < rep.s_infinity < LOG2
        assert sum(rep.split) == pytest.approx(rep.s_infinity, abs=1e-9)


class TestSymmetricForm:
    def test_agrees_with_single_form(self):
        model = xy_model()
        assert s_infinity_symmetric(model) == pytest.approx(
            s_infinity(model).s_infinity, abs=1e-9
        )

    def test_equilibrium_agrees_too(self):
        model = xy_model(2.0, 2.0)
        assert s_infinity_symmetric(model) == pytest.approx(
            S_INF_XY_EQ_B2, abs=1e-9
        )

    def test_needs_vanishing_u0(self):
        with pytest.raises(NotSymmetric):
            s_infinity_symmetric(case3_model())


class TestTanhForm:
    def test_agrees_with_direct_route(self):
        model = xy_model()
        result = tanh_form(model)
        assert result.value == pytest.approx(S_INF_XY_NESS, abs=1e-9)

    def test_lower_bound_is_strict(self):
        result = tanh_form(xy_model())
        assert 0.0 < result.lower_bound < result.value

    def test_bound_ingredients(self):
        result = tanh_form(xy_model())
        assert result.a_L == pytest.approx(A_BETA2, abs=1e-12)
        assert result.a_R == pytest.approx(A_BETA5, abs=1e-12)
        expected = (ETA_A2 * math.pi + ETA_A5 * math.pi) / (2 * math.pi)
        assert result.lower_bound == pytest.approx(expected, abs=1e-8)

    def test_rejects_other_occupations(self):
        with pytest.raises(WrongFermi):
            tanh_form(xy_model(fermi=GroundStep()))


class TestSigmaSet:
    def test_case3_unit_betas_fill_a_band(self):
        sigma = sigma_set(case3_model(1.0, 1.0))
        arcs_close(sigma, [(-2.0, 2.0)], tol=1e-9)

    def test_xy_unit_betas(self):
        sigma = sigma_set(xy_model(1.0, 1.0))
        arcs_close(sigma, [(-E_MAX, -E_MIN), (E_MIN, E_MAX)], tol=1e-9)

    def test_xy_ness_scales_by_reservoir(self):
        sigma = sigma_set(xy_model(2.0, 5.0))
        arcs_close(sigma, [(-5 * E_MAX, -2 * E_MIN), (2 * E_MIN, 5 * E_MAX)], tol=1e-9)

    def test_symmetric_under_negation(self):
        sigma = sigma_set(xy_model())
        flipped = sorted((-hi, -lo) for lo, hi in sigma)
        arcs_close(sigma, flipped, tol=1e-12)

    def test_intervals_sorted_and_disjoint(self):
        sigma = sigma_set(hopping_model())
        for (_, hi), (lo, _) in zip(sigma, sigma[1:]):
            assert hi < lo

    @settings(max_examples=20, deadline=None)
    @given(scale=st.floats(0.25, 8.0))
    def test_scaling_the_betas_scales_sigma(self, scale):
        base = sigma_set(xy_model(2.0, 5.0))
        scaled = sigma_set(xy_model(2.0 * scale, 5.0 * scale))
        assert len(base) == len(scaled)
        for (blo, bhi), (slo, shi) in zip(base, scaled):
            assert slo == pytest.approx(scale * blo, rel=1e-9)
            assert shi == pytest.approx(scale * bhi, rel=1e-9)


class TestVanishingCheck:
    def test_ground_state_verdict(self):
        verdict = vanishing_check(xy_model(fermi=GroundStep()))
        assert verdict.vanishing
        assert verdict.samples == 4096
        assert verdict.witnesses == ()

    def test_thermal_state_verdict(self):
        verdict = vanishing_check(xy_model())
        assert not verdict.vanishing
        assert verdict.witnesses
        x, rho = verdict.witnesses[0]
        assert 1e-12 < min(abs(rho), abs(rho - 1.0))

    def test_half_constant_verdict(self):
        verdict = vanishing_check(xy_model(fermi=HalfConstant()))
        assert not verdict.vanishing
        assert all(abs(r - 0.5) < 1e-12 for _, r in verdict.witnesses)

    def test_step_set_built_from_sigma_vanishes(self):
        sigma = sigma_set(xy_model())
        positive = tuple((lo, hi) for lo, hi in sigma if lo > 0)
        model = xy_model(fermi=StepSet(positive))
        rep = s_infinity(model)
        assert rep.s_infinity == 0.0
        assert rep.vanishing.vanishing

    def test_perturbed_occupation_is_flagged(self):
        sigma = sigma_set(xy_model())
        (lo, hi) = next((a, b) for a, b in sigma if a > 0)
        c = lo + 0.3 * (hi - lo)

        def vrho(x):
            x = np.asarray(x, dtype=float)
            out = np.where(x > 0, 1.0, -1.0)
            out = np.where((x > c) & (x < c + 0.1), 0.8, out)
            return np.where((-x > c) & (-x < c + 0.1), -0.8, out)

        model = xy_model(fermi=CustomOdd(vrho, jumps=(0.0, lo, hi, c, c + 0.1)))
        rep = s_infinity(model)
        assert rep.s_infinity > 1e-4
        assert not rep.vanishing.vanishing
        assert all(min(abs(r - 0.9), abs(r - 0.1)) < 1e-9 for _, r in rep.vanishing.witnesses)

    def test_inconsistent_verdict_raises(self, monkeypatch):
        import entroscale.density as dens

        # With an absurd indicator tolerance every occupation looks binary,
        # which must trip the cross check against the computed density.
        monkeypatch.setattr(dens, "RHO_BINARY_TOL", 1.0)
        with pytest.raises(AxiomViolation):
            s_infinity(xy_model())
