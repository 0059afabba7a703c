"""Receiver utilities, effects, acceptance decisions and regions."""

import numpy as np
import pytest

import recoval as rv

from conftest import S1, S2, S3, random_system

REC = rv.Recommendation

# mirror of S3: concave population, so the buy recommendation shifts
# probability toward the version low types prefer
S3_MIRROR = rv.RecommendationSystem(
    rv.QualityDistribution(0.02, 0.45, 0.45, 0.08), rv.PowerTypes(1.0 / 6.0), 0.5
)


class TestExpectedUtility:
    def test_symmetric_prior(self):
        prior = (0.25, 0.25, 0.25, 0.25)
        for i in (-0.5, 0.0, 0.37):
            assert rv.expected_utility(i, prior) == pytest.approx(0.5, abs=1e-15)

    def test_posterior_from_baseline(self):
        post = rv.posterior(S1, REC.BUY)
        assert rv.expected_utility(0.0, post) == pytest.approx(5 / 6, abs=1e-14)

    def test_certain_preferred_version(self):
        assert rv.expected_utility(0.5, (0.0, 1.0, 0.0, 0.0)) == 1.0


class TestEffects:
    def test_baseline_scenario(self):
        eff = rv.effects(S1, REC.BUY)
        assert eff.objective == pytest.approx(7 / 30, abs=1e-14)
        assert eff.subjective == pytest.approx(0.0, abs=1e-14)

    def test_power_family_subjective_effect(self):
        eff = rv.effects(S2, REC.BUY)
        assert eff.objective == pytest.approx(0.3, abs=1e-14)
        assert eff.subjective == pytest.approx(-0.2, abs=1e-14)

    def test_uniform_population_kills_subjective(self):
        system = rv.symmetric_system(0.3, 0.7, rv.PowerTypes(1.0), 0.35)
        eff = rv.effects(system, REC.BUY)
        assert eff.subjective == pytest.approx(0.0, abs=1e-14)

    def test_power_family_sign_by_shape(self):
        # convex populations shift toward (1,0), concave toward (0,1)
        for r in np.linspace(0.1, 0.9, 9):
            high = rv.symmetric_system(0.2, 1.5, rv.PowerTypes(3.0), float(r))
            low = rv.symmetric_system(0.2, 1.5, rv.PowerTypes(0.4), float(r))
            assert rv.effects(high, REC.BUY).subjective < 0.0
            assert rv.effects(low, REC.BUY).subjective > 0.0

    def test_buy_objective_effect_nonnegative(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            system = random_system(rng)
            assert rv.effects(system, REC.BUY).objective >= -1e-12


class TestAccepts:
    def test_symmetric_population_always_accepts(self):
        rng = np.random.default_rng(37)
        for _ in range(50):
            system = random_system(rng, symmetric=True)
            for i in np.linspace(-0.5, 0.5, 11):
                assert rv.accepts(system, float(i))

    def test_extreme_thresholds_always_accept(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            system = random_system(rng)
            for r in (1e-6, 1 - 1e-6):
                shifted = system.with_threshold(r)
                for i in (-0.5, -0.2, 0.3, 0.5):
                    assert rv.accepts(shifted, float(i))

    def test_top_type_rejects_adverse_shift(self):
        # the mirror system shifts probability toward (0,1), which the
        # highest type dislikes enough to reject
        eff = rv.effects(S3_MIRROR, REC.BUY)
        assert eff.subjective > 2.0 * eff.objective
        assert not rv.accepts(S3_MIRROR, 0.5)
        assert rv.accepts(S3_MIRROR, -0.5)

    def test_acceptance_equivalence_both_recommendations(self):
        # deciding from buy-side and dont-side utilities agrees with accepts()
        rng = np.random.default_rng(43)
        grid = np.linspace(-0.5, 0.5, 201)
        for _ in range(60):
            system = random_system(rng)
            buy = rv.posterior(system, REC.BUY)
            dont = rv.posterior(system, REC.DONT_BUY)
            for i in grid:
                i = float(i)
                u0 = rv.value_no_rec(i, system.quality)
                accept_buy = rv.expected_utility(i, buy) >= u0
                accept_dont = u0 >= rv.expected_utility(i, dont)
                assert accept_buy == accept_dont == rv.accepts(system, i)


class TestIndifferentType:
    def test_ratio(self):
        eff = rv.effects(S3, REC.BUY)
        assert rv.indifferent_type(S3) == pytest.approx(
            eff.objective / eff.subjective, abs=1e-15
        )

    def test_undefined_when_no_subjective_content(self):
        assert rv.indifferent_type(S1) is None

    def test_sign_follows_effects(self):
        tilde = rv.indifferent_type(S3)
        assert tilde == pytest.approx(-0.0552831541, abs=1e-9)


class TestAcceptanceRegion:
    def test_all_for_baseline(self):
        assert rv.acceptance_region(S1).kind == "all"

    def test_upper_for_convex_population(self):
        region = rv.acceptance_region(S3)
        assert region.kind == "upper"
        assert region.cutoff == pytest.approx(rv.indifferent_type(S3), abs=1e-15)

    def test_lower_for_concave_population(self):
        region = rv.acceptance_region(S3_MIRROR)
        assert region.kind == "lower"

    def test_region_matches_pointwise_decisions(self):
        rng = np.random.default_rng(47)
        grid = np.linspace(-0.5, 0.5, 2001)
        for _ in range(60):
            system = random_system(rng)
            region = rv.acceptance_region(system)
            pointwise = np.array([rv.accepts(system, float(i)) for i in grid])
            predicted = np.array([region.contains(float(i)) for i in grid])
            # at most one grid cell of disagreement around the cutoff
            assert int((pointwise != predicted).sum()) <= 1

    def test_symmetric_safety_margin(self):
        rng = np.random.default_rng(53)
        for _ in range(100):
            system = random_system(rng, symmetric=True)
            eff = rv.effects(system, REC.BUY)
            margin = min(
                eff.objective + 0.5 * eff.subjective,
                eff.objective - 0.5 * eff.subjective,
            )
            assert margin >= -1e-12

    def test_subjective_sign_classification(self):
        # equal controversial shares: the sign is set by the population shape
        for r in np.linspace(0.1, 0.9, 9):
            r = float(r)
            above = rv.effects(
                rv.symmetric_system(0.2, 1.0, rv.PowerTypes(2.0), r), REC.BUY
            ).subjective
            below = rv.effects(
                rv.symmetric_system(0.2, 1.0, rv.PowerTypes(0.5), r), REC.BUY
            ).subjective
            flat = rv.effects(
                rv.symmetric_system(0.2, 1.0, rv.PowerTypes(1.0), r), REC.BUY
            ).subjective
            assert above < 0.0 < below
            assert flat == pytest.approx(0.0, abs=1e-14)
