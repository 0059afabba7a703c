"""Acceptance suite: one check per criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict
lines.  Every tolerance is fixed here; nothing is calibrated at runtime.
"""

import numpy as np
import pytest

import recoval as rv

from conftest import (
    S1,
    S2,
    S3,
    S4_PAIR,
    S4_QUALITY,
    S5_QUALITY,
    S6_QUALITY,
    random_distribution,
    random_quality,
    random_symmetric_tabulated,
    random_system,
)

REC = rv.Recommendation
UNIFORM = rv.UniformTypes()


def _report(num: int, desc: str, ok: bool):
    print(f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {desc}")
    assert ok, f"criterion {num} failed: {desc}"


def test_criterion_01_total_probability():
    rng = np.random.default_rng(20260101)
    worst = 0.0
    for _ in range(1000):
        system = random_system(rng)
        pi_buy, pi_dont = rv.recommendation_probabilities(system)
        buy = rv.posterior(system, REC.BUY).probs
        dont = rv.posterior(system, REC.DONT_BUY).probs
        for q_s, b, d in zip(system.quality.as_tuple(), buy, dont):
            worst = max(worst, abs(q_s - pi_buy * b - pi_dont * d))
    _report(1, f"total probability identity, worst error {worst:.2e}", worst < 1e-12)


def test_criterion_02_acceptance_equivalence():
    rng = np.random.default_rng(20260102)
    grid = np.linspace(-0.5, 0.5, 201)
    ok = True
    for _ in range(200):
        system = random_system(rng)
        buy = rv.posterior(system, REC.BUY)
        dont = rv.posterior(system, REC.DONT_BUY)
        for i in grid:
            i = float(i)
            u0 = rv.value_no_rec(i, system.quality)
            from_buy = rv.expected_utility(i, buy) >= u0
            from_dont = u0 >= rv.expected_utility(i, dont)
            if not (from_buy == from_dont == rv.accepts(system, i)):
                ok = False
    _report(2, "buy-side and dont-side acceptance decisions coincide", ok)


def test_criterion_03_extreme_thresholds():
    rng = np.random.default_rng(20260103)
    ok = True
    for _ in range(100):
        quality = random_quality(rng)
        dist = random_distribution(rng)
        for r in (1e-6, 1.0 - 1e-6):
            system = rv.RecommendationSystem(quality, dist, r)
            if rv.acceptance_region(system).kind != "all":
                ok = False
    _report(3, "extreme thresholds make every type accept", ok)


def test_criterion_04_symmetric_value_closed_form():
    rng = np.random.default_rng(20260104)
    worst_prod = 0.0
    worst_closed = 0.0
    for _ in range(100):
        system = random_system(rng, symmetric=True)
        q = system.quality
        report = rv.system_value(system)
        eff = rv.effects(system, REC.BUY)
        worst_prod = max(
            worst_prod, abs(report.value - report.pi_buy * eff.objective)
        )
        if q.q_l > 0.0 and q.prevalence < 0.5:
            share = system.sender_types.cdf(0.5 - system.threshold)
            closed = rv.symmetric_value(q.prevalence, q.good_odds, share)
            worst_closed = max(worst_closed, abs(report.value - closed))
    point = abs(rv.symmetric_value(0.2, 2.0, 0.5) - 0.14)
    ok = worst_prod < 1e-10 and worst_closed < 1e-10 and point < 1e-12
    _report(
        4,
        "symmetric value equals buy-probability times objective effect "
        f"(worst {worst_prod:.2e}) and the closed form (worst {worst_closed:.2e})",
        ok,
    )


def test_criterion_05_threshold_monotonicity():
    rng = np.random.default_rng(20260105)
    h = 1e-5
    grid = np.linspace(0.02, 0.98, 99)
    ok = True
    for _ in range(50):
        prevalence = float(rng.uniform(0.05, 0.45))
        sigma = float(np.exp(rng.uniform(np.log(0.2), np.log(5.0))))
        if abs(sigma - 1.0) < 0.05:
            sigma = 1.3
        dist = UNIFORM if rng.integers(0, 2) == 0 else random_symmetric_tabulated(rng)
        system = rv.symmetric_system(prevalence, sigma, dist, 0.5)
        want = 1.0 if sigma > 1.0 else -1.0
        for r in grid:
            r = float(r)
            slope = (
                rv.system_value(system.with_threshold(r + h)).value
                - rv.system_value(system.with_threshold(r - h)).value
            ) / (2.0 * h)
            if slope * want <= 0.0:
                ok = False
    flat = rv.symmetric_system(0.2, 1.0, UNIFORM, 0.5)
    values = [
        rv.system_value(flat.with_threshold(float(r))).value for r in grid
    ]
    constant = max(values) - min(values) < 1e-9
    _report(
        5,
        "threshold slope sign follows the good/bad odds; flat at even odds",
        ok and constant,
    )


def test_criterion_06_optimal_threshold_cases():
    interior = rv.optimize_threshold(
        rv.symmetric_system(0.2, 1.0, rv.PowerTypes(2.0), 0.5)
    )
    ok_interior = (
        interior.kind == "interior_optimum"
        and abs(interior.optimum_threshold - 0.5) < 1e-4
        and abs(interior.optimum_value - 1.0 / 6.0) < 1e-8
        and abs(
            rv.closed_form_value(2.0, 0.2, 1.0, interior.optimum_threshold)
            - interior.optimum_value
        )
        < 1e-8
    )
    high = rv.optimize_threshold(
        rv.symmetric_system(0.01, 10.0, rv.PowerTypes(2.0), 0.5)
    )
    low = rv.optimize_threshold(
        rv.symmetric_system(0.01, 0.05, rv.PowerTypes(2.0), 0.5)
    )
    ok_bounds = (
        high.kind == "increasing_in_R"
        and rv.interior_conditions(2.0, 0.01, 10.0) == "boundary_high"
        and low.kind == "decreasing_in_R"
        and rv.interior_conditions(2.0, 0.01, 0.05) == "boundary_low"
    )
    _report(
        6,
        "interior optimum at the balanced point, boundary verdicts at "
        "extreme odds",
        ok_interior and ok_bounds,
    )


def test_criterion_07_prevalence_statics():
    verdict = rv.prevalence_statics(5.0, 0.1)
    grid = np.linspace(1e-4, 0.5 - 1e-4, 500)
    values = [rv.symmetric_value(float(q), 5.0, 0.1) for q in grid]
    grid_best = float(grid[int(np.argmax(values))])
    ok_interior = (
        verdict.kind == "interior"
        and abs(verdict.q_star - 7.6 / 70.4) < 1e-6
        and abs(grid_best - verdict.q_star) < 1e-3
    )
    flat_values = [rv.symmetric_value(float(q), 1.0, 0.1) for q in grid]
    ok_decreasing = all(
        b < a + 1e-15 for a, b in zip(flat_values, flat_values[1:])
    )
    _report(
        7,
        f"prevalence optimum at {verdict.q_star:.6f} (grid {grid_best:.6f}); "
        "even odds decreasing",
        ok_interior and ok_decreasing,
    )


def test_criterion_08_polarization():
    targets = np.linspace(0.0, 0.5, 11)
    ok = True
    for sigma, direction in ((0.5, 1.0), (2.0, -1.0)):
        values = []
        for target in targets:
            dist = rv.PiecewiseSymmetricTypes(beta_target=float(target), r_ref=0.75)
            system = rv.symmetric_system(0.2, sigma, dist, 0.75)
            values.append(rv.system_value(system).value)
        diffs = np.diff(values)
        if not np.all(diffs * direction > 0.0):
            ok = False
        want = "increases" if direction > 0 else "decreases"
        if rv.polarization_effect(sigma, 0.75) != want:
            ok = False
    _report(8, "polarization raises the value iff bad products dominate", ok)


def test_criterion_09_distinct_populations():
    rng = np.random.default_rng(20260109)
    receiver = rv.PowerTypes(2.0)
    mean = receiver.mean()
    h = 1e-5
    worst_integral = 0.0
    ok_signs = True
    checked = 0
    while checked < 50:
        quality = random_quality(rng)
        if quality.prevalence < 0.05 or quality.q_l < 0.02:
            continue
        verdict = rv.distinct_monotonicity(quality, mean)
        r = float(rng.uniform(0.1, 0.9))
        report = rv.distinct_value(quality, UNIFORM, receiver, r)
        system = rv.RecommendationSystem(
            quality, UNIFORM, r, receiver_types=receiver
        )
        worst_integral = max(
            worst_integral,
            abs(report.value - rv.integral_system_value(system)),
        )
        if verdict == "constant_in_R":
            continue
        slope = (
            rv.distinct_value(quality, UNIFORM, receiver, 0.5 + h).value
            - rv.distinct_value(quality, UNIFORM, receiver, 0.5 - h).value
        ) / (2.0 * h)
        if abs(slope) < 1e-9:
            continue
        expected = "increasing_in_R" if slope > 0.0 else "decreasing_in_R"
        if verdict != expected:
            ok_signs = False
        checked += 1
    _report(
        9,
        "distinct-population closed form matches the receiver-weighted "
        f"integral (worst {worst_integral:.2e}) and the slope-direction test",
        worst_integral < 1e-9 and ok_signs,
    )


def test_criterion_10_two_threshold_partials():
    h = 1e-5
    shares = np.linspace(0.05, 0.95, 10)
    worst = 0.0
    for share_low in shares:
        for share_high in shares:
            # central differences need room on both sides of the pair
            if share_low - share_high < 2.1 * h:
                continue

            def value(b_low, b_high):
                pair = rv.ThresholdPair(low=1.0 - b_low, high=1.0 - b_high)
                return rv.two_threshold_value(S4_QUALITY, UNIFORM, pair)

            pair = rv.ThresholdPair(low=1.0 - share_low, high=1.0 - share_high)
            d_high, d_low = rv.two_threshold_partials(S4_QUALITY, UNIFORM, pair)
            fd_low = (
                value(share_low + h, share_high) - value(share_low - h, share_high)
            ) / (2.0 * h)
            fd_high = (
                value(share_low, share_high + h) - value(share_low, share_high - h)
            ) / (2.0 * h)
            worst = max(worst, abs(d_low - fd_low), abs(d_high - fd_high))
    # bad products likelier than good: the low threshold should be extreme
    _, d_low_s4 = rv.two_threshold_partials(S4_QUALITY, UNIFORM, S4_PAIR)
    mirrored = rv.QualityDistribution(0.17, 0.7, 0.1, 0.03)
    d_high_m, _ = rv.two_threshold_partials(mirrored, UNIFORM, S4_PAIR)
    tilde = rv.neutral_indifferent_type(S4_QUALITY)
    ok = (
        worst < 1e-6
        and d_low_s4 > 0.0
        and d_high_m < 0.0
        and abs(tilde - (-0.4666666667)) < 1e-4
    )
    _report(
        10,
        f"three-level partials match finite differences (worst {worst:.2e}) "
        "with the predicted signs",
        ok,
    )


def test_criterion_11_infinite_learning():
    ok = True
    for sigma in (0.5, 1.0, 2.0):
        for prevalence in (0.1, 0.25, 0.4):
            quality = rv.quality_from_params(prevalence, sigma, 1.0)
            gap = abs(
                rv.infinite_learning_value(quality, UNIFORM)
                - rv.single_threshold_optimum(quality, UNIFORM)
            )
            if gap >= 1e-8:
                ok = False
    no_gain_q = rv.quality_from_params(0.25, 3.0, 2.0)
    gap_equal = abs(
        rv.infinite_learning_value(no_gain_q, UNIFORM)
        - rv.single_threshold_optimum(no_gain_q, UNIFORM)
    )
    gain_q = rv.quality_from_params(0.25, 1.0, 2.0)
    margin = rv.infinite_learning_value(gain_q, UNIFORM) - (
        rv.single_threshold_optimum(gain_q, UNIFORM)
    )
    ok = (
        ok
        and rv.infinite_no_gain(2.0, 3.0)
        and gap_equal < 1e-8
        and not rv.infinite_no_gain(2.0, 1.0)
        and margin > 1e-4
    )
    _report(
        11,
        "unlimited recommendations add value exactly when the odds bands "
        f"overlap (strict margin {margin:.4f})",
        ok,
    )


def test_criterion_12_monte_carlo_concordance(monkeypatch):
    config = rv.SimulationConfig(samples=1_000_000, seed=2026)
    failures = []

    def check(name, est, truth):
        if abs(est.estimate - truth) > 3.0 * est.stderr + 1e-15:
            failures.append(name)

    for label, system in (("S1", S1), ("S2", S2), ("S3", S3)):
        pi_buy, _ = rv.recommendation_probabilities(system)
        check(f"{label}.pi_buy", rv.estimate_pi_buy(system, config), pi_buy)
        for rec, tag in ((REC.BUY, "buy"), (REC.DONT_BUY, "dont")):
            table = rv.estimate_posterior(system, rec, config)
            for est, truth, comp in zip(
                table, rv.posterior(system, rec).probs, "H12L"
            ):
                check(f"{label}.p_{comp}_{tag}", est, truth)
        check(f"{label}.value", rv.estimate_value(system, config), (
            rv.system_value(system).value
        ))
    pair_config = rv.SimulationConfig(
        samples=1_000_000, seed=2026, mode="two_threshold"
    )
    check(
        "S4.two_threshold_value",
        rv.estimate_two_threshold(S4_QUALITY, UNIFORM, S4_PAIR, pair_config),
        rv.two_threshold_value(S4_QUALITY, UNIFORM, S4_PAIR),
    )
    inf_config = rv.SimulationConfig(samples=1_000_000, seed=2026, mode="infinite")
    for label, quality in (("S5", S5_QUALITY), ("S6", S6_QUALITY)):
        system = rv.RecommendationSystem(quality, UNIFORM, 0.5)
        result = rv.estimate_multi(system, inf_config)
        check(
            f"{label}.value_infinite",
            result.value,
            rv.infinite_learning_value(quality, UNIFORM),
        )
        both = quality.q_1 + quality.q_2
        check(f"{label}.p_1_mixed", result.posterior[1], quality.q_1 / both)
    monkeypatch.setenv("RECO_THREADS", "1")
    serial = rv.estimate_value(S1, config)
    monkeypatch.setenv("RECO_THREADS", "7")
    threaded = rv.estimate_value(S1, config)
    reproducible = (
        serial.estimate == threaded.estimate and serial.stderr == threaded.stderr
    )
    ok = not failures and reproducible
    _report(
        12,
        "Monte Carlo estimates within 3 standard errors on the regression "
        f"suite (failures: {failures or 'none'}), bit-reproducible across "
        "thread counts",
        ok,
    )


def test_criterion_13_belief_decomposition():
    rng = np.random.default_rng(20260113)
    worst_tel = 0.0
    ok_vectors = True
    for _ in range(1000):
        system = random_system(rng)
        decomp = rv.belief_decomposition(system)
        for idx in range(4):
            steps = (
                (decomp.after_bad_removed[idx] - decomp.prior[idx])
                + (decomp.after_good_raised[idx] - decomp.after_bad_removed[idx])
                + (decomp.posterior[idx] - decomp.after_good_raised[idx])
            )
            worst_tel = max(
                worst_tel, abs(steps - (decomp.posterior[idx] - decomp.prior[idx]))
            )
        mid = decomp.after_good_raised
        if any(c < 0.0 for c in mid) or abs(sum(mid) - 1.0) > 1e-12:
            ok_vectors = False
    _report(
        13,
        f"belief decomposition telescopes exactly (worst {worst_tel:.2e}) "
        "through probability vectors",
        worst_tel < 1e-13 and ok_vectors,
    )
