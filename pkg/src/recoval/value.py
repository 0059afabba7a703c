"""Value of a recommendation system to a randomly drawn receiver.

The value is the expected payoff gain from one random sender's
recommendation relative to choosing on priors alone.  It is computed
two ways on every call: a case-based closed form driven by the
acceptance region, and an independent integral of the per-type payoff
gains against the receiver distribution (quadrature on the CDF).  The
two routes must agree to 1e-9 or the call fails loudly.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._quadrature import adaptive_simpson
from .core import (
    QualityDistribution,
    Recommendation,
    RecommendationSystem,
    posterior,
    recommendation_probabilities,
)
from .distributions import HI, LO, TypeDistribution
from .errors import ModelError
from .receiver import (
    AcceptanceRegion,
    EffectPair,
    acceptance_region,
    effects,
    expected_utility,
)

_AGREEMENT_TOL = 1e-9


@dataclass(frozen=True)
class SymmetricParams:
    """Reduced parameterization of a quality distribution.

    ``prevalence`` is the controversial share (q_1 + q_2) / 2,
    ``good_odds`` the ratio q_h / q_l and ``controversial_odds`` the
    ratio q_1 / q_2; the odds are None when their denominators vanish.
    ``buy_share`` is the fraction of a symmetric population willing to
    recommend a controversial version, F(1/2 - R); it is threshold
    dependent and therefore optional here.
    """

    prevalence: float
    good_odds: float | None
    controversial_odds: float | None
    buy_share: float | None = None


@dataclass(frozen=True)
class ValueReport:
    """System value together with its ingredients and per-branch split."""

    value: float
    pi_buy: float
    buy_effects: EffectPair
    dont_effects: EffectPair | None
    region: AcceptanceRegion
    accepting_contribution: float
    rejecting_contribution: float
    case: str

    def to_record(self) -> dict:
        """Flat record with the stable wire field names."""
        dont = self.dont_effects
        return {
            "value": self.value,
            "pi_buy": self.pi_buy,
            "delta_O_B": self.buy_effects.objective,
            "delta_S_B": self.buy_effects.subjective,
            "delta_O_D": dont.objective if dont is not None else None,
            "delta_S_D": dont.subjective if dont is not None else None,
            "region": self.region.kind,
            "i_tilde": self.region.cutoff,
        }


def value_no_rec(i: float, quality: QualityDistribution) -> float:
    """Expected payoff of type ``i`` without any recommendation."""
    return expected_utility(i, quality.as_tuple())


def value_accepting(system: RecommendationSystem, i: float) -> float:
    """Expected payoff of a type-``i`` receiver who accepts recommendations."""
    pi_buy, _ = recommendation_probabilities(system)
    u_buy = expected_utility(i, posterior(system, Recommendation.BUY))
    u_0 = value_no_rec(i, system.quality)
    return pi_buy * u_buy + (1.0 - pi_buy) * u_0


def value_rejecting(system: RecommendationSystem, i: float) -> float:
    """Expected payoff of a type-``i`` receiver who goes against them."""
    pi_buy, pi_dont = recommendation_probabilities(system)
    u_0 = value_no_rec(i, system.quality)
    if pi_dont <= 0.0:
        return u_0
    u_dont = expected_utility(i, posterior(system, Recommendation.DONT_BUY))
    return pi_buy * u_0 + pi_dont * u_dont


def _linear_pieces(system):
    """Per-piece linear integrands (a, b, const, slope, label) of the type gain.

    The payoff gain of an accepting type is pi_buy * (dO_B - i dS_B) and
    of a rejecting type pi_dont * (dO_D - i dS_D); both are linear in i,
    so the value is a sum of linear integrals against the receiver CDF.
    """
    pi_buy, pi_dont = recommendation_probabilities(system)
    eff_b = effects(system, Recommendation.BUY)
    eff_d = effects(system, Recommendation.DONT_BUY) if pi_dont > 0.0 else None
    region = acceptance_region(system)
    accept_piece = (pi_buy * eff_b.objective, -pi_buy * eff_b.subjective)
    if eff_d is None:
        reject_piece = (0.0, 0.0)
    else:
        reject_piece = (pi_dont * eff_d.objective, -pi_dont * eff_d.subjective)
    if region.kind == "all":
        pieces = [(LO, HI, *accept_piece, "accept")]
    elif region.kind == "upper":
        pieces = [
            (LO, region.cutoff, *reject_piece, "reject"),
            (region.cutoff, HI, *accept_piece, "accept"),
        ]
    else:
        pieces = [
            (LO, region.cutoff, *accept_piece, "accept"),
            (region.cutoff, HI, *reject_piece, "reject"),
        ]
    return pieces, pi_buy, eff_b, eff_d, region


def integral_system_value(system: RecommendationSystem) -> float:
    """System value by direct integration against the receiver CDF.

    Independent of the closed-form route: linear integrands are reduced
    with integration by parts and the remaining CDF integral is done by
    adaptive Simpson quadrature (tolerance 1e-10).
    """
    pieces, *_ = _linear_pieces(system)
    dist = system.receiver_types
    total = 0.0
    for a, b, const, slope, _label in pieces:
        if b <= a:
            continue
        f_a, f_b = dist.cdf(a), dist.cdf(b)
        tail = adaptive_simpson(dist.cdf, a, b)
        total += const * (f_b - f_a) + slope * (b * f_b - a * f_a - tail)
    return total


def system_value(system: RecommendationSystem) -> ValueReport:
    """Closed-form system value, cross-checked against the integral route."""
    pieces, pi_buy, eff_b, eff_d, region = _linear_pieces(system)
    dist = system.receiver_types
    accepting = 0.0
    rejecting = 0.0
    for a, b, const, slope, label in pieces:
        if b <= a:
            continue
        mass = dist.cdf(b) - dist.cdf(a)
        part = const * mass + slope * dist.partial_expectation(a, b)
        if label == "accept":
            accepting += part
        else:
            rejecting += part
    value = accepting + rejecting
    check = integral_system_value(system)
    if abs(value - check) > _AGREEMENT_TOL:
        raise ModelError(
            f"closed-form value {value} disagrees with integral {check}"
        )
    case = {"all": "all_accept", "upper": "upper_accept", "lower": "lower_accept"}
    return ValueReport(
        value=value,
        pi_buy=pi_buy,
        buy_effects=eff_b,
        dont_effects=eff_d,
        region=region,
        accepting_contribution=accepting,
        rejecting_contribution=rejecting,
        case=case[region.kind],
    )


def symmetric_value(prevalence: float, good_odds: float, buy_share: float) -> float:
    """Closed-form value under a symmetric sender/receiver population.

    ``buy_share`` is F(1/2 - R); for a fixed symmetric distribution it is
    inversely related to the threshold.  The value is linear in it.
    """
    if not 0.0 <= prevalence < 0.5:
        raise ModelError(f"prevalence must lie in [0, 1/2), got {prevalence}")
    if not good_odds > 0.0:
        raise ModelError(f"good odds must be positive, got {good_odds}")
    if not 0.0 <= buy_share <= 1.0:
        raise ModelError(f"buy share must lie in [0, 1], got {buy_share}")
    q, s, b = prevalence, good_odds, buy_share
    return (1.0 - 2.0 * q) * (s + q * (b - s + s * s * (1.0 - b))) / (1.0 + s) ** 2


def symmetric_buy_probability(
    prevalence: float, good_odds: float, buy_share: float
) -> float:
    """Buy-recommendation probability in the reduced parameterization."""
    return (1.0 - 2.0 * prevalence) * good_odds / (1.0 + good_odds) + (
        2.0 * prevalence * buy_share
    )


def reparameterize(quality: QualityDistribution) -> SymmetricParams:
    """Reduce a quality distribution to (prevalence, odds) parameters."""
    good = quality.q_h / quality.q_l if quality.q_l > 0.0 else None
    contro = quality.q_1 / quality.q_2 if quality.q_2 > 0.0 else None
    return SymmetricParams(
        prevalence=quality.prevalence,
        good_odds=good,
        controversial_odds=contro,
    )


def quality_from_params(
    prevalence: float, good_odds: float, controversial_odds: float = 1.0
) -> QualityDistribution:
    """Inverse of :func:`reparameterize`."""
    if not 0.0 <= prevalence <= 0.5:
        raise ModelError(f"prevalence must lie in [0, 1/2], got {prevalence}")
    if not good_odds > 0.0 or not controversial_odds > 0.0:
        raise ModelError("odds parameters must be positive")
    q, s, lam = prevalence, good_odds, controversial_odds
    return QualityDistribution(
        q_h=(1.0 - 2.0 * q) * s / (1.0 + s),
        q_1=2.0 * q * lam / (lam + 1.0),
        q_2=2.0 * q / (lam + 1.0),
        q_l=(1.0 - 2.0 * q) / (1.0 + s),
    )


def symmetric_system(
    prevalence: float,
    good_odds: float,
    dist: TypeDistribution,
    threshold: float,
    controversial_odds: float = 1.0,
) -> RecommendationSystem:
    """Convenience constructor from the reduced parameterization."""
    return RecommendationSystem(
        quality=quality_from_params(prevalence, good_odds, controversial_odds),
        sender_types=dist,
        threshold=threshold,
    )
