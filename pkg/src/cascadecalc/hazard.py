"""Constant-hazard survival arithmetic for derailment events.

A cumulative risk over one horizon extrapolates to another by holding the
per-period hazard fixed: p' = 1 - (1 - p)^(target/horizon). Derailment events
combine an event probability with the conditional chance that the event, if it
happens, pushes arrival past the deadline; independent events multiply their
survival probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ValidationError
from .numerics import as_rational, check_positive, check_probability


@dataclass(frozen=True)
class HorizonRisk:
    """A cumulative probability attached to the horizon it was stated for."""

    probability: float
    horizon_years: float

    def __post_init__(self):
        check_probability(self.probability)
        check_positive(self.horizon_years, "horizon_years")


@dataclass(frozen=True)
class DerailmentEvent:
    name: str
    event_risk: HorizonRisk
    delay_given_event: float

    def __post_init__(self):
        check_probability(self.delay_given_event, f"{self.name} delay_given_event")


def rescale(risk: HorizonRisk, target_years: float) -> HorizonRisk:
    """Re-express a cumulative risk over a different horizon, constant hazard.

    Probability 1 has no finite hazard and cannot be rescaled.
    """
    check_positive(target_years, "target_years")
    if risk.probability >= 1.0:
        raise ValidationError("cannot rescale a certain event: hazard is undefined at p=1")
    if target_years == risk.horizon_years:
        return risk
    # log1p/expm1 keep the survival probability accurate near both endpoints
    p = -math.expm1((target_years / risk.horizon_years) * math.log1p(-risk.probability))
    return HorizonRisk(probability=p, horizon_years=target_years)


def cumulative_from_annual(annual: float, years: float) -> float:
    """Cumulative probability of at least one event in `years` at a fixed annual rate."""
    check_probability(annual, "annual probability")
    check_positive(years, "years")
    if annual >= 1.0:
        raise ValidationError("annual probability 1 has undefined hazard")
    if annual == 0.0:
        return 0.0
    return -math.expm1(years * math.log1p(-annual))


def annual_from_cumulative(cumulative: float, years: float) -> float:
    """Fixed annual probability consistent with a cumulative risk over `years`."""
    check_probability(cumulative, "cumulative probability")
    check_positive(years, "years")
    if cumulative >= 1.0:
        raise ValidationError("cumulative probability 1 has undefined hazard")
    if cumulative == 0.0:
        return 0.0
    return -math.expm1(math.log1p(-cumulative) / years)


def any_of(risks: Sequence[float]) -> float:
    """Probability that at least one of several independent events occurs."""
    acc = Fraction(1)
    for i, p in enumerate(risks):
        check_probability(p, f"risk[{i}]")
        acc *= 1 - as_rational(p)
    return float(1 - acc)


def derail_probability(event: DerailmentEvent) -> float:
    """Chance the event both occurs and is severe enough to push past the deadline."""
    return float(as_rational(event.event_risk.probability) * as_rational(event.delay_given_event))


def combined_survival(events: Sequence[DerailmentEvent]) -> float:
    """Probability that none of the independent derailments bites."""
    acc = Fraction(1)
    for e in events:
        acc *= 1 - as_rational(derail_probability(e))
    return float(acc)
