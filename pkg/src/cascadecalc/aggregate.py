"""Forecast pooling, log-odds extremizing, and belief-consistency checks.

Extremizing pushes a pooled forecast away from 50% to exploit diversity of
information sources; the standard realization is a power transform on the
odds, p^a / (p^a + (1-p)^a), with exponent a > 1 extremizing and a < 1
moderating. A solver recovers the exponent that maps one probability onto
another, since published accounts tend to state the mapping, not the exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError
from .numerics import as_rational, check_positive, check_probability, exact_sum

POOL_METHODS = ("mean", "odds-geometric-mean")


@dataclass(frozen=True)
class ForecastSet:
    """One probability per forecaster, optionally weighted (normalized here)."""

    forecasts: tuple[float, ...]
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "forecasts", tuple(self.forecasts))
        if not self.forecasts:
            raise ValidationError("a forecast set needs at least one forecast")
        for i, p in enumerate(self.forecasts):
            check_probability(p, f"forecast[{i}]")
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(self.weights))
            if len(self.weights) != len(self.forecasts):
                raise ValidationError(
                    f"{len(self.forecasts)} forecasts but {len(self.weights)} weights"
                )
            for i, w in enumerate(self.weights):
                check_positive(w, f"weight[{i}]")

    def normalized_weights(self) -> list[float]:
        if self.weights is None:
            n = len(self.forecasts)
            return [1.0 / n] * n
        total = sum(self.weights)
        return [w / total for w in self.weights]


@dataclass(frozen=True)
class EvidencePartition:
    """Mutually exclusive evidence outcomes with the posterior each would induce."""

    outcomes: tuple[tuple[float, float], ...]  # (outcome_probability, posterior)

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(tuple(o) for o in self.outcomes))
        if not self.outcomes:
            raise ValidationError("a partition needs at least one outcome")
        for i, (q, post) in enumerate(self.outcomes):
            check_probability(q, f"outcome[{i}] probability")
            check_probability(post, f"outcome[{i}] posterior")
        total = exact_sum(q for q, _ in self.outcomes)
        if abs(total - 1.0) > 1e-9:
            raise ValidationError(f"outcome probabilities sum to {total!r}, expected 1")


def _logit(p: float) -> float:
    return math.log(p) - math.log1p(-p)


def _expit(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def extremize(p: float, exponent: float) -> float:
    """Log-odds power transform; endpoints and the 0.5 fixed point map to themselves."""
    check_probability(p)
    check_positive(exponent, "exponent")
    if p in (0.0, 1.0) or exponent == 1.0:
        return p
    return _expit(exponent * _logit(p))


def solve_extremizing_exponent(p_in: float, p_out: float) -> float:
    """Exponent a with extremize(p_in, a) = p_out, by bisection on the exponent.

    The map a -> extremize(p_in, a) is monotone (toward the nearer pole for
    growing a), so bisection on an expanding bracket converges; the result is
    polished until the forward error is within 1e-9.
    """
    check_probability(p_in, "p_in")
    check_probability(p_out, "p_out")
    if not 0.0 < p_in < 1.0 or not 0.0 < p_out < 1.0:
        raise ValidationError("extremizing endpoints 0 and 1 are fixed points; inputs must be interior")
    if (p_in - 0.5) * (p_out - 0.5) <= 0.0:
        raise ValidationError(
            "p_in and p_out must sit strictly on the same side of 0.5 "
            f"(got {p_in!r} -> {p_out!r})"
        )

    # a * |logit(p_in)| grows monotonically in a and must hit |logit(p_out)|.
    magnitude_in = abs(_logit(p_in))
    magnitude_out = abs(_logit(p_out))
    lo, hi = 0.0, 1.0
    while hi * magnitude_in < magnitude_out:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if abs(extremize(p_in, mid) - p_out) <= 1e-9:
            return mid
        if mid * magnitude_in < magnitude_out:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def pool(forecast_set: ForecastSet, method: str = "mean") -> float:
    """Aggregate a forecast set: arithmetic mean or geometric mean of odds."""
    if method not in POOL_METHODS:
        raise ValidationError(f"unknown pooling method '{method}'; choose from {POOL_METHODS}")
    raw = forecast_set.weights or (1.0,) * len(forecast_set.forecasts)
    if method == "mean":
        # normalize inside the rational arithmetic so identical forecasts pool
        # to exactly themselves
        num = sum(as_rational(w) * as_rational(p) for w, p in zip(raw, forecast_set.forecasts))
        den = sum(as_rational(w) for w in raw)
        return float(num / den)
    for p in forecast_set.forecasts:
        if p in (0.0, 1.0):
            raise ValidationError(
                "odds-geometric-mean is undefined for forecasts at exactly 0 or 1"
            )
    weights = forecast_set.normalized_weights()
    mean_logit = math.fsum(w * _logit(p) for w, p in zip(weights, forecast_set.forecasts))
    return _expit(mean_logit)


def martingale_check(prior: float, partition: EvidencePartition) -> float:
    """Signed residual of expectation conservation: E[posterior] - prior.

    Zero means the update scheme cannot shift your belief merely by being run;
    a nonzero residual exposes an incoherent set of anticipated updates.
    """
    check_probability(prior, "prior")
    acc = -as_rational(prior)
    for q, post in partition.outcomes:
        acc += as_rational(q) * as_rational(post)
    return float(acc)


def partition_prior(favorable: int, total: int) -> float:
    """Neutral starting guess: the fraction of enumerated scenarios that are favorable."""
    if total < 1:
        raise ValidationError(f"total must be >= 1, got {total!r}")
    if not 0 <= favorable <= total:
        raise ValidationError(f"favorable must lie in [0, {total}], got {favorable!r}")
    return favorable / total
