"""Conjunctive cascades of conditional probabilities.

A cascade is an ordered list of factors, each holding the probability of one
necessary event conditional on all prior events having happened. The joint
odds of the final outcome are the product of the factor probabilities. A
factor may instead be marked not-applicable, in which case it contributes
exactly 1 to the product (mirroring an "N/A" row in a longer-horizon variant
of the same model).

Factor order is metadata: it records the conditioning order and drives the
running-product column of reports, but the joint odds are order-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Mapping, Union

from .errors import NotFoundError, ValidationError
from .numerics import as_rational, check_probability


class _NotApplicableType:
    """Singleton marker for factors that contribute 1.0 to the product."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NOT_APPLICABLE"


NOT_APPLICABLE = _NotApplicableType()

FactorProbability = Union[float, _NotApplicableType]


class FactorGroup(str, Enum):
    SOFTWARE = "software"
    HARDWARE = "hardware"
    SOCIOPOLITICAL = "sociopolitical"


class FactorSource(str, Enum):
    MANUAL = "manual"
    GRID_DERIVED = "grid-derived"
    HAZARD_DERIVED = "hazard-derived"
    ECON_DERIVED = "econ-derived"


@dataclass(frozen=True)
class Factor:
    """One conditional step of a cascade."""

    id: str
    label: str
    group: FactorGroup
    probability: FactorProbability
    rationale: str = ""
    source: FactorSource = FactorSource.MANUAL
    source_ref: str | None = None

    def __post_init__(self):
        if not self.id or not str(self.id).strip():
            raise ValidationError("factor id must be non-empty")
        try:
            object.__setattr__(self, "group", FactorGroup(self.group))
            object.__setattr__(self, "source", FactorSource(self.source))
        except ValueError as exc:
            raise ValidationError(f"factor '{self.id}': {exc}") from None
        if not self.is_not_applicable:
            object.__setattr__(
                self,
                "probability",
                check_probability(self.probability, f"factor '{self.id}' probability"),
            )

    @property
    def is_not_applicable(self) -> bool:
        return isinstance(self.probability, _NotApplicableType)

    @property
    def effective_probability(self) -> float:
        """The value this factor contributes to the product (1.0 for N/A)."""
        return 1.0 if self.is_not_applicable else float(self.probability)


@dataclass(frozen=True)
class CascadeModel:
    """Named, ordered cascade. Immutable; transformations return new models."""

    name: str
    horizon_year: int
    factors: tuple[Factor, ...]
    notes: str = ""

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def factor(self, factor_id: str) -> Factor:
        for f in self.factors:
            if f.id == factor_id:
                return f
        raise NotFoundError(f"model '{self.name}' has no factor '{factor_id}'")

    def factor_ids(self) -> list[str]:
        return [f.id for f in self.factors]


@dataclass(frozen=True)
class FactorContribution:
    factor_id: str
    probability_used: float
    cumulative: float


@dataclass(frozen=True)
class EvaluationReport:
    model_name: str
    joint_odds: float
    per_factor: tuple[FactorContribution, ...] = field(default_factory=tuple)


def validate_model(model: CascadeModel) -> list[str]:
    """Collect invariant violations as data; empty list means the model is valid.

    Factor-level range violations are caught at Factor construction, so here we
    check the model-level rules: at least one factor, unique non-empty ids.
    """
    violations: list[str] = []
    if not model.factors:
        violations.append("cascade is empty: a model needs at least one factor")
    seen: set[str] = set()
    for f in model.factors:
        if f.id in seen:
            violations.append(f"duplicate factor id '{f.id}'")
        seen.add(f.id)
    return violations


def evaluate_cascade(model: CascadeModel) -> EvaluationReport:
    """Joint odds plus the running cumulative product in model order.

    The product is accumulated in exact rational arithmetic and rounded to
    float once per reported value, so the joint odds are bit-identical under
    factor permutation and the final cumulative equals the joint odds exactly.
    """
    violations = validate_model(model)
    if violations:
        raise ValidationError(f"invalid model '{model.name}': " + "; ".join(violations))

    contributions = []
    acc = Fraction(1)
    for f in model.factors:
        p = f.effective_probability
        acc *= as_rational(p)
        contributions.append(FactorContribution(f.id, p, float(acc)))
    return EvaluationReport(
        model_name=model.name,
        joint_odds=contributions[-1].cumulative,
        per_factor=tuple(contributions),
    )


def apply_overrides(
    model: CascadeModel,
    overrides: Mapping[str, FactorProbability],
) -> CascadeModel:
    """New model with the given factor probabilities replaced.

    Overridden factors are marked source=manual. Unknown ids are rejected up
    front so a typo cannot silently leave the model unchanged.
    """
    known = set(model.factor_ids())
    unknown = [fid for fid in overrides if fid not in known]
    if unknown:
        raise NotFoundError(
            f"model '{model.name}' has no factor " + ", ".join(f"'{u}'" for u in sorted(unknown))
        )

    new_factors = []
    for f in model.factors:
        if f.id in overrides:
            value = overrides[f.id]
            if not isinstance(value, _NotApplicableType):
                value = check_probability(value, f"override for '{f.id}'")
            f = replace(f, probability=value, source=FactorSource.MANUAL, source_ref=None)
        new_factors.append(f)
    return replace(model, factors=tuple(new_factors))
