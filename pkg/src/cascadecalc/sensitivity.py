"""What-if transformations over cascades: factor removal, capped subset scaling,
one-at-a-time tornado sweeps, and inverse solvers for a target joint odds.

Every transform returns a fresh model; tornado and the inverse solvers agree
with evaluate_cascade because they re-evaluate through it rather than keeping
separate arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from .cascade import (
    CascadeModel,
    FactorGroup,
    FactorSource,
    apply_overrides,
    evaluate_cascade,
)
from .errors import InfeasibleError, NotFoundError, ValidationError
from .numerics import check_probability, exact_product

SOLVER_TOLERANCE = 1e-9


@dataclass(frozen=True)
class FactorSubset:
    """Which factors a transformation touches: all, one group, or explicit ids."""

    kind: str  # "all" | "group" | "ids"
    group: FactorGroup | None = None
    ids: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("all", "group", "ids"):
            raise ValidationError(f"unknown subset kind '{self.kind}'")
        if self.kind == "group":
            try:
                object.__setattr__(self, "group", FactorGroup(self.group))
            except ValueError:
                raise ValidationError(
                    f"unknown factor group '{self.group}'; choose from "
                    + ", ".join(g.value for g in FactorGroup)
                ) from None
        if self.kind == "ids":
            object.__setattr__(self, "ids", tuple(self.ids))

    @classmethod
    def all(cls) -> "FactorSubset":
        return cls(kind="all")

    @classmethod
    def by_group(cls, group: FactorGroup | str) -> "FactorSubset":
        return cls(kind="group", group=group)  # validated in __post_init__

    @classmethod
    def by_ids(cls, ids: Sequence[str]) -> "FactorSubset":
        return cls(kind="ids", ids=tuple(ids))

    def selected_ids(self, model: CascadeModel) -> list[str]:
        """Ids this subset picks from the model; unknown explicit ids are errors."""
        if self.kind == "all":
            return model.factor_ids()
        if self.kind == "group":
            return [f.id for f in model.factors if f.group == self.group]
        known = set(model.factor_ids())
        missing = [i for i in self.ids if i not in known]
        if missing:
            raise NotFoundError(
                f"model '{model.name}' has no factor " + ", ".join(f"'{m}'" for m in missing)
            )
        return [f.id for f in model.factors if f.id in set(self.ids)]


@dataclass(frozen=True)
class TornadoEntry:
    factor_id: str
    low_input: float
    high_input: float
    joint_low: float
    joint_high: float

    @property
    def width(self) -> float:
        return self.joint_high - self.joint_low


def remove_factor(model: CascadeModel, factor_id: str) -> CascadeModel:
    """Take a factor out of consideration by setting its probability to 1."""
    model.factor(factor_id)  # raises NotFoundError for unknown ids
    factors = tuple(
        replace(
            f,
            probability=1.0,
            source=FactorSource.MANUAL,
            source_ref="removed from consideration",
        )
        if f.id == factor_id
        else f
        for f in model.factors
    )
    return replace(model, factors=factors)


def scale_factors(
    model: CascadeModel, multiplier: float, subset: FactorSubset
) -> CascadeModel:
    """Multiply selected factor probabilities by `multiplier`, capped at 1.

    Not-applicable factors already contribute 1 and are left untouched.
    """
    if not multiplier > 0:
        raise ValidationError(f"multiplier must be positive, got {multiplier!r}")
    selected = set(subset.selected_ids(model))
    overrides = {}
    for f in model.factors:
        if f.id in selected and not f.is_not_applicable:
            overrides[f.id] = min(1.0, multiplier * float(f.probability))
    return apply_overrides(model, overrides)


def tornado(
    model: CascadeModel, ranges: Mapping[str, tuple[float, float]]
) -> list[TornadoEntry]:
    """Joint odds at each factor's low and high input, all else at base values.

    Entries come back sorted by descending induced range width (stable in
    factor order among ties).
    """
    base_ids = model.factor_ids()
    order = {fid: k for k, fid in enumerate(base_ids)}
    entries = []
    for fid, (low, high) in ranges.items():
        model.factor(fid)
        low = check_probability(low, f"low bound for '{fid}'")
        high = check_probability(high, f"high bound for '{fid}'")
        if low > high:
            raise ValidationError(f"inverted bounds for '{fid}': {low!r} > {high!r}")
        joint_low = evaluate_cascade(apply_overrides(model, {fid: low})).joint_odds
        joint_high = evaluate_cascade(apply_overrides(model, {fid: high})).joint_odds
        entries.append(TornadoEntry(fid, low, high, joint_low, joint_high))
    entries.sort(key=lambda e: (-e.width, order[e.factor_id]))
    return entries


def _max_achievable(model: CascadeModel, selected: set[str]) -> float:
    """Joint odds with every selected nonzero factor saturated at 1.

    A selected factor at exactly 0 stays 0 under any multiplier, so it caps the
    achievable odds at 0 like an unselected factor would.
    """
    remaining = []
    for f in model.factors:
        p = f.effective_probability
        if f.id in selected and p > 0.0:
            continue
        remaining.append(p)
    return exact_product(remaining) if remaining else 1.0


def solve_uniform_multiplier(
    model: CascadeModel, target: float, subset: FactorSubset
) -> float:
    """Uniform multiplier on the subset that hits the target joint odds.

    The objective m -> joint(scaled model) is piecewise-smooth, non-decreasing,
    and saturates once every selected factor caps at 1, so bisection between 1
    and 1/min(selected nonzero p) suffices. Raises InfeasibleError carrying the
    maximum achievable odds when the target exceeds saturation.
    """
    target = check_probability(target, "target joint odds")
    current = evaluate_cascade(model).joint_odds
    if target < current:
        raise ValidationError(
            f"target {target!r} is below the current joint odds {current!r}; "
            "uniform scaling only raises factors"
        )
    selected = set(subset.selected_ids(model))

    max_achievable = _max_achievable(model, selected)
    if target > max_achievable + SOLVER_TOLERANCE:
        raise InfeasibleError(
            f"target {target!r} exceeds the maximum achievable joint odds "
            f"{max_achievable!r} for this subset",
            max_achievable=max_achievable,
        )

    def joint_at(m: float) -> float:
        return evaluate_cascade(scale_factors(model, m, subset)).joint_odds

    if abs(current - target) <= SOLVER_TOLERANCE:
        return 1.0

    scalable = [
        f.effective_probability
        for f in model.factors
        if f.id in selected and not f.is_not_applicable and f.effective_probability > 0.0
    ]
    if not scalable:
        raise InfeasibleError(
            f"no scalable factor in subset; joint odds are fixed at {current!r}",
            max_achievable=max_achievable,
        )

    lo, hi = 1.0, 1.0 / min(scalable)
    if joint_at(hi) < target - SOLVER_TOLERANCE:
        raise InfeasibleError(
            f"target {target!r} exceeds the maximum achievable joint odds "
            f"{max_achievable!r} for this subset",
            max_achievable=max_achievable,
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        value = joint_at(mid)
        if abs(value - target) <= SOLVER_TOLERANCE:
            return mid
        if value < target:
            lo = mid
        else:
            hi = mid
    return hi


def required_value(model: CascadeModel, factor_id: str, target: float) -> float:
    """What one factor must be, all others fixed, to reach the target joint odds."""
    target = check_probability(target, "target joint odds")
    model.factor(factor_id)
    others = exact_product(
        f.effective_probability for f in model.factors if f.id != factor_id
    )
    if others == 0.0:
        if target == 0.0:
            return model.factor(factor_id).effective_probability
        raise InfeasibleError(
            f"another factor is 0, so no value of '{factor_id}' reaches {target!r}",
            max_achievable=0.0,
        )
    required = target / others
    if required > 1.0:
        raise InfeasibleError(
            f"reaching {target!r} would need '{factor_id}' at {required!r} > 1; "
            f"the maximum achievable with the other factors fixed is {others!r}",
            max_achievable=others,
        )
    return required
