"""Order-of-magnitude bucket distributions and joint qualification grids.

A LogBucketDistribution spreads probability mass over ordered order-of-magnitude
buckets of some positive quantity (compute needed, hardware efficiency, wafers,
GW-scale power plants), possibly with open tails. A JointGrid crosses a compute
-need distribution with a cost-efficiency distribution, prices every cell in
dollars per hour, and totals the mass of cells cheap enough to qualify.
"""

from __future__ import annotations

import io
import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ValidationError
from .numerics import (
    as_rational,
    check_positive,
    check_probability,
    exact_dot,
    exact_sum,
    format_sig1,
)

ROW_UNIT = "FLOPS"
COL_UNIT = "FLOPS/$-hr"

MASS_TOLERANCE = 1e-9


@dataclass(frozen=True)
class MagnitudeBucket:
    """One order-of-magnitude interval (lower, upper], possibly an open tail.

    The representative value used for arithmetic is the upper bound, except for
    a high-open tail where only the lower bound is finite. Tails may be
    degenerate single points (lower == upper).
    """

    label: str
    lower: float
    upper: float
    unit: str
    open_low: bool = False
    open_high: bool = False

    def __post_init__(self):
        check_positive(self.lower, f"bucket '{self.label}' lower bound")
        check_positive(self.upper, f"bucket '{self.label}' upper bound")
        if self.lower > self.upper:
            raise ValidationError(
                f"bucket '{self.label}': lower bound {self.lower!r} exceeds upper {self.upper!r}"
            )
        if self.lower == self.upper and not (self.open_low or self.open_high):
            raise ValidationError(
                f"bucket '{self.label}': only open tails may be degenerate single points"
            )

    @property
    def representative(self) -> float:
        return self.lower if self.open_high else self.upper


@dataclass(frozen=True)
class LogBucketDistribution:
    """Probability weights over ordered, non-overlapping magnitude buckets."""

    buckets: tuple[MagnitudeBucket, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "buckets", tuple(self.buckets))
        object.__setattr__(self, "weights", tuple(self.weights))
        if not self.buckets:
            raise ValidationError("distribution needs at least one bucket")
        if len(self.buckets) != len(self.weights):
            raise ValidationError(
                f"{len(self.buckets)} buckets but {len(self.weights)} weights"
            )
        for i, w in enumerate(self.weights):
            check_probability(w, f"weight[{i}]")
        total = exact_sum(self.weights)
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise ValidationError(f"weights sum to {total!r}, expected 1 within {MASS_TOLERANCE}")
        units = {b.unit for b in self.buckets}
        if len(units) > 1:
            raise ValidationError(f"buckets mix units: {sorted(units)}")
        reps = [b.representative for b in self.buckets]
        if any(a > b for a, b in zip(reps, reps[1:])):
            raise ValidationError("buckets must be ordered ascending by representative value")
        for a, b in zip(self.buckets, self.buckets[1:]):
            if b.lower < a.upper:
                raise ValidationError(
                    f"buckets '{a.label}' and '{b.label}' overlap"
                )

    @property
    def unit(self) -> str:
        return self.buckets[0].unit

    def __len__(self) -> int:
        return len(self.buckets)


@dataclass(frozen=True)
class QualifierRule:
    """A cell qualifies when its cost is below the dollars-per-hour threshold.

    strict=True (the default) requires cost strictly below the threshold; the
    inclusive alternative admits boundary cells and is kept selectable because
    both readings of "below" are defensible.
    """

    threshold: float
    strict: bool = True

    def __post_init__(self):
        if self.threshold < 0:
            raise ValidationError(f"threshold must be >= 0, got {self.threshold!r}")

    def qualifies(self, cost: float) -> bool:
        return cost < self.threshold if self.strict else cost <= self.threshold


@dataclass(frozen=True)
class JointGrid:
    row_dist: LogBucketDistribution
    col_dist: LogBucketDistribution
    rule: QualifierRule
    cell_cost: tuple[tuple[float, ...], ...]
    cell_mass: tuple[tuple[float, ...], ...]
    cell_qualifies: tuple[tuple[bool, ...], ...]
    qualifying_mass: float


def uniform_distribution(buckets: Sequence[MagnitudeBucket]) -> LogBucketDistribution:
    """Flat distribution: every bucket gets weight 1/n."""
    if not buckets:
        raise ValidationError("cannot build a distribution over zero buckets")
    n = len(buckets)
    return LogBucketDistribution(tuple(buckets), tuple(1.0 / n for _ in range(n)))


def at_least_mass(dist: LogBucketDistribution, bucket_index: int) -> float:
    """Total mass at `bucket_index` and above (exact decimal tail sum)."""
    if not 0 <= bucket_index < len(dist):
        raise ValidationError(
            f"bucket index {bucket_index} out of range for {len(dist)} buckets"
        )
    return exact_sum(dist.weights[bucket_index:])


def build_joint_grid(
    rows: LogBucketDistribution,
    cols: LogBucketDistribution,
    rule: QualifierRule,
) -> JointGrid:
    """Cross compute needs (FLOPS) with efficiency (FLOPS/$-hr) into a cost grid.

    cell cost = row representative / column representative, in dollars per hour;
    cell mass = row weight x column weight; the qualifying mass totals the cells
    the rule admits.
    """
    if rows.unit != ROW_UNIT:
        raise ValidationError(f"row distribution unit must be '{ROW_UNIT}', got '{rows.unit}'")
    if cols.unit != COL_UNIT:
        raise ValidationError(f"column distribution unit must be '{COL_UNIT}', got '{cols.unit}'")

    costs, masses, quals = [], [], []
    qualifying = Fraction(0)
    for i, rb in enumerate(rows.buckets):
        row_costs, row_masses, row_quals = [], [], []
        wi = as_rational(rows.weights[i])
        for j, cb in enumerate(cols.buckets):
            cost = rb.representative / cb.representative
            mass = wi * as_rational(cols.weights[j])
            ok = rule.qualifies(cost)
            if ok:
                qualifying += mass
            row_costs.append(cost)
            row_masses.append(float(mass))
            row_quals.append(ok)
        costs.append(tuple(row_costs))
        masses.append(tuple(row_masses))
        quals.append(tuple(row_quals))

    return JointGrid(
        row_dist=rows,
        col_dist=cols,
        rule=rule,
        cell_cost=tuple(costs),
        cell_mass=tuple(masses),
        cell_qualifies=tuple(quals),
        qualifying_mass=float(qualifying),
    )


def scenario_expectation(
    needs: LogBucketDistribution, achievement: Sequence[float]
) -> float:
    """Probability-weighted mean of per-scenario achievement odds."""
    if len(achievement) != len(needs):
        raise ValidationError(
            f"{len(needs)} scenarios but {len(achievement)} achievement probabilities"
        )
    for i, a in enumerate(achievement):
        check_probability(a, f"achievement[{i}]")
    return exact_dot(needs.weights, achievement)


def linked_joint_expectation(
    needs: LogBucketDistribution,
    achievement_a: Sequence[float],
    achievement_b: Sequence[float],
) -> float:
    """Expectation of jointly-linked achievements: scenario i must clear both bars.

    Row i of one table corresponds to row i of the other (the two requirements
    scale together), so the joint per-scenario odds are a_i * b_i.
    """
    if len(achievement_a) != len(needs) or len(achievement_b) != len(needs):
        raise ValidationError(
            f"{len(needs)} scenarios but {len(achievement_a)} and {len(achievement_b)} "
            "achievement probabilities"
        )
    acc = Fraction(0)
    for w, a, b in zip(needs.weights, achievement_a, achievement_b):
        check_probability(a, "achievement")
        check_probability(b, "achievement")
        acc += as_rational(w) * as_rational(a) * as_rational(b)
    return float(acc)


def grid_to_csv(grid: JointGrid) -> str:
    """Comma-separated rendition of a grid: per-row label, cost and flag per cell.

    Costs are printed at one significant figure like the published layout; the
    trailing line carries the qualifying mass at full precision.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    header = ["row"]
    for cb in grid.col_dist.buckets:
        header += [f"cost@{cb.label}", f"qualifies@{cb.label}"]
    writer.writerow(header)
    for i, rb in enumerate(grid.row_dist.buckets):
        row: list[str] = [rb.label]
        for j in range(len(grid.col_dist)):
            row += [format_sig1(grid.cell_cost[i][j]), str(grid.cell_qualifies[i][j]).lower()]
        writer.writerow(row)
    writer.writerow(["qualifying_mass", repr(grid.qualifying_mass)])
    return out.getvalue()
