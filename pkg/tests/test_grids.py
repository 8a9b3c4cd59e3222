import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cascadecalc import (
    LogBucketDistribution,
    MagnitudeBucket,
    QualifierRule,
    ValidationError,
    at_least_mass,
    build_joint_grid,
    linked_joint_expectation,
    scenario_expectation,
    uniform_distribution,
)
from cascadecalc.grids import grid_to_csv

WAFER_ODDS = [0.99, 0.99, 0.90, 0.50, 0.10, 0.05, 0.02]
POWER_ODDS = [0.99, 0.99, 0.95, 0.67, 0.33, 0.05, 0.005]


def decade_buckets(representatives, unit):
    """Point-per-decade buckets with open tails, like the reference tables."""
    reps = list(representatives)
    buckets = [
        MagnitudeBucket(
            label=f"<={reps[0]:.0e}", lower=reps[0], upper=reps[0], unit=unit, open_low=True
        )
    ]
    for prev, cur in zip(reps[:-1], reps[1:-1] if len(reps) > 2 else []):
        buckets.append(MagnitudeBucket(label=f"{cur:.0e}", lower=prev, upper=cur, unit=unit))
    if len(reps) > 1:
        buckets.append(
            MagnitudeBucket(
                label=f">={reps[-1]:.0e}",
                lower=reps[-1],
                upper=reps[-1],
                unit=unit,
                open_high=True,
            )
        )
    return buckets


@pytest.fixture()
def needs(tagi2043):
    return tagi2043.distributions["agi-compute-needs"]


@pytest.fixture()
def efficiency(tagi2043):
    return tagi2043.distributions["compute-efficiency"]


def test_bucket_representatives():
    low_tail = MagnitudeBucket(label="<=1e16", lower=1e16, upper=1e16, unit="FLOPS", open_low=True)
    closed = MagnitudeBucket(label="1e17", lower=1e16, upper=1e17, unit="FLOPS")
    high_tail = MagnitudeBucket(
        label=">=1e25", lower=1e25, upper=1e25, unit="FLOPS", open_high=True
    )
    assert low_tail.representative == 1e16
    assert closed.representative == 1e17
    assert high_tail.representative == 1e25


def test_bucket_validation():
    with pytest.raises(ValidationError):
        MagnitudeBucket(label="bad", lower=10.0, upper=1.0, unit="FLOPS")
    with pytest.raises(ValidationError):
        MagnitudeBucket(label="degenerate-middle", lower=5.0, upper=5.0, unit="FLOPS")
    with pytest.raises(ValidationError):
        MagnitudeBucket(label="nonpositive", lower=0.0, upper=1.0, unit="FLOPS")


def test_distribution_validation():
    buckets = decade_buckets([1e4, 1e5, 1e6], "wafers")
    with pytest.raises(ValidationError):
        LogBucketDistribution(tuple(buckets), (0.5, 0.4, 0.2))  # sums to 1.1
    with pytest.raises(ValidationError):
        LogBucketDistribution(tuple(buckets), (0.5, 0.5))  # length mismatch
    with pytest.raises(ValidationError):
        LogBucketDistribution(tuple(reversed(buckets)), (0.3, 0.3, 0.4))  # out of order


def test_uniform_distribution_examples(needs):
    assert uniform_distribution(needs.buckets).weights == (0.1,) * 10
    single = uniform_distribution(decade_buckets([1e4], "wafers"))
    assert single.weights == (1.0,)
    seven = uniform_distribution(decade_buckets([1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10], "wafers"))
    assert seven.weights[0] == pytest.approx(1 / 7, abs=1e-15)
    with pytest.raises(ValidationError):
        uniform_distribution([])


def test_at_least_mass_examples(efficiency):
    assert at_least_mass(efficiency, 1) == 0.98
    assert at_least_mass(efficiency, 2) == 0.48
    assert at_least_mass(efficiency, 0) == 1.0
    with pytest.raises(ValidationError):
        at_least_mass(efficiency, 5)


def test_reference_grid_strict_and_inclusive(needs, efficiency):
    strict = build_joint_grid(needs, efficiency, QualifierRule(25.0, strict=True))
    assert strict.qualifying_mass == pytest.approx(0.156, abs=1e-9)
    inclusive = build_joint_grid(needs, efficiency, QualifierRule(25.0, strict=False))
    assert inclusive.qualifying_mass == pytest.approx(0.256, abs=1e-9)


def test_reference_grid_cell_cost(needs, efficiency):
    grid = build_joint_grid(needs, efficiency, QualifierRule(25.0))
    # (1e16 FLOPS, 4e15 FLOPS/$-hr) -> $2.50/hr, shown as 3E+00 at one sig fig
    assert grid.cell_cost[0][1] == pytest.approx(2.50)
    assert "3E+00" in grid_to_csv(grid)


def test_zero_threshold_qualifies_nothing(needs, efficiency):
    grid = build_joint_grid(needs, efficiency, QualifierRule(0.0, strict=True))
    assert grid.qualifying_mass == 0.0


def test_grid_unit_mismatch(needs):
    with pytest.raises(ValidationError):
        build_joint_grid(needs, needs, QualifierRule(25.0))


def test_grid_mass_conservation(needs, efficiency):
    grid = build_joint_grid(needs, efficiency, QualifierRule(25.0))
    total = math.fsum(m for row in grid.cell_mass for m in row)
    assert total == pytest.approx(1.0, abs=1e-9)


def test_grid_brute_force_equivalence(needs, efficiency):
    """Independent oracle: enumerate all (row, col) outcomes with plain floats."""
    for threshold in (0.0, 1.0, 25.0, 300.0, 1e7):
        for strict in (True, False):
            grid = build_joint_grid(needs, efficiency, QualifierRule(threshold, strict))
            oracle = 0.0
            for i, rb in enumerate(needs.buckets):
                for j, cb in enumerate(efficiency.buckets):
                    cost = rb.representative / cb.representative
                    hits = cost < threshold if strict else cost <= threshold
                    if hits:
                        oracle += needs.weights[i] * efficiency.weights[j]
            assert grid.qualifying_mass == pytest.approx(oracle, abs=1e-12)


def test_threshold_monotonicity(needs, efficiency):
    masses = [
        build_joint_grid(needs, efficiency, QualifierRule(t)).qualifying_mass
        for t in (0.0, 0.01, 1.0, 25.0, 100.0, 1e4, 1e12)
    ]
    assert masses == sorted(masses)


def test_column_dominance(needs, efficiency):
    """Shifting column weight toward higher efficiency never hurts."""
    shifted = LogBucketDistribution(
        efficiency.buckets, (0.02, 0.40, 0.40, 0.06, 0.12)
    )
    base = build_joint_grid(needs, efficiency, QualifierRule(25.0)).qualifying_mass
    better = build_joint_grid(needs, shifted, QualifierRule(25.0)).qualifying_mass
    assert better >= base


def test_scenario_expectation_reference(tagi2043):
    wafer = tagi2043.distributions["wafer-need"]
    power = tagi2043.distributions["power-need"]
    assert scenario_expectation(wafer, WAFER_ODDS) == pytest.approx(0.5071, abs=1e-4)
    assert scenario_expectation(power, POWER_ODDS) == pytest.approx(0.5693, abs=1e-4)
    assert scenario_expectation(wafer, [1.0] * 7) == 1.0
    with pytest.raises(ValidationError):
        scenario_expectation(wafer, [0.5] * 6)


def test_linked_joint_reference(tagi2043):
    wafer = tagi2043.distributions["wafer-need"]
    linked = linked_joint_expectation(wafer, WAFER_ODDS, POWER_ODDS)
    # Exact mean of the published per-scenario products (0.98, 0.98, 0.855,
    # 0.335, 0.033, 0.0025, 0.0001): rounds to the published 46%.
    assert linked == pytest.approx(0.4551142857142857, abs=1e-12)
    assert linked_joint_expectation(wafer, WAFER_ODDS, [1.0] * 7) == pytest.approx(
        scenario_expectation(wafer, WAFER_ODDS), abs=1e-15
    )
    assert linked_joint_expectation(wafer, [1.0] * 7, [1.0] * 7) == 1.0


def test_linked_joint_bounded_by_single_tables(tagi2043):
    wafer = tagi2043.distributions["wafer-need"]
    linked = linked_joint_expectation(wafer, WAFER_ODDS, POWER_ODDS)
    assert linked <= min(
        scenario_expectation(wafer, WAFER_ODDS), scenario_expectation(wafer, POWER_ODDS)
    )


@given(
    st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=7, max_size=7),
    st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=7, max_size=7),
)
def test_linked_joint_bound_property(a, b):
    buckets = decade_buckets([1e4, 1e5, 1e6, 1e7, 1e8, 1e9, 1e10], "wafers")
    dist = uniform_distribution(buckets)
    linked = linked_joint_expectation(dist, a, b)
    assert linked <= min(scenario_expectation(dist, a), scenario_expectation(dist, b)) + 1e-12
