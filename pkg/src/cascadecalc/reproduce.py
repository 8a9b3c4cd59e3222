"""Golden-number reproduction of the published reference analysis.

Every published figure the bundled models encode is recomputed through the
library and compared against the value it was reported as, at an explicit
tolerance or display-rounding rule. A handful of published cells disagree with
their own unrounded arithmetic; those are carried as non-failing notes with
both numbers shown, rather than silently adjusted to match.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Callable

from . import aggregate as agg
from . import econ, hazard
from .cascade import apply_overrides, evaluate_cascade
from .errors import ValidationError
from .grids import (
    QualifierRule,
    at_least_mass,
    build_joint_grid,
    linked_joint_expectation,
    scenario_expectation,
)
from .numerics import format_percent, format_sig1
from .sensitivity import FactorSubset, scale_factors
from .store import ModelStore

MODULES = ("cascade", "grid", "econ", "hazard", "aggregate", "sensitivity")


@dataclass(frozen=True)
class Check:
    id: str
    module: str
    description: str
    compute: Callable[["_Context"], float]
    published: str
    mode: str = "abs"  # abs | rel | sig1 | pct0 | note
    expected: float | str | None = None
    tolerance: float = 0.0
    note: str = ""


@dataclass(frozen=True)
class CheckResult:
    check: Check
    computed: float
    status: str  # "ok" | "FAIL" | "note"
    detail: str = ""


@dataclass
class _Context:
    store: ModelStore
    docs: dict = field(default_factory=dict)

    def doc(self, model_id: str):
        if model_id not in self.docs:
            self.docs[model_id] = self.store.get_model(model_id)
        return self.docs[model_id]

    def dist(self, name: str):
        return self.doc("tagi-2043").distributions[name]

    def achievement(self, annotation: str) -> list[float]:
        raw = self.doc("tagi-2043").annotations[annotation]
        return [float(x) for x in raw.split(",")]

    def spec(self, name: str):
        return self.doc("tagi-2043").device_specs[name]


def _evaluate(check: Check, ctx: _Context) -> CheckResult:
    computed = check.compute(ctx)
    if check.mode == "note":
        return CheckResult(check, computed, "note", check.note)
    if check.mode == "abs":
        ok = abs(computed - float(check.expected)) <= check.tolerance
        detail = f"expected {check.expected} +/- {check.tolerance:g}"
    elif check.mode == "rel":
        ok = abs(computed / float(check.expected) - 1.0) <= check.tolerance
        detail = f"expected {check.expected} +/- {check.tolerance:.2%} rel"
    elif check.mode == "sig1":
        ok = format_sig1(computed) == check.expected
        detail = f"one-sig-fig {format_sig1(computed)} vs {check.expected}"
    elif check.mode == "pct0":
        ok = format_percent(computed, 0) == check.expected
        detail = f"rounds to {format_percent(computed, 0)} vs {check.expected}"
    else:
        raise ValidationError(f"unknown check mode '{check.mode}'")
    return CheckResult(check, computed, "ok" if ok else "FAIL", detail)


def _wafer_ref(ctx: _Context) -> float:
    return scenario_expectation(ctx.dist("wafer-need"), ctx.achievement("wafer-achievement-odds"))


def _power_ref(ctx: _Context) -> float:
    return scenario_expectation(ctx.dist("power-need"), ctx.achievement("power-achievement-odds"))


def _linked_ref(ctx: _Context) -> float:
    return linked_joint_expectation(
        ctx.dist("wafer-need"),
        ctx.achievement("wafer-achievement-odds"),
        ctx.achievement("power-achievement-odds"),
    )


def _grid_mass(ctx: _Context, strict: bool) -> float:
    return build_joint_grid(
        ctx.dist("agi-compute-needs"),
        ctx.dist("compute-efficiency"),
        QualifierRule(25.0, strict=strict),
    ).qualifying_mass


def _training_bill(ctx: _Context, spec_name: str, attr: str) -> float:
    spec = ctx.spec(spec_name)
    devices = econ.devices_for_training(3e30, spec.useful_flops, 1.0)
    return getattr(econ.hardware_bill(devices, spec), attr)


def _solved_exponent(ctx: _Context, p_out: float) -> float:
    a = agg.solve_extremizing_exponent(0.30, p_out)
    if abs(agg.extremize(0.30, a) - p_out) > 1e-9:
        raise ValidationError("extremizing solver failed forward verification")
    return a


CHECKS: list[Check] = [
    # -- cascade ---------------------------------------------------------------
    Check(
        "joint-2043", "cascade", "joint odds of the 2043 reference cascade",
        lambda ctx: ctx.store.evaluate_model("tagi-2043").joint_odds,
        published="0.4%", mode="abs", expected=0.0039962, tolerance=1e-7,
    ),
    Check(
        "joint-2100", "cascade", "joint odds of the 2100 variant (N/A row contributes 1)",
        lambda ctx: ctx.store.evaluate_model("tagi-2100").joint_odds,
        published="41%", mode="abs", expected=0.40693, tolerance=1e-5,
    ),
    # -- grid ------------------------------------------------------------------
    Check(
        "grid-16pct", "grid", "qualifying mass of the needs x efficiency grid, strict $25/hr",
        lambda ctx: _grid_mass(ctx, strict=True),
        published="16%", mode="abs", expected=0.156, tolerance=1e-9,
    ),
    Check(
        "grid-inclusive", "grid", "same grid under the inclusive boundary rule (alternative)",
        lambda ctx: _grid_mass(ctx, strict=False),
        published="(not published; alternative rule)", mode="abs", expected=0.256, tolerance=1e-9,
        note="inclusive-at-boundary variant kept selectable",
    ),
    Check(
        "efficiency-at-least-10x", "grid", "mass of >=10x hardware efficiency outcomes",
        lambda ctx: at_least_mass(ctx.dist("compute-efficiency"), 1),
        published="98%", mode="abs", expected=0.98, tolerance=0.0,
    ),
    Check(
        "efficiency-at-least-100x", "grid", "mass of >=100x hardware efficiency outcomes",
        lambda ctx: at_least_mass(ctx.dist("compute-efficiency"), 2),
        published="48%", mode="abs", expected=0.48, tolerance=0.0,
    ),
    Check(
        "wafer-mean", "grid", "expected odds of achieving the wafer build-out",
        _wafer_ref,
        published="51%", mode="abs", expected=0.5071, tolerance=1e-4,
    ),
    Check(
        "power-mean", "grid", "expected odds of achieving the power build-out",
        _power_ref,
        published="57%", mode="abs", expected=0.5693, tolerance=1e-4,
        note="the sub-1% tail scenario is pinned at 0.005",
    ),
    Check(
        "linked-joint", "grid", "linked wafer x power joint expectation",
        _linked_ref,
        published="46%", mode="abs", expected=0.4551142857142857, tolerance=1e-4,
        note="exact mean of the per-scenario products; rounds to the published 46%",
    ),
    # -- econ --------------------------------------------------------------------
    Check(
        "efficiency-2.50", "econ", "FLOPS/$-hr of a 1e15 FLOPS device at $2.50/hr",
        lambda ctx: econ.flops_per_dollar_hour(1e15, 2.50),
        published="4E+14", mode="rel", expected=4e14, tolerance=0.01,
    ),
    Check(
        "ops-per-dollar-4.76", "econ", "operations per dollar at the $4.76/hr cloud price",
        lambda ctx: econ.ops_per_dollar(1e15, 4.76),
        published="8e17", mode="rel", expected=7.563025210084035e17, tolerance=0.01,
        note="published value rounds 7.56e17 up to 8e17",
    ),
    Check(
        "inference-250k", "econ", "$/hr to run 1e20 FLOPS at 4e14 FLOPS/$-hr",
        lambda ctx: econ.inference_cost_per_hour(1e20, 4e14),
        published="$250,000/hr", mode="rel", expected=250000.0, tolerance=0.01,
    ),
    Check(
        "inference-2.5m", "econ", "$/hr to run 1e21 FLOPS at 4e14 FLOPS/$-hr",
        lambda ctx: econ.inference_cost_per_hour(1e21, 4e14),
        published="$2.5 million/hr", mode="rel", expected=2500000.0, tolerance=0.01,
    ),
    Check(
        "training-700b", "econ", "training cost of 1e30 ops at 1.44e18 ops/$",
        lambda ctx: econ.training_cost(1e30, 1.44e18),
        published="$700 billion", mode="rel", expected=6.944444444444444e11, tolerance=0.01,
    ),
    Check(
        "training-70q", "econ", "training cost of 1e35 ops at 1.44e18 ops/$",
        lambda ctx: econ.training_cost(1e35, 1.44e18),
        published="$70 quadrillion", mode="rel", expected=6.944444444444444e16, tolerance=0.01,
    ),
    Check(
        "training-10t", "econ", "training cost of 1e30 ops at the 1e17 ops/$ wafer-scale rate",
        lambda ctx: econ.training_cost(1e30, 1e17),
        published="$10 trillion", mode="rel", expected=1e13, tolerance=0.01,
    ),
    Check(
        "fleet-250m", "econ", "devices for 1e12 labor hours/yr at 50% utilization",
        lambda ctx: econ.concurrent_devices(1e12, 0.5),
        published="~250 million", mode="rel", expected=2.2815423226100844e8, tolerance=0.01,
    ),
    Check(
        "h100-training-devices", "econ", "devices to train 3e30 ops in a year on 1e15 FLOPS",
        lambda ctx: econ.devices_for_training(3e30, 1e15, 1.0),
        published="1E+08", mode="sig1", expected="1E+08",
    ),
    Check(
        "h100-training-wafers", "econ", "wafers for that fleet at 50 devices/wafer",
        lambda ctx: _training_bill(ctx, "H100", "wafers"),
        published="2E+06", mode="sig1", expected="2E+06",
    ),
    Check(
        "h100-training-gw", "econ", "GW-scale plants for that fleet at 2 kW/device",
        lambda ctx: _training_bill(ctx, "H100", "gw_plants"),
        published="2E+02", mode="sig1", expected="2E+02",
    ),
    Check(
        "x100-training-devices", "econ", "same training bill on 100x-efficient hardware",
        lambda ctx: _training_bill(ctx, "X100", "devices"),
        published="1E+06", mode="sig1", expected="1E+06",
    ),
    Check(
        "x100-training-wafers", "econ", "wafers for the 100x-efficient fleet",
        lambda ctx: _training_bill(ctx, "X100", "wafers"),
        published="2E+04", mode="sig1", expected="2E+04",
    ),
    Check(
        "x100-training-gw", "econ", "GW-scale plants for the 100x-efficient fleet",
        lambda ctx: _training_bill(ctx, "X100", "gw_plants"),
        published="2E+00", mode="sig1", expected="2E+00",
    ),
    Check(
        "cagr-1m", "econ", "15-yr growth to reach 200k wafers/yr from 20k",
        lambda ctx: econ.implied_cagr(2e5, 2e4, 15),
        published="17%", mode="pct0", expected="17%",
    ),
    Check(
        "cagr-10m", "econ", "15-yr growth to reach 2M wafers/yr from 20k",
        lambda ctx: econ.implied_cagr(2e6, 2e4, 15),
        published="36%", mode="pct0", expected="36%",
    ),
    Check(
        "cagr-100m", "econ", "15-yr growth to reach 20M wafers/yr from 20k",
        lambda ctx: econ.implied_cagr(2e7, 2e4, 15),
        published="58%", mode="pct0", expected="58%",
    ),
    Check(
        "cagr-1b", "econ", "15-yr growth to reach 200M wafers/yr from 20k",
        lambda ctx: econ.implied_cagr(2e8, 2e4, 15),
        published="85%", mode="pct0", expected="85%",
    ),
    Check(
        "euv-throughput", "econ", "wafers per EUV tool-year (160/hr, 20 steps, 84% uptime)",
        lambda ctx: econ.euv_wafer_throughput(160, 20, 0.84, econ.HOURS_PER_YEAR),
        published="~60k", mode="rel", expected=58907.52, tolerance=0.01,
    ),
    Check(
        "robot-amortization", "econ", "$/hr for a $200k robot body over 20k hours",
        lambda ctx: econ.robot_amortized_cost(200000, 20000),
        published="$10/hr", mode="rel", expected=10.0, tolerance=0.01,
    ),
    Check(
        "robot-fleet", "econ", "robots/yr for 8e11 labor hours at 20k-hour lifetimes",
        lambda ctx: econ.robots_per_year(8e11, 2e4),
        published="40 million/yr", mode="rel", expected=4e7, tolerance=0.01,
    ),
    Check(
        "datacenter-growth", "econ", "$16B at 50%/yr compounded 19 years",
        lambda ctx: econ.project_growth(16e9, 0.50, 19),
        published="~$36T/yr", mode="rel", expected=3.546940512084961e13, tolerance=0.01,
        note="formula gives $35.5T; the published headline rounds to $36T",
    ),
    # -- econ: published cells that disagree with their own unrounded chain ------
    Check(
        "note-inference-flops", "econ", "continuous FLOPS for the 1e16-FLOPS inference fleet",
        lambda ctx: econ.concurrent_devices(1e12, 0.5) * 1e16,
        published="3E+24", mode="note",
        note="unrounded chain gives 2.3e24 -> '2E+24'; published cell says 3E+24",
    ),
    Check(
        "note-upper-training-devices", "econ", "devices to train 3e35 ops in a year on 1e15 FLOPS",
        lambda ctx: econ.devices_for_training(3e35, 1e15, 1.0),
        published="5E+12", mode="note",
        note="unrounded chain gives 9.5e12 -> '1E+13'; published cell says 5E+12",
    ),
    Check(
        "note-chip-design-15yr", "econ", "15 years of 2.1x-per-3-years hardware progress",
        lambda ctx: econ.project_growth(1.0, 2.1 ** (1 / 3) - 1.0, 15),
        published="~38x", mode="note",
        note="exact compounding gives 40.8x; published as ~38x",
    ),
    Check(
        "note-design-gain", "econ", "15 years of 50%-per-3-years chip-design gains",
        lambda ctx: econ.project_growth(1.0, 1.5 ** (1 / 3) - 1.0, 15),
        published="6.5x", mode="note",
        note="exact compounding gives 7.59x; published as 6.5x (elsewhere ~7x)",
    ),
    Check(
        "note-euv-fleet", "econ", "yearly wafers from 75 EUV tools at the tool-year rate",
        lambda ctx: 75 * econ.euv_wafer_throughput(160, 20, 0.84, econ.HOURS_PER_YEAR),
        published="~2M", mode="note",
        note="75 tools x 58.9k = 4.4M wafers/yr; published estimate says ~2M",
    ),
    # -- hazard --------------------------------------------------------------------
    Check(
        "century-event-20yr", "hazard", "cumulative risk of a 1%/yr event over 20 years",
        lambda ctx: hazard.cumulative_from_annual(0.01, 20),
        published="18.2%", mode="abs", expected=0.182, tolerance=5e-4,
    ),
    Check(
        "five-century-events", "hazard", "any of five independent once-a-century events in 20 years",
        lambda ctx: hazard.any_of([hazard.cumulative_from_annual(0.01, 20)] * 5),
        published="~63%", mode="abs", expected=0.634, tolerance=5e-4,
    ),
    Check(
        "taiwan-10yr", "hazard", "5-yr 14% conflict risk rescaled to 10 years",
        lambda ctx: hazard.rescale(hazard.HorizonRisk(0.14, 5), 10).probability,
        published="26%", mode="abs", expected=0.260, tolerance=5e-4,
    ),
    Check(
        "taiwan-15yr", "hazard", "5-yr 14% conflict risk rescaled to 15 years",
        lambda ctx: hazard.rescale(hazard.HorizonRisk(0.14, 5), 15).probability,
        published="36%", mode="abs", expected=0.364, tolerance=5e-4,
    ),
    Check(
        "pandemic-92to20", "hazard", "10% risk over 92 years rescaled to 20 years",
        lambda ctx: hazard.rescale(hazard.HorizonRisk(0.10, 92), 20).probability,
        published="~2.3%", mode="abs", expected=0.0227, tolerance=5e-4,
    ),
    Check(
        "extinction-100to20", "hazard", "3% risk over 100 years rescaled to 20 years",
        lambda ctx: hazard.rescale(hazard.HorizonRisk(0.03, 100), 20).probability,
        published="~0.6%", mode="abs", expected=0.00607, tolerance=5e-4,
    ),
    Check(
        "annual-from-92yr", "hazard", "annual rate consistent with 10% over 92 years",
        lambda ctx: hazard.annual_from_cumulative(0.10, 92),
        published="~0.1%/yr", mode="abs", expected=0.001145, tolerance=5e-4,
    ),
    Check(
        "war-survival", "hazard", "survival of a 10% war risk with 70% conditional severity",
        lambda ctx: 1.0 - hazard.derail_probability(
            hazard.DerailmentEvent("war", hazard.HorizonRisk(0.10, 20), 0.70)
        ),
        published="93%", mode="abs", expected=0.93, tolerance=5e-4,
    ),
    Check(
        "war-conditional-survival", "hazard", "survival of a 40% war risk with 75% severity",
        lambda ctx: 1.0 - hazard.derail_probability(
            hazard.DerailmentEvent("war", hazard.HorizonRisk(0.40, 20), 0.75)
        ),
        published="70%", mode="abs", expected=0.70, tolerance=5e-4,
    ),
    Check(
        "escalation-derail", "hazard", "2% escalation risk with 25% conditional severity",
        lambda ctx: hazard.derail_probability(
            hazard.DerailmentEvent("escalation", hazard.HorizonRisk(0.02, 20), 0.25)
        ),
        published="0.5%", mode="abs", expected=0.005, tolerance=5e-4,
    ),
    Check(
        "pandemic-combined", "hazard", "joint survival of two independent 95% survival rows",
        lambda ctx: hazard.combined_survival(
            [
                hazard.DerailmentEvent("natural", hazard.HorizonRisk(0.05, 20), 1.0),
                hazard.DerailmentEvent("engineered", hazard.HorizonRisk(0.05, 20), 1.0),
            ]
        ),
        published="90%", mode="abs", expected=0.9025, tolerance=5e-4,
    ),
    # -- aggregate --------------------------------------------------------------------
    Check(
        "extremize-exponent-15", "aggregate", "exponent mapping a 30% pool down to 15%",
        lambda ctx: _solved_exponent(ctx, 0.15),
        published="30% -> 15%", mode="abs", expected=2.047215196076876, tolerance=1e-3,
        note="forward-verified: extremize(0.30, a) = 0.15 within 1e-9",
    ),
    Check(
        "extremize-exponent-10", "aggregate", "exponent mapping a 30% pool down to 10%",
        lambda ctx: _solved_exponent(ctx, 0.10),
        published="30% -> 10%", mode="abs", expected=2.5932138862384444, tolerance=1e-3,
        note="forward-verified: extremize(0.30, a) = 0.10 within 1e-9",
    ),
    Check(
        "oracle-martingale", "aggregate", "residual of the perfect-oracle update for a 20% prior",
        lambda ctx: agg.martingale_check(
            0.20, agg.EvidencePartition(((0.80, 0.0), (0.20, 1.0)))
        ),
        published="0 (belief conserved)", mode="abs", expected=0.0, tolerance=0.0,
    ),
    Check(
        "partition-2-22", "aggregate", "neutral prior from 2 favorable of 22 scenarios",
        lambda ctx: agg.partition_prior(2, 22),
        published="9%", mode="abs", expected=0.0909, tolerance=5e-4,
    ),
    Check(
        "partition-1-20", "aggregate", "neutral prior from 1 favorable of 20 outcomes",
        lambda ctx: agg.partition_prior(1, 20),
        published="5%", mode="abs", expected=0.05, tolerance=0.0,
    ),
    Check(
        "partition-20-22", "aggregate", "the inverted 20-of-22 listing",
        lambda ctx: agg.partition_prior(20, 22),
        published="91%", mode="abs", expected=0.909, tolerance=5e-4,
    ),
    Check(
        "clone-advisors", "aggregate", "pooling ten identical 70% forecasts",
        lambda ctx: agg.pool(agg.ForecastSet((0.70,) * 10), "odds-geometric-mean"),
        published="70%", mode="abs", expected=0.70, tolerance=1e-12,
    ),
    # -- sensitivity ---------------------------------------------------------------
    Check(
        "strip-to-hardware", "sensitivity", "2043 joint with software and sociopolitical rows removed",
        lambda ctx: evaluate_cascade(
            apply_overrides(
                ctx.doc("tagi-2043").model,
                {
                    fid: 1.0
                    for fid in (
                        "algorithms", "learning-speed", "regulation", "ai-delay",
                        "war-derailment", "pandemic-derailment", "depression-derailment",
                    )
                },
            )
        ).joint_odds,
        published="below 10%", mode="abs", expected=0.04416, tolerance=1e-9,
        note="0.16 x 0.60 x 0.46; still short of 10%",
    ),
    Check(
        "extreme-assumptions", "sensitivity", "software+hardware doubled (capped), decision rows removed",
        lambda ctx: evaluate_cascade(
            apply_overrides(
                scale_factors(
                    scale_factors(
                        ctx.doc("tagi-2043").model, 2.0, FactorSubset.by_group("software")
                    ),
                    2.0,
                    FactorSubset.by_group("hardware"),
                ),
                {"regulation": 1.0, "ai-delay": 1.0},
            )
        ).joint_odds,
        published="barely above 10%", mode="abs", expected=0.14095872, tolerance=1e-9,
    ),
]


def run_checks(store: ModelStore, only: str | None = None) -> list[CheckResult]:
    if only is not None and only not in MODULES:
        raise ValidationError(f"unknown module '{only}'; choose from {MODULES}")
    ctx = _Context(store)
    return [_evaluate(c, ctx) for c in CHECKS if only is None or c.module == only]


def failures(results: list[CheckResult]) -> list[CheckResult]:
    return [r for r in results if r.status == "FAIL"]


def render_table(results: list[CheckResult]) -> str:
    rows = [("status", "check", "computed", "published", "note")]
    for r in results:
        rows.append(
            (
                r.status,
                f"{r.check.module}/{r.check.id}",
                repr(r.computed),
                r.check.published,
                r.check.note or r.detail,
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    lines = []
    for k, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    checked = [r for r in results if r.status != "note"]
    lines.append("")
    lines.append(
        f"{sum(1 for r in checked if r.status == 'ok')}/{len(checked)} checks passed, "
        f"{len(results) - len(checked)} recorded notes"
    )
    return "\n".join(lines) + "\n"


def render_csv(results: list[CheckResult]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["status", "module", "check", "computed", "published", "note"])
    for r in results:
        writer.writerow(
            [r.status, r.check.module, r.check.id, repr(r.computed), r.check.published,
             r.check.note or r.detail]
        )
    return out.getvalue()


def render_doc(results: list[CheckResult]) -> str:
    return json.dumps(
        [
            {
                "status": r.status,
                "module": r.check.module,
                "check": r.check.id,
                "description": r.check.description,
                "computed": r.computed,
                "published": r.check.published,
                "note": r.check.note or r.detail,
            }
            for r in results
        ],
        indent=2,
    )
