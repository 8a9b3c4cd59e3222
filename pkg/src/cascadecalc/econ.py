"""Compute-economics arithmetic: cost per hour, training bills, device counts,
wafer and power budgets, amortization and growth rates.

All functions are total on positive inputs and reject everything else. A year
is 8766 hours (365.25 days) and 3.156e7 seconds throughout; table cells print
at one significant figure while full precision is always returned.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from .errors import ValidationError
from .numerics import check_positive, format_sig1

HOURS_PER_YEAR = 8766.0
SECONDS_PER_YEAR = 3.156e7
WATTS_PER_GW = 1e9


@dataclass(frozen=True)
class DeviceSpec:
    """A compute device as the bill-of-materials sees it.

    useful_flops is sustained useful output, not peak marketing FLOPS;
    power_draw includes ancillary and cooling load.
    """

    name: str
    useful_flops: float
    power_draw: float
    devices_per_wafer: int
    price_per_hour: float | None = None

    def __post_init__(self):
        check_positive(self.useful_flops, f"{self.name} useful_flops")
        check_positive(self.power_draw, f"{self.name} power_draw")
        check_positive(self.devices_per_wafer, f"{self.name} devices_per_wafer")
        if int(self.devices_per_wafer) != self.devices_per_wafer:
            raise ValidationError(f"{self.name} devices_per_wafer must be an integer")
        if self.price_per_hour is not None:
            check_positive(self.price_per_hour, f"{self.name} price_per_hour")


@dataclass(frozen=True)
class WorkloadSpec:
    """Compute demand: a training bill plus a running inference fleet."""

    training_ops: float
    inference_flops_per_agi: float
    labor_hours_per_year: float
    utilization: float
    build_years: float = 1.0

    def __post_init__(self):
        check_positive(self.training_ops, "training_ops")
        check_positive(self.inference_flops_per_agi, "inference_flops_per_agi")
        check_positive(self.labor_hours_per_year, "labor_hours_per_year")
        check_positive(self.build_years, "build_years")
        u = check_positive(self.utilization, "utilization")
        if u > 1.0:
            raise ValidationError(f"utilization must be <= 1, got {u!r}")


@dataclass(frozen=True)
class HardwareBill:
    devices: float
    wafers: float
    gw_plants: float


def flops_per_dollar_hour(device_flops: float, price_per_hour: float) -> float:
    """Compute throughput purchasable for one dollar per hour."""
    check_positive(device_flops, "device_flops")
    check_positive(price_per_hour, "price_per_hour")
    return device_flops / price_per_hour


def ops_per_dollar(device_flops: float, price_per_hour: float) -> float:
    """Total floating-point operations bought per dollar."""
    check_positive(device_flops, "device_flops")
    check_positive(price_per_hour, "price_per_hour")
    return device_flops * 3600.0 / price_per_hour


def inference_cost_per_hour(flops_needed: float, efficiency: float) -> float:
    """Dollars per hour to sustain `flops_needed` at `efficiency` FLOPS/$-hr."""
    check_positive(flops_needed, "flops_needed")
    check_positive(efficiency, "efficiency")
    return flops_needed / efficiency


def training_cost(total_ops: float, ops_per_dollar_rate: float) -> float:
    check_positive(total_ops, "total_ops")
    check_positive(ops_per_dollar_rate, "ops_per_dollar")
    return total_ops / ops_per_dollar_rate


def concurrent_devices(labor_hours_per_year: float, utilization: float) -> float:
    """Human-equivalent devices needed to deliver the yearly labor hours."""
    check_positive(labor_hours_per_year, "labor_hours_per_year")
    u = check_positive(utilization, "utilization")
    if u > 1.0:
        raise ValidationError(f"utilization must be <= 1, got {u!r}")
    return labor_hours_per_year / (HOURS_PER_YEAR * u)


def devices_for_training(total_ops: float, device_flops: float, build_years: float) -> float:
    """Devices that must run for `build_years` to deliver the training bill."""
    check_positive(total_ops, "total_ops")
    check_positive(device_flops, "device_flops")
    check_positive(build_years, "build_years")
    return total_ops / (device_flops * SECONDS_PER_YEAR * build_years)


def hardware_bill(devices: float, spec: DeviceSpec) -> HardwareBill:
    """Wafer and power budget for a device count; fractional counts are kept.

    Ceiling to integral procurement counts is a display concern, applied only
    in the export layer on request.
    """
    check_positive(devices, "devices")
    return HardwareBill(
        devices=devices,
        wafers=devices / spec.devices_per_wafer,
        gw_plants=devices * spec.power_draw / WATTS_PER_GW,
    )


def implied_cagr(target_rate: float, base_rate: float, years: float) -> float:
    """Constant yearly growth fraction that turns `base_rate` into `target_rate`."""
    check_positive(target_rate, "target_rate")
    check_positive(base_rate, "base_rate")
    check_positive(years, "years")
    return (target_rate / base_rate) ** (1.0 / years) - 1.0


def project_growth(base: float, rate: float, years: float) -> float:
    """Compound `base` forward at `rate` per year for `years` years."""
    check_positive(base, "base")
    check_positive(years, "years")
    if not rate > -1.0:
        raise ValidationError(f"growth rate must exceed -1, got {rate!r}")
    return base * (1.0 + rate) ** years


def euv_wafer_throughput(
    wafers_per_hour: float, euv_steps: float, uptime: float, hours_per_year: float
) -> float:
    """Finished wafers per tool-year given raw scan rate and patterning steps."""
    check_positive(wafers_per_hour, "wafers_per_hour")
    check_positive(euv_steps, "euv_steps")
    u = check_positive(uptime, "uptime")
    if u > 1.0:
        raise ValidationError(f"uptime must be <= 1, got {u!r}")
    check_positive(hours_per_year, "hours_per_year")
    return wafers_per_hour / euv_steps * u * hours_per_year


def robot_amortized_cost(price: float, lifetime_hours: float) -> float:
    check_positive(price, "price")
    check_positive(lifetime_hours, "lifetime_hours")
    return price / lifetime_hours


def robots_per_year(labor_hours_per_year: float, lifetime_hours: float) -> float:
    """Steady-state replacement rate for a robot fleet delivering the labor hours."""
    check_positive(labor_hours_per_year, "labor_hours_per_year")
    check_positive(lifetime_hours, "lifetime_hours")
    return labor_hours_per_year / lifetime_hours


@dataclass(frozen=True)
class BillColumn:
    scenario: str
    flops_needed: float
    per_spec: tuple[HardwareBill, ...]  # one bill per device spec, in order


@dataclass(frozen=True)
class BillOfMaterials:
    specs: tuple[DeviceSpec, ...]
    columns: tuple[BillColumn, ...]

    def to_csv(self, integral: bool = False) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["quantity"] + [c.scenario for c in self.columns])
        writer.writerow(["FLOPS needed"] + [format_sig1(c.flops_needed) for c in self.columns])
        for k, spec in enumerate(self.specs):
            for attr, label in (
                ("devices", f"{spec.name}s needed"),
                ("wafers", f"{spec.name} wafers needed ({spec.devices_per_wafer} per wafer)"),
                ("gw_plants", f"{spec.name} GW plants needed ({spec.power_draw:g} W each)"),
            ):
                cells = []
                for c in self.columns:
                    value = getattr(c.per_spec[k], attr)
                    if integral:
                        value = float(math.ceil(value))
                    cells.append(format_sig1(value))
                writer.writerow([label] + cells)
        return out.getvalue()

    def to_text(self) -> str:
        rows = [line.split(",") for line in self.to_csv().splitlines()]
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        return "\n".join(
            "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows
        )


def bill_of_materials(
    workloads: dict[str, WorkloadSpec], specs: list[DeviceSpec]
) -> BillOfMaterials:
    """Two-scenario-family hardware table: training and inference columns for
    each workload, priced in devices, wafers and GW plants per device spec."""
    if not workloads or not specs:
        raise ValidationError("bill_of_materials needs at least one workload and one spec")
    columns = []
    for name, w in workloads.items():
        flops_training = w.training_ops / (SECONDS_PER_YEAR * w.build_years)
        fleet = concurrent_devices(w.labor_hours_per_year, w.utilization)
        flops_inference = fleet * w.inference_flops_per_agi
        for scenario, flops in (
            (f"training ({name})", flops_training),
            (f"inference ({name})", flops_inference),
        ):
            per_spec = tuple(hardware_bill(flops / s.useful_flops, s) for s in specs)
            columns.append(BillColumn(scenario, flops, per_spec))
    return BillOfMaterials(specs=tuple(specs), columns=tuple(columns))
