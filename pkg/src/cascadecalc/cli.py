"""Command-line access to every computation, plus the service launcher.

Exit codes: 0 success, 1 validation errors (including bad flags), 2 infeasible
targets, 3 storage errors. Results go to stdout, errors to stderr. The
`--format` flag switches between the human table (default), `csv`, and the
JSON document grammar (`doc`).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import reproduce
from .aggregate import (
    EvidencePartition,
    ForecastSet,
    extremize,
    martingale_check,
    partition_prior,
    pool,
    solve_extremizing_exponent,
)
from .cascade import NOT_APPLICABLE, apply_overrides, evaluate_cascade
from .econ import (
    DeviceSpec,
    WorkloadSpec,
    bill_of_materials,
    concurrent_devices,
    devices_for_training,
    euv_wafer_throughput,
    flops_per_dollar_hour,
    implied_cagr,
    inference_cost_per_hour,
    ops_per_dollar,
    project_growth,
    robot_amortized_cost,
    robots_per_year,
    training_cost,
)
from .errors import InfeasibleError, NotFoundError, StorageError, ValidationError
from .grids import (
    QualifierRule,
    at_least_mass,
    build_joint_grid,
    grid_to_csv,
    linked_joint_expectation,
    scenario_expectation,
)
from .hazard import DerailmentEvent, HorizonRisk, any_of, combined_survival
from .hazard import annual_from_cumulative, cumulative_from_annual, derail_probability, rescale
from .numerics import format_percent
from .sensitivity import FactorSubset, scale_factors, solve_uniform_multiplier, tornado
from .store import ModelStore, export_report

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INFEASIBLE = 2
EXIT_STORAGE = 3


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems on the validation exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _parse_override(text: str):
    if "=" not in text:
        raise ValidationError(f"override '{text}' must look like factor=value or factor=N/A")
    fid, _, value = text.partition("=")
    if value.strip().upper() == "N/A":
        return fid, NOT_APPLICABLE
    try:
        return fid, float(value)
    except ValueError:
        raise ValidationError(f"override '{text}': '{value}' is not a number or N/A") from None


def _parse_subset(name: str | None, ids: str | None) -> FactorSubset:
    if ids:
        return FactorSubset.by_ids([i.strip() for i in ids.split(",") if i.strip()])
    if name is None or name == "all":
        return FactorSubset.all()
    return FactorSubset.by_group(name)


def _probabilities(values: Sequence[str]) -> list[float]:
    return [float(v) for v in values]


def _print_value(value: float, args) -> None:
    if getattr(args, "format", "text") == "doc":
        print(json.dumps({"value": value}))
    elif getattr(args, "precise", False):
        print(repr(value))
    else:
        print(f"{value:.6g}")


def _resolve_model(store: ModelStore, args):
    if getattr(args, "scenario", None):
        sc = store.get_scenario(args.scenario)
        doc = store.get_model(sc.base_model)
        model = apply_overrides(doc.model, sc.overrides)
    else:
        doc = store.get_model(args.model)
        model = doc.model
    overrides = dict(_parse_override(o) for o in getattr(args, "override", []) or [])
    return doc, apply_overrides(model, overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cascadecalc", description=__doc__)
    parser.add_argument("--data-dir", default=None, help="user model/scenario directory")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_format(p):
        p.add_argument("--format", choices=["text", "csv", "doc"], default="text")
        p.add_argument("--precise", action="store_true", help="full-precision numbers")

    p = sub.add_parser("evaluate", help="evaluate a cascade model")
    p.add_argument("--model", help="model id (e.g. tagi-2043)")
    p.add_argument("--scenario", help="scenario id to evaluate instead")
    p.add_argument("--override", action="append", metavar="FACTOR=VALUE")
    add_format(p)

    p = sub.add_parser("grid", help="joint qualification grids and expectations")
    gsub = p.add_subparsers(dest="grid_command", required=True, parser_class=_Parser)

    g = gsub.add_parser("eval", help="build a grid from model attachments")
    g.add_argument("--model", required=True)
    g.add_argument("--rows", default="agi-compute-needs")
    g.add_argument("--cols", default="compute-efficiency")
    g.add_argument("--threshold", type=float, default=25.0)
    g.add_argument("--inclusive", action="store_true", help="qualify at the boundary too")
    add_format(g)

    g = gsub.add_parser("at-least", help="tail mass of an attached distribution")
    g.add_argument("--model", required=True)
    g.add_argument("--dist", required=True)
    g.add_argument("--index", type=int, required=True)
    add_format(g)

    g = gsub.add_parser("expect", help="scenario expectation over an attached distribution")
    g.add_argument("--model", required=True)
    g.add_argument("--dist", required=True)
    g.add_argument("--achievement", required=True, help="comma-separated probabilities")
    g.add_argument("--linked", help="second comma-separated vector for a linked joint")
    add_format(g)

    p = sub.add_parser("hazard", help="constant-hazard conversions and compositions")
    hsub = p.add_subparsers(dest="hazard_command", required=True, parser_class=_Parser)
    h = hsub.add_parser("rescale")
    h.add_argument("--p", type=float, required=True)
    h.add_argument("--from", dest="from_years", type=float, required=True)
    h.add_argument("--to", dest="to_years", type=float, required=True)
    add_format(h)
    h = hsub.add_parser("cumulative")
    h.add_argument("--annual", type=float, required=True)
    h.add_argument("--years", type=float, required=True)
    add_format(h)
    h = hsub.add_parser("annual")
    h.add_argument("--cumulative", type=float, required=True)
    h.add_argument("--years", type=float, required=True)
    add_format(h)
    h = hsub.add_parser("any-of")
    h.add_argument("--p", action="append", required=True)
    add_format(h)
    h = hsub.add_parser("survival", help="combined survival of event,delay pairs")
    h.add_argument("--event", action="append", required=True, metavar="P_EVENT,P_DELAY")
    add_format(h)

    p = sub.add_parser("econ", help="compute-economics arithmetic")
    esub = p.add_subparsers(dest="econ_command", required=True, parser_class=_Parser)
    for name, flags in [
        ("flops-per-dollar-hour", [("--flops", float), ("--price", float)]),
        ("ops-per-dollar", [("--flops", float), ("--price", float)]),
        ("inference-cost", [("--flops", float), ("--efficiency", float)]),
        ("training-cost", [("--ops", float), ("--ops-per-dollar", float)]),
        ("concurrent-devices", [("--labor-hours", float), ("--utilization", float)]),
        ("training-devices", [("--ops", float), ("--device-flops", float), ("--build-years", float)]),
        ("cagr", [("--target", float), ("--base", float), ("--years", float)]),
        ("growth", [("--base", float), ("--rate", float), ("--years", float)]),
        ("euv", [("--wafers-per-hour", float), ("--steps", float), ("--uptime", float), ("--hours", float)]),
        ("robot-cost", [("--price", float), ("--lifetime-hours", float)]),
        ("robots-per-year", [("--labor-hours", float), ("--lifetime-hours", float)]),
    ]:
        e = esub.add_parser(name)
        for flag, typ in flags:
            e.add_argument(flag, type=typ, required=True)
        add_format(e)
    e = esub.add_parser("bill", help="hardware bill-of-materials table")
    e.add_argument("--model", default="tagi-2043", help="model holding the device specs")
    e.add_argument("--training-ops", type=float, default=3e30)
    e.add_argument("--inference-flops", type=float, default=1e16)
    e.add_argument("--labor-hours", type=float, default=1e12)
    e.add_argument("--utilization", type=float, default=0.5)
    e.add_argument("--build-years", type=float, default=1.0)
    e.add_argument("--integral", action="store_true", help="ceil to whole procurement counts")
    add_format(e)

    p = sub.add_parser("aggregate", help="pooling, extremizing, priors")
    asub = p.add_subparsers(dest="aggregate_command", required=True, parser_class=_Parser)
    a = asub.add_parser("extremize")
    a.add_argument("--p", type=float, required=True)
    a.add_argument("--exponent", type=float, required=True)
    add_format(a)
    a = asub.add_parser("solve-exponent")
    a.add_argument("--p-in", type=float, required=True)
    a.add_argument("--p-out", type=float, required=True)
    add_format(a)
    a = asub.add_parser("pool")
    a.add_argument("--p", action="append", required=True)
    a.add_argument("--method", choices=["mean", "odds-geometric-mean"], default="mean")
    add_format(a)
    a = asub.add_parser("martingale")
    a.add_argument("--prior", type=float, required=True)
    a.add_argument("--outcome", action="append", required=True, metavar="P_OUTCOME,POSTERIOR")
    add_format(a)
    a = asub.add_parser("prior")
    a.add_argument("--favorable", type=int, required=True)
    a.add_argument("--total", type=int, required=True)
    add_format(a)

    p = sub.add_parser("tornado", help="one-at-a-time sensitivity sweep")
    p.add_argument("--model", required=True)
    p.add_argument("--scenario")
    p.add_argument("--override", action="append", metavar="FACTOR=VALUE")
    p.add_argument("--range", action="append", required=True, metavar="FACTOR=LOW:HIGH")
    add_format(p)

    p = sub.add_parser("solve", help="uniform multiplier to reach a target joint odds")
    p.add_argument("--model", required=True)
    p.add_argument("--scenario")
    p.add_argument("--override", action="append", metavar="FACTOR=VALUE")
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--subset", default="all", help="all | software | hardware | sociopolitical")
    p.add_argument("--ids", help="comma-separated factor ids (overrides --subset)")
    add_format(p)

    p = sub.add_parser("export", help="summary table for a model or scenario")
    p.add_argument("--model")
    p.add_argument("--scenario")
    p.add_argument("--override", action="append", metavar="FACTOR=VALUE")
    add_format(p)

    p = sub.add_parser("reproduce", help="recompute every published golden number")
    p.add_argument("--only", choices=list(reproduce.MODULES))
    add_format(p)

    p = sub.add_parser("serve", help="run the local HTTP API (loopback by default)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8337)

    return parser


def _cmd_evaluate(store, args) -> int:
    if not args.model and not args.scenario:
        raise ValidationError("evaluate needs --model or --scenario")
    _, model = _resolve_model(store, args)
    print(export_report(model, fmt=args.format, precise=args.precise), end="")
    return EXIT_OK


def _cmd_grid(store, args) -> int:
    doc = store.get_model(args.model)
    if args.grid_command == "eval":
        for name in (args.rows, args.cols):
            if name not in doc.distributions:
                raise ValidationError(f"model '{args.model}' has no distribution '{name}'")
        grid = build_joint_grid(
            doc.distributions[args.rows],
            doc.distributions[args.cols],
            QualifierRule(args.threshold, strict=not args.inclusive),
        )
        if args.format == "csv":
            print(grid_to_csv(grid), end="")
        elif args.format == "doc":
            print(json.dumps({"qualifying_mass": grid.qualifying_mass}))
        else:
            shown = repr(grid.qualifying_mass) if args.precise else format_percent(grid.qualifying_mass)
            print(f"qualifying mass: {shown}")
        return EXIT_OK
    if args.grid_command == "at-least":
        if args.dist not in doc.distributions:
            raise ValidationError(f"model '{args.model}' has no distribution '{args.dist}'")
        _print_value(at_least_mass(doc.distributions[args.dist], args.index), args)
        return EXIT_OK
    dist = doc.distributions.get(args.dist)
    if dist is None:
        raise ValidationError(f"model '{args.model}' has no distribution '{args.dist}'")
    achievement = _probabilities(args.achievement.split(","))
    if args.linked:
        value = linked_joint_expectation(dist, achievement, _probabilities(args.linked.split(",")))
    else:
        value = scenario_expectation(dist, achievement)
    _print_value(value, args)
    return EXIT_OK


def _cmd_hazard(args) -> int:
    cmd = args.hazard_command
    if cmd == "rescale":
        value = rescale(HorizonRisk(args.p, args.from_years), args.to_years).probability
    elif cmd == "cumulative":
        value = cumulative_from_annual(args.annual, args.years)
    elif cmd == "annual":
        value = annual_from_cumulative(args.cumulative, args.years)
    elif cmd == "any-of":
        value = any_of([float(p) for p in args.p])
    else:
        events = []
        for i, pair in enumerate(args.event):
            parts = pair.split(",")
            if len(parts) != 2:
                raise ValidationError(f"--event '{pair}' must be P_EVENT,P_DELAY")
            events.append(
                DerailmentEvent(f"event-{i}", HorizonRisk(float(parts[0]), 1.0), float(parts[1]))
            )
        value = combined_survival(events)
    _print_value(value, args)
    return EXIT_OK


def _cmd_econ(store, args) -> int:
    cmd = args.econ_command
    if cmd == "bill":
        doc = store.get_model(args.model)
        specs = list(doc.device_specs.values())
        if not specs:
            raise ValidationError(f"model '{args.model}' attaches no device specs")
        workload = WorkloadSpec(
            training_ops=args.training_ops,
            inference_flops_per_agi=args.inference_flops,
            labor_hours_per_year=args.labor_hours,
            utilization=args.utilization,
            build_years=args.build_years,
        )
        bill = bill_of_materials({"base": workload}, specs)
        print(bill.to_csv(integral=args.integral) if args.format == "csv" else bill.to_text())
        return EXIT_OK
    value = {
        "flops-per-dollar-hour": lambda: flops_per_dollar_hour(args.flops, args.price),
        "ops-per-dollar": lambda: ops_per_dollar(args.flops, args.price),
        "inference-cost": lambda: inference_cost_per_hour(args.flops, args.efficiency),
        "training-cost": lambda: training_cost(args.ops, args.ops_per_dollar),
        "concurrent-devices": lambda: concurrent_devices(args.labor_hours, args.utilization),
        "training-devices": lambda: devices_for_training(args.ops, args.device_flops, args.build_years),
        "cagr": lambda: implied_cagr(args.target, args.base, args.years),
        "growth": lambda: project_growth(args.base, args.rate, args.years),
        "euv": lambda: euv_wafer_throughput(args.wafers_per_hour, args.steps, args.uptime, args.hours),
        "robot-cost": lambda: robot_amortized_cost(args.price, args.lifetime_hours),
        "robots-per-year": lambda: robots_per_year(args.labor_hours, args.lifetime_hours),
    }[cmd]()
    _print_value(value, args)
    return EXIT_OK


def _cmd_aggregate(args) -> int:
    cmd = args.aggregate_command
    if cmd == "extremize":
        value = extremize(args.p, args.exponent)
    elif cmd == "solve-exponent":
        value = solve_extremizing_exponent(args.p_in, args.p_out)
    elif cmd == "pool":
        value = pool(ForecastSet(tuple(float(p) for p in args.p)), args.method)
    elif cmd == "martingale":
        outcomes = []
        for pair in args.outcome:
            parts = pair.split(",")
            if len(parts) != 2:
                raise ValidationError(f"--outcome '{pair}' must be P_OUTCOME,POSTERIOR")
            outcomes.append((float(parts[0]), float(parts[1])))
        value = martingale_check(args.prior, EvidencePartition(tuple(outcomes)))
    else:
        value = partition_prior(args.favorable, args.total)
    _print_value(value, args)
    return EXIT_OK


def _cmd_tornado(store, args) -> int:
    _, model = _resolve_model(store, args)
    ranges = {}
    for spec in args.range:
        if "=" not in spec or ":" not in spec.partition("=")[2]:
            raise ValidationError(f"--range '{spec}' must look like factor=low:high")
        fid, _, bounds = spec.partition("=")
        low, _, high = bounds.partition(":")
        ranges[fid] = (float(low), float(high))
    entries = tornado(model, ranges)
    if args.format == "doc":
        print(
            json.dumps(
                [
                    {
                        "factor_id": e.factor_id,
                        "low_input": e.low_input,
                        "high_input": e.high_input,
                        "joint_low": e.joint_low,
                        "joint_high": e.joint_high,
                    }
                    for e in entries
                ],
                indent=2,
            )
        )
        return EXIT_OK
    show = repr if args.precise else lambda v: format_percent(v, 2)
    rows = [("factor", "low", "high", "joint_low", "joint_high")]
    for e in entries:
        rows.append((e.factor_id, str(e.low_input), str(e.high_input), show(e.joint_low), show(e.joint_high)))
    sep = "," if args.format == "csv" else "  "
    for row in rows:
        print(sep.join(row))
    return EXIT_OK


def _cmd_solve(store, args) -> int:
    _, model = _resolve_model(store, args)
    subset = _parse_subset(args.subset, args.ids)
    multiplier = solve_uniform_multiplier(model, args.target, subset)
    scaled = model if multiplier == 1.0 else scale_factors(model, multiplier, subset)
    achieved = evaluate_cascade(scaled).joint_odds
    if args.format == "doc":
        print(
            json.dumps(
                {
                    "multiplier": multiplier,
                    "achieved_joint": achieved,
                    "scaled_factors": {
                        f.id: (None if f.is_not_applicable else f.effective_probability)
                        for f in scaled.factors
                    },
                }
            )
        )
    else:
        print(f"multiplier: {multiplier!r}")
        print(f"achieved joint odds: {achieved!r}")
        for f in scaled.factors:
            shown = "N/A" if f.is_not_applicable else f"{f.effective_probability:.6f}"
            print(f"  {f.id}: {shown}")
    return EXIT_OK


def _cmd_export(store, args) -> int:
    if not args.model and not args.scenario:
        raise ValidationError("export needs --model or --scenario")
    _, model = _resolve_model(store, args)
    fmt = "csv" if args.format == "csv" else ("doc" if args.format == "doc" else "text")
    print(export_report(model, fmt=fmt, precise=args.precise), end="")
    return EXIT_OK


def _cmd_reproduce(store, args) -> int:
    results = reproduce.run_checks(store, only=args.only)
    if args.format == "csv":
        print(reproduce.render_csv(results), end="")
    elif args.format == "doc":
        print(reproduce.render_doc(results))
    else:
        print(reproduce.render_table(results), end="")
    return EXIT_OK if not reproduce.failures(results) else EXIT_VALIDATION


def _cmd_serve(store, args) -> int:
    import uvicorn

    from .api import create_app, default_ui_dir

    app = create_app(store=store, ui_dir=default_ui_dir())
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    store = ModelStore(data_dir=args.data_dir)
    try:
        if args.command == "evaluate":
            return _cmd_evaluate(store, args)
        if args.command == "grid":
            return _cmd_grid(store, args)
        if args.command == "hazard":
            return _cmd_hazard(args)
        if args.command == "econ":
            return _cmd_econ(store, args)
        if args.command == "aggregate":
            return _cmd_aggregate(args)
        if args.command == "tornado":
            return _cmd_tornado(store, args)
        if args.command == "solve":
            return _cmd_solve(store, args)
        if args.command == "export":
            return _cmd_export(store, args)
        if args.command == "reproduce":
            return _cmd_reproduce(store, args)
        if args.command == "serve":
            return _cmd_serve(store, args)
        raise ValidationError(f"unknown command '{args.command}'")
    except InfeasibleError as exc:
        print(f"infeasible: {exc} (max achievable: {exc.max_achievable!r})", file=sys.stderr)
        return EXIT_INFEASIBLE
    except StorageError as exc:
        print(f"storage error: {exc}", file=sys.stderr)
        return EXIT_STORAGE
    except (ValidationError, NotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
