"""Command-line front end: estimate, run, compare, table, report.

Exit codes: 0 success, 2 parse or validation failure, 3 total execution
failure (every run in a plan errored), 4 corrupt shipped data asset.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import figures, serialize
from .catalog import (find_region, load_reference_table, load_region_profiles)
from .emissions import (NormalizationMode, category_summary, estimate_emissions,
                        reference_percentages)
from .errors import (CatalogDataError, InputParseError, SwarmprintError,
                     ValidationError)
from .harness import (T_UNIT_FIXED, T_UNIT_MEASURED, comparison_from_run_document,
                      compare_algorithms, run_experiment)
from .inputs import (DeploymentOverrides, parse_emission_inputs,
                     parse_hardware_file, parse_plan)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ALL_FAILED = 3
EXIT_DATA = 4


def _add_io_options(parser: argparse.ArgumentParser, with_input=True,
                    formats=("json", "csv", "text")) -> None:
    if with_input:
        parser.add_argument("--input", required=True, help="input file path")
    parser.add_argument("--output", help="output path (default: stdout)")
    parser.add_argument("--format", choices=formats, default="json")


def _add_deployment_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--t-unit-hours", type=float, metavar="X",
                       help="fixed unit time in hours")
    group.add_argument("--t-unit-measured", action="store_true",
                       help="use each run's measured wall time")
    parser.add_argument("--region", metavar="CODE",
                        help="region code from the regions dataset")
    parser.add_argument("--hardware", metavar="PATH",
                        help="hardware profile file (power_kw=, utilization=)")


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="override the plan's base seed")
    parser.add_argument("--workers", type=int, default=1,
                        help="parallel run workers (default 1, deterministic timing)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarmprint",
        description="swarm optimization runs and CO2 emission estimates")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="evaluate the emission model on an input file")
    _add_io_options(p)
    _add_deployment_options(p)

    p = sub.add_parser("table", help="reproduce the shipped complexity table")
    _add_io_options(p, with_input=False)

    p = sub.add_parser("run", help="execute an experiment plan")
    _add_io_options(p)
    _add_deployment_options(p)
    _add_run_options(p)

    p = sub.add_parser("compare", help="execute a plan and compare algorithms")
    _add_io_options(p)
    _add_deployment_options(p)
    _add_run_options(p)
    p.add_argument("--mode", choices=[m.value for m in NormalizationMode],
                   default=NormalizationMode.PROPORTIONAL.value)

    p = sub.add_parser("report", help="run (or load) experiments and render "
                                      "CSV plus figures into a directory")
    p.add_argument("--input", required=True,
                   help="plan file or a previously written run JSON document")
    p.add_argument("--output", required=True, help="output directory")
    _add_deployment_options(p)
    _add_run_options(p)
    p.add_argument("--mode", choices=[m.value for m in NormalizationMode],
                   default=NormalizationMode.PROPORTIONAL.value)
    return parser


def _overrides_from_args(args) -> DeploymentOverrides:
    region = None
    if args.region is not None:
        region = find_region(args.region, load_region_profiles())
    hardware = None
    if args.hardware is not None:
        hardware = parse_hardware_file(Path(args.hardware))
    policy = None
    hours = None
    if getattr(args, "t_unit_measured", False):
        policy = T_UNIT_MEASURED
    elif args.t_unit_hours is not None:
        policy = T_UNIT_FIXED
        hours = args.t_unit_hours
    return DeploymentOverrides(t_unit_policy=policy, t_unit_hours=hours,
                               hardware=hardware, region=region)


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _read_input(path_text: str) -> str:
    path = Path(path_text)
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputParseError(f"cannot read input file: {exc}",
                              source=path_text) from None


def _cmd_estimate(args) -> int:
    overrides = _overrides_from_args(args)
    inputs = parse_emission_inputs(_read_input(args.input), args.input,
                                   load_region_profiles(), overrides)
    estimate = estimate_emissions(inputs)
    doc = serialize.estimate_document(inputs, estimate)
    if args.format == "json":
        _emit(serialize.dumps(doc), args.output)
    elif args.format == "csv":
        _emit(serialize.estimate_csv(doc), args.output)
    else:
        _emit(serialize.estimate_text(doc), args.output)
    return EXIT_OK


def _cmd_table(args) -> int:
    catalog = load_reference_table()
    scores = reference_percentages(catalog)
    summaries = category_summary(scores, catalog)
    doc = serialize.table_document(catalog, scores, summaries)
    mismatched = [row["name"] for row, descriptor in zip(doc["rows"], catalog)
                  if row["complexity_pct"] != descriptor.reference_complexity_pct]
    if mismatched:
        raise CatalogDataError(
            "factor overrides no longer reproduce the reference percentages "
            f"for: {', '.join(mismatched)}")
    if args.format == "json":
        _emit(serialize.dumps(doc), args.output)
    elif args.format == "csv":
        _emit(serialize.table_csv(doc), args.output)
    else:
        _emit(serialize.table_text(doc), args.output)
    return EXIT_OK


def _load_plan(args):
    overrides = _overrides_from_args(args)
    return parse_plan(_read_input(args.input), args.input,
                      load_region_profiles(), overrides,
                      seed_override=args.seed)


def _cmd_run(args) -> int:
    plan = _load_plan(args)
    reports = run_experiment(plan, workers=args.workers)
    doc = serialize.run_document(plan, reports)
    if args.format == "json":
        _emit(serialize.dumps(doc), args.output)
    elif args.format == "csv":
        _emit(serialize.run_csv(doc), args.output)
    else:
        _emit(serialize.run_text(doc), args.output)
    if all(r.error is not None for r in reports):
        return EXIT_ALL_FAILED
    return EXIT_OK


def _cmd_compare(args) -> int:
    plan = _load_plan(args)
    reports = run_experiment(plan, workers=args.workers)
    table = compare_algorithms(reports, NormalizationMode(args.mode))
    doc = serialize.comparison_document(table)
    if args.format == "json":
        _emit(serialize.dumps(doc), args.output)
    elif args.format == "csv":
        _emit(serialize.comparison_csv(doc), args.output)
    else:
        _emit(serialize.comparison_text(doc), args.output)
    if all(r.error is not None for r in reports):
        return EXIT_ALL_FAILED
    return EXIT_OK


def _cmd_report(args) -> int:
    text = _read_input(args.input)
    mode = NormalizationMode(args.mode)
    if text.lstrip().startswith("{"):
        try:
            run_doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputParseError(f"invalid JSON: {exc.msg}", source=args.input,
                                  line=exc.lineno) from None
        if "reports" not in run_doc:
            raise InputParseError("run documents carry a 'reports' array",
                                  source=args.input)
        all_failed = all(r.get("error") is not None
                         for r in run_doc["reports"]) if run_doc["reports"] else True
    else:
        plan = parse_plan(text, args.input, load_region_profiles(),
                          _overrides_from_args(args), seed_override=args.seed)
        reports = run_experiment(plan, workers=args.workers)
        run_doc = serialize.run_document(plan, reports)
        all_failed = all(r.error is not None for r in reports)

    comparison = comparison_from_run_document(run_doc, mode)
    comparison_doc = serialize.comparison_document(comparison)

    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "report.json").write_text(serialize.dumps(run_doc), encoding="utf-8")
    (outdir / "runs.csv").write_text(serialize.run_csv(run_doc), encoding="utf-8")
    (outdir / "comparison.csv").write_text(serialize.comparison_csv(comparison_doc),
                                           encoding="utf-8")
    written = figures.render_report_figures(run_doc, comparison_doc, outdir)
    for path in [outdir / "runs.csv", outdir / "comparison.csv"] + written:
        sys.stdout.write(f"wrote {path}\n")
    return EXIT_ALL_FAILED if all_failed else EXIT_OK


_COMMANDS = {
    "estimate": _cmd_estimate,
    "table": _cmd_table,
    "run": _cmd_run,
    "compare": _cmd_compare,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CatalogDataError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA
    except (InputParseError, ValidationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except SwarmprintError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
