"""Machine-readable output documents (JSON and CSV) for the CLI.

Floats are rendered with 17 significant digits in both formats so values
round-trip exactly and the two formats always carry identical numbers.
"""

from __future__ import annotations

import math
from typing import Any, Sequence

import numpy as np

from .catalog import AlgorithmDescriptor
from .emissions import ComplexityScore, EmissionEstimate, EmissionInputs
from .harness import ComparisonTable, ExperimentPlan, RunReport


def fmt_float(value: float) -> str:
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    return format(value, ".17g")


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON text with .17g floats; accepts dict/list/str/num/bool/None/ndarray."""
    out: list[str] = []
    _write(obj, out, indent, 0)
    out.append("\n")
    return "".join(out)


def _write(obj: Any, out: list[str], indent: int, depth: int) -> None:
    pad = " " * (indent * (depth + 1))
    close_pad = " " * (indent * depth)
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(_escape(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(fmt_float(float(obj)))
    elif isinstance(obj, np.ndarray):
        _write(obj.tolist(), out, indent, depth)
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            out.append(f"{pad}{_escape(str(key))}: ")
            _write(value, out, indent, depth + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(f"{close_pad}}}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(obj):
            out.append(pad)
            _write(value, out, indent, depth + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(f"{close_pad}]")
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


_ESCAPES = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape(text: str) -> str:
    body = "".join(_ESCAPES.get(ch, ch) if ch >= " " or ch in _ESCAPES
                   else f"\\u{ord(ch):04x}" for ch in text)
    return f'"{body}"'


def csv_line(cells: Sequence[Any]) -> str:
    rendered = []
    for cell in cells:
        if cell is None:
            rendered.append("")
        elif isinstance(cell, bool):
            rendered.append("true" if cell else "false")
        elif isinstance(cell, (float, np.floating)):
            rendered.append(fmt_float(float(cell)))
        else:
            text = str(cell)
            if any(ch in text for ch in ",\"\n"):
                text = '"' + text.replace('"', '""') + '"'
            rendered.append(text)
    return ",".join(rendered)


# ---------------------------------------------------------------------------
# emission estimates


def emission_inputs_dict(inputs: EmissionInputs) -> dict:
    return {
        "particles": inputs.num_particles,
        "iterations": inputs.num_iterations,
        "hyperparameter_factors": list(inputs.factors.hyperparameter_factors),
        "topology_factors": list(inputs.factors.topology_factors),
        "boundary_factors": list(inputs.factors.boundary_factors),
        "unit_time_hours": inputs.unit_time_hours,
        "power_kw": inputs.hardware.power_kw,
        "utilization": inputs.hardware.utilization,
        "region": inputs.region.region_code,
        "emission_factor": inputs.region.emission_factor,
    }


def emission_estimate_dict(estimate: EmissionEstimate) -> dict:
    return {
        "zero_emission": estimate.zero_emission,
        "kg_co2_log": None if estimate.kg_co2_log is None else estimate.kg_co2_log.ln_value,
        "kg_co2": estimate.kg_co2,
        "kg_co2_exact": None if estimate.kg_co2_exact is None else str(estimate.kg_co2_exact),
        "components": [
            {"name": c.name, "ln": c.ln, "zero": c.zero} for c in estimate.components
        ],
    }


def estimate_document(inputs: EmissionInputs, estimate: EmissionEstimate) -> dict:
    doc = {"inputs": emission_inputs_dict(inputs)}
    doc.update(emission_estimate_dict(estimate))
    return doc


def estimate_csv(doc: dict) -> str:
    lines = [csv_line(["field", "value"])]
    for key, value in doc["inputs"].items():
        if isinstance(value, list):
            value = ";".join(fmt_float(v) for v in value)
        lines.append(csv_line([key, value]))
    for key in ("zero_emission", "kg_co2_log", "kg_co2", "kg_co2_exact"):
        lines.append(csv_line([key, doc[key]]))
    for component in doc["components"]:
        lines.append(csv_line([f"ln_{component['name']}", component["ln"]]))
    return "\n".join(lines) + "\n"


def estimate_text(doc: dict) -> str:
    lines = ["emission estimate"]
    lines.append(f"  particles:  {doc['inputs']['particles']}")
    lines.append(f"  iterations: {doc['inputs']['iterations']}")
    if doc["zero_emission"]:
        lines.append("  kg CO2:     0.00 (zero-carbon region)")
    else:
        lines.append(f"  ln(kg CO2): {doc['kg_co2_log']:.2f}")
        if doc["kg_co2"] is not None:
            lines.append(f"  kg CO2:     {doc['kg_co2']:.2f}")
        else:
            lines.append("  kg CO2:     too large for a float; see ln value")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# reference table


def table_document(catalog: Sequence[AlgorithmDescriptor],
                   scores: Sequence[ComplexityScore],
                   summaries: dict) -> dict:
    rows = []
    for descriptor, score in zip(catalog, scores):
        rows.append({
            "name": descriptor.name,
            "category": descriptor.category.value,
            "complexity_pct": score.percentage,
            "level": score.level,
            "executable": descriptor.executable,
        })
    categories = {}
    for category, summary in summaries.items():
        categories[category.value] = {
            "count": summary.count, "mean": summary.mean,
            "min": summary.min, "max": summary.max,
        }
    return {"rows": rows, "categories": categories}


def table_csv(doc: dict) -> str:
    lines = [csv_line(["name", "category", "complexity_pct", "level", "executable"])]
    for row in doc["rows"]:
        lines.append(csv_line([row["name"], row["category"],
                               row["complexity_pct"], row["level"],
                               row["executable"]]))
    return "\n".join(lines) + "\n"


def table_text(doc: dict) -> str:
    lines = []
    current = None
    for row in doc["rows"]:
        if row["category"] != current:
            current = row["category"]
            lines.append(f"-- {current}")
        marker = "*" if row["executable"] else " "
        lines.append(f" {marker} {row['name']:<26s} {row['complexity_pct']:.2f}")
    lines.append("-- category summaries (count / mean / min / max)")
    for name, s in doc["categories"].items():
        lines.append(f"   {name:<26s} {s['count']:2d} / {s['mean']:.2f} / "
                     f"{s['min']:.2f} / {s['max']:.2f}")
    lines.append("   (* = executable in this package)")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# run reports


def plan_dict(plan: ExperimentPlan) -> dict:
    deployment = plan.deployment
    return {
        "function": plan.function.name,
        "dimension": plan.function.dimension,
        "lower": plan.function.space.lower,
        "upper": plan.function.space.upper,
        "repetitions": plan.repetitions,
        "base_seed": plan.base_seed,
        "t_unit_policy": deployment.t_unit_policy,
        "t_unit_hours": deployment.t_unit_hours,
        "power_kw": deployment.hardware.power_kw,
        "utilization": deployment.hardware.utilization,
        "region": deployment.region.region_code,
        "emission_factor": deployment.region.emission_factor,
    }


def report_dict(report: RunReport) -> dict:
    config = report.config
    out = {
        "algorithm": report.algorithm,
        "seed": report.seed,
        "function": report.function_name,
        "timestamp": report.timestamp,
        "error": report.error,
        "error_message": report.error_message,
        "config": {
            "algorithm": config.algorithm,
            "swarm_size": config.swarm_size,
            "topology": config.topology.kind.value,
            "boundary": config.boundary.value,
            "hyperparameters": dict(config.hyperparameters),
        },
    }
    if report.meter is not None:
        out.update({
            "iterations_used": report.meter.iterations_used,
            "evaluations_used": report.meter.evaluations_used,
            "wall_time_seconds": report.meter.wall_time_seconds,
            "stop_reason": report.meter.stop_reason,
            "best_fitness": report.best_fitness,
            "best_position": report.best_position,
            "best_fitness_trace": report.meter.best_fitness_trace,
        })
    if report.emission_inputs is not None:
        out["emission_inputs"] = emission_inputs_dict(report.emission_inputs)
    if report.emission is not None:
        out["emission"] = emission_estimate_dict(report.emission)
    if report.emission_note is not None:
        out["emission_note"] = report.emission_note
    if report.complexity_log is not None:
        out["complexity_log"] = report.complexity_log
    return out


def run_document(plan: ExperimentPlan, reports: Sequence[RunReport]) -> dict:
    return {"plan": plan_dict(plan), "reports": [report_dict(r) for r in reports]}


_RUN_CSV_HEADER = ("algorithm", "seed", "swarm_size", "topology", "boundary",
                   "iterations_used", "evaluations_used", "wall_time_seconds",
                   "stop_reason", "best_fitness", "kg_co2_log", "kg_co2",
                   "complexity_log", "error")


def run_csv(run_doc: dict) -> str:
    lines = [csv_line(_RUN_CSV_HEADER)]
    for r in run_doc["reports"]:
        emission = r.get("emission") or {}
        config = r.get("config") or {}
        lines.append(csv_line([
            r["algorithm"], r["seed"], config.get("swarm_size"),
            config.get("topology"), config.get("boundary"),
            r.get("iterations_used"), r.get("evaluations_used"),
            r.get("wall_time_seconds"), r.get("stop_reason"),
            r.get("best_fitness"), emission.get("kg_co2_log"),
            emission.get("kg_co2"), r.get("complexity_log"), r.get("error"),
        ]))
    return "\n".join(lines) + "\n"


def run_text(run_doc: dict) -> str:
    lines = []
    for r in run_doc["reports"]:
        if r.get("error") is not None:
            lines.append(f"{r['algorithm']} seed={r['seed']}: "
                         f"ERROR {r['error']}: {r.get('error_message')}")
            continue
        emission = r.get("emission") or {}
        if emission.get("zero_emission"):
            kg = "0.00"
        elif emission.get("kg_co2") is not None:
            kg = f"{emission['kg_co2']:.2f}"
        elif emission.get("kg_co2_log") is not None:
            kg = f"exp({emission['kg_co2_log']:.2f})"
        else:
            kg = "n/a"
        lines.append(f"{r['algorithm']} seed={r['seed']}: "
                     f"best={r['best_fitness']:.6g} "
                     f"iters={r['iterations_used']} "
                     f"evals={r['evaluations_used']} kgCO2={kg}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# comparisons


def comparison_document(table: ComparisonTable) -> dict:
    return {
        "function": table.function_name,
        "mode": table.mode.value,
        "rows": [{
            "algorithm": row.algorithm,
            "runs": row.runs,
            "errors": row.errors,
            "mean_best_fitness": row.mean_best_fitness,
            "median_best_fitness": row.median_best_fitness,
            "mean_iterations": row.mean_iterations,
            "mean_evaluations": row.mean_evaluations,
            "mean_kg_co2_log": row.mean_kg_co2_log,
            "mean_complexity_log": row.mean_complexity_log,
            "percentage": row.percentage,
            "level": row.level,
        } for row in table.rows],
    }


def comparison_csv(doc: dict) -> str:
    header = ("algorithm", "runs", "errors", "mean_best_fitness",
              "median_best_fitness", "mean_iterations", "mean_evaluations",
              "mean_kg_co2_log", "mean_complexity_log", "percentage", "level")
    lines = [csv_line(header)]
    for row in doc["rows"]:
        lines.append(csv_line([row[h] for h in header]))
    return "\n".join(lines) + "\n"


def comparison_text(doc: dict) -> str:
    lines = [f"comparison on {doc['function']} ({doc['mode']})"]
    for row in doc["rows"]:
        if row["mean_best_fitness"] is None:
            lines.append(f"  {row['algorithm']:<16s} all {row['runs']} runs failed")
            continue
        pct = ("n/a" if row["percentage"] is None
               else f"{row['percentage']:.2f}%")
        co2 = ("0.00" if row["mean_kg_co2_log"] is None
               else f"{row['mean_kg_co2_log']:.2f}")
        lines.append(f"  {row['algorithm']:<16s} "
                     f"best={row['mean_best_fitness']:.6g} "
                     f"iters={row['mean_iterations']:.1f} "
                     f"lnCO2={co2} complexity={pct}")
    return "\n".join(lines) + "\n"
