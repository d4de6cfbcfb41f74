"""Figure rendering for the report command.

Takes the same dict documents the JSON serializer emits and writes PNG
files next to the delimited output: convergence traces per run, complexity
percentages per algorithm, and mean log-emission per algorithm.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_RC = {
    "figure.figsize": (7.0, 4.2),
    "figure.dpi": 120,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def _algorithms_in_order(reports: list[dict]) -> list[str]:
    seen: list[str] = []
    for report in reports:
        if report["algorithm"] not in seen:
            seen.append(report["algorithm"])
    return seen


def render_convergence(run_doc: dict, path: Path) -> Path:
    reports = [r for r in run_doc["reports"] if r.get("error") is None]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        colors = plt.cm.tab10.colors
        algorithms = _algorithms_in_order(reports)
        labeled = set()
        for report in reports:
            trace = report.get("best_fitness_trace") or []
            if not trace:
                continue
            algo = report["algorithm"]
            color = colors[algorithms.index(algo) % len(colors)]
            label = None if algo in labeled else algo
            labeled.add(algo)
            ax.plot(range(1, len(trace) + 1), trace, color=color, alpha=0.7,
                    linewidth=1.0, label=label)
        ax.set_xlabel("generation")
        ax.set_ylabel("best fitness")
        if any((r.get("best_fitness") or 0) > 0 for r in reports):
            ax.set_yscale("log")
        ax.set_title(f"convergence on {run_doc['plan']['function']}")
        if labeled:
            ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def render_complexity(comparison_doc: dict, path: Path) -> Path:
    rows = [r for r in comparison_doc["rows"] if r.get("percentage") is not None]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        names = [r["algorithm"] for r in rows]
        values = [r["percentage"] for r in rows]
        ax.bar(names, values, color="tab:blue")
        ax.set_ylabel("complexity share (%)")
        ax.set_title(f"complexity percentages ({comparison_doc['mode']})")
        ax.tick_params(axis="x", rotation=30)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def render_emissions(comparison_doc: dict, path: Path) -> Path:
    rows = [r for r in comparison_doc["rows"] if r.get("mean_kg_co2_log") is not None]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        names = [r["algorithm"] for r in rows]
        values = [r["mean_kg_co2_log"] for r in rows]
        ax.bar(names, values, color="tab:green")
        ax.set_ylabel("mean ln(kg CO2)")
        ax.set_title("estimated emissions by algorithm")
        ax.tick_params(axis="x", rotation=30)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def render_report_figures(run_doc: dict, comparison_doc: dict,
                          outdir: Path) -> list[Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    written = [render_convergence(run_doc, outdir / "convergence.png")]
    written.append(render_complexity(comparison_doc, outdir / "complexity.png"))
    written.append(render_emissions(comparison_doc, outdir / "emissions.png"))
    return written
