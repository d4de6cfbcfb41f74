"""Standard test objectives and the seeded experiment runner.

A plan expands to |configs| x repetitions metered runs (seeds derived as
base_seed + repetition index), each feeding its measured particle count and
iterations into the emission model.  Failed runs keep their slot in the
report list with an error marker so counts always match the plan.
"""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Sequence

import numpy as np

from .catalog import (ENGINE_TO_TABLE, AlgorithmDescriptor, Category,
                      FactorAssignment, HardwareProfile, RegionProfile,
                      load_reference_table)
from .combinatorics import LogMagnitude
from .emissions import (ComplexityScore, EmissionEstimate, EmissionInputs,
                        NormalizationMode, complexity_score, estimate_emissions,
                        normalize_to_percentages)
from .engine import OptimizeResult, RunMeter, SearchSpace, SwarmConfig, optimize
from .engine.algorithms import resolve_algorithm_name
from .errors import SwarmprintError, UnsupportedAlgorithmError, ValidationError

# ---------------------------------------------------------------------------
# test objectives


def _sphere(x: np.ndarray) -> float:
    return float(x @ x)


def _rastrigin(x: np.ndarray) -> float:
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * math.pi * x)))


def _rosenbrock(x: np.ndarray) -> float:
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def _ackley(x: np.ndarray) -> float:
    n = x.size
    return float(-20.0 * math.exp(-0.2 * math.sqrt(float(x @ x) / n))
                 - math.exp(float(np.sum(np.cos(2.0 * math.pi * x))) / n)
                 + 20.0 + math.e)


def _griewank(x: np.ndarray) -> float:
    idx = np.arange(1, x.size + 1, dtype=float)
    return float(1.0 + float(x @ x) / 4000.0 - np.prod(np.cos(x / np.sqrt(idx))))


# name -> (callable, default box, optimum position builder, optimum fitness)
_TEST_FUNCTION_SPECS = {
    "Sphere": (_sphere, (-5.12, 5.12), np.zeros, 0.0),
    "Rastrigin": (_rastrigin, (-5.12, 5.12), np.zeros, 0.0),
    "Rosenbrock": (_rosenbrock, (-2.048, 2.048), np.ones, 0.0),
    "Ackley": (_ackley, (-32.768, 32.768), np.zeros, 0.0),
    "Griewank": (_griewank, (-600.0, 600.0), np.zeros, 0.0),
}

TEST_FUNCTION_NAMES = tuple(_TEST_FUNCTION_SPECS)


@dataclass(frozen=True)
class TestFunction:
    name: str
    dimension: int
    space: SearchSpace
    known_optimum_position: np.ndarray
    known_optimum_fitness: float

    def __call__(self, x: np.ndarray) -> float:
        return _TEST_FUNCTION_SPECS[self.name][0](x)


def make_test_function(name: str, dimension: int,
                       lower: float | None = None,
                       upper: float | None = None) -> TestFunction:
    if name not in _TEST_FUNCTION_SPECS:
        raise ValidationError(
            f"unknown test function {name!r} (known: {', '.join(TEST_FUNCTION_NAMES)})")
    if dimension < 1:
        raise ValidationError("dimension must be >= 1")
    _, default_box, optimum_builder, optimum_fitness = _TEST_FUNCTION_SPECS[name]
    lo = default_box[0] if lower is None else float(lower)
    hi = default_box[1] if upper is None else float(upper)
    return TestFunction(name=name, dimension=dimension,
                        space=SearchSpace.cube(dimension, lo, hi),
                        known_optimum_position=optimum_builder(dimension),
                        known_optimum_fitness=optimum_fitness)


# ---------------------------------------------------------------------------
# plans and reports

T_UNIT_FIXED = "fixed"
T_UNIT_MEASURED = "measured"

DEFAULT_T_UNIT_HOURS = 72.0
DEFAULT_HARDWARE = HardwareProfile(power_kw=0.3, utilization=1.0)
DEFAULT_REGION = RegionProfile("MID", 0.4)


@dataclass(frozen=True)
class Deployment:
    """Where and how long the computation is assumed (or measured) to run."""

    t_unit_policy: str = T_UNIT_FIXED
    t_unit_hours: float = DEFAULT_T_UNIT_HOURS
    hardware: HardwareProfile = DEFAULT_HARDWARE
    region: RegionProfile = DEFAULT_REGION

    def __post_init__(self):
        if self.t_unit_policy not in (T_UNIT_FIXED, T_UNIT_MEASURED):
            raise ValidationError(
                f"t_unit policy must be '{T_UNIT_FIXED}' or '{T_UNIT_MEASURED}'")
        if self.t_unit_policy == T_UNIT_FIXED and not self.t_unit_hours > 0:
            raise ValidationError("fixed t_unit hours must be > 0")


@dataclass(frozen=True)
class ExperimentPlan:
    configs: tuple[SwarmConfig, ...]
    function: TestFunction
    repetitions: int
    base_seed: int
    deployment: Deployment = field(default_factory=Deployment)

    def __post_init__(self):
        if not self.configs:
            raise ValidationError("a plan needs at least one configuration")
        if self.repetitions < 1:
            raise ValidationError("repetitions must be >= 1")


@dataclass
class RunReport:
    """Outcome of one seeded run, or an error marker holding its slot."""

    algorithm: str
    seed: int
    config: SwarmConfig
    function_name: str
    timestamp: str
    meter: RunMeter | None = None
    best_fitness: float | None = None
    best_position: np.ndarray | None = None
    emission: EmissionEstimate | None = None
    emission_inputs: EmissionInputs | None = None
    complexity_log: float | None = None
    emission_note: str | None = None
    error: str | None = None
    error_message: str | None = None


def _descriptor_for(algorithm: str,
                    catalog: Sequence[AlgorithmDescriptor]) -> AlgorithmDescriptor | None:
    table_name = ENGINE_TO_TABLE.get(algorithm)
    if table_name is None:
        return None
    for descriptor in catalog:
        if descriptor.name == table_name:
            return descriptor
    return None


def _neutral_descriptor(algorithm: str) -> AlgorithmDescriptor:
    return AlgorithmDescriptor(name=algorithm,
                               category=Category.STOCHASTIC_RANDOM_SEARCH,
                               factors=FactorAssignment.neutral(),
                               reference_complexity_pct=0.0, executable=True)


def _execute_one(config: SwarmConfig, plan: ExperimentPlan,
                 catalog: Sequence[AlgorithmDescriptor]) -> RunReport:
    stamp = datetime.now(timezone.utc).isoformat()
    report = RunReport(algorithm=config.algorithm, seed=config.seed,
                       config=config, function_name=plan.function.name,
                       timestamp=stamp)
    try:
        canonical = resolve_algorithm_name(config.algorithm)
        result: OptimizeResult = optimize(config, plan.function.space, plan.function)
    except UnsupportedAlgorithmError as exc:
        report.error = "unsupported-algorithm"
        report.error_message = str(exc)
        return report
    except (ValidationError, SwarmprintError) as exc:
        report.error = "invalid-config"
        report.error_message = str(exc)
        return report

    report.algorithm = canonical
    report.meter = result.meter
    report.best_fitness = result.best_fitness
    report.best_position = result.best_position

    iterations = result.meter.iterations_used
    if iterations < 1:
        report.emission_note = "no-iterations"
        return report

    descriptor = _descriptor_for(canonical, catalog) or _neutral_descriptor(canonical)
    if plan.deployment.t_unit_policy == T_UNIT_MEASURED:
        t_unit = max(result.meter.wall_time_seconds, 1e-9) / 3600.0
    else:
        t_unit = plan.deployment.t_unit_hours
    inputs = EmissionInputs(num_particles=config.swarm_size,
                            num_iterations=iterations,
                            factors=descriptor.factors,
                            unit_time_hours=t_unit,
                            hardware=plan.deployment.hardware,
                            region=plan.deployment.region)
    report.emission_inputs = inputs
    report.emission = estimate_emissions(inputs)
    report.complexity_log = complexity_score(
        descriptor, config.swarm_size, iterations).log_score.ln_value
    return report


def run_experiment(plan: ExperimentPlan, workers: int = 1,
                   catalog: Sequence[AlgorithmDescriptor] | None = None
                   ) -> list[RunReport]:
    """Execute the plan; reports come back in plan order, errors included."""
    if catalog is None:
        catalog = load_reference_table()
    jobs = [replace(config, seed=plan.base_seed + rep)
            for config in plan.configs
            for rep in range(plan.repetitions)]
    if workers <= 1:
        return [_execute_one(cfg, plan, catalog) for cfg in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda cfg: _execute_one(cfg, plan, catalog), jobs))


# ---------------------------------------------------------------------------
# comparison


@dataclass
class ComparisonRow:
    algorithm: str
    runs: int
    errors: int
    mean_best_fitness: float | None
    median_best_fitness: float | None
    mean_iterations: float | None
    mean_evaluations: float | None
    mean_kg_co2_log: float | None
    mean_complexity_log: float | None
    percentage: float | None
    level: int | None = None


@dataclass
class ComparisonTable:
    function_name: str
    mode: NormalizationMode
    rows: list[ComparisonRow]


@dataclass(frozen=True)
class _RunRecord:
    algorithm: str
    function_name: str
    failed: bool
    best_fitness: float | None
    iterations: int | None
    evaluations: int | None
    kg_co2_log: float | None
    complexity_log: float | None


def _record_from_report(report: RunReport) -> _RunRecord:
    emission_log = None
    if report.emission is not None and report.emission.kg_co2_log is not None:
        emission_log = report.emission.kg_co2_log.ln_value
    meter = report.meter
    return _RunRecord(
        algorithm=report.algorithm, function_name=report.function_name,
        failed=report.error is not None, best_fitness=report.best_fitness,
        iterations=None if meter is None else meter.iterations_used,
        evaluations=None if meter is None else meter.evaluations_used,
        kg_co2_log=emission_log, complexity_log=report.complexity_log)


def _record_from_dict(report: dict, function_name: str) -> _RunRecord:
    emission = report.get("emission") or {}
    return _RunRecord(
        algorithm=report["algorithm"],
        function_name=report.get("function", function_name),
        failed=report.get("error") is not None,
        best_fitness=report.get("best_fitness"),
        iterations=report.get("iterations_used"),
        evaluations=report.get("evaluations_used"),
        kg_co2_log=emission.get("kg_co2_log"),
        complexity_log=report.get("complexity_log"))


def _aggregate(records: Sequence[_RunRecord],
               mode: NormalizationMode) -> ComparisonTable:
    if not records:
        raise ValidationError("cannot compare an empty report list")
    functions = {r.function_name for r in records}
    if len(functions) > 1:
        raise ValidationError(
            f"refusing to compare mixed objectives: {sorted(functions)}")

    grouped: dict[str, list[_RunRecord]] = {}
    for record in records:
        grouped.setdefault(record.algorithm, []).append(record)

    rows = []
    scorable: list[tuple[int, ComplexityScore]] = []
    for algorithm, bucket in sorted(grouped.items()):
        ok = [r for r in bucket if not r.failed]
        errors = len(bucket) - len(ok)
        if not ok:
            rows.append(ComparisonRow(algorithm, len(bucket), errors, None, None,
                                      None, None, None, None, None))
            continue
        mean_best = sum(r.best_fitness for r in ok) / len(ok)
        median_best = statistics.median(r.best_fitness for r in ok)
        mean_iter = sum(r.iterations for r in ok) / len(ok)
        mean_eval = sum(r.evaluations for r in ok) / len(ok)
        co2_logs = [r.kg_co2_log for r in ok if r.kg_co2_log is not None]
        mean_co2 = sum(co2_logs) / len(co2_logs) if co2_logs else None
        complexity_logs = [r.complexity_log for r in ok
                           if r.complexity_log is not None]
        mean_complexity = (sum(complexity_logs) / len(complexity_logs)
                           if complexity_logs else None)
        row = ComparisonRow(algorithm, len(bucket), errors, mean_best,
                            median_best, mean_iter, mean_eval, mean_co2,
                            mean_complexity, None)
        rows.append(row)
        if mean_complexity is not None:
            scorable.append((len(rows) - 1,
                             ComplexityScore(algorithm, LogMagnitude(mean_complexity))))

    if scorable:
        normalized = normalize_to_percentages([s for _, s in scorable], mode)
        for (row_index, _), score in zip(scorable, normalized):
            rows[row_index].percentage = score.percentage
            rows[row_index].level = score.level
    return ComparisonTable(function_name=next(iter(functions)), mode=mode,
                           rows=rows)


def compare_algorithms(reports: Sequence[RunReport],
                       mode: NormalizationMode = NormalizationMode.PROPORTIONAL
                       ) -> ComparisonTable:
    """Aggregate reports per algorithm and attach normalized percentages."""
    return _aggregate([_record_from_report(r) for r in reports], mode)


def comparison_from_run_document(doc: dict,
                                 mode: NormalizationMode = NormalizationMode.PROPORTIONAL
                                 ) -> ComparisonTable:
    """Same aggregation, starting from a previously serialized run document."""
    function_name = (doc.get("plan") or {}).get("function", "?")
    records = [_record_from_dict(r, function_name)
               for r in doc.get("reports", [])]
    return _aggregate(records, mode)
