"""CO2 emission estimation and complexity scoring for swarm runs.

The estimate is a pure product: hyperfactorial(particles) *
superfactorial(iterations) * the configured complexity factors * unit time
* hardware power * utilization * regional emission factor.  Everything is
evaluated in log domain first; an exact big-rational evaluation rides along
while the counts stay small enough to make it practical.

Complexity scores keep only the deployment-independent part of that product
(counts and factors), so algorithm comparisons do not depend on where the
computation would run.  Scores are normalized to percentages either
proportionally or by quantizing onto the shipped reference level grid
(integer levels 18..27 out of 343).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .catalog import (AlgorithmDescriptor, Category, FactorAssignment,
                      HardwareProfile, RegionProfile)
from .combinatorics import (LogMagnitude, hyperfactorial, log_hyperfactorial,
                            log_superfactorial, superfactorial)
from .errors import ValidationError

# level-grid constants observed in the shipped reference table
LEVEL_MIN = 18
LEVEL_MAX = 27
LEVEL_DENOMINATOR = 343

# exact big-rational evaluation is carried only while it stays cheap
EXACT_EVAL_LIMIT = 200

# canonical comparison point used when scoring catalog descriptors as-shipped
DEFAULT_TABLE_PARTICLES = 30
DEFAULT_TABLE_ITERATIONS = 100

_EXP_OVERFLOW = 709.0


class NormalizationMode(enum.Enum):
    PROPORTIONAL = "Proportional"
    LEVEL_GRID = "LevelGrid"


@dataclass(frozen=True)
class EmissionInputs:
    """Every quantity the emission product consumes."""

    num_particles: int
    num_iterations: int
    factors: FactorAssignment
    unit_time_hours: float
    hardware: HardwareProfile
    region: RegionProfile

    def __post_init__(self):
        if self.num_particles < 1:
            raise ValidationError("a swarm needs at least one particle")
        if self.num_iterations < 1:
            raise ValidationError("a run needs at least one iteration")
        if not (math.isfinite(self.unit_time_hours) and self.unit_time_hours > 0):
            raise ValidationError(
                f"unit_time_hours must be > 0, got {self.unit_time_hours!r}")


@dataclass(frozen=True)
class EmissionComponent:
    """One multiplicative term of the estimate, in log domain."""

    name: str
    ln: float | None
    zero: bool = False


@dataclass(frozen=True)
class EmissionEstimate:
    """Estimated kg CO2 with a per-term breakdown.

    ``kg_co2_log`` is None only for the zero-emission case (region factor
    0); ``kg_co2`` is the linear value when it fits a float; ``kg_co2_exact``
    is the big-rational product when the counts permit exact evaluation.
    """

    kg_co2_log: LogMagnitude | None
    kg_co2: float | None
    kg_co2_exact: Fraction | None
    zero_emission: bool
    components: tuple[EmissionComponent, ...]


@dataclass(frozen=True)
class ComplexityScore:
    algorithm_name: str
    log_score: LogMagnitude
    percentage: float | None = None
    level: int | None = None


@dataclass(frozen=True)
class CategorySummary:
    count: int
    mean: float | None
    min: float | None
    max: float | None


def _ln_sum(values: Iterable[float]) -> float:
    return math.fsum(math.log(v) for v in values)


def _algorithmic_components(factors: FactorAssignment, num_particles: int,
                            num_iterations: int) -> list[EmissionComponent]:
    return [
        EmissionComponent("hyperfactorial_particles",
                          log_hyperfactorial(num_particles).ln_value),
        EmissionComponent("superfactorial_iterations",
                          log_superfactorial(num_iterations).ln_value),
        EmissionComponent("hyperparameter_factors",
                          _ln_sum(factors.hyperparameter_factors)),
        EmissionComponent("topology_factors", _ln_sum(factors.topology_factors)),
        EmissionComponent("boundary_factors", _ln_sum(factors.boundary_factors)),
    ]


def estimate_emissions(inputs: EmissionInputs) -> EmissionEstimate:
    """Evaluate the full emission product for one configuration.

    A region factor of exactly 0 (fully renewable grid) is legal and yields
    a zero-emission estimate with the region term flagged instead of -inf.
    """
    components = _algorithmic_components(
        inputs.factors, inputs.num_particles, inputs.num_iterations)
    components.append(EmissionComponent("unit_time_hours",
                                        math.log(inputs.unit_time_hours)))
    components.append(EmissionComponent("hardware_power_kw",
                                        math.log(inputs.hardware.power_kw)))
    components.append(EmissionComponent("utilization",
                                        math.log(inputs.hardware.utilization)))

    zero = inputs.region.emission_factor == 0
    if zero:
        components.append(EmissionComponent("region_emission_factor", None, zero=True))
    else:
        components.append(EmissionComponent("region_emission_factor",
                                            math.log(inputs.region.emission_factor)))

    exact = _exact_product(inputs) if _exact_feasible(inputs) else None

    if zero:
        return EmissionEstimate(kg_co2_log=None, kg_co2=0.0, kg_co2_exact=exact,
                                zero_emission=True, components=tuple(components))

    # plain left-to-right accumulation so the breakdown re-sums bit-identically
    total = 0.0
    for component in components:
        total += component.ln
    linear = math.exp(total) if total <= _EXP_OVERFLOW else None
    return EmissionEstimate(kg_co2_log=LogMagnitude(total), kg_co2=linear,
                            kg_co2_exact=exact, zero_emission=False,
                            components=tuple(components))


def _exact_feasible(inputs: EmissionInputs) -> bool:
    return (inputs.num_particles <= EXACT_EVAL_LIMIT
            and inputs.num_iterations <= EXACT_EVAL_LIMIT)


def _exact_product(inputs: EmissionInputs) -> Fraction:
    out = Fraction(hyperfactorial(inputs.num_particles))
    out *= superfactorial(inputs.num_iterations)
    for group in (inputs.factors.hyperparameter_factors,
                  inputs.factors.topology_factors,
                  inputs.factors.boundary_factors):
        for factor in group:
            out *= Fraction(factor)
    out *= Fraction(inputs.unit_time_hours)
    out *= Fraction(inputs.hardware.power_kw)
    out *= Fraction(inputs.hardware.utilization)
    out *= Fraction(inputs.region.emission_factor)
    return out


def ln_fraction(value: Fraction) -> float:
    """ln of a positive rational of any magnitude."""
    if value <= 0:
        raise ValidationError("ln_fraction requires a positive rational")
    return math.log(value.numerator) - math.log(value.denominator)


def complexity_score(descriptor: AlgorithmDescriptor, num_particles: int,
                     num_iterations: int) -> ComplexityScore:
    """Deployment-independent complexity: counts and factors only."""
    if num_particles < 1:
        raise ValidationError("a swarm needs at least one particle")
    if num_iterations < 1:
        raise ValidationError("a run needs at least one iteration")
    components = _algorithmic_components(descriptor.factors, num_particles,
                                         num_iterations)
    total = 0.0
    for component in components:
        total += component.ln
    return ComplexityScore(descriptor.name, LogMagnitude(total))


def normalize_to_percentages(scores: Sequence[ComplexityScore],
                             mode: NormalizationMode) -> list[ComplexityScore]:
    """Set percentages on a batch of scores; output order mirrors input.

    Proportional mode assigns each score its share of the batch log-score
    total and requires all log scores to be strictly positive.  LevelGrid
    mode min-max maps log scores onto integer levels 18..27 (half-to-even
    rounding) and emits round(level * 100 / 343, 2); an all-equal batch
    falls back to the midpoint level.
    """
    if not scores:
        raise ValidationError("cannot normalize an empty batch of scores")
    lns = [s.log_score.ln_value for s in scores]
    if not all(math.isfinite(v) for v in lns):
        raise ValidationError("all log scores must be finite")

    if mode is NormalizationMode.PROPORTIONAL:
        if min(lns) <= 0:
            raise ValidationError(
                "proportional normalization requires strictly positive log scores")
        total = math.fsum(lns)
        return [replace(s, percentage=100.0 * v / total, level=None)
                for s, v in zip(scores, lns)]

    lo, hi = min(lns), max(lns)
    span = hi - lo
    out = []
    for s, v in zip(scores, lns):
        if span == 0:
            level = round((LEVEL_MIN + LEVEL_MAX) / 2)
        else:
            level = round(LEVEL_MIN + (v - lo) * (LEVEL_MAX - LEVEL_MIN) / span)
        pct = round(level * 100 / LEVEL_DENOMINATOR, 2)
        out.append(replace(s, percentage=pct, level=level))
    return out


def category_summary(scores: Sequence[ComplexityScore],
                     catalog: Sequence[AlgorithmDescriptor]
                     ) -> dict[Category, CategorySummary]:
    """Per-category count/mean/min/max of normalized percentages."""
    by_name = {d.name: d for d in catalog}
    buckets: dict[Category, list[float]] = {c: [] for c in Category}
    for score in scores:
        descriptor = by_name.get(score.algorithm_name)
        if descriptor is None:
            raise ValidationError(
                f"algorithm {score.algorithm_name!r} is not in the catalog")
        if score.percentage is None:
            raise ValidationError(
                f"score for {score.algorithm_name!r} has no percentage; "
                "normalize the batch first")
        buckets[descriptor.category].append(score.percentage)
    out = {}
    for category, values in buckets.items():
        if values:
            out[category] = CategorySummary(len(values), sum(values) / len(values),
                                            min(values), max(values))
        else:
            out[category] = CategorySummary(0, None, None, None)
    return out


def reference_percentages(catalog: Sequence[AlgorithmDescriptor],
                          num_particles: int = DEFAULT_TABLE_PARTICLES,
                          num_iterations: int = DEFAULT_TABLE_ITERATIONS
                          ) -> list[ComplexityScore]:
    """Score the shipped descriptors at a common point and grid-normalize.

    With identical counts across the batch the count terms cancel in the
    min-max mapping, so the emitted column depends only on the shipped
    factor assignments.
    """
    scores = [complexity_score(d, num_particles, num_iterations) for d in catalog]
    return normalize_to_percentages(scores, NormalizationMode.LEVEL_GRID)
