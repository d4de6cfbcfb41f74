"""Core data types for executable swarm runs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..catalog import BoundaryHandling, StoppingCriteria, Topology
from ..errors import ValidationError


@dataclass(frozen=True)
class SearchSpace:
    """A box-bounded real search domain."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.ndim != 1 or upper.shape != lower.shape or lower.size == 0:
            raise ValidationError("bounds must be two equal-length 1-d vectors")
        if not np.all(lower < upper):
            raise ValidationError("every lower bound must be < its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def cube(cls, dimension: int, lower: float, upper: float) -> "SearchSpace":
        if dimension < 1:
            raise ValidationError("dimension must be >= 1")
        return cls(np.full(dimension, float(lower)), np.full(dimension, float(upper)))

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower


@dataclass
class Particle:
    """One population member; algorithms without velocity keep it zero."""

    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray
    best_fitness: float
    fitness: float
    feasible: bool = True


@dataclass(frozen=True)
class SwarmConfig:
    """Everything needed to reproduce one optimization run bit-for-bit."""

    algorithm: str
    swarm_size: int
    topology: Topology
    boundary: BoundaryHandling
    stopping: StoppingCriteria
    hyperparameters: Mapping[str, float] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.swarm_size < 2:
            raise ValidationError(f"swarm_size must be >= 2, got {self.swarm_size}")
        if not -(2**63) <= self.seed < 2**64:
            raise ValidationError("seed must fit in 64 bits")


@dataclass
class RunMeter:
    """Resource accounting for one run.

    ``evaluations_used`` counts actual objective calls; infeasible particles
    (invisible wall) are charged +inf fitness without a call.
    """

    iterations_used: int
    evaluations_used: int
    wall_time_seconds: float
    best_fitness_trace: list[float]
    stop_reason: str


@dataclass
class OptimizeResult:
    best_position: np.ndarray
    best_fitness: float
    meter: RunMeter
