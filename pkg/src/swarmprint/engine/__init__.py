"""Executable swarm algorithms over a common metered population framework."""

from .algorithms import (SUPPORTED_ALGORITHMS, default_hyperparameters,
                         resolve_algorithm_name)
from .boundary import apply_boundary
from .core import EngineHooks, optimize
from .types import (OptimizeResult, Particle, RunMeter, SearchSpace,
                    SwarmConfig)

__all__ = [
    "SUPPORTED_ALGORITHMS",
    "default_hyperparameters",
    "resolve_algorithm_name",
    "apply_boundary",
    "EngineHooks",
    "optimize",
    "OptimizeResult",
    "Particle",
    "RunMeter",
    "SearchSpace",
    "SwarmConfig",
]
