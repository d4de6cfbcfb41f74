"""The optimization run loop: seeding, metering, stopping, bookkeeping.

A run is a pure function of (config, space, objective, seed): particle
randomness comes from counter-based substreams keyed by (seed, particle
index) so topology choices never perturb the draws of unrelated particles,
and the global-best reduction is deterministic (lowest fitness, ties to the
lowest particle index).  Wall-clock fields are the only nondeterministic
outputs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..catalog import TopologyKind, informant_sets
from .algorithms import make_algorithm
from .boundary import resolve as resolve_boundary
from .types import OptimizeResult, Particle, RunMeter, SearchSpace, SwarmConfig

_SWARM_STREAM = 1 << 63  # keyed far above any particle index

Objective = Callable[[np.ndarray], float]


@dataclass
class EngineHooks:
    """Optional instrumentation callbacks.

    ``social_attractor(generation, index, informants, chosen)`` fires when a
    PSO particle picks its social leader, letting tests check that leaders
    always come from the informant set.
    """

    social_attractor: Callable[[int, int, Sequence[int], int], None] | None = None


class _RunContext:
    def __init__(self, config: SwarmConfig, space: SearchSpace,
                 objective: Objective, hooks: EngineHooks | None):
        self.config = config
        self.space = space
        self.hooks = hooks
        self._objective = objective
        self.evaluations = 0

        seed = config.seed & 0xFFFFFFFFFFFFFFFF
        self._particle_rngs = [
            np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, i))))
            for i in range(config.swarm_size)
        ]
        self.swarm_rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence((seed, _SWARM_STREAM))))

        self.particles: list[Particle] = []
        self.best_index = 0
        self.best_position = np.zeros(space.dimension)
        self.best_fitness = math.inf

        self._informant_epoch = -1
        self._informants: list[tuple[int, ...]] = []
        self._refresh_informants(generation=0)

    # -- randomness ------------------------------------------------------

    def rng(self, index: int) -> np.random.Generator:
        return self._particle_rngs[index]

    # -- topology --------------------------------------------------------

    def _refresh_informants(self, generation: int) -> None:
        topology = self.config.topology
        if topology.kind is TopologyKind.DYNAMIC:
            epoch = generation // topology.rewire_period
        else:
            epoch = 0
        if epoch == self._informant_epoch:
            return
        self._informant_epoch = epoch
        sets = informant_sets(topology, self.config.swarm_size,
                              self.config.seed, generation)
        self._informants = [tuple(sorted(s)) for s in sets]

    def informants(self, index: int) -> tuple[int, ...]:
        return self._informants[index]

    def best_informant(self, index: int) -> int:
        best = index
        best_fitness = self.particles[index].best_fitness
        for j in self._informants[index]:
            fitness = self.particles[j].best_fitness
            if fitness < best_fitness or (fitness == best_fitness and j < best):
                best = j
                best_fitness = fitness
        return best

    def emit_social_attractor(self, generation, index, informants, chosen):
        if self.hooks is not None and self.hooks.social_attractor is not None:
            self.hooks.social_attractor(generation, index, informants, chosen)

    # -- evaluation and bookkeeping ---------------------------------------

    def _call_objective(self, position: np.ndarray) -> float:
        self.evaluations += 1
        value = float(self._objective(position))
        return value if math.isfinite(value) else math.inf

    def evaluate_candidate(self, index: int, position: np.ndarray,
                           velocity: np.ndarray | None = None):
        """Boundary-handle and evaluate a candidate without adopting it.

        Personal and global bests still update: the particle has paid for
        the evaluation, so the information is kept either way.
        """
        position = np.asarray(position, dtype=float).copy()
        if velocity is None:
            velocity = np.zeros(self.space.dimension)
        else:
            velocity = np.asarray(velocity, dtype=float).copy()
        position, velocity, feasible = resolve_boundary(
            self.config.boundary, position, velocity, self.space, self.rng(index))
        fitness = self._call_objective(position) if feasible else math.inf

        particle = self.particles[index]
        if feasible and fitness < particle.best_fitness:
            particle.best_fitness = fitness
            particle.best_position = position.copy()
        if feasible and fitness < self.best_fitness:
            self.best_fitness = fitness
            self.best_position = position.copy()
            self.best_index = index
        return position, velocity, feasible, fitness

    def commit(self, index, position, velocity, feasible, fitness):
        particle = self.particles[index]
        particle.position = position
        particle.velocity = velocity
        particle.feasible = feasible
        particle.fitness = fitness

    def move(self, index: int, position: np.ndarray,
             velocity: np.ndarray | None = None) -> float:
        out = self.evaluate_candidate(index, position, velocity)
        self.commit(index, *out)
        return out[3]

    # -- convergence measures ---------------------------------------------

    def population_radius(self) -> float:
        stack = np.stack([p.position for p in self.particles])
        centroid = stack.mean(axis=0)
        return float(np.sqrt(((stack - centroid) ** 2).sum(axis=1)).max())

    def fitness_spread(self) -> float:
        finite = [p.fitness for p in self.particles if math.isfinite(p.fitness)]
        if not finite:
            return math.inf
        return max(finite) - min(finite)


def optimize(config: SwarmConfig, space: SearchSpace, objective: Objective,
             hooks: EngineHooks | None = None) -> OptimizeResult:
    """Run one seeded swarm optimization to its stopping criterion."""
    config.topology.validate_for(config.swarm_size)
    ctx = _RunContext(config, space, objective, hooks)
    algorithm = make_algorithm(config, space)  # validates name + hyperparameters

    start = time.perf_counter()
    dim = space.dimension
    for i in range(config.swarm_size):
        rng = ctx.rng(i)
        position = rng.uniform(space.lower, space.upper)
        particle = Particle(position=position, velocity=np.zeros(dim),
                            best_position=position.copy(), best_fitness=math.inf,
                            fitness=math.inf, feasible=True)
        ctx.particles.append(particle)
        fitness = ctx._call_objective(position)
        particle.fitness = fitness
        particle.best_fitness = fitness
        if fitness < ctx.best_fitness:
            ctx.best_fitness = fitness
            ctx.best_position = position.copy()
            ctx.best_index = i
    if not math.isfinite(ctx.best_fitness):
        # nothing finite yet: lowest-index tie-break still names a real point
        ctx.best_position = ctx.particles[0].position.copy()

    algorithm.prepare(ctx)

    stopping = config.stopping
    trace: list[float] = []
    last_improvement = time.perf_counter()
    stop_reason = _check_stop(ctx, stopping, generation=0, start=start,
                              last_improvement=last_improvement)

    generation = 0
    while stop_reason is None:
        generation += 1
        ctx._refresh_informants(generation)
        previous_best = ctx.best_fitness
        algorithm.step(ctx, generation)
        trace.append(ctx.best_fitness)
        if ctx.best_fitness < previous_best:
            last_improvement = time.perf_counter()
        stop_reason = _check_stop(ctx, stopping, generation, start, last_improvement)

    meter = RunMeter(iterations_used=len(trace),
                     evaluations_used=ctx.evaluations,
                     wall_time_seconds=time.perf_counter() - start,
                     best_fitness_trace=trace,
                     stop_reason=stop_reason)
    return OptimizeResult(best_position=ctx.best_position.copy(),
                          best_fitness=ctx.best_fitness, meter=meter)


def _check_stop(ctx, stopping, generation, start, last_improvement) -> str | None:
    if (stopping.max_generations is not None
            and generation >= stopping.max_generations):
        return "max_generations"
    if (stopping.target_best_fitness is not None
            and ctx.best_fitness <= stopping.target_best_fitness):
        return "target_best_fitness"
    now = time.perf_counter()
    if (stopping.max_runtime_seconds is not None
            and now - start >= stopping.max_runtime_seconds):
        return "max_runtime"
    if (stopping.max_stall_seconds is not None
            and now - last_improvement >= stopping.max_stall_seconds):
        return "max_stall"
    if (stopping.population_convergence_radius is not None
            and ctx.population_radius() <= stopping.population_convergence_radius):
        return "population_convergence"
    if (stopping.fitness_convergence_epsilon is not None
            and ctx.fitness_spread() <= stopping.fitness_convergence_epsilon):
        return "fitness_convergence"
    return None
