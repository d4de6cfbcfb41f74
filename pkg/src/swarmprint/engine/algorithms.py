"""Update rules for the eight executable swarm algorithms.

Each class advances the population by one generation through the run
context, which owns boundary handling, evaluation accounting and the
personal/global best bookkeeping.  Hyperparameters resolve from the
per-algorithm table below with documented ranges; unknown names and
out-of-range values are rejected before iteration 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import UnsupportedAlgorithmError, ValidationError

_FALLBACK_HORIZON = 500  # schedule length when no generation cap is set


@dataclass(frozen=True)
class HyperSpec:
    default: float | None
    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def check(self, name: str, value: float) -> float:
        value = float(value)
        low_ok = value > self.lo if self.lo_open else value >= self.lo
        high_ok = value < self.hi if self.hi_open else value <= self.hi
        if not (math.isfinite(value) and low_ok and high_ok):
            lo_b = "(" if self.lo_open else "["
            hi_b = ")" if self.hi_open else "]"
            raise ValidationError(
                f"hyperparameter {name}={value!r} outside {lo_b}{self.lo}, "
                f"{self.hi}{hi_b}")
        return value


class _AlgorithmBase:
    name = "?"
    HYPERS: dict[str, HyperSpec] = {}

    def __init__(self, config, space):
        self.space = space
        params = {}
        for key, spec in self.HYPERS.items():
            if spec.default is not None:
                params[key] = spec.default
        for key, value in config.hyperparameters.items():
            spec = self.HYPERS.get(key)
            if spec is None:
                known = ", ".join(sorted(self.HYPERS)) or "none"
                raise ValidationError(
                    f"{self.name} has no hyperparameter {key!r} (known: {known})")
            params[key] = spec.check(key, value)
        self.params = params
        self._validate(config)

    def _validate(self, config):
        pass

    def prepare(self, ctx):
        pass

    def step(self, ctx, generation: int):
        raise NotImplementedError

    def _horizon(self, config) -> int:
        if config.stopping.max_generations is not None:
            return config.stopping.max_generations
        return _FALLBACK_HORIZON


class Pso(_AlgorithmBase):
    """Inertia-weighted velocity update with informant-set social pull."""

    name = "PSO"
    HYPERS = {
        "inertia_weight": HyperSpec(0.729, 0.0, 2.0, hi_open=True),
        "cognitive_coefficient": HyperSpec(1.49445, 0.0, 4.0),
        "social_coefficient": HyperSpec(1.49445, 0.0, 4.0),
    }

    def step(self, ctx, generation):
        w = self.params["inertia_weight"]
        c1 = self.params["cognitive_coefficient"]
        c2 = self.params["social_coefficient"]
        dim = ctx.space.dimension
        for i, particle in enumerate(ctx.particles):
            rng = ctx.rng(i)
            informants = ctx.informants(i)
            leader = ctx.best_informant(i)
            ctx.emit_social_attractor(generation, i, informants, leader)
            social = ctx.particles[leader].best_position
            r1 = rng.random(dim)
            r2 = rng.random(dim)
            velocity = (w * particle.velocity
                        + c1 * r1 * (particle.best_position - particle.position)
                        + c2 * r2 * (social - particle.position))
            ctx.move(i, particle.position + velocity, velocity)


class AcceleratedPso(_AlgorithmBase):
    """Velocity-free variant: blend toward the global best plus a decaying
    random walk."""

    name = "AcceleratedPSO"
    HYPERS = {
        "attraction": HyperSpec(0.5, 0.0, 1.0, lo_open=True),
        "step_scale": HyperSpec(0.3, 0.0, 2.0, lo_open=True),
        "step_decay": HyperSpec(0.97, 0.0, 1.0, lo_open=True),
    }

    def step(self, ctx, generation):
        beta = self.params["attraction"]
        alpha = self.params["step_scale"] * self.params["step_decay"] ** (generation - 1)
        width = ctx.space.width
        best = ctx.best_position
        for i, particle in enumerate(ctx.particles):
            rng = ctx.rng(i)
            position = ((1.0 - beta) * particle.position + beta * best
                        + alpha * width * rng.standard_normal(ctx.space.dimension))
            ctx.move(i, position)


class Firefly(_AlgorithmBase):
    """Brighter informants attract with distance-decayed pull; every move
    carries a decaying random component."""

    name = "Firefly"
    HYPERS = {
        "base_attraction": HyperSpec(1.0, 0.0, 2.0, lo_open=True),
        "light_absorption": HyperSpec(1.0, 0.0, 100.0, lo_open=True),
        "random_step": HyperSpec(0.25, 0.0, 1.0),
        "step_decay": HyperSpec(0.97, 0.0, 1.0, lo_open=True),
    }

    def step(self, ctx, generation):
        beta0 = self.params["base_attraction"]
        gamma = self.params["light_absorption"]
        alpha = self.params["random_step"] * self.params["step_decay"] ** (generation - 1)
        width = ctx.space.width
        dim = ctx.space.dimension
        snapshot_pos = [p.position.copy() for p in ctx.particles]
        snapshot_fit = [p.fitness for p in ctx.particles]
        for i in range(len(ctx.particles)):
            rng = ctx.rng(i)
            position = snapshot_pos[i].copy()
            moved = False
            for j in sorted(ctx.informants(i)):
                if snapshot_fit[j] >= snapshot_fit[i] or j == i:
                    continue
                gap = (position - snapshot_pos[j]) / width
                pull = beta0 * math.exp(-gamma * float(gap @ gap))
                position += (pull * (snapshot_pos[j] - position)
                             + alpha * width * (rng.random(dim) - 0.5))
                moved = True
            if not moved:
                position += alpha * width * (rng.random(dim) - 0.5)
            ctx.move(i, position)


class CuckooSearch(_AlgorithmBase):
    """Levy-flight proposals around the best nest plus random abandonment."""

    name = "CuckooSearch"
    HYPERS = {
        "step_scale": HyperSpec(0.01, 0.0, 10.0, lo_open=True),
        "levy_exponent": HyperSpec(1.5, 1.0, 2.0, lo_open=True),
        "abandon_probability": HyperSpec(0.25, 0.0, 1.0, hi_open=True),
    }

    def __init__(self, config, space):
        super().__init__(config, space)
        lam = self.params["levy_exponent"]
        # Mantegna step-length prescription
        self._sigma = (math.gamma(1 + lam) * math.sin(math.pi * lam / 2)
                       / (math.gamma((1 + lam) / 2) * lam * 2 ** ((lam - 1) / 2))
                       ) ** (1 / lam)

    def step(self, ctx, generation):
        scale = self.params["step_scale"]
        lam = self.params["levy_exponent"]
        pa = self.params["abandon_probability"]
        dim = ctx.space.dimension

        for i, particle in enumerate(ctx.particles):
            rng = ctx.rng(i)
            u = rng.normal(0.0, self._sigma, dim)
            v = rng.standard_normal(dim)
            levy = u / np.maximum(np.abs(v), 1e-12) ** (1 / lam)
            drift = scale * levy * (particle.position - ctx.best_position)
            candidate = particle.position + drift * rng.standard_normal(dim)
            pos, vel, feasible, fitness = ctx.evaluate_candidate(i, candidate)
            if fitness <= particle.fitness:
                ctx.commit(i, pos, vel, feasible, fitness)

        snapshot = [p.position.copy() for p in ctx.particles]
        n = len(snapshot)
        perm_a = ctx.swarm_rng.permutation(n)
        perm_b = ctx.swarm_rng.permutation(n)
        for i, particle in enumerate(ctx.particles):
            rng = ctx.rng(i)
            if rng.random() >= pa:
                continue
            walk = rng.random() * (snapshot[perm_a[i]] - snapshot[perm_b[i]])
            pos, vel, feasible, fitness = ctx.evaluate_candidate(
                i, particle.position + walk)
            if fitness <= particle.fitness:
                ctx.commit(i, pos, vel, feasible, fitness)


class WhaleOptimization(_AlgorithmBase):
    """Shrinking encirclement of the best whale with spiral exploitation."""

    name = "WOA"
    HYPERS = {
        "spiral_constant": HyperSpec(1.0, 0.0, 10.0, lo_open=True),
        "horizon": HyperSpec(None, 1.0, 1e9),
    }

    def __init__(self, config, space):
        super().__init__(config, space)
        self.horizon = int(self.params.get("horizon") or self._horizon(config))

    def step(self, ctx, generation):
        b = self.params["spiral_constant"]
        a = 2.0 * max(0.0, 1.0 - (generation - 1) / self.horizon)
        dim = ctx.space.dimension
        n = len(ctx.particles)
        positions = np.stack([p.position for p in ctx.particles])
        best = ctx.best_position.copy()
        for i in range(n):
            rng = ctx.rng(i)
            x = positions[i]
            if rng.random() < 0.5:
                amp = 2.0 * a * rng.random(dim) - a
                pull = 2.0 * rng.random(dim)
                explore = np.abs(amp) >= 1.0
                partner_idx = rng.integers(0, n, dim)
                partner = positions[partner_idx, np.arange(dim)]
                anchor = np.where(explore, partner, best)
                candidate = anchor - amp * np.abs(pull * anchor - x)
            else:
                turns = rng.uniform(-1.0, 1.0, dim)
                candidate = (np.abs(best - x) * np.exp(b * turns)
                             * np.cos(2.0 * math.pi * turns) + best)
            ctx.move(i, candidate)


class ArtificialBeeColony(_AlgorithmBase):
    """Employed/onlooker/scout phases over one food source per particle."""

    name = "ABC"
    HYPERS = {
        "trial_limit": HyperSpec(None, 1.0, 1e9),
    }

    def __init__(self, config, space):
        super().__init__(config, space)
        limit = self.params.get("trial_limit")
        if limit is None:
            limit = max(10, config.swarm_size * space.dimension // 2)
        self.trial_limit = int(limit)

    def prepare(self, ctx):
        self.trials = [0] * len(ctx.particles)

    def _local_search(self, ctx, i, rng):
        particle = ctx.particles[i]
        n = len(ctx.particles)
        k = int(rng.integers(0, n - 1))
        if k >= i:
            k += 1
        d = int(rng.integers(0, ctx.space.dimension))
        phi = rng.uniform(-1.0, 1.0)
        candidate = particle.position.copy()
        candidate[d] += phi * (particle.position[d] - ctx.particles[k].position[d])
        pos, vel, feasible, fitness = ctx.evaluate_candidate(i, candidate)
        if fitness <= particle.fitness:
            ctx.commit(i, pos, vel, feasible, fitness)
            self.trials[i] = 0
        else:
            self.trials[i] += 1

    def step(self, ctx, generation):
        n = len(ctx.particles)
        for i in range(n):
            self._local_search(ctx, i, ctx.rng(i))

        # onlookers pick sources by relative quality
        quality = np.array([1.0 / (1.0 + p.fitness) if p.fitness >= 0
                            else 1.0 + abs(p.fitness) for p in ctx.particles])
        quality[~np.isfinite(quality)] = 0.0
        total = quality.sum()
        probs = quality / total if total > 0 else np.full(n, 1.0 / n)
        for _ in range(n):
            i = int(ctx.swarm_rng.choice(n, p=probs))
            self._local_search(ctx, i, ctx.swarm_rng)

        worst = max(range(n), key=lambda i: self.trials[i])
        if self.trials[worst] > self.trial_limit:
            rng = ctx.rng(worst)
            fresh = rng.uniform(ctx.space.lower, ctx.space.upper)
            ctx.move(worst, fresh)
            self.trials[worst] = 0


class BatAlgorithm(_AlgorithmBase):
    """Frequency-tuned velocities with loudness/pulse-rate acceptance."""

    name = "Bat"
    HYPERS = {
        "frequency_min": HyperSpec(0.0, 0.0, 10.0),
        "frequency_max": HyperSpec(2.0, 0.0, 10.0, lo_open=True),
        "initial_loudness": HyperSpec(0.5, 0.0, 2.0, lo_open=True),
        "initial_pulse_rate": HyperSpec(0.5, 0.0, 1.0),
        "loudness_decay": HyperSpec(0.9, 0.0, 1.0, lo_open=True, hi_open=True),
        "pulse_growth": HyperSpec(0.9, 0.0, 10.0, lo_open=True),
        "local_step": HyperSpec(0.01, 0.0, 1.0, lo_open=True),
    }

    def _validate(self, config):
        if self.params["frequency_min"] >= self.params["frequency_max"]:
            raise ValidationError("frequency_min must be < frequency_max")

    def prepare(self, ctx):
        n = len(ctx.particles)
        self.loudness = [self.params["initial_loudness"]] * n
        self.pulse_rate = [self.params["initial_pulse_rate"]] * n

    def step(self, ctx, generation):
        fmin = self.params["frequency_min"]
        fmax = self.params["frequency_max"]
        alpha = self.params["loudness_decay"]
        gamma = self.params["pulse_growth"]
        local = self.params["local_step"]
        r0 = self.params["initial_pulse_rate"]
        width = ctx.space.width
        dim = ctx.space.dimension
        best = ctx.best_position.copy()
        mean_loudness = sum(self.loudness) / len(self.loudness)
        for i, particle in enumerate(ctx.particles):
            rng = ctx.rng(i)
            frequency = fmin + (fmax - fmin) * rng.random()
            velocity = particle.velocity + (particle.position - best) * frequency
            candidate = particle.position + velocity
            if rng.random() > self.pulse_rate[i]:
                candidate = best + local * mean_loudness * width * rng.standard_normal(dim)
            pos, vel, feasible, fitness = ctx.evaluate_candidate(i, candidate, velocity)
            if rng.random() < self.loudness[i] and fitness <= particle.fitness:
                ctx.commit(i, pos, vel, feasible, fitness)
                self.loudness[i] *= alpha
                self.pulse_rate[i] = r0 * (1.0 - math.exp(-gamma * generation))
            else:
                particle.velocity = vel


class GreyWolfOptimizer(_AlgorithmBase):
    """Positions follow the mean of three leader-encircling moves.

    The encircling coefficients are drawn once per generation and shared by
    the whole pack, so a fully collapsed pack stays collapsed.
    """

    name = "GWO"
    HYPERS = {
        "horizon": HyperSpec(None, 1.0, 1e9),
    }

    def __init__(self, config, space):
        super().__init__(config, space)
        self.horizon = int(self.params.get("horizon") or self._horizon(config))

    def step(self, ctx, generation):
        a = 2.0 * max(0.0, 1.0 - (generation - 1) / self.horizon)
        dim = ctx.space.dimension
        order = sorted(range(len(ctx.particles)),
                       key=lambda i: (ctx.particles[i].fitness, i))
        leaders = [ctx.particles[order[min(k, len(order) - 1)]].position.copy()
                   for k in range(3)]
        rng = ctx.swarm_rng
        coefficients = []
        for _ in range(3):
            amp = 2.0 * a * rng.random(dim) - a
            pull = 2.0 * rng.random(dim)
            coefficients.append((amp, pull))
        for i, particle in enumerate(ctx.particles):
            x = particle.position
            guided = [leader - amp * np.abs(pull * leader - x)
                      for leader, (amp, pull) in zip(leaders, coefficients)]
            ctx.move(i, (guided[0] + guided[1] + guided[2]) / 3.0)


_REGISTRY = {
    cls.name: cls
    for cls in (Pso, AcceleratedPso, Firefly, CuckooSearch, WhaleOptimization,
                ArtificialBeeColony, BatAlgorithm, GreyWolfOptimizer)
}

# catalog display names accepted as aliases
_ALIASES = {
    "Accelerated PSO": "AcceleratedPSO",
    "FA": "Firefly",
    "Cuckoo Search": "CuckooSearch",
    "Bat Algorithm": "Bat",
    "Wolf Search": "GWO",
}

SUPPORTED_ALGORITHMS = tuple(_REGISTRY)


def resolve_algorithm_name(name: str) -> str:
    canonical = _ALIASES.get(name, name)
    if canonical not in _REGISTRY:
        raise UnsupportedAlgorithmError(
            f"algorithm {name!r} has no executable implementation; "
            f"supported: {', '.join(SUPPORTED_ALGORITHMS)}")
    return canonical


def make_algorithm(config, space) -> _AlgorithmBase:
    return _REGISTRY[resolve_algorithm_name(config.algorithm)](config, space)


def default_hyperparameters(name: str) -> dict[str, float | None]:
    cls = _REGISTRY[resolve_algorithm_name(name)]
    return {key: spec.default for key, spec in cls.HYPERS.items()}
