"""Boundary-handling strategies for out-of-box particle positions.

Every handler except InvisibleWall returns an in-bounds position and marks
the particle feasible; InvisibleWall leaves the position untouched and
marks it infeasible so the engine charges +inf fitness without evaluating.

Semantics per kind:
  Absorb        clamp to the violated bound, zero that velocity component
  Reflect       mirror inside (2*bound - x), negate the velocity component,
                repeated until feasible
  Random        resample violated coordinates uniformly in [lo, hi]
  RandomHalf    resample uniformly between the violated bound and the
                domain midpoint
  Periodic      wrap by the domain width
  Exponential   re-enter at distance d from the violated bound with density
                proportional to exp(-d / (0.1 * width)), truncated to the box
  Mutation      Gaussian around the clamped point (sigma = 5% of width),
                up to 16 attempts then clamp
  Hyperbolic    reconstruct the pre-move point, rescale the velocity by
                dist/(dist + |v|) so the bound is approached asymptotically
  RandomDamping reflect, with the velocity scaled by -u, u ~ U[0, 1)
"""

from __future__ import annotations

import numpy as np

from ..catalog import BoundaryHandling
from .types import Particle, SearchSpace

_REFLECT_PASS_CAP = 64


def apply_boundary(handler: BoundaryHandling, particle: Particle,
                   space: SearchSpace, rng: np.random.Generator) -> Particle:
    """Resolve bound violations in place and set the feasibility flag."""
    position, velocity, feasible = resolve(
        handler, particle.position, particle.velocity, space, rng)
    particle.position = position
    particle.velocity = velocity
    particle.feasible = feasible
    return particle


def resolve(handler: BoundaryHandling, position: np.ndarray,
            velocity: np.ndarray, space: SearchSpace,
            rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, bool]:
    """Array-level form of :func:`apply_boundary`; mutates its inputs."""
    lo, hi = space.lower, space.upper

    # non-finite coordinates (runaway steps) are treated as hard violations
    bad = ~np.isfinite(position)
    if bad.any():
        position[bad] = np.where(velocity[bad] > 0, hi[bad] + 1.0, lo[bad] - 1.0)

    below = position < lo
    above = position > hi

    if handler is BoundaryHandling.INVISIBLE_WALL:
        return position, velocity, not (below.any() or above.any())

    if not (below.any() or above.any()):
        return position, velocity, True

    if handler is BoundaryHandling.ABSORB:
        np.clip(position, lo, hi, out=position)
        velocity[below | above] = 0.0

    elif handler is BoundaryHandling.REFLECT:
        _mirror(position, velocity, lo, hi, below, above)

    elif handler is BoundaryHandling.RANDOM:
        viol = below | above
        position[viol] = rng.uniform(lo[viol], hi[viol])

    elif handler is BoundaryHandling.RANDOM_HALF:
        mid = 0.5 * (lo + hi)
        position[above] = rng.uniform(mid[above], hi[above])
        position[below] = rng.uniform(lo[below], mid[below])

    elif handler is BoundaryHandling.PERIODIC:
        viol = below | above
        width = hi - lo
        position[viol] = lo[viol] + np.mod(position[viol] - lo[viol], width[viol])
        np.clip(position, lo, hi, out=position)

    elif handler is BoundaryHandling.EXPONENTIAL:
        width = hi - lo
        lam = 0.1 * width
        truncation = -np.expm1(-width / lam)
        for mask, inward in ((above, -1.0), (below, 1.0)):
            count = int(mask.sum())
            if count == 0:
                continue
            u = rng.random(count)
            depth = -lam[mask] * np.log1p(-u * truncation[mask])
            edge = hi[mask] if inward < 0 else lo[mask]
            position[mask] = edge + inward * depth

    elif handler is BoundaryHandling.MUTATION:
        sigma = 0.05 * (hi - lo)
        center = np.clip(position, lo, hi)
        for d in np.flatnonzero(below | above):
            for _ in range(16):
                candidate = center[d] + sigma[d] * rng.standard_normal()
                if lo[d] <= candidate <= hi[d]:
                    position[d] = candidate
                    break
            else:
                position[d] = center[d]

    elif handler is BoundaryHandling.HYPERBOLIC:
        origin = np.clip(position - velocity, lo, hi)
        speed = np.abs(velocity)
        dist = np.where(velocity > 0, hi - origin, origin - lo)
        scale = np.divide(dist, dist + speed,
                          out=np.ones_like(dist), where=speed > 0)
        velocity *= scale
        position[:] = origin + velocity
        np.clip(position, lo, hi, out=position)

    elif handler is BoundaryHandling.RANDOM_DAMPING:
        _mirror(position, velocity, lo, hi, below, above, damping_rng=rng)

    else:  # pragma: no cover - enum is closed
        raise AssertionError(f"unhandled boundary kind {handler}")

    return position, velocity, True


def _mirror(position, velocity, lo, hi, below, above, damping_rng=None):
    for _ in range(_REFLECT_PASS_CAP):
        viol = below | above
        if not viol.any():
            return
        position[below] = 2.0 * lo[below] - position[below]
        position[above] = 2.0 * hi[above] - position[above]
        if damping_rng is None:
            velocity[viol] = -velocity[viol]
        else:
            velocity[viol] = -velocity[viol] * damping_rng.random(int(viol.sum()))
        below = position < lo
        above = position > hi
    np.clip(position, lo, hi, out=position)  # pathological overshoot
