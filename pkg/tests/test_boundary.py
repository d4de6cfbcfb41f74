"""Boundary-handling contracts: spot values and feasibility sweeps."""

import math

import numpy as np
import pytest

from swarmprint.catalog import BoundaryHandling
from swarmprint.engine import Particle, SearchSpace, apply_boundary


def make_particle(position, velocity=None):
    position = np.asarray(position, dtype=float)
    velocity = (np.zeros_like(position) if velocity is None
                else np.asarray(velocity, dtype=float))
    return Particle(position=position, velocity=velocity,
                    best_position=position.copy(), best_fitness=math.inf,
                    fitness=math.inf)


@pytest.fixture
def space():
    return SearchSpace.cube(3, -5.0, 5.0)


def rng():
    return np.random.default_rng(7)


def test_absorb_clamps_and_zeroes_velocity(space):
    particle = make_particle([6.2, 0.0, -7.0], [1.0, 1.0, -2.0])
    out = apply_boundary(BoundaryHandling.ABSORB, particle, space, rng())
    assert out.position.tolist() == [5.0, 0.0, -5.0]
    assert out.velocity.tolist() == [0.0, 1.0, 0.0]
    assert out.feasible


def test_reflect_mirrors_and_negates_velocity(space):
    particle = make_particle([5.8, 1.0, -5.5], [2.0, 0.5, -1.0])
    out = apply_boundary(BoundaryHandling.REFLECT, particle, space, rng())
    assert out.position == pytest.approx([4.2, 1.0, -4.5])
    assert out.velocity.tolist() == [-2.0, 0.5, 1.0]


def test_periodic_wraps_by_domain_width(space):
    particle = make_particle([5.5, -5.1, 2.0])
    out = apply_boundary(BoundaryHandling.PERIODIC, particle, space, rng())
    assert out.position == pytest.approx([-4.5, 4.9, 2.0])


def test_invisible_wall_flags_infeasible(space):
    particle = make_particle([6.0, 0.0, 0.0])
    out = apply_boundary(BoundaryHandling.INVISIBLE_WALL, particle, space, rng())
    assert not out.feasible
    assert out.position[0] == 6.0  # untouched
    inside = make_particle([1.0, 0.0, 0.0])
    assert apply_boundary(BoundaryHandling.INVISIBLE_WALL, inside, space, rng()).feasible


def test_random_half_resamples_between_bound_and_midpoint(space):
    generator = rng()
    for _ in range(50):
        particle = make_particle([7.0, -9.0, 0.0])
        out = apply_boundary(BoundaryHandling.RANDOM_HALF, particle, space, generator)
        assert 0.0 <= out.position[0] <= 5.0
        assert -5.0 <= out.position[1] <= 0.0
        assert out.position[2] == 0.0


def test_hyperbolic_keeps_move_inside(space):
    # pre-move point 4.0, velocity 3.0: scaled step stays short of the bound
    particle = make_particle([7.0, 0.0, 0.0], [3.0, 0.0, 0.0])
    out = apply_boundary(BoundaryHandling.HYPERBOLIC, particle, space, rng())
    assert 4.0 < out.position[0] < 5.0
    assert out.velocity[0] < 3.0


def test_in_bounds_positions_pass_through_unchanged(space):
    for handler in BoundaryHandling:
        particle = make_particle([1.0, -2.0, 4.9], [0.3, 0.0, -0.1])
        out = apply_boundary(handler, particle, space, rng())
        assert out.feasible
        assert out.position.tolist() == [1.0, -2.0, 4.9]


def test_feasibility_sweep_over_random_violations():
    generator = np.random.default_rng(2024)
    space = SearchSpace(np.array([-5.0, 0.0, 10.0]), np.array([5.0, 2.0, 11.0]))
    width = space.upper - space.lower
    for handler in BoundaryHandling:
        for _ in range(300):
            offset = generator.uniform(-3.0, 3.0, 3) * width
            position = space.lower + generator.uniform(0, 1, 3) * width + offset
            velocity = generator.normal(0.0, 2.0, 3)
            particle = make_particle(position, velocity)
            violated = bool(np.any(position < space.lower)
                            or np.any(position > space.upper))
            out = apply_boundary(handler, particle, space, generator)
            if handler is BoundaryHandling.INVISIBLE_WALL:
                assert out.feasible == (not violated)
            else:
                assert out.feasible
                assert np.all(out.position >= space.lower)
                assert np.all(out.position <= space.upper)


def test_non_finite_positions_are_recovered(space):
    for handler in BoundaryHandling:
        if handler is BoundaryHandling.INVISIBLE_WALL:
            continue
        particle = make_particle([math.inf, -math.inf, math.nan], [1.0, -1.0, 0.0])
        out = apply_boundary(handler, particle, space, rng())
        assert np.all(np.isfinite(out.position))
        assert np.all(out.position >= space.lower)
        assert np.all(out.position <= space.upper)
