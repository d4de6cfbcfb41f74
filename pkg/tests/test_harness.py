"""Experiment plans, metered reports, emission echo, and comparisons."""

import math

import numpy as np
import pytest

from swarmprint.catalog import (BoundaryHandling, HardwareProfile,
                                RegionProfile, StoppingCriteria, Topology,
                                TopologyKind)
from swarmprint.emissions import NormalizationMode, estimate_emissions
from swarmprint.engine import SwarmConfig
from swarmprint.errors import ValidationError
from swarmprint.harness import (Deployment, ExperimentPlan,
                                comparison_from_run_document,
                                compare_algorithms, make_test_function,
                                run_experiment)
from swarmprint.serialize import run_document


def make_config(algorithm="PSO", generations=15, swarm=10):
    return SwarmConfig(algorithm=algorithm, swarm_size=swarm,
                       topology=Topology(TopologyKind.GLOBAL),
                       boundary=BoundaryHandling.REFLECT,
                       stopping=StoppingCriteria(max_generations=generations))


def make_plan(configs, repetitions=1, base_seed=100, function=None,
              deployment=None):
    return ExperimentPlan(configs=tuple(configs),
                          function=function or make_test_function("Sphere", 5,
                                                                  -5, 5),
                          repetitions=repetitions, base_seed=base_seed,
                          deployment=deployment or Deployment())


# --------------------------------------------------------------------------
# test functions


@pytest.mark.parametrize("name", ["Sphere", "Rastrigin", "Ackley", "Griewank"])
def test_optimum_at_origin(name):
    function = make_test_function(name, 7)
    assert function(function.known_optimum_position) == pytest.approx(
        function.known_optimum_fitness, abs=1e-12)


def test_rosenbrock_optimum_at_ones():
    function = make_test_function("Rosenbrock", 6)
    assert np.all(function.known_optimum_position == 1.0)
    assert function(function.known_optimum_position) == pytest.approx(0.0, abs=1e-12)


def test_test_function_spot_values():
    sphere = make_test_function("Sphere", 3)
    assert sphere(np.array([1.0, 2.0, 2.0])) == pytest.approx(9.0, rel=1e-12)
    rastrigin = make_test_function("Rastrigin", 2)
    assert rastrigin(np.array([0.5, 0.5])) == pytest.approx(
        20.5 + 20.0, rel=1e-12)  # cos(pi) terms contribute +10 each
    griewank = make_test_function("Griewank", 1)
    assert griewank(np.array([math.pi])) > 0.0


def test_unknown_function_rejected():
    with pytest.raises(ValidationError):
        make_test_function("Schwefel", 3)


# --------------------------------------------------------------------------
# run_experiment


def test_seed_derivation_one_config_three_repetitions():
    reports = run_experiment(make_plan([make_config()], repetitions=3))
    assert [r.seed for r in reports] == [100, 101, 102]
    assert all(r.error is None for r in reports)


def test_report_count_preserved_with_error_markers():
    plan = make_plan([make_config(), make_config("Krill Herd")], repetitions=2)
    reports = run_experiment(plan)
    assert len(reports) == 4
    failed = [r for r in reports if r.error is not None]
    assert len(failed) == 2
    assert all(r.error == "unsupported-algorithm" for r in failed)
    assert all(r.algorithm == "Krill Herd" for r in failed)


def test_emission_echo_recomputes_bit_identically():
    deployment = Deployment(t_unit_policy="fixed", t_unit_hours=72.0,
                            hardware=HardwareProfile(0.3, 1.0),
                            region=RegionProfile("MID", 0.4))
    reports = run_experiment(make_plan([make_config()], deployment=deployment))
    report = reports[0]
    assert report.emission_inputs.num_particles == report.config.swarm_size
    assert (report.emission_inputs.num_iterations
            == report.meter.iterations_used)
    recomputed = estimate_emissions(report.emission_inputs)
    assert recomputed.kg_co2_log.ln_value == report.emission.kg_co2_log.ln_value


def test_fixed_deployment_scalar_part_is_8_64():
    deployment = Deployment(t_unit_policy="fixed", t_unit_hours=72.0,
                            hardware=HardwareProfile(0.3, 1.0),
                            region=RegionProfile("MID", 0.4))
    reports = run_experiment(make_plan([make_config()], repetitions=2,
                                       deployment=deployment))
    for report in reports:
        scalar_ln = report.emission.kg_co2_log.ln_value - report.complexity_log
        assert math.exp(scalar_ln) == pytest.approx(72.0 * 0.3 * 1.0 * 0.4,
                                                    rel=1e-9)


def test_measured_t_unit_uses_wall_time():
    deployment = Deployment(t_unit_policy="measured")
    reports = run_experiment(make_plan([make_config()], deployment=deployment))
    report = reports[0]
    assert report.emission_inputs.unit_time_hours == pytest.approx(
        report.meter.wall_time_seconds / 3600.0, rel=1e-6)


def test_workers_do_not_change_results():
    plan = make_plan([make_config(), make_config("Bat")], repetitions=2)
    sequential = run_experiment(plan, workers=1)
    threaded = run_experiment(plan, workers=4)
    for a, b in zip(sequential, threaded):
        assert a.algorithm == b.algorithm and a.seed == b.seed
        assert a.meter.best_fitness_trace == b.meter.best_fitness_trace
        assert a.best_fitness == b.best_fitness


def test_zero_emission_region_flows_through():
    deployment = Deployment(region=RegionProfile("GREEN", 0.0))
    reports = run_experiment(make_plan([make_config()], deployment=deployment))
    assert reports[0].emission.zero_emission
    assert reports[0].emission.kg_co2 == 0.0


# --------------------------------------------------------------------------
# comparison


def test_single_algorithm_gets_full_share():
    reports = run_experiment(make_plan([make_config()], repetitions=2))
    table = compare_algorithms(reports)
    assert len(table.rows) == 1
    assert table.rows[0].percentage == pytest.approx(100.0)


def test_comparison_reports_mean_and_median():
    reports = run_experiment(make_plan([make_config()], repetitions=3))
    row = compare_algorithms(reports).rows[0]
    values = sorted(r.best_fitness for r in reports)
    assert row.mean_best_fitness == pytest.approx(sum(values) / 3)
    assert row.median_best_fitness == pytest.approx(values[1])


def test_identical_configs_get_equal_shares():
    plan = make_plan([make_config(), make_config()], repetitions=1)
    reports = run_experiment(plan)
    table = compare_algorithms(reports)
    assert len(table.rows) == 1  # same algorithm pools into one row
    reports[0].algorithm = "PSO-variant"  # force two rows with equal scores
    table = compare_algorithms(reports)
    shares = sorted(row.percentage for row in table.rows)
    assert shares == [pytest.approx(50.0), pytest.approx(50.0)]


def test_mixed_functions_rejected():
    sphere_reports = run_experiment(make_plan([make_config()]))
    rastrigin_reports = run_experiment(
        make_plan([make_config()], function=make_test_function("Rastrigin", 5)))
    with pytest.raises(ValidationError):
        compare_algorithms(sphere_reports + rastrigin_reports)
    with pytest.raises(ValidationError):
        compare_algorithms([])


def test_comparison_ranks_follow_mean_complexity():
    plan = make_plan([make_config("PSO", swarm=8),
                      make_config("ABC", swarm=16)], repetitions=2)
    reports = run_experiment(plan)
    table = compare_algorithms(reports)
    by_name = {row.algorithm: row for row in table.rows}
    assert (by_name["ABC"].mean_complexity_log
            > by_name["PSO"].mean_complexity_log)
    assert by_name["ABC"].percentage > by_name["PSO"].percentage


def test_comparison_from_serialized_document_matches():
    plan = make_plan([make_config(), make_config("Bat")], repetitions=2)
    reports = run_experiment(plan)
    direct = compare_algorithms(reports, NormalizationMode.PROPORTIONAL)
    doc = run_document(plan, reports)
    revived = comparison_from_run_document(doc, NormalizationMode.PROPORTIONAL)
    for a, b in zip(direct.rows, revived.rows):
        assert a.algorithm == b.algorithm
        assert a.percentage == pytest.approx(b.percentage, rel=1e-15)
        assert a.mean_best_fitness == pytest.approx(b.mean_best_fitness, rel=1e-15)


def test_all_failed_rows_keep_their_slot():
    plan = make_plan([make_config("Krill Herd")], repetitions=2)
    reports = run_experiment(plan)
    table = compare_algorithms(reports)
    assert table.rows[0].runs == 2
    assert table.rows[0].errors == 2
    assert table.rows[0].percentage is None
