"""End-to-end CLI contract tests: exit codes, formats, round trips."""

import csv
import json
import subprocess
import sys

from swarmprint.catalog import data_dir

IDENTITY_INPUT = """\
particles = 1
iterations = 1
hyperparameter_factors = 1.0
topology_factors = 1.0
boundary_factors = 1.0
unit_time_hours = 1
power_kw = 1
utilization = 1
region = XX
emission_factor = 1
"""

PLAN_TEMPLATE = """\
[plan]
function = Sphere
dimension = 5
lower = -5
upper = 5
repetitions = {repetitions}
base_seed = 42
t_unit = 72
power_kw = 0.3
utilization = 1.0
region = MID

{configs}
"""

PSO_CONFIG = """\
[config]
algorithm = PSO
swarm_size = 10
topology = Global
boundary = Reflect
max_generations = 12
"""

KRILL_CONFIG = """\
[config]
algorithm = Krill Herd
swarm_size = 10
max_generations = 12
"""


def swarmprint(*args, env=None):
    return subprocess.run([sys.executable, "-m", "swarmprint", *args],
                          capture_output=True, text=True, env=env)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_estimate_identity_is_one_kg(tmp_path):
    path = write(tmp_path, "identity.txt", IDENTITY_INPUT)
    proc = swarmprint("estimate", "--input", path)
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert doc["kg_co2"] == 1.0
    assert doc["kg_co2_log"] == 0.0
    assert doc["kg_co2_exact"] == "1"


def test_estimate_216_case(tmp_path):
    path = write(tmp_path, "e.txt",
                 IDENTITY_INPUT.replace("particles = 1", "particles = 3")
                               .replace("iterations = 1", "iterations = 2"))
    proc = swarmprint("estimate", "--input", path)
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["kg_co2_exact"] == "216"
    assert abs(doc["kg_co2"] - 216.0) < 1e-9


def test_estimate_rejects_bad_utilization_with_exit_2(tmp_path):
    path = write(tmp_path, "bad.txt",
                 IDENTITY_INPUT.replace("utilization = 1", "utilization = 1.5"))
    proc = swarmprint("estimate", "--input", path)
    assert proc.returncode == 2
    assert "utilization" in proc.stderr


def test_estimate_parse_error_names_line(tmp_path):
    path = write(tmp_path, "bad.txt",
                 IDENTITY_INPUT.replace("power_kw = 1", "power_kw = watts"))
    proc = swarmprint("estimate", "--input", path)
    assert proc.returncode == 2
    assert "power_kw" in proc.stderr and ":7:" in proc.stderr


def test_estimate_round_trip_reproduces_log(tmp_path):
    path = write(tmp_path, "seed.txt",
                 IDENTITY_INPUT.replace("particles = 1", "particles = 9")
                               .replace("power_kw = 1", "power_kw = 0.37")
                               .replace("utilization = 1", "utilization = 0.83"))
    first = swarmprint("estimate", "--input", path)
    assert first.returncode == 0
    echo_path = write(tmp_path, "echo.json", first.stdout)
    second = swarmprint("estimate", "--input", echo_path)
    assert second.returncode == 0
    a = json.loads(first.stdout)
    b = json.loads(second.stdout)
    assert a["kg_co2_log"] == b["kg_co2_log"]  # bit-identical round trip
    assert a["inputs"] == b["inputs"]


def test_estimate_json_and_csv_carry_identical_numbers(tmp_path):
    path = write(tmp_path, "e.txt",
                 IDENTITY_INPUT.replace("particles = 1", "particles = 6")
                               .replace("unit_time_hours = 1",
                                        "unit_time_hours = 72"))
    json_doc = json.loads(swarmprint("estimate", "--input", path).stdout)
    csv_proc = swarmprint("estimate", "--input", path, "--format", "csv")
    rows = dict(csv.reader(csv_proc.stdout.splitlines()[1:]))
    assert float(rows["kg_co2_log"]) == json_doc["kg_co2_log"]
    assert float(rows["unit_time_hours"]) == json_doc["inputs"]["unit_time_hours"]
    assert float(rows["ln_hyperfactorial_particles"]) == (
        json_doc["components"][0]["ln"])


def test_table_matches_shipped_reference(tmp_path):
    proc = swarmprint("table", "--format", "csv")
    assert proc.returncode == 0
    rows = list(csv.DictReader(proc.stdout.splitlines()))
    assert len(rows) == 34
    shipped = (data_dir() / "reference_table.csv").read_text().splitlines()[1:]
    for row, expected in zip(rows, shipped):
        name, category, pct = expected.split(",")
        assert row["name"] == name
        assert row["category"] == category
        assert float(row["complexity_pct"]) == float(pct)


def test_table_detects_corrupted_asset_with_exit_4(tmp_path):
    import os
    for name in ("reference_table.csv", "factor_overrides.csv", "regions.csv"):
        (tmp_path / name).write_text((data_dir() / name).read_text())
    text = (tmp_path / "factor_overrides.csv").read_text()
    (tmp_path / "factor_overrides.csv").write_text(text.replace("1.5", "2.5", 1))
    env = dict(os.environ, SWARMPRINT_DATA_DIR=str(tmp_path))
    proc = swarmprint("table", env=env)
    assert proc.returncode == 4
    assert "corrupt" in proc.stderr


def test_run_emits_reports_with_error_markers(tmp_path):
    plan = PLAN_TEMPLATE.format(repetitions=3, configs=PSO_CONFIG + KRILL_CONFIG)
    path = write(tmp_path, "plan.txt", plan)
    proc = swarmprint("run", "--input", path)
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert len(doc["reports"]) == 6
    pso = [r for r in doc["reports"] if r["algorithm"] == "PSO"]
    krill = [r for r in doc["reports"] if r["algorithm"] == "Krill Herd"]
    assert [r["seed"] for r in pso] == [42, 43, 44]
    assert all(r["error"] == "unsupported-algorithm" for r in krill)
    assert all(len(r["best_fitness_trace"]) == 12 for r in pso)


def test_run_exit_3_when_all_runs_fail(tmp_path):
    plan = PLAN_TEMPLATE.format(repetitions=2, configs=KRILL_CONFIG)
    path = write(tmp_path, "plan.txt", plan)
    proc = swarmprint("run", "--input", path)
    assert proc.returncode == 3
    doc = json.loads(proc.stdout)
    assert len(doc["reports"]) == 2  # document still written


def test_run_plan_validation_failure_exits_2(tmp_path):
    plan = PLAN_TEMPLATE.format(
        repetitions=1, configs=PSO_CONFIG.replace("max_generations = 12", ""))
    path = write(tmp_path, "plan.txt", plan)
    proc = swarmprint("run", "--input", path)
    assert proc.returncode == 2
    assert "stopping" in proc.stderr


def test_run_json_and_csv_numeric_equivalence(tmp_path):
    plan = PLAN_TEMPLATE.format(repetitions=2, configs=PSO_CONFIG)
    path = write(tmp_path, "plan.txt", plan)
    json_doc = json.loads(swarmprint("run", "--input", path).stdout)
    csv_proc = swarmprint("run", "--input", path, "--format", "csv")
    rows = list(csv.DictReader(csv_proc.stdout.splitlines()))
    assert len(rows) == len(json_doc["reports"])
    for row, report in zip(rows, json_doc["reports"]):
        assert float(row["best_fitness"]) == report["best_fitness"]
        assert int(row["evaluations_used"]) == report["evaluations_used"]
        assert float(row["kg_co2_log"]) == report["emission"]["kg_co2_log"]
        assert float(row["complexity_log"]) == report["complexity_log"]


def test_seed_override_changes_seeds(tmp_path):
    plan = PLAN_TEMPLATE.format(repetitions=2, configs=PSO_CONFIG)
    path = write(tmp_path, "plan.txt", plan)
    doc = json.loads(swarmprint("run", "--input", path, "--seed", "7").stdout)
    assert [r["seed"] for r in doc["reports"]] == [7, 8]


def test_compare_percentages_rank_with_scores(tmp_path):
    configs = PSO_CONFIG + PSO_CONFIG.replace(
        "algorithm = PSO", "algorithm = ABC").replace(
        "swarm_size = 10", "swarm_size = 20")
    plan = PLAN_TEMPLATE.format(repetitions=2, configs=configs)
    path = write(tmp_path, "plan.txt", plan)
    proc = swarmprint("compare", "--input", path)
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    rows = {row["algorithm"]: row for row in doc["rows"]}
    assert rows["ABC"]["mean_complexity_log"] > rows["PSO"]["mean_complexity_log"]
    assert rows["ABC"]["percentage"] > rows["PSO"]["percentage"]
    total = sum(row["percentage"] for row in doc["rows"])
    assert abs(total - 100.0) < 1e-9


def test_report_writes_csv_and_figures(tmp_path):
    plan = PLAN_TEMPLATE.format(repetitions=2, configs=PSO_CONFIG)
    path = write(tmp_path, "plan.txt", plan)
    outdir = tmp_path / "report"
    proc = swarmprint("report", "--input", path, "--output", str(outdir))
    assert proc.returncode == 0, proc.stderr
    for name in ("report.json", "runs.csv", "comparison.csv",
                 "convergence.png", "complexity.png", "emissions.png"):
        assert (outdir / name).exists(), name
    assert (outdir / "convergence.png").stat().st_size > 1000


def test_report_accepts_previous_run_document(tmp_path):
    plan = PLAN_TEMPLATE.format(repetitions=2, configs=PSO_CONFIG)
    plan_path = write(tmp_path, "plan.txt", plan)
    run_json = swarmprint("run", "--input", plan_path).stdout
    doc_path = write(tmp_path, "run.json", run_json)
    outdir = tmp_path / "report2"
    proc = swarmprint("report", "--input", doc_path, "--output", str(outdir))
    assert proc.returncode == 0, proc.stderr
    rows = list(csv.DictReader((outdir / "runs.csv").read_text().splitlines()))
    assert len(rows) == 2


def test_missing_input_file_exits_2(tmp_path):
    proc = swarmprint("estimate", "--input", str(tmp_path / "nope.txt"))
    assert proc.returncode == 2


def test_estimate_region_flag_overrides_file(tmp_path):
    path = write(tmp_path, "e.txt", IDENTITY_INPUT)
    proc = swarmprint("estimate", "--input", path, "--region", "GREEN")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["inputs"]["region"] == "GREEN"
    assert doc["zero_emission"] is True and doc["kg_co2"] == 0.0


def test_estimate_unknown_region_exits_2(tmp_path):
    path = write(tmp_path, "e.txt", IDENTITY_INPUT)
    proc = swarmprint("estimate", "--input", path, "--region", "ATLANTIS")
    assert proc.returncode == 2
    assert "ATLANTIS" in proc.stderr


def test_estimate_hardware_flag_overrides_file(tmp_path):
    hw = write(tmp_path, "hw.txt", "power_kw = 2.0\nutilization = 0.5\n")
    path = write(tmp_path, "e.txt", IDENTITY_INPUT)
    proc = swarmprint("estimate", "--input", path, "--hardware", hw)
    doc = json.loads(proc.stdout)
    assert doc["inputs"]["power_kw"] == 2.0
    assert doc["inputs"]["utilization"] == 0.5
    assert doc["kg_co2"] == 1.0  # 2.0 * 0.5 keeps the identity product


def test_estimate_rejects_measured_time(tmp_path):
    path = write(tmp_path, "e.txt", IDENTITY_INPUT)
    proc = swarmprint("estimate", "--input", path, "--t-unit-measured")
    assert proc.returncode == 2
    assert "measured" in proc.stderr


def test_estimate_output_flag_writes_file(tmp_path):
    path = write(tmp_path, "e.txt", IDENTITY_INPUT)
    out = tmp_path / "estimate.json"
    proc = swarmprint("estimate", "--input", path, "--output", str(out))
    assert proc.returncode == 0
    assert json.loads(out.read_text())["kg_co2"] == 1.0


def test_run_measured_t_unit_echoes_wall_time(tmp_path):
    plan = PLAN_TEMPLATE.format(repetitions=1, configs=PSO_CONFIG)
    path = write(tmp_path, "plan.txt", plan)
    proc = swarmprint("run", "--input", path, "--t-unit-measured")
    doc = json.loads(proc.stdout)
    report = doc["reports"][0]
    assert doc["plan"]["t_unit_policy"] == "measured"
    hours = report["emission_inputs"]["unit_time_hours"]
    assert abs(hours - report["wall_time_seconds"] / 3600.0) < 1e-9


def test_plan_topology_params_and_alternate_stopping(tmp_path):
    plan = """\
[plan]
function = Rastrigin
dimension = 4
repetitions = 1
base_seed = 3

[config]
algorithm = PSO
swarm_size = 12
topology = Ring
ring_radius = 3
boundary = Periodic
max_generations = 2000
population_convergence_radius = 0.25

[config]
algorithm = GWO
swarm_size = 12
topology = Random
random_degree = 4
boundary = Mutation
max_generations = 30
"""
    path = write(tmp_path, "plan.txt", plan)
    proc = swarmprint("run", "--input", path)
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    pso, gwo = doc["reports"]
    assert pso["config"]["topology"] == "Ring"
    assert pso["stop_reason"] == "population_convergence"
    assert pso["iterations_used"] < 2000
    assert gwo["config"]["boundary"] == "Mutation"
    assert gwo["stop_reason"] == "max_generations"


def test_compare_level_grid_mode(tmp_path):
    configs = PSO_CONFIG + PSO_CONFIG.replace(
        "algorithm = PSO", "algorithm = Bat")
    plan = PLAN_TEMPLATE.format(repetitions=1, configs=configs)
    path = write(tmp_path, "plan.txt", plan)
    proc = swarmprint("compare", "--input", path, "--mode", "LevelGrid")
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert doc["mode"] == "LevelGrid"
    for row in doc["rows"]:
        assert 18 <= row["level"] <= 27
        assert row["percentage"] == round(row["level"] * 100 / 343, 2)


def test_compare_json_and_csv_numbers_agree(tmp_path):
    plan = PLAN_TEMPLATE.format(repetitions=2, configs=PSO_CONFIG)
    path = write(tmp_path, "plan.txt", plan)
    json_doc = json.loads(swarmprint("compare", "--input", path).stdout)
    csv_rows = list(csv.DictReader(
        swarmprint("compare", "--input", path, "--format", "csv")
        .stdout.splitlines()))
    for row, jrow in zip(csv_rows, json_doc["rows"]):
        assert row["algorithm"] == jrow["algorithm"]
        assert float(row["percentage"]) == jrow["percentage"]
        assert float(row["mean_best_fitness"]) == jrow["mean_best_fitness"]
