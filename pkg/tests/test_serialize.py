"""Serialization invariants: round-trip floats, document shapes."""

import json
import math

import numpy as np
import pytest

from swarmprint.catalog import (FactorAssignment, HardwareProfile,
                                RegionProfile)
from swarmprint.emissions import EmissionInputs, estimate_emissions
from swarmprint.serialize import (csv_line, dumps, emission_inputs_dict,
                                  estimate_csv, estimate_document, fmt_float)


def test_fmt_float_round_trips_exactly():
    rng = np.random.default_rng(5)
    values = [0.0, -0.0, 1.0, 72.0, 5.83, math.pi, 1e-300, 1e300,
              *rng.uniform(-1e6, 1e6, 200).tolist()]
    for value in values:
        assert float(fmt_float(value)) == value


def test_fmt_float_special_values():
    assert fmt_float(math.inf) == "Infinity"
    assert fmt_float(-math.inf) == "-Infinity"
    assert fmt_float(math.nan) == "NaN"


def test_dumps_is_valid_json_and_preserves_values():
    doc = {
        "name": "quote \" and \\ and\nnewline",
        "ints": [1, 2, 3],
        "floats": [math.pi, 5.83, 1e-17],
        "flag": True,
        "nothing": None,
        "nested": {"empty_list": [], "empty_map": {}},
        "array": np.array([1.5, 2.5]),
    }
    revived = json.loads(dumps(doc))
    assert revived["name"] == doc["name"]
    assert revived["floats"] == doc["floats"]
    assert revived["array"] == [1.5, 2.5]
    assert revived["nested"] == {"empty_list": [], "empty_map": {}}


def test_csv_line_quoting():
    line = csv_line(["a,b", 'say "hi"', None, True, 2.5])
    assert line == '"a,b","say ""hi""",,true,2.5'


def test_estimate_document_shape():
    inputs = EmissionInputs(num_particles=3, num_iterations=2,
                            factors=FactorAssignment((1.5,), (1.0,), (2.0,)),
                            unit_time_hours=72.0,
                            hardware=HardwareProfile(0.3, 0.8),
                            region=RegionProfile("MID", 0.4))
    estimate = estimate_emissions(inputs)
    doc = estimate_document(inputs, estimate)
    assert doc["inputs"] == emission_inputs_dict(inputs)
    assert [c["name"] for c in doc["components"]] == [
        "hyperfactorial_particles", "superfactorial_iterations",
        "hyperparameter_factors", "topology_factors", "boundary_factors",
        "unit_time_hours", "hardware_power_kw", "utilization",
        "region_emission_factor"]
    total = 0.0
    for component in doc["components"]:
        total += component["ln"]
    assert total == doc["kg_co2_log"]

    csv_text = estimate_csv(doc)
    rows = dict(line.split(",", 1) for line in csv_text.splitlines()[1:])
    assert float(rows["kg_co2_log"]) == doc["kg_co2_log"]
    assert rows["hyperparameter_factors"] == "1.5"


def test_huge_counts_fall_back_to_log_only():
    inputs = EmissionInputs(num_particles=5000, num_iterations=5000,
                            factors=FactorAssignment.neutral(),
                            unit_time_hours=1.0,
                            hardware=HardwareProfile(1.0, 1.0),
                            region=RegionProfile("XX", 1.0))
    estimate = estimate_emissions(inputs)
    assert estimate.kg_co2 is None          # exp would overflow
    assert estimate.kg_co2_exact is None    # beyond the exact-mode window
    assert math.isfinite(estimate.kg_co2_log.ln_value)
    doc = estimate_document(inputs, estimate)
    assert doc["kg_co2"] is None and doc["kg_co2_exact"] is None
    json.loads(dumps(doc))
