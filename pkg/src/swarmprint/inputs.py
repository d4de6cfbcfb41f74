"""Parsers for the plain-text input files the CLI consumes.

Two shapes exist: flat `key = value` files (emission inputs, hardware
profiles) and sectioned plan files where a `[plan]` block is followed by
one `[config]` block per swarm configuration.  `#` starts a comment.
Every diagnostic carries the source name and line number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .catalog import (BoundaryHandling, FactorAssignment, HardwareProfile,
                      RegionProfile, StoppingCriteria, Topology, TopologyKind,
                      find_region, parse_hardware_profile)
from .emissions import EmissionInputs
from .errors import InputParseError, ValidationError
from .harness import (DEFAULT_T_UNIT_HOURS, T_UNIT_FIXED, T_UNIT_MEASURED,
                      Deployment, ExperimentPlan, SwarmConfig,
                      make_test_function)


@dataclass
class Section:
    name: str
    start_line: int
    entries: dict[str, tuple[str, int]]  # key -> (raw value, line)


def read_sections(lines: Iterable[str], source: str) -> list[Section]:
    sections = [Section("", 0, {})]
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            sections.append(Section(line[1:-1].strip(), lineno, {}))
            continue
        if "=" not in line:
            raise InputParseError("expected key = value", source=source, line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise InputParseError("empty key", source=source, line=lineno)
        section = sections[-1]
        if key in section.entries:
            raise InputParseError(f"duplicate key {key!r}", source=source, line=lineno)
        section.entries[key] = (value.strip(), lineno)
    if not sections[0].entries:
        sections.pop(0)
    return sections


class _SectionReader:
    def __init__(self, section: Section, source: str):
        self.section = section
        self.source = source
        self.unread = dict(section.entries)

    def has(self, key: str) -> bool:
        return key in self.section.entries

    def raw(self, key: str, default: str | None = None) -> str | None:
        if key in self.section.entries:
            self.unread.pop(key, None)
            return self.section.entries[key][0]
        return default

    def line(self, key: str) -> int | None:
        entry = self.section.entries.get(key)
        return entry[1] if entry else None

    def error(self, key: str, message: str) -> InputParseError:
        return InputParseError(message, source=self.source, line=self.line(key),
                               field=key)

    def require(self, key: str) -> str:
        value = self.raw(key)
        if value is None:
            raise InputParseError(f"missing required key {key!r}",
                                  source=self.source, line=self.section.start_line,
                                  field=key)
        return value

    def get_float(self, key: str, default: float | None = None) -> float | None:
        value = self.raw(key)
        if value is None:
            return default
        try:
            return float(value)
        except ValueError:
            raise self.error(key, f"{value!r} is not a decimal") from None

    def get_int(self, key: str, default: int | None = None) -> int | None:
        value = self.raw(key)
        if value is None:
            return default
        try:
            return int(value)
        except ValueError:
            raise self.error(key, f"{value!r} is not an integer") from None

    def get_floats(self, key: str, default: tuple[float, ...]) -> tuple[float, ...]:
        value = self.raw(key)
        if value is None:
            return default
        try:
            return tuple(float(part) for part in value.split(","))
        except ValueError:
            raise self.error(key, f"{value!r} is not a comma-separated decimal list") from None


# ---------------------------------------------------------------------------
# emission input files


@dataclass(frozen=True)
class DeploymentOverrides:
    """CLI-level overrides applied on top of file values."""

    t_unit_policy: str | None = None
    t_unit_hours: float | None = None
    hardware: HardwareProfile | None = None
    region: RegionProfile | None = None


def parse_emission_inputs(text: str, source: str,
                          regions: Sequence[RegionProfile],
                          overrides: DeploymentOverrides = DeploymentOverrides(),
                          ) -> EmissionInputs:
    """Parse an emission-inputs file: flat key=value or a prior JSON report."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _emission_inputs_from_json(stripped, source, regions, overrides)

    sections = read_sections(text.splitlines(), source)
    if len(sections) != 1 or sections[0].name not in ("", "emission"):
        raise InputParseError(
            "emission input files hold a single flat key=value block",
            source=source, line=1)
    reader = _SectionReader(sections[0], source)
    values = {
        "particles": reader.get_int("particles"),
        "iterations": reader.get_int("iterations"),
        "hyperparameter_factors": reader.get_floats("hyperparameter_factors", (1.0,)),
        "topology_factors": reader.get_floats("topology_factors", (1.0,)),
        "boundary_factors": reader.get_floats("boundary_factors", (1.0,)),
        "unit_time_hours": reader.get_float("unit_time_hours", DEFAULT_T_UNIT_HOURS),
        "power_kw": reader.get_float("power_kw", 0.3),
        "utilization": reader.get_float("utilization", 1.0),
        "region": reader.raw("region"),
        "emission_factor": reader.get_float("emission_factor"),
    }
    if values["particles"] is None:
        raise reader.error("particles", "missing required key 'particles'")
    if values["iterations"] is None:
        raise reader.error("iterations", "missing required key 'iterations'")
    for key in reader.unread:
        raise reader.error(key, f"unknown key {key!r}")
    range_checks = (
        ("particles", lambda v: v >= 1, "needs at least one particle"),
        ("iterations", lambda v: v >= 1, "needs at least one iteration"),
        ("unit_time_hours", lambda v: v > 0, "must be > 0"),
        ("power_kw", lambda v: v > 0, "must be > 0"),
        ("utilization", lambda v: 0 < v <= 1, "must be in (0, 1]"),
        ("emission_factor", lambda v: v is None or v >= 0, "must be >= 0"),
    )
    for key, good, message in range_checks:
        if not good(values[key]):
            raise reader.error(key, f"value {values[key]!r} {message}")
    return _build_emission_inputs(values, source, regions, overrides)


def _emission_inputs_from_json(text: str, source: str, regions, overrides):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputParseError(f"invalid JSON: {exc.msg}", source=source,
                              line=exc.lineno) from None
    inputs = doc.get("inputs", doc)
    if not isinstance(inputs, dict):
        raise InputParseError("JSON input must carry an 'inputs' object",
                              source=source)
    def pick(key, default=None):
        return inputs.get(key, default)
    values = {
        "particles": pick("particles"),
        "iterations": pick("iterations"),
        "hyperparameter_factors": tuple(pick("hyperparameter_factors", (1.0,))),
        "topology_factors": tuple(pick("topology_factors", (1.0,))),
        "boundary_factors": tuple(pick("boundary_factors", (1.0,))),
        "unit_time_hours": pick("unit_time_hours", DEFAULT_T_UNIT_HOURS),
        "power_kw": pick("power_kw", 0.3),
        "utilization": pick("utilization", 1.0),
        "region": pick("region"),
        "emission_factor": pick("emission_factor"),
    }
    if values["particles"] is None or values["iterations"] is None:
        raise InputParseError("JSON inputs need 'particles' and 'iterations'",
                              source=source)
    return _build_emission_inputs(values, source, regions, overrides)


def _resolve_region(code: str | None, factor: float | None,
                    regions: Sequence[RegionProfile], source: str) -> RegionProfile:
    if factor is not None:
        return RegionProfile(code or "CUSTOM", factor)
    if code is not None:
        try:
            return find_region(code, regions)
        except ValidationError as exc:
            raise InputParseError(str(exc), source=source, field="region") from None
    return RegionProfile("MID", 0.4)


def _build_emission_inputs(values: dict, source: str, regions, overrides):
    region = _resolve_region(values["region"], values["emission_factor"],
                             regions, source)
    hardware = HardwareProfile(values["power_kw"], values["utilization"])
    t_unit = values["unit_time_hours"]
    if overrides.region is not None:
        region = overrides.region
    if overrides.hardware is not None:
        hardware = overrides.hardware
    if overrides.t_unit_policy == T_UNIT_MEASURED:
        raise ValidationError("measured unit time needs a live run; "
                              "estimates take fixed hours")
    if overrides.t_unit_hours is not None:
        t_unit = overrides.t_unit_hours
    factors = FactorAssignment(values["hyperparameter_factors"],
                               values["topology_factors"],
                               values["boundary_factors"])
    return EmissionInputs(num_particles=int(values["particles"]),
                          num_iterations=int(values["iterations"]),
                          factors=factors, unit_time_hours=float(t_unit),
                          hardware=hardware, region=region)


# ---------------------------------------------------------------------------
# experiment plan files

_TOPOLOGY_PARAM_KEYS = ("ring_radius", "random_degree", "tree_branching",
                        "rewire_period")
_STOPPING_KEYS = ("max_generations", "max_stall_seconds", "max_runtime_seconds",
                  "target_best_fitness", "population_convergence_radius",
                  "fitness_convergence_epsilon")
_PLAN_KEYS = ("function", "dimension", "lower", "upper", "repetitions",
              "base_seed", "t_unit", "power_kw", "utilization", "region",
              "emission_factor")
_CONFIG_STRUCTURAL_KEYS = ("algorithm", "swarm_size", "topology", "boundary")


def parse_plan(text: str, source: str, regions: Sequence[RegionProfile],
               overrides: DeploymentOverrides = DeploymentOverrides(),
               seed_override: int | None = None,
               ) -> ExperimentPlan:
    sections = read_sections(text.splitlines(), source)
    if not sections or sections[0].name != "plan":
        raise InputParseError("plan files start with a [plan] section",
                              source=source, line=1)
    plan_reader = _SectionReader(sections[0], source)

    function_name = plan_reader.require("function")
    dimension = plan_reader.get_int("dimension")
    if dimension is None:
        raise plan_reader.error("dimension", "missing required key 'dimension'")
    try:
        function = make_test_function(function_name, dimension,
                                      plan_reader.get_float("lower"),
                                      plan_reader.get_float("upper"))
    except ValidationError as exc:
        raise InputParseError(str(exc), source=source,
                              line=plan_reader.line("function")) from None

    repetitions = plan_reader.get_int("repetitions", 1)
    base_seed = plan_reader.get_int("base_seed", 0)
    if seed_override is not None:
        base_seed = seed_override

    t_unit_raw = plan_reader.raw("t_unit", str(DEFAULT_T_UNIT_HOURS))
    if t_unit_raw == T_UNIT_MEASURED:
        policy, hours = T_UNIT_MEASURED, DEFAULT_T_UNIT_HOURS
    else:
        try:
            policy, hours = T_UNIT_FIXED, float(t_unit_raw)
        except ValueError:
            raise plan_reader.error(
                "t_unit", f"{t_unit_raw!r} is neither hours nor 'measured'") from None

    region = _resolve_region(plan_reader.raw("region"),
                             plan_reader.get_float("emission_factor"),
                             regions, source)
    hardware = HardwareProfile(plan_reader.get_float("power_kw", 0.3),
                               plan_reader.get_float("utilization", 1.0))
    if overrides.region is not None:
        region = overrides.region
    if overrides.hardware is not None:
        hardware = overrides.hardware
    if overrides.t_unit_policy is not None:
        policy = overrides.t_unit_policy
    if overrides.t_unit_hours is not None:
        hours = overrides.t_unit_hours

    for key in plan_reader.unread:
        if key not in _PLAN_KEYS:
            raise plan_reader.error(key, f"unknown [plan] key {key!r}")

    configs = []
    for section in sections[1:]:
        if section.name != "config":
            raise InputParseError(f"unexpected section [{section.name}]",
                                  source=source, line=section.start_line)
        configs.append(_parse_config(section, source))
    if not configs:
        raise InputParseError("plan needs at least one [config] section",
                              source=source)

    try:
        deployment = Deployment(t_unit_policy=policy, t_unit_hours=hours,
                                hardware=hardware, region=region)
        return ExperimentPlan(configs=tuple(configs), function=function,
                              repetitions=repetitions, base_seed=base_seed,
                              deployment=deployment)
    except ValidationError as exc:
        raise InputParseError(str(exc), source=source) from None


def _parse_config(section: Section, source: str) -> SwarmConfig:
    reader = _SectionReader(section, source)
    algorithm = reader.require("algorithm")
    swarm_size = reader.get_int("swarm_size", 30)

    topology_name = reader.raw("topology", "Global")
    kind = next((k for k in TopologyKind if k.value == topology_name), None)
    if kind is None:
        raise reader.error("topology", f"unknown topology {topology_name!r}")
    topology_params = {}
    for key in _TOPOLOGY_PARAM_KEYS:
        if reader.has(key):
            topology_params[key] = reader.get_int(key)

    boundary_name = reader.raw("boundary", "Absorb")
    try:
        boundary = BoundaryHandling.parse(boundary_name)
    except ValidationError as exc:
        raise reader.error("boundary", str(exc)) from None

    stopping_values = {}
    for key in _STOPPING_KEYS:
        if not reader.has(key):
            continue
        if key == "max_generations":
            stopping_values[key] = reader.get_int(key)
        else:
            stopping_values[key] = reader.get_float(key)

    hyperparameters = {}
    for key in list(reader.unread):
        hyperparameters[key] = reader.get_float(key)

    try:
        topology = Topology(kind, **topology_params)
        stopping = StoppingCriteria(**stopping_values)
        return SwarmConfig(algorithm=algorithm, swarm_size=swarm_size,
                           topology=topology, boundary=boundary,
                           stopping=stopping, hyperparameters=hyperparameters)
    except ValidationError as exc:
        raise InputParseError(str(exc), source=source,
                              line=section.start_line) from None


def parse_hardware_file(path: Path) -> HardwareProfile:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputParseError(f"cannot read hardware profile: {exc}",
                              source=str(path)) from None
    return parse_hardware_profile(text.splitlines(), source=str(path))
