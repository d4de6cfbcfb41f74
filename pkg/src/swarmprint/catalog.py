"""Reference data and structural vocabulary for the swarm framework.

Holds the shipped algorithm catalog (34 entries with complexity
percentages), the topology / boundary-handling / stopping-criteria
enumerations, informant-set construction for every topology, and ingestion
of hardware and region profiles.

Catalog data is immutable after load and safe for concurrent reads.
"""

from __future__ import annotations

import csv
import enum
import hashlib
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator

import numpy as np

from .errors import CatalogDataError, InputParseError, ValidationError

DATA_DIR_ENV = "SWARMPRINT_DATA_DIR"

_ASSET_CHECKSUMS = {
    "reference_table.csv": "0f1971ac735a8713c5edee4db6e7c8f43fe0755785ab5626ed601cacb6e3149d",
    "factor_overrides.csv": "7d263aede71c2ed0e791495d6b9559217caf0db3d6fd25ef16603e881d065329",
}

CATALOG_SIZE = 34

# Table names with an executable implementation in the engine, mapped to the
# engine's algorithm identifiers.  "Wolf Search" is bound to the grey-wolf
# pack-hierarchy implementation.
TABLE_TO_ENGINE = {
    "PSO": "PSO",
    "Accelerated PSO": "AcceleratedPSO",
    "FA": "Firefly",
    "Cuckoo Search": "CuckooSearch",
    "WOA": "WOA",
    "ABC": "ABC",
    "Bat Algorithm": "Bat",
    "Wolf Search": "GWO",
}
ENGINE_TO_TABLE = {engine: table for table, engine in TABLE_TO_ENGINE.items()}


class Category(enum.Enum):
    """The four algorithm families of the shipped catalog."""

    STOCHASTIC_RANDOM_SEARCH = "Stochastic/Random Search"
    MULTI_AGENT_COOPERATIVE = "Multi-Agent Cooperative"
    HYBRID = "Hybrid"
    NATURE_INSPIRED = "Nature-Inspired"

    @classmethod
    def parse(cls, text: str) -> "Category":
        for member in cls:
            if member.value == text:
                return member
        raise ValidationError(f"unknown algorithm category {text!r}")


class TopologyKind(enum.Enum):
    GLOBAL = "Global"
    RING = "Ring"
    VON_NEUMANN = "VonNeumann"
    STAR = "Star"
    MESH = "Mesh"
    RANDOM = "Random"
    TREE = "Tree"
    DYNAMIC = "Dynamic"


@dataclass(frozen=True)
class Topology:
    """An informant-graph recipe; parameters only apply to their kind.

    Semantics: Ring connects indices within +-ring_radius modulo swarm size.
    VonNeumann is the 4-neighborhood on the most-square grid factorization
    of the swarm size (wrapping); Mesh is the 8-neighborhood on the same
    grid.  Star uses particle 0 as hub.  Random gives every particle
    ``random_degree`` seeded draws of distinct informants.  Tree lays the
    swarm out as a breadth-first ``tree_branching``-ary heap with parent and
    children as informants.  Dynamic behaves like Random but is re-drawn
    every ``rewire_period`` generations by the engine.
    """

    kind: TopologyKind
    ring_radius: int = 1
    random_degree: int = 3
    tree_branching: int = 2
    rewire_period: int = 10

    def __post_init__(self):
        if self.ring_radius < 1:
            raise ValidationError("ring_radius must be >= 1")
        if self.random_degree < 1:
            raise ValidationError("random_degree must be >= 1")
        if self.tree_branching < 2:
            raise ValidationError("tree_branching must be >= 2")
        if self.rewire_period < 1:
            raise ValidationError("rewire_period must be >= 1")

    def validate_for(self, swarm_size: int) -> None:
        if swarm_size < 1:
            raise ValidationError("swarm size must be >= 1")
        if self.kind in (TopologyKind.VON_NEUMANN, TopologyKind.MESH):
            _grid_shape(swarm_size, self.kind.value)
        if self.kind in (TopologyKind.RANDOM, TopologyKind.DYNAMIC):
            if self.random_degree >= swarm_size:
                raise ValidationError(
                    f"random_degree must be < swarm size, got "
                    f"{self.random_degree} for size {swarm_size}")


class BoundaryHandling(enum.Enum):
    """The ten supported strategies for out-of-box particle positions."""

    HYPERBOLIC = "Hyperbolic"
    INVISIBLE_WALL = "InvisibleWall"
    ABSORB = "Absorb"
    RANDOM = "Random"
    RANDOM_HALF = "RandomHalf"
    PERIODIC = "Periodic"
    EXPONENTIAL = "Exponential"
    MUTATION = "Mutation"
    REFLECT = "Reflect"
    RANDOM_DAMPING = "RandomDamping"

    @classmethod
    def parse(cls, text: str) -> "BoundaryHandling":
        for member in cls:
            if member.value == text:
                return member
        names = ", ".join(m.value for m in cls)
        raise ValidationError(f"unknown boundary handling {text!r} (expected one of: {names})")


@dataclass(frozen=True)
class StoppingCriteria:
    """Run-termination clauses; any set clause may fire, first one wins."""

    max_generations: int | None = None
    max_stall_seconds: float | None = None
    max_runtime_seconds: float | None = None
    target_best_fitness: float | None = None
    population_convergence_radius: float | None = None
    fitness_convergence_epsilon: float | None = None

    def __post_init__(self):
        clauses = (self.max_generations, self.max_stall_seconds,
                   self.max_runtime_seconds, self.target_best_fitness,
                   self.population_convergence_radius,
                   self.fitness_convergence_epsilon)
        if all(c is None for c in clauses):
            raise ValidationError("at least one stopping criterion must be set")
        if self.max_generations is not None and self.max_generations < 1:
            raise ValidationError("max_generations must be a positive integer")
        if self.max_stall_seconds is not None and not self.max_stall_seconds > 0:
            raise ValidationError("max_stall_seconds must be strictly positive")
        if self.max_runtime_seconds is not None and not self.max_runtime_seconds > 0:
            raise ValidationError("max_runtime_seconds must be strictly positive")
        if self.target_best_fitness is not None and not math.isfinite(self.target_best_fitness):
            raise ValidationError("target_best_fitness must be finite")
        if (self.population_convergence_radius is not None
                and self.population_convergence_radius < 0):
            raise ValidationError("population_convergence_radius must be >= 0")
        if (self.fitness_convergence_epsilon is not None
                and self.fitness_convergence_epsilon < 0):
            raise ValidationError("fitness_convergence_epsilon must be >= 0")


def _positive_factors(values: Iterable[float], label: str) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    for v in out:
        if not (math.isfinite(v) and v > 0):
            raise ValidationError(f"{label} must all be finite and > 0, got {v!r}")
    return out


@dataclass(frozen=True)
class FactorAssignment:
    """Multiplicative complexity factors for one algorithm configuration."""

    hyperparameter_factors: tuple[float, ...] = (1.0,)
    topology_factors: tuple[float, ...] = (1.0,)
    boundary_factors: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        object.__setattr__(self, "hyperparameter_factors",
                           _positive_factors(self.hyperparameter_factors, "hyperparameter factors"))
        object.__setattr__(self, "topology_factors",
                           _positive_factors(self.topology_factors, "topology factors"))
        object.__setattr__(self, "boundary_factors",
                           _positive_factors(self.boundary_factors, "boundary factors"))

    @classmethod
    def neutral(cls) -> "FactorAssignment":
        return cls()


@dataclass(frozen=True)
class AlgorithmDescriptor:
    """One catalog entry: identity, family, factors, reference percentage."""

    name: str
    category: Category
    factors: FactorAssignment
    reference_complexity_pct: float
    executable: bool


@dataclass(frozen=True)
class HardwareProfile:
    """Average power draw (kW) and smart-management utilization in (0, 1]."""

    power_kw: float
    utilization: float

    def __post_init__(self):
        if not (math.isfinite(self.power_kw) and self.power_kw > 0):
            raise ValidationError(f"power_kw must be > 0, got {self.power_kw!r}")
        if not (0 < self.utilization <= 1):
            raise ValidationError(
                f"utilization must be in (0, 1], got {self.utilization!r}")


@dataclass(frozen=True)
class RegionProfile:
    """Regional grid carbon intensity in kg CO2 per kWh."""

    region_code: str
    emission_factor: float

    def __post_init__(self):
        if not (math.isfinite(self.emission_factor) and self.emission_factor >= 0):
            raise ValidationError(
                f"emission factor must be >= 0, got {self.emission_factor!r}")


# --------------------------------------------------------------------------
# informant sets


def _grid_shape(n: int, label: str) -> tuple[int, int]:
    """Most-square r x c factorization with r, c >= 2."""
    for r in range(math.isqrt(n), 1, -1):
        if n % r == 0 and n // r >= 2:
            return r, n // r
    raise ValidationError(
        f"{label} topology needs a swarm size expressible as r x c with "
        f"r, c >= 2; {n} is not")


def _seeded_rng(seed: int, stream: int) -> np.random.Generator:
    entropy = (seed & 0xFFFFFFFFFFFFFFFF, stream)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def neighbors(topology: Topology, index: int, swarm_size: int,
              seed: int = 0) -> frozenset[int]:
    """Informant set of one particle; always contains the particle itself.

    Deterministic in (topology, swarm_size, seed).  For Dynamic topologies
    the caller mixes the rewire epoch into the seed.
    """
    if not 0 <= index < swarm_size:
        raise ValidationError(f"index {index} out of range for swarm size {swarm_size}")
    topology.validate_for(swarm_size)
    kind = topology.kind

    if kind is TopologyKind.GLOBAL:
        return frozenset(range(swarm_size))

    if kind is TopologyKind.RING:
        r = topology.ring_radius
        return frozenset((index + d) % swarm_size for d in range(-r, r + 1))

    if kind in (TopologyKind.VON_NEUMANN, TopologyKind.MESH):
        rows, cols = _grid_shape(swarm_size, kind.value)
        row, col = divmod(index, cols)
        if kind is TopologyKind.VON_NEUMANN:
            offsets = ((-1, 0), (1, 0), (0, -1), (0, 1))
        else:
            offsets = tuple((dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1)
                            if (dr, dc) != (0, 0))
        out = {index}
        for dr, dc in offsets:
            out.add(((row + dr) % rows) * cols + (col + dc) % cols)
        return frozenset(out)

    if kind is TopologyKind.STAR:
        if index == 0:
            return frozenset(range(swarm_size))
        return frozenset((0, index))

    if kind is TopologyKind.TREE:
        b = topology.tree_branching
        out = {index}
        if index > 0:
            out.add((index - 1) // b)
        first_child = b * index + 1
        out.update(range(first_child, min(first_child + b, swarm_size)))
        return frozenset(out)

    # Random and Dynamic: seeded draws of `random_degree` distinct informants
    rng = _seeded_rng(seed, index)
    picks = rng.choice(swarm_size - 1, size=topology.random_degree, replace=False)
    out = {index}
    for p in picks:
        p = int(p)
        out.add(p if p < index else p + 1)  # skip self
    return frozenset(out)


def informant_sets(topology: Topology, swarm_size: int, seed: int = 0,
                   generation: int = 0) -> list[frozenset[int]]:
    """All informant sets at once; handles the Dynamic rewire epoch."""
    effective = seed
    if topology.kind is TopologyKind.DYNAMIC:
        epoch = generation // topology.rewire_period
        effective = (seed * 1000003 + epoch) & 0xFFFFFFFFFFFFFFFF
    return [neighbors(topology, i, swarm_size, effective) for i in range(swarm_size)]


# --------------------------------------------------------------------------
# shipped assets and profile ingestion


def data_dir(override: str | os.PathLike | None = None) -> Path:
    """Shipped asset directory, overridable by argument or environment."""
    if override is not None:
        return Path(override)
    env = os.environ.get(DATA_DIR_ENV)
    if env:
        return Path(env)
    return Path(__file__).parent / "assets"


def _read_checked(path: Path) -> str:
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise CatalogDataError(f"cannot read data asset {path}: {exc}") from exc
    expected = _ASSET_CHECKSUMS.get(path.name)
    if expected is not None:
        actual = hashlib.sha256(raw).hexdigest()
        if actual != expected:
            raise CatalogDataError(
                f"data asset {path.name} is corrupt: sha256 {actual} != {expected}")
    return raw.decode("utf-8")


def _parse_factor_list(text: str, source: str, line: int) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(";"))
    except ValueError as exc:
        raise InputParseError(f"bad factor list {text!r}", source=source, line=line) from exc


def load_reference_table(data_dir_override: str | os.PathLike | None = None
                         ) -> list[AlgorithmDescriptor]:
    """The 34 shipped algorithm descriptors, checksum-verified."""
    base = data_dir(data_dir_override)
    ref_text = _read_checked(base / "reference_table.csv")
    fac_text = _read_checked(base / "factor_overrides.csv")

    overrides: dict[str, FactorAssignment] = {}
    reader = csv.reader(fac_text.splitlines())
    header = next(reader)
    if header != ["name", "hyperparameter_factors", "topology_factors", "boundary_factors"]:
        raise CatalogDataError(f"factor_overrides.csv has unexpected header {header}")
    for lineno, row in enumerate(reader, start=2):
        name, h, t, b = row
        overrides[name] = FactorAssignment(
            _parse_factor_list(h, "factor_overrides.csv", lineno),
            _parse_factor_list(t, "factor_overrides.csv", lineno),
            _parse_factor_list(b, "factor_overrides.csv", lineno))

    descriptors = []
    reader = csv.reader(ref_text.splitlines())
    header = next(reader)
    if header != ["name", "category", "complexity_pct"]:
        raise CatalogDataError(f"reference_table.csv has unexpected header {header}")
    for row in reader:
        name, category, pct = row
        descriptors.append(AlgorithmDescriptor(
            name=name,
            category=Category.parse(category),
            factors=overrides.get(name, FactorAssignment.neutral()),
            reference_complexity_pct=float(pct),
            executable=name in TABLE_TO_ENGINE,
        ))
    if len(descriptors) != CATALOG_SIZE:
        raise CatalogDataError(
            f"reference_table.csv carries {len(descriptors)} rows, expected {CATALOG_SIZE}")
    return descriptors


def ingest_region_profiles(stream: IO[str] | Iterable[str],
                           source: str = "<regions>") -> list[RegionProfile]:
    """Parse `region,kg_co2_per_kwh` CSV rows into region profiles."""
    lines: Iterator[str] = iter(stream)
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise InputParseError("empty region profile stream", source=source, line=1)
    if header != ["region", "kg_co2_per_kwh"]:
        raise InputParseError(
            f"expected header 'region,kg_co2_per_kwh', got {','.join(header)!r}",
            source=source, line=1)
    profiles = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 2:
            raise InputParseError(f"expected 2 columns, got {len(row)}",
                                  source=source, line=lineno)
        code, raw = row
        try:
            factor = float(raw)
        except ValueError:
            raise InputParseError(f"emission factor {raw!r} is not a decimal",
                                  source=source, line=lineno,
                                  field="kg_co2_per_kwh") from None
        profiles.append(RegionProfile(code, factor))
    return profiles


def load_region_profiles(data_dir_override: str | os.PathLike | None = None
                         ) -> list[RegionProfile]:
    """The shipped illustrative region dataset (not checksummed, user-replaceable)."""
    path = data_dir(data_dir_override) / "regions.csv"
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CatalogDataError(f"cannot read region dataset {path}: {exc}") from exc
    return ingest_region_profiles(text.splitlines(), source=str(path))


def find_region(code: str, profiles: Iterable[RegionProfile]) -> RegionProfile:
    for profile in profiles:
        if profile.region_code == code:
            return profile
    raise ValidationError(f"unknown region code {code!r}")


def parse_hardware_profile(stream: IO[str] | Iterable[str],
                           source: str = "<hardware>") -> HardwareProfile:
    """Parse `power_kw=<decimal>` / `utilization=<decimal>` key-value text."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputParseError("expected key=value", source=source, line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in ("power_kw", "utilization"):
            raise InputParseError(f"unknown key {key!r}", source=source,
                                  line=lineno, field=key)
        try:
            values[key] = float(value.strip())
        except ValueError:
            raise InputParseError(f"value {value.strip()!r} is not a decimal",
                                  source=source, line=lineno, field=key) from None
    for key in ("power_kw", "utilization"):
        if key not in values:
            raise InputParseError(f"missing required key {key!r}", source=source,
                                  field=key)
    return HardwareProfile(values["power_kw"], values["utilization"])
