"""Swarm-intelligence optimization with an integrated CO2 emission model.

The package runs eight executable swarm algorithms under pluggable
topologies, boundary handling and stopping criteria, meters their resource
use, and scores the full 34-algorithm catalog on the hyperfactorial
emission scale.
"""

from .catalog import (AlgorithmDescriptor, BoundaryHandling, Category,
                      FactorAssignment, HardwareProfile, RegionProfile,
                      StoppingCriteria, Topology, TopologyKind,
                      ingest_region_profiles, load_reference_table, neighbors)
from .combinatorics import (LogMagnitude, hyperfactorial, log_hyperfactorial,
                            log_superfactorial, superfactorial)
from .emissions import (ComplexityScore, EmissionEstimate, EmissionInputs,
                        NormalizationMode, category_summary, complexity_score,
                        estimate_emissions, normalize_to_percentages,
                        reference_percentages)
from .engine import (SUPPORTED_ALGORITHMS, EngineHooks, OptimizeResult,
                     Particle, RunMeter, SearchSpace, SwarmConfig,
                     apply_boundary, optimize)
from .errors import (CatalogDataError, InputParseError, SwarmprintError,
                     UnsupportedAlgorithmError, ValidationError)
from .harness import (ComparisonTable, Deployment, ExperimentPlan, RunReport,
                      TestFunction, compare_algorithms, make_test_function,
                      run_experiment)

__version__ = "0.1.0"
