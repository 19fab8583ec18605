"""Simulator and manipulation analysis for retroactive public-goods funding votes."""

from .attacks import (
    CollusionOracle,
    PhantomBound,
    PhantomOracleInput,
    apply_project_attack,
    apply_voter_attack,
    collusion_split_grid_search,
    mean_phantom_empirical,
    mean_phantom_ratio,
    median_phantom_bound,
    median_phantom_empirical,
    quadratic_collusion_oracle,
    select_attack,
)
from .engine import IterationRecord, SimulationReport, run_iteration, run_simulation
from .errors import RetrovoteError
from .mechanisms import aggregate, effective_allocations, to_funding
from .metrics import PmsScore, pms, to_percentages
from .model import (
    AllocationMatrix,
    AttackKind,
    AttackSpec,
    BudgetMode,
    DistributionSpec,
    FundingAllocation,
    MechanismKind,
    MechanismScores,
    PreferenceMatrix,
    ProjectAttackConfig,
    Scenario,
    SelectionRule,
    SimulationConfig,
    VoterAttackConfig,
    WeightVector,
    validate_config,
)
from .prefgen import (
    build_weight_vector,
    iteration_rng,
    load_preference_matrix,
    sample_preference_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationMatrix",
    "AttackKind",
    "AttackSpec",
    "BudgetMode",
    "CollusionOracle",
    "DistributionSpec",
    "FundingAllocation",
    "IterationRecord",
    "MechanismKind",
    "MechanismScores",
    "PhantomBound",
    "PhantomOracleInput",
    "PmsScore",
    "PreferenceMatrix",
    "ProjectAttackConfig",
    "RetrovoteError",
    "Scenario",
    "SelectionRule",
    "SimulationConfig",
    "SimulationReport",
    "VoterAttackConfig",
    "WeightVector",
    "aggregate",
    "apply_project_attack",
    "apply_voter_attack",
    "build_weight_vector",
    "collusion_split_grid_search",
    "effective_allocations",
    "iteration_rng",
    "load_preference_matrix",
    "mean_phantom_empirical",
    "mean_phantom_ratio",
    "median_phantom_bound",
    "median_phantom_empirical",
    "pms",
    "quadratic_collusion_oracle",
    "run_iteration",
    "run_simulation",
    "sample_preference_matrix",
    "select_attack",
    "to_funding",
    "to_percentages",
    "validate_config",
]
