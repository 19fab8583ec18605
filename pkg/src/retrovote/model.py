"""Domain types and configuration for a retroactive funding round.

Everything here is a plain value object: validated on construction,
immutable afterwards, safe to share between worker processes. Mechanism
logic lives in :mod:`retrovote.mechanisms`, attack logic in
:mod:`retrovote.attacks`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, InvalidConfig

#: Absolute tolerance for sum checks; sums against a scale (c or T) use it
#: relatively.
TOLERANCE = 1e-9

MAX_SEED = 2 ** 64


class MechanismKind(str, Enum):
    """The four aggregation rules a round can be scored with."""

    CONTROL_SUM = "control_sum"
    QUADRATIC = "quadratic"
    MEAN = "mean"
    MEDIAN = "median"


class Scenario(str, Enum):
    """What happened to the preferences before aggregation."""

    BASELINE = "baseline"
    VOTER_ATTACK = "voter_attack"
    PROJECT_ATTACK = "project_attack"


class AttackKind(str, Enum):
    NONE = "none"
    VOTER = "voter_attack"
    PROJECT = "project_attack"


class SelectionRule(str, Enum):
    """How colluding projects are picked for a project attack."""

    TOP_BY_SUPPORTERS = "top_by_supporters"
    RANDOM_PAIR = "random_pair"


class BudgetMode(str, Enum):
    """Whether a project attack respects the per-voter budget.

    BUDGET_PRESERVING splits each supporter's budget evenly across the
    colluding projects. LITERAL gives every colluding project the full
    concentrated amount per supporter, deliberately exceeding the budget;
    the result is flagged budget-exempt.
    """

    BUDGET_PRESERVING = "budget_preserving"
    LITERAL = "literal"


def _own_array(values, dtype=float):
    # private copy so freezing flags never leaks to caller arrays
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PreferenceMatrix:
    """Row-stochastic voters-by-projects matrix of preference shares.

    Every entry lies in [0, 1] and every row sums to 1 within 1e-9, so a
    row reads as the fractions of one voter's budget.
    """

    entries: np.ndarray

    def __post_init__(self):
        entries = _own_array(self.entries)
        if entries.ndim != 2 or entries.size == 0:
            raise DimensionMismatch(
                f"preference matrix must be 2-d and non-empty, got shape {entries.shape}"
            )
        if np.any(entries < 0.0) or np.any(entries > 1.0):
            raise ValueError("preference entries must lie in [0, 1]")
        row_sums = entries.sum(axis=1)
        if np.any(np.abs(row_sums - 1.0) > TOLERANCE):
            worst = int(np.argmax(np.abs(row_sums - 1.0)))
            raise ValueError(
                f"preference row {worst} sums to {row_sums[worst]!r}, expected 1"
            )
        object.__setattr__(self, "entries", entries)

    @property
    def n_voters(self) -> int:
        return self.entries.shape[0]

    @property
    def n_projects(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class WeightVector:
    """Per-voter voting power, normalized to sum to a fixed constant."""

    weights: np.ndarray
    normalization_constant: float

    def __post_init__(self):
        weights = _own_array(self.weights)
        c = float(self.normalization_constant)
        if weights.ndim != 1 or weights.size == 0:
            raise DimensionMismatch("weights must be a non-empty vector")
        if c <= 0.0:
            raise ValueError("normalization constant must be positive")
        if np.any(weights <= 0.0):
            raise ValueError("all voter weights must be positive")
        if abs(weights.sum() - c) > TOLERANCE * c:
            raise ValueError(
                f"weights sum to {weights.sum()!r}, expected {c!r}"
            )
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "normalization_constant", c)

    @property
    def n_voters(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class AllocationMatrix:
    """Effective token allocations, voters by projects.

    ``row_budgets`` carries each voter's budget when known; rows must then
    stay within budget (plus 1e-9) unless ``budget_exempt`` marks the
    matrix as the output of a deliberately budget-violating attack variant.
    """

    entries: np.ndarray
    row_budgets: np.ndarray | None = None
    budget_exempt: bool = False

    def __post_init__(self):
        entries = _own_array(self.entries)
        if entries.ndim != 2 or entries.size == 0:
            raise DimensionMismatch(
                f"allocation matrix must be 2-d and non-empty, got shape {entries.shape}"
            )
        if np.any(entries < 0.0):
            raise ValueError("allocations must be non-negative")
        budgets = self.row_budgets
        if budgets is not None:
            budgets = _own_array(budgets)
            if budgets.shape != (entries.shape[0],):
                raise DimensionMismatch("row budgets must have one entry per voter")
            if not self.budget_exempt:
                row_sums = entries.sum(axis=1)
                over = row_sums > budgets + TOLERANCE
                if np.any(over):
                    worst = int(np.argmax(row_sums - budgets))
                    raise ValueError(
                        f"row {worst} allocates {row_sums[worst]!r} "
                        f"over its budget {budgets[worst]!r}"
                    )
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "row_budgets", budgets)

    @property
    def n_voters(self) -> int:
        return self.entries.shape[0]

    @property
    def n_projects(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class MechanismScores:
    """Raw per-project aggregate produced by one mechanism."""

    scores: np.ndarray
    mechanism: MechanismKind

    def __post_init__(self):
        scores = _own_array(self.scores)
        if scores.ndim != 1 or scores.size == 0:
            raise DimensionMismatch("scores must be a non-empty vector")
        if np.any(scores < 0.0):
            raise ValueError("mechanism scores must be non-negative")
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "mechanism", MechanismKind(self.mechanism))

    @property
    def n_projects(self) -> int:
        return self.scores.shape[0]


@dataclass(frozen=True)
class FundingAllocation:
    """Final token split: per-project amounts summing to the round total."""

    tokens: np.ndarray
    total: float

    def __post_init__(self):
        tokens = _own_array(self.tokens)
        total = float(self.total)
        if tokens.ndim != 1 or tokens.size == 0:
            raise DimensionMismatch("token vector must be non-empty")
        if total <= 0.0:
            raise ValueError("total tokens must be positive")
        if np.any(tokens < 0.0):
            raise ValueError("token amounts must be non-negative")
        if abs(tokens.sum() - total) > TOLERANCE * total:
            raise ValueError(
                f"tokens sum to {tokens.sum()!r}, expected {total!r}"
            )
        object.__setattr__(self, "tokens", tokens)
        object.__setattr__(self, "total", total)


_DISTRIBUTION_KINDS = ("pareto", "uniform", "gaussian")

#: The Pareto minimum (scale) is pinned to 1; row normalization makes any
#: other positive scale observationally identical.
PARETO_SCALE = 1.0


@dataclass(frozen=True)
class DistributionSpec:
    """How raw preference intensities are drawn before row normalization.

    ``pareto`` draws from a standard Pareto on [1, inf) with shape
    ``alpha`` (> 1 so the mean is finite), ``uniform`` from [0, 1), and
    ``gaussian`` from N(mu, sigma) clamped at zero.
    """

    kind: str = "pareto"
    alpha: float = 2.5
    mu: float = 1.0
    sigma: float = 0.25

    def __post_init__(self):
        if self.kind not in _DISTRIBUTION_KINDS:
            raise ValueError(
                f"unknown distribution {self.kind!r}, expected one of {_DISTRIBUTION_KINDS}"
            )
        if self.kind == "pareto" and not self.alpha > 1.0:
            raise ValueError("pareto shape alpha must exceed 1 for a finite mean")
        if self.kind == "gaussian" and not self.sigma > 0.0:
            raise ValueError("gaussian sigma must be positive")

    @classmethod
    def pareto(cls, alpha: float = 2.5) -> "DistributionSpec":
        return cls(kind="pareto", alpha=alpha)

    @classmethod
    def uniform(cls) -> "DistributionSpec":
        return cls(kind="uniform")

    @classmethod
    def gaussian(cls, mu: float = 1.0, sigma: float = 0.25) -> "DistributionSpec":
        return cls(kind="gaussian", mu=mu, sigma=sigma)


@dataclass(frozen=True)
class VoterAttackConfig:
    """Coordinated-voter attack sizing.

    ``attacker_count`` of ``None`` means the minimum viable coalition for
    each mechanism: a pair of colluders for quadratic voting, a single
    epsilon attacker for mean and median.
    """

    attacker_count: int | None = None


@dataclass(frozen=True)
class ProjectAttackConfig:
    """Colluding-project attack sizing and semantics."""

    colluding_count: int = 2
    selection: SelectionRule = SelectionRule.TOP_BY_SUPPORTERS
    budget_mode: BudgetMode = BudgetMode.BUDGET_PRESERVING


@dataclass(frozen=True)
class SimulationConfig:
    """Full description of one Monte Carlo campaign.

    Defaults reproduce the reference round scale: 133 voters, 374
    projects, 10,000 iterations, Pareto(2.5) preferences, epsilon 0.01
    and weight normalization constant 1000.
    """

    n_voters: int = 133
    n_projects: int = 374
    total_tokens: float = 1.0
    iterations: int = 10_000
    seed: int = 0
    distribution: DistributionSpec = field(default_factory=DistributionSpec.pareto)
    epsilon: float = 0.01
    normalization_constant: float = 1000.0
    voter_attack: VoterAttackConfig = field(default_factory=VoterAttackConfig)
    project_attack: ProjectAttackConfig = field(default_factory=ProjectAttackConfig)

    @property
    def min_voter_weight(self) -> float:
        # equal-weight regime: every voter holds c / N
        return self.normalization_constant / self.n_voters


@dataclass(frozen=True)
class AttackSpec:
    """Who participates in an attack: voters, projects, or neither."""

    kind: AttackKind = AttackKind.NONE
    attacker_voters: frozenset[int] = frozenset()
    colluding_projects: frozenset[int] = frozenset()
    supporters: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "kind", AttackKind(self.kind))
        for name in ("attacker_voters", "colluding_projects", "supporters"):
            indices = frozenset(int(i) for i in getattr(self, name))
            if any(i < 0 for i in indices):
                raise ValueError(f"{name} must be non-negative indices")
            object.__setattr__(self, name, indices)


def validate_config(config: SimulationConfig) -> SimulationConfig:
    """Check every config invariant; return the config unchanged if valid.

    Raises:
        InvalidConfig: carrying the name of the violated invariant.
    """
    def fail(invariant, message):
        raise InvalidConfig(invariant, message)

    if config.n_voters < 1:
        fail("n_voters_positive", "need at least one voter")
    if config.n_projects < 1:
        fail("n_projects_positive", "need at least one project")
    if config.iterations < 1:
        fail("iterations_positive", "need at least one iteration")
    if not config.total_tokens > 0.0:
        fail("total_tokens_positive", "total tokens must be positive")
    if not config.normalization_constant > 0.0:
        fail("normalization_constant_positive", "normalization constant must be positive")
    if not config.epsilon > 0.0:
        fail("epsilon_positive", "epsilon must be positive")
    if not 0 <= config.seed < MAX_SEED:
        fail("seed_range", "seed must fit in an unsigned 64-bit integer")
    if not isinstance(config.distribution, DistributionSpec):
        fail("distribution_spec", "distribution must be a DistributionSpec")

    floor = config.epsilon * (config.n_projects - 1)
    if not floor < config.min_voter_weight:
        fail(
            "epsilon_budget",
            "epsilon too large for budget: epsilon*(P-1) = "
            f"{floor!r} must stay below the per-voter weight {config.min_voter_weight!r}",
        )

    attackers = config.voter_attack.attacker_count
    if attackers is not None:
        if attackers < 1:
            fail("attacker_count_positive", "attacker count must be positive")
        if attackers > config.n_voters:
            fail("attacker_count_bound", "attacker count exceeds the number of voters")

    colluders = config.project_attack.colluding_count
    if colluders < 2:
        fail("colluding_count_minimum", "a project attack needs at least two colluding projects")
    # the untouched default pair stays valid even in a degenerate one-project
    # round; attack selection reports the missing projects instead
    if colluders > max(config.n_projects, 2):
        fail("colluding_count_bound", "colluding count exceeds the number of projects")

    return config
