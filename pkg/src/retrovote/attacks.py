"""Coordinated-manipulation transforms and their analytic oracles.

Attacks are implemented as preference-matrix rewrites; the untouched
mechanisms then aggregate the rewritten matrix, so every attacked score
is a derived fact rather than a special-cased formula.

Voter attacks:
  * quadratic: two colluders each put half their budget on the other's
    favorite project, turning two sqrt(w) voices into 2*sqrt(w/2) each,
    a sqrt(2) power gain.
  * mean/median: an attacker floods every project except their favorite
    with a near-zero epsilon allocation.

Project attacks: colluding projects pool their supporters, who split
their budgets across the colluding group and give epsilon to everyone
else. The literal budget mode hands every colluding project the full
concentrated amount per supporter, exceeding the per-voter budget on
purpose; the result is flagged budget-exempt.

The oracle functions state the closed-form damage bounds for phantom
(epsilon) voting and quadratic collusion; each has a brute-force
counterpart so the bounds are checked by an independent route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InfeasibleEpsilon,
    NotEnoughProjects,
    NotEnoughVoters,
    TooFewColluders,
)
from .model import (
    AllocationMatrix,
    AttackKind,
    AttackSpec,
    BudgetMode,
    MechanismKind,
    PreferenceMatrix,
    SelectionRule,
    SimulationConfig,
    WeightVector,
)

TOLERANCE = 1e-9


def default_attacker_count(mechanism: MechanismKind) -> int:
    """Minimum viable voter coalition: a pair for quadratic, one otherwise."""
    return 2 if MechanismKind(mechanism) is MechanismKind.QUADRATIC else 1


def select_attack(
    config: SimulationConfig,
    preferences: PreferenceMatrix,
    weights: WeightVector,
    attack: AttackKind,
    mechanism: MechanismKind | None = None,
    rng: np.random.Generator | None = None,
) -> AttackSpec:
    """Pick who participates in an attack on this round.

    Voter attacks take the lowest-index voters; how many depends on the
    mechanism unless the config pins a count. Project attacks pick the
    colluding projects by the configured selection rule and recruit as
    supporters every voter whose top preference is a colluding project
    (argmax ties broken toward the lower project index).

    Args:
        attack: which attack family to set up.
        mechanism: consulted only for voter attacks (quadratic pairs up).
        rng: seeded stream, required semantics for random project picks;
            defaults to a stream derived from config.seed.
    """
    attack = AttackKind(attack)
    if attack is AttackKind.NONE:
        return AttackSpec(AttackKind.NONE)

    if attack is AttackKind.VOTER:
        if mechanism is None:
            raise ValueError("voter attacks need the target mechanism")
        count = config.voter_attack.attacker_count
        if count is None:
            count = default_attacker_count(mechanism)
        if count < 0:
            raise ValueError("attacker count cannot be negative")
        if count == 0:
            return AttackSpec(AttackKind.VOTER)
        if MechanismKind(mechanism) is MechanismKind.QUADRATIC:
            count = 2 * (count // 2)  # colluders act in pairs
            if count < 2:
                raise NotEnoughVoters("quadratic collusion needs a pair of voters")
        if count > preferences.n_voters:
            raise NotEnoughVoters(
                f"{count} attackers requested but only {preferences.n_voters} voters"
            )
        return AttackSpec(AttackKind.VOTER, attacker_voters=frozenset(range(count)))

    group = config.project_attack.colluding_count
    if group < 2:
        raise TooFewColluders("a project attack needs at least two colluding projects")
    if group > preferences.n_projects:
        raise NotEnoughProjects(
            f"{group} colluding projects requested but only {preferences.n_projects} exist"
        )
    favorites = np.argmax(preferences.entries, axis=1)  # ties -> lower index
    if config.project_attack.selection is SelectionRule.TOP_BY_SUPPORTERS:
        counts = np.bincount(favorites, minlength=preferences.n_projects)
        colluding = np.argsort(-counts, kind="stable")[:group]  # ties -> lower index
    else:
        if rng is None:
            rng = np.random.default_rng(config.seed)
        colluding = rng.choice(preferences.n_projects, size=group, replace=False)
    supporters = np.nonzero(np.isin(favorites, colluding))[0]
    return AttackSpec(
        AttackKind.PROJECT,
        colluding_projects=frozenset(int(p) for p in colluding),
        supporters=frozenset(int(v) for v in supporters),
    )


def _check_voter_indices(indices, n_voters):
    if indices and max(indices) >= n_voters:
        raise DimensionMismatch("attack references a voter index outside the matrix")


def apply_voter_attack(
    mechanism: MechanismKind,
    preferences: PreferenceMatrix,
    weights: WeightVector,
    spec: AttackSpec,
    epsilon: float,
) -> PreferenceMatrix:
    """Rewrite the attackers' preference rows; everyone else is untouched.

    Quadratic: attackers form pairs (by ascending index); each pair puts
    0.5 on each of its two target projects, the first member's favorite
    and the second member's favorite, falling back to the second member's
    runner-up when the favorites collide.

    Mean/median: each attacker keeps w - (P-1)*epsilon on their favorite
    project and spreads epsilon everywhere else.

    Raises:
        InfeasibleEpsilon: epsilon*(P-1) does not fit an attacker's budget.
    """
    mechanism = MechanismKind(mechanism)
    if spec.kind is AttackKind.NONE or not spec.attacker_voters:
        return preferences
    if spec.kind is not AttackKind.VOTER:
        raise ValueError(f"expected a voter attack spec, got {spec.kind.value}")

    n_voters, n_projects = preferences.entries.shape
    attackers = sorted(spec.attacker_voters)
    _check_voter_indices(attackers, n_voters)
    w = weights.weights
    for v in attackers:
        if not epsilon * (n_projects - 1) < w[v]:
            raise InfeasibleEpsilon(
                f"epsilon*(P-1) = {epsilon * (n_projects - 1)!r} exceeds "
                f"voter {v}'s budget {w[v]!r}"
            )

    honest = preferences.entries
    out = honest.copy()
    if mechanism is MechanismKind.QUADRATIC:
        if n_projects < 2:
            raise NotEnoughProjects("a pair split needs two distinct projects")
        if len(attackers) % 2:
            raise ValueError("quadratic colluders must pair up; got an odd attacker set")
        for first, second in zip(attackers[0::2], attackers[1::2]):
            target_a = int(np.argmax(honest[first]))
            target_b = int(np.argmax(honest[second]))
            if target_b == target_a:
                target_b = int(np.argsort(-honest[second], kind="stable")[1])
            for row in (first, second):
                out[row] = 0.0
                out[row, target_a] = 0.5
                out[row, target_b] = 0.5
    else:
        for v in attackers:
            favorite = int(np.argmax(honest[v]))
            out[v] = epsilon / w[v]
            out[v, favorite] = (w[v] - (n_projects - 1) * epsilon) / w[v]
    return PreferenceMatrix(out)


def apply_project_attack(
    mechanism: MechanismKind,
    preferences: PreferenceMatrix,
    weights: WeightVector,
    spec: AttackSpec,
    epsilon: float,
    budget_mode: BudgetMode = BudgetMode.BUDGET_PRESERVING,
) -> PreferenceMatrix | AllocationMatrix:
    """Rewrite the supporters' rows in favor of the colluding projects.

    Quadratic supporters split evenly: 1/|group| preference on each
    colluding project, zero elsewhere. Mean/median supporters keep
    epsilon on every outside project and share the rest of their budget
    across the group (budget-preserving mode), or, in literal mode, give
    each colluding project the full w - (P-1)*epsilon in token units,
    exceeding the per-voter budget; that result is an AllocationMatrix
    flagged budget-exempt instead of a preference matrix.

    Non-supporter rows are unchanged in every mode.
    """
    mechanism = MechanismKind(mechanism)
    budget_mode = BudgetMode(budget_mode)
    if spec.kind is AttackKind.NONE:
        return preferences
    if spec.kind is not AttackKind.PROJECT:
        raise ValueError(f"expected a project attack spec, got {spec.kind.value}")

    colluding = sorted(spec.colluding_projects)
    if len(colluding) < 2:
        raise TooFewColluders("a project attack needs at least two colluding projects")
    n_voters, n_projects = preferences.entries.shape
    if max(colluding) >= n_projects:
        raise DimensionMismatch("attack references a project index outside the matrix")
    supporters = sorted(spec.supporters)
    _check_voter_indices(supporters, n_voters)

    group = len(colluding)
    w = weights.weights
    honest = preferences.entries

    if mechanism is MechanismKind.QUADRATIC:
        out = honest.copy()
        out[supporters, :] = 0.0
        out[np.ix_(supporters, colluding)] = 1.0 / group
        return PreferenceMatrix(out)

    outside = n_projects - group if budget_mode is BudgetMode.BUDGET_PRESERVING else n_projects - 1
    for v in supporters:
        if not epsilon * outside < w[v]:
            raise InfeasibleEpsilon(
                f"epsilon strategy exceeds supporter {v}'s budget {w[v]!r}"
            )

    if budget_mode is BudgetMode.LITERAL:
        allocations = honest * w[:, None]
        allocations[supporters, :] = epsilon
        allocations[np.ix_(supporters, colluding)] = (
            w[supporters] - (n_projects - 1) * epsilon
        )[:, None]
        return AllocationMatrix(allocations, row_budgets=w, budget_exempt=True)

    out = honest.copy()
    out[supporters, :] = (epsilon / w[supporters])[:, None]
    out[np.ix_(supporters, colluding)] = (
        (w[supporters] - (n_projects - group) * epsilon) / (group * w[supporters])
    )[:, None]
    return PreferenceMatrix(out)


# --- closed-form oracles and brute-force verifiers ---


@dataclass(frozen=True)
class CollusionOracle:
    """Utilities with and without the two-voter budget swap."""

    honest_utility: float
    collusion_utility: float
    gain_ratio: float


def quadratic_collusion_oracle(tokens_per_voter: float) -> CollusionOracle:
    """Closed-form gain from optimal two-voter quadratic collusion.

    A lone voter concentrating a budget T on their project contributes
    sqrt(T). If two voters each put T/2 on both favorites, each project
    collects 2*sqrt(T/2) = sqrt(2)*sqrt(T): a sqrt(2) multiplier.
    """
    if not tokens_per_voter > 0.0:
        raise ValueError("token budget must be positive")
    honest = math.sqrt(tokens_per_voter)
    collusion = 2.0 * math.sqrt(tokens_per_voter / 2.0)
    return CollusionOracle(honest, collusion, collusion / honest)


def collusion_split_grid_search(tokens: float, steps: int = 10_000):
    """Brute-force the best two-way split of a budget under sqrt scoring.

    Scans x in [0, T] on a uniform grid and maximizes sqrt(x) + sqrt(T-x).

    Returns:
        (best_split, best_utility)
    """
    if not tokens > 0.0:
        raise ValueError("token budget must be positive")
    splits = np.linspace(0.0, tokens, steps + 1)
    utilities = np.sqrt(splits) + np.sqrt(tokens - splits)
    best = int(np.argmax(utilities))
    return float(splits[best]), float(utilities[best])


def mean_phantom_ratio(n: int, k: int) -> float:
    """Fraction of a project's mean score that survives k phantom votes.

    With n genuine allocations and k adversaries casting vanishing
    epsilon votes, the mean over the n+k wallets shrinks toward
    n / (n + k) of its honest value.
    """
    if n < 1:
        raise ValueError("need at least one genuine allocation")
    if k < 0:
        raise ValueError("adversary count cannot be negative")
    return n / (n + k)


def mean_phantom_empirical(allocations, k: int, epsilon: float) -> float:
    """Brute-force mean after k phantom votes of size epsilon."""
    a = np.asarray(allocations, dtype=float)
    if a.ndim != 1 or a.size == 0 or np.any(a <= 0.0):
        raise ValueError("allocations must be a non-empty positive vector")
    if k < 0:
        raise ValueError("adversary count cannot be negative")
    if not epsilon > 0.0:
        raise ValueError("epsilon must be positive")
    return float(np.concatenate([a, np.full(k, epsilon)]).mean())


@dataclass(frozen=True)
class PhantomOracleInput:
    """Sorted positive allocations for one project, plus adversary count."""

    nonzero_allocations: tuple[float, ...]
    k: int

    def __post_init__(self):
        allocations = tuple(float(a) for a in self.nonzero_allocations)
        if not allocations:
            raise ValueError("need at least one allocation")
        if any(a <= 0.0 for a in allocations):
            raise ValueError("allocations must be positive")
        if any(b < a for a, b in zip(allocations, allocations[1:])):
            raise ValueError("allocations must be sorted ascending")
        if self.k < 0:
            raise ValueError("adversary count cannot be negative")
        object.__setattr__(self, "nonzero_allocations", allocations)
        object.__setattr__(self, "k", int(self.k))


@dataclass(frozen=True)
class PhantomBound:
    """An order-statistic ceiling on the post-attack median."""

    bound_value: float
    bound_index: int  # 1-based order statistic
    saturated: bool = False


def median_phantom_bound(oracle_input: PhantomOracleInput) -> PhantomBound:
    """Upper bound on the median after k phantom votes below every allocation.

    Let m be the largest 1-based index whose order statistic does not
    exceed the honest median. Inserting k values below the minimum drags
    the median down to at most the (m - ceil(k/2) + 1)-th order
    statistic, whichever parities n and k have. When that index falls
    below 1 the attack has pushed the median under the smallest honest
    allocation; the bound saturates there and is flagged.
    """
    a = np.asarray(oracle_input.nonzero_allocations, dtype=float)
    n = a.size
    honest_median = float(np.median(a))
    m = int(np.searchsorted(a, honest_median, side="right"))
    index = m - math.ceil(oracle_input.k / 2) + 1
    if index < 1:
        return PhantomBound(float(a[0]), 1, saturated=True)
    if index > n:
        index = n  # median already sits at the top order statistic
    return PhantomBound(float(a[index - 1]), index)


def median_phantom_empirical(allocations, k: int, epsilon: float) -> float:
    """Brute-force median after k phantom votes of size epsilon.

    Uses the usual even/odd rule: an even wallet count averages the two
    central order statistics. Epsilon must undercut every allocation.
    """
    a = np.asarray(allocations, dtype=float)
    if a.ndim != 1 or a.size == 0 or np.any(a <= 0.0):
        raise ValueError("allocations must be a non-empty positive vector")
    if k < 0:
        raise ValueError("adversary count cannot be negative")
    if not 0.0 < epsilon < a.min():
        raise ValueError("epsilon must be positive and below every allocation")
    return float(np.median(np.concatenate([a, np.full(k, epsilon)])))
