"""Attack selection, the matrix transforms, and the phantom/collusion oracles."""
import math

import numpy as np
import pytest

from retrovote.attacks import (
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
from retrovote.errors import (
    InfeasibleEpsilon,
    NotEnoughProjects,
    NotEnoughVoters,
    TooFewColluders,
)
from retrovote.model import (
    AllocationMatrix,
    AttackKind,
    AttackSpec,
    BudgetMode,
    MechanismKind,
    PreferenceMatrix,
    ProjectAttackConfig,
    SelectionRule,
    SimulationConfig,
    VoterAttackConfig,
)
from retrovote.prefgen import build_weight_vector, iteration_rng, sample_preference_matrix


def uniform_matrix(n, p):
    return PreferenceMatrix(np.full((n, p), 1.0 / p))


def peaked_matrix(favorites, p, peak=0.5):
    """Each voter gives `peak` to their favorite and splits the rest."""
    n = len(favorites)
    rest = (1.0 - peak) / (p - 1)
    entries = np.full((n, p), rest)
    for voter, favorite in enumerate(favorites):
        entries[voter, favorite] = peak
    return PreferenceMatrix(entries)


def config_for(m, **kwargs):
    return SimulationConfig(n_voters=m.n_voters, n_projects=m.n_projects, **kwargs)


# --- selection ---


def test_quadratic_voter_attack_selects_lowest_pair():
    m = uniform_matrix(6, 4)
    w = build_weight_vector(6, 60.0)
    spec = select_attack(config_for(m), m, w, AttackKind.VOTER,
                         mechanism=MechanismKind.QUADRATIC)
    assert spec.attacker_voters == frozenset({0, 1})


def test_mean_and_median_voter_attack_select_single_voter():
    m = uniform_matrix(6, 4)
    w = build_weight_vector(6, 60.0)
    for mechanism in (MechanismKind.MEAN, MechanismKind.MEDIAN):
        spec = select_attack(config_for(m), m, w, AttackKind.VOTER, mechanism=mechanism)
        assert spec.attacker_voters == frozenset({0})


def test_single_voter_cannot_form_quadratic_pair():
    m = uniform_matrix(1, 4)
    w = build_weight_vector(1, 10.0)
    with pytest.raises(NotEnoughVoters):
        select_attack(config_for(m), m, w, AttackKind.VOTER,
                      mechanism=MechanismKind.QUADRATIC)


def test_attacker_count_zero_is_a_no_op_spec():
    m = uniform_matrix(4, 3)
    w = build_weight_vector(4, 40.0)
    config = config_for(m, voter_attack=VoterAttackConfig(attacker_count=0))
    spec = select_attack(config, m, w, AttackKind.VOTER, mechanism=MechanismKind.MEAN)
    assert spec.attacker_voters == frozenset()


def test_top_by_supporters_selection():
    # voters 0..4 favor project 7, voters 5..9 favor project 2
    m = peaked_matrix([7] * 5 + [2] * 5, 10)
    w = build_weight_vector(10, 100.0)
    spec = select_attack(config_for(m), m, w, AttackKind.PROJECT)
    assert spec.colluding_projects == frozenset({2, 7})
    assert spec.supporters == frozenset(range(10))


def test_top_by_supporters_breaks_ties_toward_lower_index():
    # every project has one supporter, so the first two projects win
    m = peaked_matrix([3, 2, 1, 0], 4)
    w = build_weight_vector(4, 4.0)
    spec = select_attack(config_for(m), m, w, AttackKind.PROJECT)
    assert spec.colluding_projects == frozenset({0, 1})


def test_random_pair_selection_is_seeded():
    m = uniform_matrix(8, 12)
    w = build_weight_vector(8, 80.0)
    config = config_for(
        m, project_attack=ProjectAttackConfig(selection=SelectionRule.RANDOM_PAIR)
    )
    first = select_attack(config, m, w, AttackKind.PROJECT, rng=iteration_rng(9, 1))
    second = select_attack(config, m, w, AttackKind.PROJECT, rng=iteration_rng(9, 1))
    assert first.colluding_projects == second.colluding_projects
    assert len(first.colluding_projects) == 2


def test_colluding_count_above_projects_is_rejected():
    m = uniform_matrix(4, 3)
    w = build_weight_vector(4, 4.0)
    config = config_for(m, project_attack=ProjectAttackConfig(colluding_count=4))
    with pytest.raises(NotEnoughProjects):
        select_attack(config, m, w, AttackKind.PROJECT)


# --- voter attack transform ---


def test_mean_attacker_row_concentrates_on_favorite():
    m = PreferenceMatrix([[0.6, 0.3, 0.1], [0.2, 0.5, 0.3]])
    w = build_weight_vector(2, 2.0)  # w_v = 1
    spec = AttackSpec(AttackKind.VOTER, attacker_voters=[0])
    attacked = apply_voter_attack(MechanismKind.MEAN, m, w, spec, 0.01)
    assert np.allclose(attacked.entries[0], [0.98, 0.01, 0.01])
    assert np.array_equal(attacked.entries[1], m.entries[1])


def test_quadratic_pair_splits_across_both_favorites():
    m = PreferenceMatrix([[0.7, 0.1, 0.2], [0.1, 0.2, 0.7]])
    w = build_weight_vector(2, 2.0)
    spec = AttackSpec(AttackKind.VOTER, attacker_voters=[0, 1])
    attacked = apply_voter_attack(MechanismKind.QUADRATIC, m, w, spec, 0.01)
    assert np.allclose(attacked.entries[0], [0.5, 0.0, 0.5])
    assert np.allclose(attacked.entries[1], [0.5, 0.0, 0.5])


def test_quadratic_pair_collision_falls_back_to_runner_up():
    # both favorites are project 0; the pair then targets voter 1's runner-up
    m = PreferenceMatrix([[0.7, 0.1, 0.2], [0.6, 0.1, 0.3]])
    w = build_weight_vector(2, 2.0)
    spec = AttackSpec(AttackKind.VOTER, attacker_voters=[0, 1])
    attacked = apply_voter_attack(MechanismKind.QUADRATIC, m, w, spec, 0.01)
    assert np.allclose(attacked.entries[0], [0.5, 0.0, 0.5])
    assert np.allclose(attacked.entries[1], [0.5, 0.0, 0.5])


def test_empty_attack_spec_returns_matrix_unchanged():
    m = uniform_matrix(3, 3)
    w = build_weight_vector(3, 3.0)
    assert apply_voter_attack(MechanismKind.MEAN, m, w, AttackSpec(), 0.01) is m


def test_infeasible_epsilon_is_rejected():
    m = uniform_matrix(2, 200)
    w = build_weight_vector(2, 2.0)  # budget 1, but 199 * 0.01 = 1.99
    spec = AttackSpec(AttackKind.VOTER, attacker_voters=[0])
    with pytest.raises(InfeasibleEpsilon):
        apply_voter_attack(MechanismKind.MEAN, m, w, spec, 0.01)


def test_voter_attacks_are_idempotent():
    m = sample_preference_matrix(
        12, 9, SimulationConfig().distribution, iteration_rng(4, 2)
    )
    w = build_weight_vector(12, 120.0)
    for mechanism, attackers in (
        (MechanismKind.QUADRATIC, [0, 1]),
        (MechanismKind.MEAN, [0]),
        (MechanismKind.MEDIAN, [0]),
    ):
        spec = AttackSpec(AttackKind.VOTER, attacker_voters=attackers)
        once = apply_voter_attack(mechanism, m, w, spec, 0.01)
        twice = apply_voter_attack(mechanism, once, w, spec, 0.01)
        assert np.allclose(once.entries, twice.entries, atol=1e-12), mechanism


# --- project attack transform ---


def project_spec(colluding, supporters):
    return AttackSpec(
        AttackKind.PROJECT, colluding_projects=colluding, supporters=supporters
    )


def test_quadratic_supporters_split_evenly():
    m = uniform_matrix(3, 4)
    w = build_weight_vector(3, 3.0)
    attacked = apply_project_attack(
        MechanismKind.QUADRATIC, m, w, project_spec([0, 2], [1]), 0.01
    )
    assert np.allclose(attacked.entries[1], [0.5, 0.0, 0.5, 0.0])
    assert np.array_equal(attacked.entries[0], m.entries[0])
    assert np.array_equal(attacked.entries[2], m.entries[2])


def test_mean_budget_preserving_supporter_row():
    m = uniform_matrix(2, 4)
    w = build_weight_vector(2, 2.0)  # w_v = 1
    attacked = apply_project_attack(
        MechanismKind.MEAN, m, w, project_spec([0, 1], [0]), 0.01,
        BudgetMode.BUDGET_PRESERVING,
    )
    # (1 - 2 * 0.01) / 2 = 0.49 on each colluding project, epsilon elsewhere
    assert np.allclose(attacked.entries[0], [0.49, 0.49, 0.01, 0.01])
    assert np.array_equal(attacked.entries[1], m.entries[1])


def test_literal_mode_returns_budget_exempt_allocations():
    m = uniform_matrix(2, 4)
    w = build_weight_vector(2, 8.0)  # w_v = 4
    attacked = apply_project_attack(
        MechanismKind.MEDIAN, m, w, project_spec([1, 3], [0]), 0.01, BudgetMode.LITERAL
    )
    assert isinstance(attacked, AllocationMatrix)
    assert attacked.budget_exempt
    concentrated = 4.0 - 3 * 0.01
    assert np.allclose(attacked.entries[0], [0.01, concentrated, 0.01, concentrated])
    # non-supporters keep their honest effective allocations
    assert np.allclose(attacked.entries[1], m.entries[1] * 4.0)
    # each colluding project got more than the voter budget in total
    assert attacked.entries[0].sum() > 4.0


def test_quadratic_ignores_budget_mode():
    m = uniform_matrix(2, 4)
    w = build_weight_vector(2, 2.0)
    spec = project_spec([0, 1], [0])
    literal = apply_project_attack(
        MechanismKind.QUADRATIC, m, w, spec, 0.01, BudgetMode.LITERAL
    )
    preserving = apply_project_attack(
        MechanismKind.QUADRATIC, m, w, spec, 0.01, BudgetMode.BUDGET_PRESERVING
    )
    assert isinstance(literal, PreferenceMatrix)
    assert np.array_equal(literal.entries, preserving.entries)


def test_project_attack_needs_two_colluders():
    m = uniform_matrix(2, 4)
    w = build_weight_vector(2, 2.0)
    with pytest.raises(TooFewColluders):
        apply_project_attack(MechanismKind.MEAN, m, w, project_spec([0], [0]), 0.01)


def test_project_attacks_are_idempotent():
    m = sample_preference_matrix(
        10, 8, SimulationConfig().distribution, iteration_rng(8, 5)
    )
    w = build_weight_vector(10, 100.0)
    spec = project_spec([2, 5], [1, 3, 4])
    for mechanism in (MechanismKind.QUADRATIC, MechanismKind.MEAN, MechanismKind.MEDIAN):
        once = apply_project_attack(mechanism, m, w, spec, 0.01)
        twice = apply_project_attack(mechanism, once, w, spec, 0.01)
        assert np.allclose(once.entries, twice.entries, atol=1e-12), mechanism


# --- quadratic collusion oracle ---


def test_collusion_oracle_hand_values():
    result = quadratic_collusion_oracle(100.0)
    assert result.honest_utility == pytest.approx(10.0, abs=1e-12)
    assert result.collusion_utility == pytest.approx(14.142136, abs=1e-6)
    assert result.gain_ratio == pytest.approx(math.sqrt(2.0), abs=1e-12)

    assert quadratic_collusion_oracle(1.0).gain_ratio == pytest.approx(
        math.sqrt(2.0), abs=1e-12
    )
    assert quadratic_collusion_oracle(2.0).collusion_utility == pytest.approx(
        2.0, abs=1e-12
    )


def test_grid_search_confirms_even_split():
    for tokens in (1.0, 2.0, 100.0):
        split, utility = collusion_split_grid_search(tokens)
        assert abs(split - tokens / 2.0) <= tokens / 10_000
        assert abs(utility - math.sqrt(2.0) * math.sqrt(tokens)) <= 1e-6


# --- mean phantom oracle ---


def test_mean_phantom_ratio_values():
    assert mean_phantom_ratio(4, 1) == pytest.approx(0.8)
    assert mean_phantom_ratio(7, 0) == 1.0
    assert mean_phantom_ratio(100, 900) == pytest.approx(0.1)


def test_mean_phantom_empirical_matches_ratio():
    allocs = [10.0, 10.0, 10.0, 10.0]
    post = mean_phantom_empirical(allocs, 1, 1e-9)
    assert post == pytest.approx(8.0, abs=1e-8)
    assert abs(post / 10.0 - mean_phantom_ratio(4, 1)) <= 10 * 1e-9 / 10.0

    assert mean_phantom_empirical(allocs, 0, 1e-9) == pytest.approx(10.0)
    assert mean_phantom_empirical([100.0], 3, 1e-9) == pytest.approx(25.0, abs=1e-8)


def test_mean_phantom_ratio_property_randomized():
    rng = np.random.default_rng(17)
    for _ in range(1000):
        n = int(rng.integers(1, 40))
        k = int(rng.integers(0, 40))
        allocs = rng.random(n) * 50.0 + 0.5
        ratio = mean_phantom_empirical(allocs, k, 1e-12) / allocs.mean()
        assert abs(ratio - mean_phantom_ratio(n, k)) <= 1e-6


# --- median phantom oracle ---


def test_median_phantom_bound_hand_cases():
    odd = median_phantom_bound(PhantomOracleInput((10, 20, 30, 40, 50), 2))
    assert odd.bound_value == 30.0 and odd.bound_index == 3
    assert median_phantom_empirical([10, 20, 30, 40, 50], 2, 1e-9) == pytest.approx(20.0)

    even = median_phantom_bound(PhantomOracleInput((10, 20, 30, 40), 2))
    assert even.bound_value == 20.0 and even.bound_index == 2
    assert median_phantom_empirical([10, 20, 30, 40], 2, 1e-9) == pytest.approx(15.0)


def test_median_phantom_bound_no_attack():
    bound = median_phantom_bound(PhantomOracleInput((10, 20, 30, 40, 50), 0))
    assert bound.bound_index == 4  # one order statistic above the median
    empirical = median_phantom_empirical([10, 20, 30, 40, 50], 0, 1e-9)
    assert empirical == 30.0
    assert empirical <= bound.bound_value + 1e-9


def test_median_phantom_bound_saturates():
    swamped = median_phantom_bound(PhantomOracleInput((10, 20, 30), 50))
    assert swamped.saturated
    assert swamped.bound_value == 10.0 and swamped.bound_index == 1


def test_median_phantom_empirical_hand_cases():
    assert median_phantom_empirical([100, 100, 100, 100], 1, 1e-9) == 100.0
    assert median_phantom_empirical([10, 20, 30, 40, 50], 4, 1e-9) == 10.0
    assert median_phantom_empirical([10, 20, 30], 0, 1e-9) == 20.0


def test_median_phantom_bound_property_all_parities():
    # brute-force post-attack median never exceeds the order-statistic bound
    rng = np.random.default_rng(23)
    cases = 0
    parities_seen = set()
    while cases < 1000:
        n = int(rng.integers(1, 30))
        k = int(rng.integers(0, 30))
        allocs = np.sort(rng.random(n) * 100.0 + 0.01)
        if rng.random() < 0.3:  # exercise ties around the median too
            allocs = np.repeat(allocs[: max(1, n // 2)], 2)[:n]
            allocs = np.sort(allocs)
        bound = median_phantom_bound(PhantomOracleInput(tuple(allocs), k))
        empirical = median_phantom_empirical(allocs, k, 1e-12)
        assert empirical <= bound.bound_value + 1e-9
        parities_seen.add((n % 2, k % 2))
        cases += 1
    assert parities_seen == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_oracle_input_validation():
    with pytest.raises(ValueError):
        PhantomOracleInput((3.0, 2.0), 1)  # not sorted
    with pytest.raises(ValueError):
        PhantomOracleInput((0.0, 2.0), 1)  # not positive
    with pytest.raises(ValueError):
        PhantomOracleInput((1.0,), -1)
    with pytest.raises(ValueError):
        median_phantom_empirical([1.0, 2.0], 1, 5.0)  # epsilon above the minimum
