"""Monte Carlo campaign over mechanisms and attack scenarios.

Each iteration samples a fresh preference matrix from its own seeded
sub-stream, scores every mechanism honestly, replays the voter and
project attacks against the same matrix, and records a 3x3 grid of
pairwise manipulation scores:

* baseline        PMS(control sum result, mechanism result)
* voter attack    PMS(honest mechanism result, post-attack result)
* project attack  PMS(honest mechanism result, post-attack result)

Iterations are independent, so any worker count reproduces the same
report for the same (config, seed).
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .attacks import apply_project_attack, apply_voter_attack, select_attack
from .errors import (
    DegenerateDistribution,
    DegenerateRow,
    DegenerateScores,
    IterationFailed,
    SimulationFailed,
)
from .mechanisms import aggregate, effective_allocations
from .metrics import pms
from .model import (
    AttackKind,
    MechanismKind,
    PreferenceMatrix,
    Scenario,
    SimulationConfig,
    validate_config,
)
from .prefgen import build_weight_vector, iteration_rng, sample_preference_matrix

ATTACKED_MECHANISMS = (MechanismKind.QUADRATIC, MechanismKind.MEAN, MechanismKind.MEDIAN)
HISTOGRAM_BINS = 50

#: Abort the run when more than this share of iterations fails.
FAILURE_BUDGET = 0.01


@dataclass(frozen=True)
class IterationRecord:
    """PMS values for one iteration: (mechanism, scenario) -> score."""

    iteration: int
    scores: dict[tuple[MechanismKind, Scenario], float]

    def __post_init__(self):
        if len(self.scores) != len(ATTACKED_MECHANISMS) * len(Scenario):
            raise ValueError(
                f"expected {len(ATTACKED_MECHANISMS) * len(Scenario)} cell scores, "
                f"got {len(self.scores)}"
            )


@dataclass(frozen=True)
class Histogram:
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]


@dataclass(frozen=True)
class CellStats:
    """Distribution summary of one (mechanism, scenario) cell."""

    mean: float
    std: float
    min: float
    max: float
    p5: float
    p50: float
    p95: float
    histogram: Histogram


@dataclass(frozen=True)
class SimulationReport:
    """Everything a run produced, keyed by (mechanism, scenario)."""

    config: SimulationConfig
    cells: dict[tuple[MechanismKind, Scenario], CellStats]
    iterations_completed: int
    failed_iterations: tuple[int, ...]
    runtime_seconds: float

    def cell_means(self) -> dict[tuple[MechanismKind, Scenario], float]:
        return {key: stats.mean for key, stats in self.cells.items()}


def run_iteration(
    config: SimulationConfig,
    index: int,
    fixed_preferences: PreferenceMatrix | None = None,
) -> IterationRecord:
    """Score one sampled round under every mechanism and scenario.

    Args:
        fixed_preferences: reuse this matrix instead of sampling
            (imported preference data); the RNG sub-stream still drives
            any random project selection.

    Raises:
        IterationFailed: a degenerate draw made a score undefined.
    """
    rng = iteration_rng(config.seed, index)
    try:
        if fixed_preferences is not None:
            preferences = fixed_preferences
        else:
            preferences = sample_preference_matrix(
                config.n_voters, config.n_projects, config.distribution, rng
            )
        weights = build_weight_vector(config.n_voters, config.normalization_constant)
        honest_alloc = effective_allocations(preferences, weights)
        control = aggregate(MechanismKind.CONTROL_SUM, honest_alloc)
        # one colluding-project draw per iteration, shared by all mechanisms
        project_spec = select_attack(
            config, preferences, weights, AttackKind.PROJECT, rng=rng
        )

        scores: dict[tuple[MechanismKind, Scenario], float] = {}
        for mechanism in ATTACKED_MECHANISMS:
            honest = aggregate(mechanism, honest_alloc)
            scores[(mechanism, Scenario.BASELINE)] = pms(control.scores, honest.scores)

            voter_spec = select_attack(
                config, preferences, weights, AttackKind.VOTER, mechanism=mechanism
            )
            attacked_prefs = apply_voter_attack(
                mechanism, preferences, weights, voter_spec, config.epsilon
            )
            attacked = aggregate(
                mechanism, effective_allocations(attacked_prefs, weights)
            )
            scores[(mechanism, Scenario.VOTER_ATTACK)] = pms(
                honest.scores, attacked.scores
            )

            raided = apply_project_attack(
                mechanism,
                preferences,
                weights,
                project_spec,
                config.epsilon,
                config.project_attack.budget_mode,
            )
            if isinstance(raided, PreferenceMatrix):
                raided_alloc = effective_allocations(raided, weights)
            else:
                raided_alloc = raided  # literal mode: budget-exempt allocations
            scores[(mechanism, Scenario.PROJECT_ATTACK)] = pms(
                honest.scores, aggregate(mechanism, raided_alloc).scores
            )
        return IterationRecord(index, scores)
    except (DegenerateDistribution, DegenerateRow, DegenerateScores) as exc:
        raise IterationFailed(index, str(exc)) from exc


def _iteration_task(args):
    # module-level so it pickles into worker processes
    config, index, fixed_preferences = args
    try:
        return run_iteration(config, index, fixed_preferences)
    except IterationFailed as exc:
        return exc


def _summarize(values: np.ndarray) -> CellStats:
    vmin, vmax = float(values.min()), float(values.max())
    if vmin == vmax:
        histogram = Histogram((vmin, vmax), (int(values.size),))
    else:
        counts, edges = np.histogram(values, bins=HISTOGRAM_BINS, range=(vmin, vmax))
        histogram = Histogram(
            tuple(float(e) for e in edges), tuple(int(c) for c in counts)
        )
    p5, p50, p95 = (float(p) for p in np.percentile(values, [5.0, 50.0, 95.0]))
    return CellStats(
        mean=float(values.mean()),
        std=float(values.std()),
        min=vmin,
        max=vmax,
        p5=p5,
        p50=p50,
        p95=p95,
        histogram=histogram,
    )


def run_simulation(
    config: SimulationConfig,
    workers: int = 1,
    fixed_preferences: PreferenceMatrix | None = None,
) -> SimulationReport:
    """Run the whole campaign and summarize each cell's score distribution.

    The result is a pure function of (config, seed, fixed_preferences);
    the worker count only changes the wall-clock time.

    Raises:
        InvalidConfig: the config violates an invariant.
        SimulationFailed: more than 1% of iterations failed.
    """
    validate_config(config)
    workers = max(1, int(workers))
    start = time.perf_counter()

    records: list[IterationRecord] = []
    failures: list[IterationFailed] = []
    tasks = ((config, i, fixed_preferences) for i in range(config.iterations))
    if workers == 1:
        outcomes = map(_iteration_task, tasks)
        for outcome in outcomes:
            (failures if isinstance(outcome, IterationFailed) else records).append(outcome)
    else:
        chunk = max(1, config.iterations // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for outcome in pool.map(_iteration_task, tasks, chunksize=chunk):
                (failures if isinstance(outcome, IterationFailed) else records).append(outcome)

    if len(failures) > FAILURE_BUDGET * config.iterations:
        raise SimulationFailed(
            f"{len(failures)} of {config.iterations} iterations failed; "
            f"first: {failures[0]}"
        )
    records.sort(key=lambda record: record.iteration)

    cells = {}
    for mechanism in ATTACKED_MECHANISMS:
        for scenario in Scenario:
            values = np.array([r.scores[(mechanism, scenario)] for r in records])
            cells[(mechanism, scenario)] = _summarize(values)

    return SimulationReport(
        config=config,
        cells=cells,
        iterations_completed=len(records),
        failed_iterations=tuple(f.index for f in failures),
        runtime_seconds=time.perf_counter() - start,
    )


def default_worker_count() -> int:
    """A sensible worker count for throughput runs on this machine."""
    return max(1, min(4, os.cpu_count() or 1))
