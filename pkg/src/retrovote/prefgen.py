"""Preference-matrix construction and voter weights.

Matrices come either from seeded random sampling (Pareto by default,
uniform or clamped Gaussian as alternatives) or from a CSV file whose
first row names the projects and whose remaining rows hold one voter's
non-negative preference magnitudes each. Every row is normalized to sum
to one.
"""
from __future__ import annotations

import csv
import math

import numpy as np

from .errors import DegenerateRow, DimensionMismatch, NegativeEntry, ParseError
from .model import PARETO_SCALE, DistributionSpec, PreferenceMatrix, WeightVector

# A zero row is only reachable with the clamped Gaussian; resample it a
# bounded number of times before giving up.
MAX_ROW_RESAMPLES = 100


def iteration_rng(seed: int, iteration: int) -> np.random.Generator:
    """Independent, reproducible random stream for one iteration.

    Streams are derived from (seed, iteration) alone, so any number of
    workers in any order regenerate identical draws.
    """
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(iteration,))
    )


def _draw_raw(distribution, n_rows, n_projects, rng):
    shape = (n_rows, n_projects)
    if distribution.kind == "pareto":
        # numpy's pareto() is the Lomax on [0, inf); shift to the standard
        # Pareto on [scale, inf)
        return (1.0 + rng.pareto(distribution.alpha, size=shape)) * PARETO_SCALE
    if distribution.kind == "uniform":
        return rng.random(size=shape)
    return np.maximum(rng.normal(distribution.mu, distribution.sigma, size=shape), 0.0)


def sample_preference_matrix(
    n_voters: int,
    n_projects: int,
    distribution: DistributionSpec,
    rng: np.random.Generator,
) -> PreferenceMatrix:
    """Draw one voter preference matrix and normalize each row to sum to 1.

    Raises:
        DegenerateRow: a row kept summing to zero after resampling.
    """
    if n_voters < 1 or n_projects < 1:
        raise DimensionMismatch("need at least one voter and one project")
    raw = _draw_raw(distribution, n_voters, n_projects, rng)
    for _ in range(MAX_ROW_RESAMPLES):
        degenerate = raw.sum(axis=1) == 0.0
        if not degenerate.any():
            break
        raw[degenerate] = _draw_raw(distribution, int(degenerate.sum()), n_projects, rng)
    else:
        raise DegenerateRow(
            f"rows still sum to zero after {MAX_ROW_RESAMPLES} resampling attempts"
        )
    return PreferenceMatrix(raw / raw.sum(axis=1, keepdims=True))


def load_preference_matrix(path, expected_dims=None) -> PreferenceMatrix:
    """Load a preference matrix from a CSV file and re-normalize the rows.

    Format: UTF-8, comma separated, first row holds project identifiers,
    every following row holds one voter's non-negative decimal
    preferences. Magnitudes are preserved proportionally within each row.

    Args:
        path: file to read.
        expected_dims: optional (n_voters, n_projects) to enforce.

    Raises:
        ParseError: empty file, ragged row, or non-numeric cell.
        NegativeEntry: any cell below zero.
        DimensionMismatch: shape differs from expected_dims.
        DegenerateRow: a voter row of all zeros.
    """
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header:
            raise ParseError(f"{path}: missing header row of project ids")
        n_projects = len(header)
        rows = []
        for lineno, cells in enumerate(reader, start=2):
            if not cells:
                continue  # tolerate blank lines
            if len(cells) != n_projects:
                raise ParseError(
                    f"{path}:{lineno}: expected {n_projects} columns, got {len(cells)}"
                )
            try:
                values = [float(cell) for cell in cells]
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            if not all(math.isfinite(v) for v in values):
                raise ParseError(f"{path}:{lineno}: non-finite preference value")
            rows.append(values)
    if not rows:
        raise ParseError(f"{path}: no voter rows")
    entries = np.array(rows, dtype=float)
    if np.any(entries < 0.0):
        voter, project = np.argwhere(entries < 0.0)[0]
        raise NegativeEntry(
            f"{path}: negative preference for voter {voter}, project {project}"
        )
    if expected_dims is not None and entries.shape != tuple(expected_dims):
        raise DimensionMismatch(
            f"{path}: file is {entries.shape}, expected {tuple(expected_dims)}"
        )
    sums = entries.sum(axis=1)
    if np.any(sums == 0.0):
        voter = int(np.argmax(sums == 0.0))
        raise DegenerateRow(f"{path}: voter {voter} has an all-zero row")
    return PreferenceMatrix(entries / sums[:, None])


def build_weight_vector(n_voters: int, normalization_constant: float) -> WeightVector:
    """Equal voting power for every voter, summing to the constant."""
    if n_voters < 1:
        raise DimensionMismatch("need at least one voter")
    if not normalization_constant > 0.0:
        raise ValueError("normalization constant must be positive")
    weights = np.full(n_voters, normalization_constant / n_voters)
    return WeightVector(weights, normalization_constant)
