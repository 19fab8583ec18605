"""The four aggregation rules and the funding normalization.

Given effective allocations A (preference shares times voting power),
each project column p is scored as

* control sum:  sum_i A[i, p]           (the linear reference mechanism)
* quadratic:    sum_i sqrt(A[i, p])
* mean:         sum_i A[i, p] / N       (all N voters counted, zeros included)
* median:       middle order statistic of the column; an even voter count
                averages the two central values

Raw scores are turned into funding by proportional normalization:
tokens_p = T * R_p / sum(R).
"""
from __future__ import annotations

import numpy as np

from .errors import DegenerateScores, DimensionMismatch, EmptyMatrix
from .model import (
    AllocationMatrix,
    FundingAllocation,
    MechanismKind,
    MechanismScores,
    PreferenceMatrix,
    WeightVector,
)


def effective_allocations(
    preferences: PreferenceMatrix, weights: WeightVector
) -> AllocationMatrix:
    """Scale each voter's preference row by their voting power."""
    if preferences.n_voters != weights.n_voters:
        raise DimensionMismatch(
            f"{preferences.n_voters} preference rows vs {weights.n_voters} weights"
        )
    entries = preferences.entries * weights.weights[:, None]
    return AllocationMatrix(entries, row_budgets=weights.weights)


def aggregate(kind: MechanismKind, allocations: AllocationMatrix) -> MechanismScores:
    """Score every project column under one aggregation rule."""
    kind = MechanismKind(kind)
    entries = allocations.entries
    if entries.size == 0:
        raise EmptyMatrix("cannot aggregate an empty allocation matrix")
    if kind is MechanismKind.CONTROL_SUM:
        scores = entries.sum(axis=0)
    elif kind is MechanismKind.QUADRATIC:
        scores = np.sqrt(entries).sum(axis=0)
    elif kind is MechanismKind.MEAN:
        # column sum divided by N, so mean stays an exact rescaling of the
        # control sum in floating point as well
        scores = entries.sum(axis=0) / entries.shape[0]
    else:
        scores = np.median(entries, axis=0)
    return MechanismScores(scores, kind)


def to_funding(scores: MechanismScores, total_tokens: float) -> FundingAllocation:
    """Split the round's tokens proportionally to the raw scores.

    Raises:
        DegenerateScores: every score is zero, shares are undefined.
    """
    total_score = scores.scores.sum()
    if not total_score > 0.0:
        raise DegenerateScores("all mechanism scores are zero")
    return FundingAllocation(total_tokens * scores.scores / total_score, total_tokens)
