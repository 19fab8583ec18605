"""Percentage normalization and the pairwise manipulation score (PMS).

PMS compares two vote distributions after normalizing each to
percentages: 100 * sum((p1 - p2)^2) / sum(p1^2). Zero means identical
shares; the score is scale-invariant in both arguments and asymmetric,
with the first argument acting as the baseline.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDistribution
from .model import MechanismKind, Scenario


def to_percentages(values) -> np.ndarray:
    """Rescale a non-negative vector to sum to 100.

    Raises:
        DegenerateDistribution: the vector sums to zero.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1:
        raise ValueError("expected a flat vector of vote totals")
    if np.any(v < 0.0):
        raise ValueError("vote totals must be non-negative")
    total = v.sum()
    if not total > 0.0:
        raise DegenerateDistribution("cannot normalize an all-zero distribution")
    return 100.0 * v / total


def pms(baseline, attacked) -> float:
    """Relative squared distortion between two vote distributions.

    The denominator uses the baseline's percentages, so argument order
    matters: call as pms(baseline, attacked).
    """
    p1 = to_percentages(baseline)
    p2 = to_percentages(attacked)
    if p1.shape != p2.shape:
        raise ValueError(f"length mismatch: {p1.shape[0]} vs {p2.shape[0]}")
    return float(100.0 * np.sum((p1 - p2) ** 2) / np.sum(p1 ** 2))


@dataclass(frozen=True)
class PmsScore:
    """One PMS value tagged with the mechanism and scenario it measures."""

    value: float
    mechanism: MechanismKind
    scenario: Scenario

    def __post_init__(self):
        if self.value < 0.0:
            raise ValueError("PMS is non-negative by construction")
        object.__setattr__(self, "mechanism", MechanismKind(self.mechanism))
        object.__setattr__(self, "scenario", Scenario(self.scenario))
