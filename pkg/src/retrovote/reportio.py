"""JSON document formats for configs and simulation reports.

Schema version "1". Numbers are serialized at full precision (Python's
repr round-trips doubles exactly), histograms as parallel arrays of
bin edges (length B+1) and counts (length B). Unknown fields are
rejected when parsing; missing fields take the documented defaults.
"""
from __future__ import annotations

import json

from .engine import CellStats, Histogram, SimulationReport
from .model import (
    PARETO_SCALE,
    BudgetMode,
    DistributionSpec,
    MechanismKind,
    ProjectAttackConfig,
    Scenario,
    SelectionRule,
    SimulationConfig,
    VoterAttackConfig,
)

SCHEMA_VERSION = "1"


def distribution_to_dict(spec: DistributionSpec) -> dict:
    if spec.kind == "pareto":
        # the fixed minimum is recorded so reports state the exact variant
        return {"kind": "pareto", "alpha": spec.alpha, "scale": PARETO_SCALE}
    if spec.kind == "uniform":
        return {"kind": "uniform"}
    return {"kind": "gaussian", "mu": spec.mu, "sigma": spec.sigma}


def distribution_from_dict(data) -> DistributionSpec:
    if not isinstance(data, dict):
        raise ValueError("distribution must be an object")
    kind = data.get("kind", "pareto")
    allowed = {"pareto": {"kind", "alpha", "scale"},
               "uniform": {"kind"},
               "gaussian": {"kind", "mu", "sigma"}}
    if kind not in allowed:
        raise ValueError(f"unknown distribution kind {kind!r}")
    unknown = set(data) - allowed[kind]
    if unknown:
        raise ValueError(f"unknown distribution field {sorted(unknown)[0]!r}")
    if kind == "pareto":
        if float(data.get("scale", PARETO_SCALE)) != PARETO_SCALE:
            raise ValueError(f"pareto scale is fixed at {PARETO_SCALE}")
        return DistributionSpec.pareto(alpha=float(data.get("alpha", 2.5)))
    if kind == "uniform":
        return DistributionSpec.uniform()
    return DistributionSpec.gaussian(
        mu=float(data.get("mu", 1.0)), sigma=float(data.get("sigma", 0.25))
    )


def config_to_dict(config: SimulationConfig) -> dict:
    return {
        "n_voters": config.n_voters,
        "n_projects": config.n_projects,
        "total_tokens": config.total_tokens,
        "iterations": config.iterations,
        "seed": config.seed,
        "epsilon": config.epsilon,
        "normalization_constant": config.normalization_constant,
        "distribution": distribution_to_dict(config.distribution),
        "voter_attack": {"attacker_count": config.voter_attack.attacker_count},
        "project_attack": {
            "colluding_count": config.project_attack.colluding_count,
            "selection": config.project_attack.selection.value,
            "budget_mode": config.project_attack.budget_mode.value,
        },
    }


def _take(data, field, kind, default, convert, allow_none=False):
    value = data.get(field, default)
    if value is None:
        if allow_none:
            return None
        raise ValueError(f"field {field!r} must be a {kind}, not null")
    try:
        return convert(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"field {field!r} must be a {kind}") from exc


def config_from_dict(data) -> SimulationConfig:
    """Build a config from a request document, rejecting unknown fields."""
    if not isinstance(data, dict):
        raise ValueError("config must be an object")
    defaults = SimulationConfig()
    known = {
        "n_voters", "n_projects", "total_tokens", "iterations", "seed",
        "epsilon", "normalization_constant", "distribution",
        "voter_attack", "project_attack",
    }
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown field {sorted(unknown)[0]!r}")

    voter = data.get("voter_attack", {})
    if not isinstance(voter, dict):
        raise ValueError("voter_attack must be an object")
    if set(voter) - {"attacker_count"}:
        raise ValueError("unknown field in voter_attack")
    project = data.get("project_attack", {})
    if not isinstance(project, dict):
        raise ValueError("project_attack must be an object")
    if set(project) - {"colluding_count", "selection", "budget_mode"}:
        raise ValueError("unknown field in project_attack")
    try:
        selection = SelectionRule(project.get("selection", SelectionRule.TOP_BY_SUPPORTERS))
        budget_mode = BudgetMode(project.get("budget_mode", BudgetMode.BUDGET_PRESERVING))
    except ValueError as exc:
        raise ValueError(str(exc)) from exc

    return SimulationConfig(
        n_voters=_take(data, "n_voters", "positive integer", defaults.n_voters, int),
        n_projects=_take(data, "n_projects", "positive integer", defaults.n_projects, int),
        total_tokens=_take(data, "total_tokens", "number", defaults.total_tokens, float),
        iterations=_take(data, "iterations", "positive integer", defaults.iterations, int),
        seed=_take(data, "seed", "unsigned integer", defaults.seed, int),
        epsilon=_take(data, "epsilon", "number", defaults.epsilon, float),
        normalization_constant=_take(
            data, "normalization_constant", "number",
            defaults.normalization_constant, float,
        ),
        distribution=distribution_from_dict(
            data.get("distribution", distribution_to_dict(defaults.distribution))
        ),
        voter_attack=VoterAttackConfig(
            attacker_count=_take(
                voter, "attacker_count", "integer", None, int, allow_none=True
            )
        ),
        project_attack=ProjectAttackConfig(
            colluding_count=_take(project, "colluding_count", "integer", 2, int),
            selection=selection,
            budget_mode=budget_mode,
        ),
    )


def _cell_to_dict(stats: CellStats) -> dict:
    return {
        "mean": stats.mean,
        "std": stats.std,
        "min": stats.min,
        "max": stats.max,
        "p5": stats.p5,
        "p50": stats.p50,
        "p95": stats.p95,
        "histogram": {
            "bin_edges": list(stats.histogram.bin_edges),
            "counts": list(stats.histogram.counts),
        },
    }


def _cell_from_dict(data) -> CellStats:
    histogram = Histogram(
        tuple(float(e) for e in data["histogram"]["bin_edges"]),
        tuple(int(c) for c in data["histogram"]["counts"]),
    )
    return CellStats(
        mean=data["mean"], std=data["std"], min=data["min"], max=data["max"],
        p5=data["p5"], p50=data["p50"], p95=data["p95"], histogram=histogram,
    )


def report_to_dict(report: SimulationReport) -> dict:
    cells: dict[str, dict] = {}
    for (mechanism, scenario), stats in report.cells.items():
        cells.setdefault(mechanism.value, {})[scenario.value] = _cell_to_dict(stats)
    return {
        "schema_version": SCHEMA_VERSION,
        "config": config_to_dict(report.config),
        "cells": cells,
        "iterations_completed": report.iterations_completed,
        "failed_iterations": list(report.failed_iterations),
        "runtime_seconds": report.runtime_seconds,
    }


def report_from_dict(data) -> SimulationReport:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {data.get('schema_version')!r}")
    cells = {}
    for mechanism_name, scenarios in data["cells"].items():
        for scenario_name, stats in scenarios.items():
            key = (MechanismKind(mechanism_name), Scenario(scenario_name))
            cells[key] = _cell_from_dict(stats)
    return SimulationReport(
        config=config_from_dict(data["config"]),
        cells=cells,
        iterations_completed=int(data["iterations_completed"]),
        failed_iterations=tuple(data["failed_iterations"]),
        runtime_seconds=float(data["runtime_seconds"]),
    )


def write_report(report: SimulationReport, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(report_to_dict(report), handle, indent=2)
        handle.write("\n")


def read_report(path) -> SimulationReport:
    with open(path, encoding="utf-8") as handle:
        return report_from_dict(json.load(handle))
