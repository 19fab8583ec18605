"""Command-line front end: simulate, oracle, serve.

Exit codes for simulate: 0 success, 1 invalid configuration, 2 I/O
failure (unreadable preference file or unwritable output path), 3 run
failure.
"""
from __future__ import annotations

import argparse
import sys

from . import server
from .attacks import (
    PhantomOracleInput,
    collusion_split_grid_search,
    mean_phantom_empirical,
    mean_phantom_ratio,
    median_phantom_bound,
    median_phantom_empirical,
    quadratic_collusion_oracle,
)
from .engine import ATTACKED_MECHANISMS, run_simulation
from .errors import InvalidConfig, RetrovoteError, SimulationFailed
from .model import (
    BudgetMode,
    DistributionSpec,
    ProjectAttackConfig,
    Scenario,
    SelectionRule,
    SimulationConfig,
    VoterAttackConfig,
)
from .prefgen import load_preference_matrix
from .reportio import write_report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retrovote",
        description="Simulate manipulation of retroactive funding votes.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    sim = commands.add_parser("simulate", help="run a Monte Carlo campaign")
    sim.add_argument("--voters", type=int, default=133, help="number of voters")
    sim.add_argument("--projects", type=int, default=374, help="number of projects")
    sim.add_argument("--iterations", type=int, default=10_000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--tokens", type=float, default=1.0, help="total tokens to allocate")
    sim.add_argument("--epsilon", type=float, default=0.01)
    sim.add_argument("--constant", type=float, default=1000.0,
                     help="weight normalization constant")
    sim.add_argument("--distribution", choices=["pareto", "uniform", "gaussian"],
                     default="pareto")
    sim.add_argument("--alpha", type=float, default=2.5, help="pareto shape")
    sim.add_argument("--mu", type=float, default=1.0, help="gaussian location")
    sim.add_argument("--sigma", type=float, default=0.25, help="gaussian scale")
    sim.add_argument("--attacker-count", type=int, default=None,
                     help="voter-attack coalition size (default: per mechanism)")
    sim.add_argument("--colluding-count", type=int, default=2,
                     help="number of colluding projects")
    sim.add_argument("--selection", choices=["top-by-supporters", "random-pair"],
                     default="top-by-supporters")
    sim.add_argument("--budget-mode", choices=["budget-preserving", "literal"],
                     default="budget-preserving")
    sim.add_argument("--preferences", default=None,
                     help="CSV preference file; overrides voters/projects and sampling")
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--out", default=None, help="write the JSON report here")

    oracle = commands.add_parser("oracle", help="print attack bounds and checks")
    oracle_kinds = oracle.add_subparsers(dest="oracle", required=True)

    quad = oracle_kinds.add_parser("quadratic-collusion")
    quad.add_argument("--tokens", type=float, required=True)

    mean = oracle_kinds.add_parser("mean-phantom")
    mean.add_argument("--n", type=int, default=None, help="genuine allocation count")
    mean.add_argument("--k", type=int, required=True, help="adversary count")
    mean.add_argument("--allocs", default=None,
                      help="comma-separated allocations for the empirical check")
    mean.add_argument("--epsilon", type=float, default=1e-9)

    median = oracle_kinds.add_parser("median-phantom")
    median.add_argument("--allocs", required=True,
                        help="comma-separated positive allocations")
    median.add_argument("--k", type=int, required=True)
    median.add_argument("--epsilon", type=float, default=1e-9)

    srv = commands.add_parser("serve", help="run the local HTTP API")
    srv.add_argument("--port", type=int, default=None,
                     help=f"listen port (default ${server.PORT_ENV_VAR} or {server.DEFAULT_PORT})")
    srv.add_argument("--host", default="127.0.0.1")
    return parser


def simulate_config_from_args(args) -> SimulationConfig:
    if args.distribution == "pareto":
        distribution = DistributionSpec.pareto(alpha=args.alpha)
    elif args.distribution == "uniform":
        distribution = DistributionSpec.uniform()
    else:
        distribution = DistributionSpec.gaussian(mu=args.mu, sigma=args.sigma)
    return SimulationConfig(
        n_voters=args.voters,
        n_projects=args.projects,
        total_tokens=args.tokens,
        iterations=args.iterations,
        seed=args.seed,
        distribution=distribution,
        epsilon=args.epsilon,
        normalization_constant=args.constant,
        voter_attack=VoterAttackConfig(attacker_count=args.attacker_count),
        project_attack=ProjectAttackConfig(
            colluding_count=args.colluding_count,
            selection=SelectionRule(args.selection.replace("-", "_")),
            budget_mode=BudgetMode(args.budget_mode.replace("-", "_")),
        ),
    )


def _print_mean_table(report):
    scenarios = list(Scenario)
    header = "mechanism".ljust(12) + "".join(s.value.rjust(16) for s in scenarios)
    print("mean pairwise manipulation score per cell")
    print(header)
    for mechanism in ATTACKED_MECHANISMS:
        row = mechanism.value.ljust(12)
        for scenario in scenarios:
            row += f"{report.cells[(mechanism, scenario)].mean:16.6g}"
        print(row)


def _run_simulate(args) -> int:
    fixed_preferences = None
    config = simulate_config_from_args(args)
    if args.preferences is not None:
        try:
            fixed_preferences = load_preference_matrix(args.preferences)
        except OSError as exc:
            print(f"error: cannot read {args.preferences}: {exc}", file=sys.stderr)
            return 2
        except RetrovoteError as exc:
            print(f"error: bad preference file: {exc}", file=sys.stderr)
            return 2
        # the file fixes the round's dimensions
        config = SimulationConfig(
            **{
                **config.__dict__,
                "n_voters": fixed_preferences.n_voters,
                "n_projects": fixed_preferences.n_projects,
            }
        )
    try:
        report = run_simulation(config, workers=args.workers,
                                fixed_preferences=fixed_preferences)
    except InvalidConfig as exc:
        print(f"error: invalid config ({exc.invariant}): {exc}", file=sys.stderr)
        return 1
    except SimulationFailed as exc:
        print(f"error: simulation failed: {exc}", file=sys.stderr)
        return 3
    _print_mean_table(report)
    if args.out is not None:
        try:
            write_report(report, args.out)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
        print(f"report written to {args.out}")
    return 0


def _parse_allocs(raw):
    try:
        values = [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad allocation list {raw!r}")
    if not values:
        raise argparse.ArgumentTypeError("allocation list is empty")
    return values


def _run_oracle(args, parser) -> int:
    if args.oracle == "quadratic-collusion":
        result = quadratic_collusion_oracle(args.tokens)
        split, utility = collusion_split_grid_search(args.tokens)
        print(f"honest utility    {result.honest_utility:.7f}")
        print(f"collusion utility {result.collusion_utility:.7f}")
        print(f"gain ratio        {result.gain_ratio:.7f}")
        print(f"grid-search optimum: split {split:.7g} utility {utility:.7f}")
        return 0
    if args.oracle == "mean-phantom":
        if args.n is None and args.allocs is None:
            parser.error("mean-phantom needs --n or --allocs")
        allocs = _parse_allocs(args.allocs) if args.allocs else None
        n = args.n if args.n is not None else len(allocs)
        print(f"ratio bound {mean_phantom_ratio(n, args.k):.7g}")
        if allocs:
            post = mean_phantom_empirical(allocs, args.k, args.epsilon)
            pre = sum(allocs) / len(allocs)
            print(f"empirical mean {post:.7g} (ratio {post / pre:.7g})")
        return 0
    allocs = sorted(_parse_allocs(args.allocs))
    bound = median_phantom_bound(PhantomOracleInput(tuple(allocs), args.k))
    empirical = median_phantom_empirical(allocs, args.k, args.epsilon)
    saturated = " (saturated at the smallest allocation)" if bound.saturated else ""
    print(f"bound {bound.bound_value:.7g} at order statistic {bound.bound_index}{saturated}")
    print(f"empirical {empirical:.7g}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate":
        return _run_simulate(args)
    if args.command == "oracle":
        try:
            return _run_oracle(args, parser)
        except (RetrovoteError, ValueError) as exc:
            parser.error(str(exc))
    server.serve(port=args.port, host=args.host)
    return 0


if __name__ == "__main__":
    sys.exit(main())
