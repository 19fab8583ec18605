/** Wire types mirroring the simulation API (schema version 1). */

export type DistributionKind = "pareto" | "uniform" | "gaussian";

export interface DistributionSpec {
  kind: DistributionKind;
  alpha?: number;
  scale?: number;
  mu?: number;
  sigma?: number;
}

export type SelectionRule = "top_by_supporters" | "random_pair";
export type BudgetMode = "budget_preserving" | "literal";

export interface SimulateRequest {
  n_voters: number;
  n_projects: number;
  total_tokens: number;
  iterations: number;
  seed: number;
  epsilon: number;
  normalization_constant: number;
  distribution: DistributionSpec;
  voter_attack: { attacker_count: number | null };
  project_attack: {
    colluding_count: number;
    selection: SelectionRule;
    budget_mode: BudgetMode;
  };
  workers?: number;
}

export interface HistogramData {
  bin_edges: number[];
  counts: number[];
}

export interface CellStats {
  mean: number;
  std: number;
  min: number;
  max: number;
  p5: number;
  p50: number;
  p95: number;
  histogram: HistogramData;
}

export const MECHANISMS = ["quadratic", "mean", "median"] as const;
export const SCENARIOS = ["baseline", "voter_attack", "project_attack"] as const;

export type Mechanism = (typeof MECHANISMS)[number];
export type Scenario = (typeof SCENARIOS)[number];

export interface SimulationReport {
  schema_version: string;
  config: Omit<SimulateRequest, "workers">;
  cells: Record<Mechanism, Record<Scenario, CellStats>>;
  iterations_completed: number;
  failed_iterations: number[];
  runtime_seconds: number;
}
