/** Shared fixtures for dashboard tests. */
import {
  MECHANISMS,
  SCENARIOS,
  type CellStats,
  type SimulateRequest,
  type SimulationReport,
} from "../src/types.js";

export const DEFAULT_REQUEST: SimulateRequest = {
  n_voters: 133,
  n_projects: 374,
  total_tokens: 1.0,
  iterations: 10_000,
  seed: 0,
  epsilon: 0.01,
  normalization_constant: 1000.0,
  distribution: { kind: "pareto", alpha: 2.5, scale: 1.0 },
  voter_attack: { attacker_count: null },
  project_attack: {
    colluding_count: 2,
    selection: "top_by_supporters",
    budget_mode: "budget_preserving",
  },
  workers: 1,
};

function fakeCell(seed: number, iterations: number): CellStats {
  const bins = 5;
  const counts = Array.from({ length: bins }, (_, i) => (seed + i * 7) % 11);
  const total = counts.reduce((a, b) => a + b, 0);
  counts[0] += iterations - total; // counts must sum to the iteration count
  return {
    mean: 0.1 + seed * 0.037 + 1e-13, // awkward precision on purpose
    std: 0.01 * seed,
    min: 0,
    max: 1 + seed,
    p5: 0.01,
    p50: 0.1,
    p95: 0.9,
    histogram: {
      bin_edges: Array.from({ length: bins + 1 }, (_, i) => i / bins),
      counts,
    },
  };
}

export function fakeReport(iterations = 100): SimulationReport {
  const cells = {} as SimulationReport["cells"];
  let seed = 1;
  for (const mechanism of MECHANISMS) {
    cells[mechanism] = {} as SimulationReport["cells"][typeof mechanism];
    for (const scenario of SCENARIOS) {
      cells[mechanism][scenario] = fakeCell(seed, iterations);
      seed += 1;
    }
  }
  const { workers, ...config } = DEFAULT_REQUEST;
  return {
    schema_version: "1",
    config: { ...config, iterations },
    cells,
    iterations_completed: iterations,
    failed_iterations: [],
    runtime_seconds: 0.5,
  };
}
