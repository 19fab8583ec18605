/**
 * Results view: a 3x3 histogram grid (mechanism rows, scenario columns)
 * plus a summary table. Summary cells show the API's numbers verbatim
 * (full precision via String()), so every displayed value equals a
 * response field exactly.
 */
import { renderHistogram } from "./charts.js";
import { MECHANISMS, SCENARIOS, type SimulationReport } from "./types.js";

const SCENARIO_LABELS: Record<string, string> = {
  baseline: "Baseline",
  voter_attack: "Voter attack",
  project_attack: "Project attack",
};

const MECHANISM_LABELS: Record<string, string> = {
  quadratic: "Quadratic",
  mean: "Mean",
  median: "Median",
};

function element<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderSummaryTable(report: SimulationReport): HTMLTableElement {
  const table = element("table", "summary-table");
  const head = table.createTHead().insertRow();
  head.appendChild(element("th", undefined, "mean PMS"));
  for (const scenario of SCENARIOS) {
    head.appendChild(element("th", undefined, SCENARIO_LABELS[scenario]));
  }
  const body = table.createTBody();
  for (const mechanism of MECHANISMS) {
    const row = body.insertRow();
    row.appendChild(element("th", undefined, MECHANISM_LABELS[mechanism]));
    for (const scenario of SCENARIOS) {
      const cell = row.insertCell();
      cell.className = "summary-value";
      cell.dataset.mechanism = mechanism;
      cell.dataset.scenario = scenario;
      cell.textContent = String(report.cells[mechanism][scenario].mean);
    }
  }
  return table;
}

export function renderHistogramGrid(report: SimulationReport): HTMLElement {
  const grid = element("div", "histogram-grid");
  grid.appendChild(element("div", "grid-corner"));
  for (const scenario of SCENARIOS) {
    grid.appendChild(element("div", "grid-header", SCENARIO_LABELS[scenario]));
  }
  for (const mechanism of MECHANISMS) {
    grid.appendChild(element("div", "grid-row-label", MECHANISM_LABELS[mechanism]));
    for (const scenario of SCENARIOS) {
      const cell = element("div", "grid-cell");
      cell.dataset.mechanism = mechanism;
      cell.dataset.scenario = scenario;
      cell.appendChild(renderHistogram(report.cells[mechanism][scenario]));
      grid.appendChild(cell);
    }
  }
  return grid;
}

function describeConfig(report: SimulationReport): string {
  const config = report.config;
  const distribution =
    config.distribution.kind === "pareto"
      ? `pareto(alpha ${config.distribution.alpha})`
      : config.distribution.kind;
  return (
    `${config.n_voters} voters x ${config.n_projects} projects, ` +
    `${report.iterations_completed} iterations, seed ${config.seed}, ` +
    `${distribution}, epsilon ${config.epsilon}, ` +
    `${config.project_attack.budget_mode.replace("_", "-")} mode, ` +
    `${report.runtime_seconds.toFixed(2)}s`
  );
}

export function renderResultsView(report: SimulationReport, label: string): HTMLElement {
  const view = element("section", "results-view");
  const header = element("header", "results-header");
  header.appendChild(element("h2", undefined, label));
  header.appendChild(element("p", "config-line", describeConfig(report)));
  if (report.failed_iterations.length > 0) {
    header.appendChild(
      element(
        "p",
        "failures-line",
        `${report.failed_iterations.length} iterations failed and were excluded`,
      ),
    );
  }
  view.appendChild(header);
  view.appendChild(renderSummaryTable(report));
  view.appendChild(renderHistogramGrid(report));
  return view;
}
