/**
 * Dashboard wiring: parameter panel, submit queue (one request in
 * flight, later submissions queued), busy state, pinning of up to two
 * runs for side-by-side comparison.
 */
import { ApiClient, ApiError } from "./api.js";
import { renderResultsView } from "./render.js";
import {
  fieldsFromRequest,
  stateFromFields,
  updateField,
  type FieldValues,
  type UiConfigState,
} from "./state.js";
import type { SimulateRequest } from "./types.js";
import { ITERATIONS_SOFT_CAP, needsSoftCapConfirmation } from "./validation.js";

interface FieldSpec {
  name: keyof FieldValues;
  label: string;
  kind: "number" | "select";
  options?: readonly string[];
  onlyFor?: "pareto" | "gaussian";
  blankMeans?: string;
}

const FIELD_SPECS: readonly FieldSpec[] = [
  { name: "n_voters", label: "Voters", kind: "number" },
  { name: "n_projects", label: "Projects", kind: "number" },
  { name: "iterations", label: "Iterations", kind: "number" },
  { name: "seed", label: "Seed", kind: "number" },
  { name: "total_tokens", label: "Total tokens", kind: "number" },
  { name: "normalization_constant", label: "Weight constant", kind: "number" },
  { name: "epsilon", label: "Epsilon", kind: "number" },
  {
    name: "distribution_kind",
    label: "Distribution",
    kind: "select",
    options: ["pareto", "uniform", "gaussian"],
  },
  { name: "alpha", label: "Pareto alpha", kind: "number", onlyFor: "pareto" },
  { name: "mu", label: "Gaussian mu", kind: "number", onlyFor: "gaussian" },
  { name: "sigma", label: "Gaussian sigma", kind: "number", onlyFor: "gaussian" },
  {
    name: "attacker_count",
    label: "Voter-attack size",
    kind: "number",
    blankMeans: "blank = minimum viable per mechanism",
  },
  { name: "colluding_count", label: "Colluding projects", kind: "number" },
  {
    name: "selection",
    label: "Project selection",
    kind: "select",
    options: ["top_by_supporters", "random_pair"],
  },
  {
    name: "budget_mode",
    label: "Budget mode",
    kind: "select",
    options: ["budget_preserving", "literal"],
  },
  { name: "workers", label: "Workers", kind: "number" },
];

const MAX_PINNED = 2;

export class Dashboard {
  state: UiConfigState | null = null;
  private defaults: SimulateRequest | null = null;
  private queue: SimulateRequest[] = [];
  private inFlight = false;
  private runCounter = 0;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ApiClient,
  ) {}

  async init(): Promise<void> {
    const panel = this.panel();
    panel.textContent = "loading defaults...";
    try {
      this.defaults = await this.client.defaults();
    } catch (error) {
      panel.textContent = "";
      this.showStatus(
        `cannot reach the simulation API: ${describeError(error)}`,
        "error",
        () => void this.init(),
      );
      return;
    }
    this.state = stateFromFields(fieldsFromRequest(this.defaults));
    this.renderPanel();
    this.showStatus("ready", "idle");
  }

  private panel(): HTMLElement {
    return this.root.querySelector("#parameter-panel") as HTMLElement;
  }

  private section(id: string): HTMLElement {
    return this.root.querySelector(`#${id}`) as HTMLElement;
  }

  private renderPanel(): void {
    const panel = this.panel();
    panel.textContent = "";
    const form = document.createElement("form");
    form.id = "config-form";
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      this.submit();
    });

    for (const spec of FIELD_SPECS) {
      form.appendChild(this.renderField(spec));
    }

    const controls = document.createElement("div");
    controls.className = "form-controls";
    const run = document.createElement("button");
    run.type = "submit";
    run.id = "run-button";
    run.textContent = "Run simulation";
    const reset = document.createElement("button");
    reset.type = "button";
    reset.id = "reset-button";
    reset.textContent = "Reset to defaults";
    reset.addEventListener("click", () => this.resetToDefaults());
    controls.append(run, reset);
    form.appendChild(controls);
    panel.appendChild(form);
    this.refreshPanel();
  }

  private renderField(spec: FieldSpec): HTMLElement {
    const wrapper = document.createElement("label");
    wrapper.className = "field";
    wrapper.dataset.field = spec.name;
    const caption = document.createElement("span");
    caption.textContent = spec.label;
    wrapper.appendChild(caption);

    let input: HTMLInputElement | HTMLSelectElement;
    if (spec.kind === "select") {
      input = document.createElement("select");
      for (const option of spec.options ?? []) {
        const node = document.createElement("option");
        node.value = option;
        node.textContent = option.replace(/_/g, " ");
        input.appendChild(node);
      }
    } else {
      input = document.createElement("input");
      input.type = "text";
      input.inputMode = "decimal";
      if (spec.blankMeans) input.placeholder = spec.blankMeans;
    }
    input.id = `field-${spec.name}`;
    input.addEventListener("input", () => {
      if (!this.state) return;
      this.state = updateField(this.state, spec.name, input.value);
      this.refreshPanel();
    });
    wrapper.appendChild(input);

    const message = document.createElement("span");
    message.className = "field-error";
    message.id = `error-${spec.name}`;
    wrapper.appendChild(message);
    return wrapper;
  }

  private refreshPanel(): void {
    if (!this.state) return;
    const { fields, errors, canSubmit } = this.state;
    for (const spec of FIELD_SPECS) {
      const input = this.root.querySelector(`#field-${spec.name}`) as
        | HTMLInputElement
        | HTMLSelectElement
        | null;
      if (!input) continue;
      if (input.value !== fields[spec.name]) input.value = fields[spec.name];
      const hidden =
        spec.onlyFor !== undefined && spec.onlyFor !== fields.distribution_kind;
      (input.closest(".field") as HTMLElement).style.display = hidden ? "none" : "";
      const message = this.root.querySelector(`#error-${spec.name}`) as HTMLElement;
      const errorKey = spec.name === "distribution_kind" ? "distribution" : spec.name;
      message.textContent = errors[errorKey] ?? "";
    }
    const run = this.root.querySelector("#run-button") as HTMLButtonElement | null;
    if (run) run.disabled = !canSubmit;
  }

  resetToDefaults(): void {
    if (!this.defaults) return;
    this.state = stateFromFields(fieldsFromRequest(this.defaults));
    this.refreshPanel();
  }

  submit(): void {
    if (!this.state || !this.state.canSubmit) return;
    const request = this.state.request;
    if (
      needsSoftCapConfirmation(request) &&
      !window.confirm(
        `${request.iterations} iterations exceeds the ${ITERATIONS_SOFT_CAP} ` +
          "soft cap and may take a while. Run anyway?",
      )
    ) {
      return;
    }
    this.queue.push(request);
    void this.drainQueue();
  }

  private async drainQueue(): Promise<void> {
    if (this.inFlight) return;
    const request = this.queue.shift();
    if (!request) return;
    this.inFlight = true;
    this.runCounter += 1;
    const label = `Run ${this.runCounter}`;
    this.showStatus(
      `${label}: simulating ${request.iterations} iterations...` +
        (this.queue.length ? ` (${this.queue.length} queued)` : ""),
      "busy",
    );
    try {
      const report = await this.client.simulate(request);
      this.showResult(report, label);
      this.showStatus(`${label}: done in ${report.runtime_seconds.toFixed(2)}s`, "idle");
    } catch (error) {
      this.showStatus(`${label}: ${describeError(error)}`, "error", () => {
        this.queue.unshift(request);
        void this.drainQueue();
      });
    } finally {
      this.inFlight = false;
      if (this.queue.length > 0) void this.drainQueue();
    }
  }

  private showResult(report: import("./types.js").SimulationReport, label: string): void {
    const latest = this.section("latest-run");
    latest.textContent = "";
    const view = renderResultsView(report, label);
    const pin = document.createElement("button");
    pin.type = "button";
    pin.className = "pin-button";
    pin.textContent = "Pin for comparison";
    pin.addEventListener("click", () => {
      pin.remove();
      this.pin(view);
    });
    (view.querySelector(".results-header") as HTMLElement).appendChild(pin);
    latest.appendChild(view);
  }

  private pin(view: HTMLElement): void {
    const pinned = this.section("pinned-runs");
    while (pinned.children.length >= MAX_PINNED) {
      pinned.firstElementChild?.remove();
    }
    const unpin = document.createElement("button");
    unpin.type = "button";
    unpin.className = "pin-button";
    unpin.textContent = "Unpin";
    unpin.addEventListener("click", () => view.remove());
    (view.querySelector(".results-header") as HTMLElement).appendChild(unpin);
    pinned.appendChild(view);
  }

  private showStatus(
    text: string,
    mode: "idle" | "busy" | "error",
    retry?: () => void,
  ): void {
    const status = this.section("status");
    status.textContent = "";
    status.dataset.mode = mode;
    const line = document.createElement("span");
    line.textContent = text;
    status.appendChild(line);
    if (retry) {
      const button = document.createElement("button");
      button.type = "button";
      button.id = "retry-button";
      button.textContent = "Retry";
      button.addEventListener("click", retry);
      status.appendChild(button);
    }
  }
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    return error.invariant ? `${error.message} [${error.invariant}]` : error.message;
  }
  return error instanceof Error ? error.message : String(error);
}

export function createDashboard(root: HTMLElement, client: ApiClient): Dashboard {
  return new Dashboard(root, client);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const client = new ApiClient(
    new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8080",
  );
  const dashboard = createDashboard(document.getElementById("app") as HTMLElement, client);
  void dashboard.init();
}
