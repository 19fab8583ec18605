/** Thin fetch client for the simulation service. */
import type { SimulateRequest, SimulationReport } from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    public readonly status: number,
    public readonly invariant?: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function readErrorBody(response: Response): Promise<ApiError> {
  let message = `${response.status} ${response.statusText}`;
  let invariant: string | undefined;
  try {
    const body = (await response.json()) as { error?: string; invariant?: string };
    if (body.error) message = body.error;
    invariant = body.invariant;
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(message, response.status, invariant);
}

export class ApiClient {
  constructor(public readonly baseUrl: string = "") {}

  async health(): Promise<boolean> {
    try {
      const response = await fetch(`${this.baseUrl}/api/health`);
      return response.ok;
    } catch {
      return false;
    }
  }

  async defaults(): Promise<SimulateRequest> {
    const response = await fetch(`${this.baseUrl}/api/defaults`);
    if (!response.ok) throw await readErrorBody(response);
    return (await response.json()) as SimulateRequest;
  }

  async simulate(request: SimulateRequest): Promise<SimulationReport> {
    const response = await fetch(`${this.baseUrl}/api/simulate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!response.ok) throw await readErrorBody(response);
    return (await response.json()) as SimulationReport;
  }
}
