/**
 * Client-side feasibility checks, mirroring the rules the API enforces.
 * Submitting is blocked while any of these fail, so invalid configs
 * never produce a network call.
 */
import type { SimulateRequest } from "./types.js";

/** Server-side request bounds, duplicated here for inline feedback. */
export const BOUNDS = {
  maxIterations: 20_000,
  maxVoters: 2_000,
  maxProjects: 5_000,
} as const;

/** Runs above this ask for an override confirmation before submitting. */
export const ITERATIONS_SOFT_CAP = 5_000;

export type ValidationErrors = Partial<Record<string, string>>;

function positiveInt(value: number): boolean {
  return Number.isInteger(value) && value >= 1;
}

export function validateRequest(request: SimulateRequest): ValidationErrors {
  const errors: ValidationErrors = {};

  if (!positiveInt(request.n_voters)) {
    errors.n_voters = "voters must be a positive integer";
  } else if (request.n_voters > BOUNDS.maxVoters) {
    errors.n_voters = `voters must not exceed ${BOUNDS.maxVoters}`;
  }

  if (!positiveInt(request.n_projects)) {
    errors.n_projects = "projects must be a positive integer";
  } else if (request.n_projects > BOUNDS.maxProjects) {
    errors.n_projects = `projects must not exceed ${BOUNDS.maxProjects}`;
  }

  if (!positiveInt(request.iterations)) {
    errors.iterations = "iterations must be a positive integer";
  } else if (request.iterations > BOUNDS.maxIterations) {
    errors.iterations = `iterations must not exceed ${BOUNDS.maxIterations}`;
  }

  if (!(request.total_tokens > 0)) {
    errors.total_tokens = "total tokens must be positive";
  }
  if (!(request.normalization_constant > 0)) {
    errors.normalization_constant = "normalization constant must be positive";
  }
  if (!Number.isInteger(request.seed) || request.seed < 0) {
    errors.seed = "seed must be a non-negative integer";
  }

  if (!(request.epsilon > 0)) {
    errors.epsilon = "epsilon must be positive";
  } else if (
    positiveInt(request.n_voters) &&
    positiveInt(request.n_projects) &&
    request.normalization_constant > 0
  ) {
    // attacker rows must stay inside the per-voter budget c / N
    const weight = request.normalization_constant / request.n_voters;
    const floor = request.epsilon * (request.n_projects - 1);
    if (!(floor < weight)) {
      errors.epsilon =
        `epsilon too large for the budget: epsilon x (projects - 1) = ` +
        `${floor} must stay below the per-voter weight ${weight}`;
    }
  }

  const distribution = request.distribution;
  if (distribution.kind === "pareto" && !((distribution.alpha ?? 0) > 1)) {
    errors.alpha = "pareto shape alpha must exceed 1";
  }
  if (distribution.kind === "gaussian" && !((distribution.sigma ?? 0) > 0)) {
    errors.sigma = "gaussian sigma must be positive";
  }

  const attackers = request.voter_attack.attacker_count;
  if (attackers !== null) {
    if (!positiveInt(attackers)) {
      errors.attacker_count = "attacker count must be a positive integer (or blank)";
    } else if (positiveInt(request.n_voters) && attackers > request.n_voters) {
      errors.attacker_count = "attacker count exceeds the number of voters";
    }
  }

  const colluders = request.project_attack.colluding_count;
  if (!Number.isInteger(colluders) || colluders < 2) {
    errors.colluding_count = "need at least two colluding projects";
  } else if (
    positiveInt(request.n_projects) &&
    colluders > Math.max(request.n_projects, 2)
  ) {
    errors.colluding_count = "colluding count exceeds the number of projects";
  }

  if (request.workers !== undefined && !positiveInt(request.workers)) {
    errors.workers = "workers must be a positive integer";
  }

  return errors;
}

export function isValid(errors: ValidationErrors): boolean {
  return Object.keys(errors).length === 0;
}

export function needsSoftCapConfirmation(request: SimulateRequest): boolean {
  return request.iterations > ITERATIONS_SOFT_CAP;
}
