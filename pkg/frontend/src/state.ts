/**
 * Form-bound configuration state: raw field strings, the parsed request,
 * and the validation messages that gate submission.
 */
import type { DistributionKind, SimulateRequest } from "./types.js";
import { validateRequest, isValid, type ValidationErrors } from "./validation.js";

/** Flat editable view of a SimulateRequest, one entry per form field. */
export interface FieldValues {
  n_voters: string;
  n_projects: string;
  total_tokens: string;
  iterations: string;
  seed: string;
  epsilon: string;
  normalization_constant: string;
  distribution_kind: DistributionKind;
  alpha: string;
  mu: string;
  sigma: string;
  attacker_count: string; // blank = per-mechanism default
  colluding_count: string;
  selection: SimulateRequest["project_attack"]["selection"];
  budget_mode: SimulateRequest["project_attack"]["budget_mode"];
  workers: string;
}

export interface UiConfigState {
  fields: FieldValues;
  request: SimulateRequest;
  errors: ValidationErrors;
  canSubmit: boolean;
}

export function fieldsFromRequest(request: SimulateRequest): FieldValues {
  return {
    n_voters: String(request.n_voters),
    n_projects: String(request.n_projects),
    total_tokens: String(request.total_tokens),
    iterations: String(request.iterations),
    seed: String(request.seed),
    epsilon: String(request.epsilon),
    normalization_constant: String(request.normalization_constant),
    distribution_kind: request.distribution.kind,
    alpha: String(request.distribution.alpha ?? 2.5),
    mu: String(request.distribution.mu ?? 1.0),
    sigma: String(request.distribution.sigma ?? 0.25),
    attacker_count:
      request.voter_attack.attacker_count === null
        ? ""
        : String(request.voter_attack.attacker_count),
    colluding_count: String(request.project_attack.colluding_count),
    selection: request.project_attack.selection,
    budget_mode: request.project_attack.budget_mode,
    workers: String(request.workers ?? 1),
  };
}

function parseNumber(raw: string): number {
  const trimmed = raw.trim();
  return trimmed === "" ? Number.NaN : Number(trimmed);
}

export function requestFromFields(fields: FieldValues): SimulateRequest {
  const distribution: SimulateRequest["distribution"] = { kind: fields.distribution_kind };
  if (fields.distribution_kind === "pareto") {
    distribution.alpha = parseNumber(fields.alpha);
    distribution.scale = 1.0;
  } else if (fields.distribution_kind === "gaussian") {
    distribution.mu = parseNumber(fields.mu);
    distribution.sigma = parseNumber(fields.sigma);
  }
  return {
    n_voters: parseNumber(fields.n_voters),
    n_projects: parseNumber(fields.n_projects),
    total_tokens: parseNumber(fields.total_tokens),
    iterations: parseNumber(fields.iterations),
    seed: parseNumber(fields.seed),
    epsilon: parseNumber(fields.epsilon),
    normalization_constant: parseNumber(fields.normalization_constant),
    distribution,
    voter_attack: {
      attacker_count:
        fields.attacker_count.trim() === "" ? null : parseNumber(fields.attacker_count),
    },
    project_attack: {
      colluding_count: parseNumber(fields.colluding_count),
      selection: fields.selection,
      budget_mode: fields.budget_mode,
    },
    workers: parseNumber(fields.workers),
  };
}

export function stateFromFields(fields: FieldValues): UiConfigState {
  const request = requestFromFields(fields);
  const errors = validateRequest(request);
  return { fields, request, errors, canSubmit: isValid(errors) };
}

export function stateFromRequest(request: SimulateRequest): UiConfigState {
  return stateFromFields(fieldsFromRequest(request));
}

export function updateField(
  state: UiConfigState,
  name: keyof FieldValues,
  raw: string,
): UiConfigState {
  return stateFromFields({ ...state.fields, [name]: raw } as FieldValues);
}
