// Client-side start-form validation. Ranges mirror the server's PathConfig
// and session checks exactly; a form that fails here never issues a request.

import type { SessionRequestBody, StartFormFields } from './types.js';

export interface ValidationResult {
  ok: boolean;
  errors: Partial<Record<keyof StartFormFields, string>>;
  request?: SessionRequestBody;
}

const MODES = ['scripted', 'group_chat'];

function parseNumber(raw: string): number | null {
  if (!raw.trim()) return null;
  const value = Number(raw);
  return Number.isFinite(value) ? value : null;
}

export function validateStartForm(fields: StartFormFields): ValidationResult {
  const errors: ValidationResult['errors'] = {};

  if (!MODES.includes(fields.mode)) {
    errors.mode = `mode must be one of ${MODES.join(', ')}`;
  }

  if (!fields.random) {
    if (!fields.keyword1.trim()) errors.keyword1 = 'keyword required (or pick random)';
    if (!fields.keyword2.trim()) errors.keyword2 = 'keyword required (or pick random)';
  }

  const alpha = parseNumber(fields.alpha);
  if (alpha === null || alpha < 0 || alpha > 10) {
    errors.alpha = 'alpha must be a number in [0, 10]';
  }

  const waypoints = parseNumber(fields.waypoints);
  if (waypoints === null || waypoints < 0 || !Number.isInteger(waypoints)) {
    errors.waypoints = 'waypoints must be an integer >= 0';
  }

  const hops = parseNumber(fields.hops);
  if (hops === null || ![0, 1, 2].includes(hops)) {
    errors.hops = 'hops must be 0, 1 or 2';
  }

  const seed = parseNumber(fields.seed);
  if (seed === null || !Number.isInteger(seed)) {
    errors.seed = 'seed must be an integer';
  }

  const maxTurns = parseNumber(fields.maxTurns);
  if (maxTurns === null || !Number.isInteger(maxTurns) || maxTurns < 1) {
    errors.maxTurns = 'max turns must be an integer >= 1';
  }

  if (Object.keys(errors).length > 0) {
    return { ok: false, errors };
  }

  const request: SessionRequestBody = {
    mode: fields.mode,
    alpha: alpha as number,
    k_waypoints: waypoints as number,
    hops: hops as number,
    seed: seed as number,
    max_turns: maxTurns as number,
  };
  if (!fields.random) {
    // "random" omits the keywords entirely; the server draws a seeded pair
    request.keyword_1 = fields.keyword1.trim();
    request.keyword_2 = fields.keyword2.trim();
  }
  return { ok: true, errors: {}, request };
}
