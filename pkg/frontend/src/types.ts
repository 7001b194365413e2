/** JSON shapes of the model service. These mirror the API exactly; the
 * explorer renders service numbers and never computes model quantities
 * itself. */

export type Compartment = "S" | "V" | "E" | "I" | "Q" | "H" | "R";

export type ControlName = "u1" | "u2" | "u3" | "u4" | "u5";

export interface R0Response {
  r0: number;
}

export interface RegionGeometry {
  delta: number;
  l1: number;
  l2: number;
  l3: number;
  slope: number;
  slope_sign: number;
  /** Vertices (u1, u2) of the eradication region clipped to the unit
   * square, counter-clockwise; may be empty. */
  feasible_polygon: [number, number][];
}

export interface SensitivityRow {
  parameter: string;
  upsilon: number;
  sign: number;
  abs: number;
  rank: number;
  degenerate: boolean;
}

export interface SensitivityTable {
  r0: number;
  rows: SensitivityRow[];
}

export interface PeakSummary {
  peak: number;
  peak_time: number;
  terminal: number;
}

export interface SimulateResponse {
  times: number[];
  states: Record<Compartment, number[]>;
  total: number[];
  non_healthy: number[];
  peak: PeakSummary;
  initial_preset: string | null;
}

export interface IntegratorDefaults {
  method: string;
  rel_tol: number;
  horizon: number;
  sample_interval: number;
}

export interface DefaultsResponse {
  parameters: Record<string, number | null>;
  required: string[];
  ppkm_levels: Record<string, number>;
  initial_presets: string[];
  integrator: IntegratorDefaults;
}

/** 400 payloads carry the offending field, 422 payloads a code naming
 * the domain error class. */
export interface ErrorBody {
  error: string;
  field?: string;
  code?: string;
}
