/** Thin typed client for the model service.
 *
 * Failures are folded into one error type with a kind the UI can dispatch
 * on: "field" (400, bad input, names the field), "domain" (422, valid input
 * but the quantity is undefined there, carries the error code), "network"
 * (fetch rejected), "http" (anything else).
 */

import type {
  DefaultsResponse,
  ErrorBody,
  R0Response,
  RegionGeometry,
  SensitivityTable,
  SimulateResponse,
} from "./types.js";

export type FailureKind = "field" | "domain" | "network" | "http";

export class ApiFailure extends Error {
  readonly kind: FailureKind;
  readonly status: number | undefined;
  readonly field: string | undefined;
  readonly code: string | undefined;

  constructor(kind: FailureKind, message: string, status?: number, field?: string, code?: string) {
    super(message);
    this.name = "ApiFailure";
    this.kind = kind;
    this.status = status;
    this.field = field;
    this.code = code;
  }
}

/** Minimal structural slice of fetch so tests can stub it without DOM
 * machinery. */
export interface ResponseLike {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (url: string, init?: {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}) => Promise<ResponseLike>;

export interface SimulateRequest {
  parameters: Record<string, number>;
  initial?: string | Record<string, number>;
  integrator?: Record<string, number | string>;
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    // tolerate a trailing slash in the configured service URL
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  defaults(): Promise<DefaultsResponse> {
    return this.request<DefaultsResponse>("/api/defaults", undefined);
  }

  r0(fragment: Record<string, number>): Promise<R0Response> {
    return this.request<R0Response>("/api/r0", fragment);
  }

  region(fragment: Record<string, number>): Promise<RegionGeometry> {
    return this.request<RegionGeometry>("/api/region", fragment);
  }

  sensitivity(fragment: Record<string, number>): Promise<SensitivityTable> {
    return this.request<SensitivityTable>("/api/sensitivity", fragment);
  }

  simulate(body: SimulateRequest): Promise<SimulateResponse> {
    return this.request<SimulateResponse>("/api/simulate", body);
  }

  private async request<T>(path: string, body: unknown): Promise<T> {
    let response: ResponseLike;
    const init = body === undefined
      ? undefined
      : {
          method: "POST",
          headers: { "content-type": "application/json" },
          body: JSON.stringify(body),
        };
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch {
      throw new ApiFailure("network", "model service unreachable");
    }
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      // non-JSON body; fall through with nulls
    }
    if (!response.ok) {
      const detail = (payload ?? {}) as ErrorBody;
      const message = detail.error ?? `request failed with status ${response.status}`;
      if (response.status === 400) {
        throw new ApiFailure("field", message, 400, detail.field);
      }
      if (response.status === 422) {
        throw new ApiFailure("domain", message, 422, undefined, detail.code);
      }
      throw new ApiFailure("http", message, response.status);
    }
    return payload as T;
  }
}
