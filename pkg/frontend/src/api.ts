/** Typed client for the latentlab HTTP API (v1). All numbers displayed by
 * the UI come from these payloads; the browser never computes model math. */

export interface DatasetDescriptor {
  name: string;
  kind: "builtin" | "generator" | "upload";
  m: number;
  n: number;
  n_groups: number;
  axis_unit: string;
}

export interface ExampleConfigPayload {
  mu_start: number;
  mu_left: number;
  mu_right: number;
  mu_end: number;
  sigma_start: number;
  sigma_left: number;
  sigma_right: number;
  sigma_end: number;
  n_experiments: number;
  n_points: number;
  relevant_start_index: number;
  relevant_end_index: number;
  seed: number;
  noise?: { snr: number; seed: number } | null;
}

export interface SplitPayload {
  mode: string;
  train_fraction: number;
  forced_groups?: string[] | null;
  seed: number;
}

export interface HyperparametersPayload {
  lambda?: number;
  alpha?: number;
  n_components?: number;
}

export interface FitRequestPayload {
  dataset?: string;
  example?: ExampleConfigPayload;
  split: SplitPayload;
  method: string;
  hyperparameters: HyperparametersPayload;
  standardize: boolean;
  noise?: { snr: number; seed: number } | null;
}

export interface CurveSeries {
  axis_unit: string;
  curves: { axis: number[]; values: number[]; partition?: "train" | "test" }[];
}

export interface ParitySeries {
  true: number[];
  predicted: number[];
  rmse: number;
}

export interface FitResponsePayload {
  api_version: string;
  report: {
    rmse_train: number;
    rmse_test: number;
    r2_train: number | null;
    r2_test: number | null;
    method: string;
    coefficients: number[];
    [key: string]: unknown;
  };
  series: {
    data: CurveSeries;
    coefficients: { axis: number[]; values: number[] };
    parity: { train: ParitySeries; test: ParitySeries };
  };
}

export class ApiError extends Error {
  constructor(readonly status: number, readonly detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function post<T>(base: string, path: string, body: unknown): Promise<T> {
  const resp = await fetch(base + path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  const payload = await resp.json();
  if (!resp.ok) {
    const detail = typeof payload.detail === "string" ? payload.detail : JSON.stringify(payload.detail);
    throw new ApiError(resp.status, detail);
  }
  return payload as T;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  async listDatasets(): Promise<DatasetDescriptor[]> {
    const resp = await fetch(this.base + "/datasets");
    const payload = await resp.json();
    return payload.datasets as DatasetDescriptor[];
  }

  fit(request: FitRequestPayload): Promise<FitResponsePayload> {
    return post<FitResponsePayload>(this.base, "/fit", request);
  }
}
