/** UI state and its translation into fit requests. The browser holds only
 * control values; all numbers it displays come back from the service. */

import type { FitRequestPayload } from "./api.js";
import type { Method } from "./controls.js";

export interface UiState {
  dataset: string; // "example" or a builtin/upload name
  method: Method;
  standardize: boolean;
  lambda: number;
  alpha: number;
  nComponents: number;
  splitMode: string;
  trainFraction: number;
  splitSeed: number;
  exampleSeed: number;
  seedPinned: boolean;
  sigmaStart: number;
  sigmaLeft: number;
  sigmaRight: number;
  sigmaEnd: number;
  nExperiments: number;
  nPoints: number;
  relevantStart: number;
  relevantEnd: number;
  noiseSnr: number | null;
}

export function initialState(): UiState {
  return {
    dataset: "example",
    method: "pls",
    standardize: false,
    lambda: 0.015,
    alpha: 0.5,
    nComponents: 2,
    splitMode: "random",
    trainFraction: 0.7,
    splitSeed: 0,
    exampleSeed: 0,
    seedPinned: false,
    sigmaStart: 0,
    sigmaLeft: 2,
    sigmaRight: 2,
    sigmaEnd: 0,
    nExperiments: 100,
    nPoints: 30,
    relevantStart: 21,
    relevantEnd: 30,
    noiseSnr: null,
  };
}

/** Advance the generator seed unless the user pinned it. */
export function redrawSeed(state: UiState): number {
  return state.seedPinned ? state.exampleSeed : state.exampleSeed + 1;
}

export function buildFitRequest(state: UiState): FitRequestPayload {
  const hyperparameters: FitRequestPayload["hyperparameters"] = {};
  if (state.method === "ridge" || state.method === "lasso" || state.method === "elastic_net") {
    hyperparameters.lambda = state.lambda;
  }
  if (state.method === "elastic_net") {
    hyperparameters.alpha = state.alpha;
  }
  if (state.method === "pcr" || state.method === "pls") {
    hyperparameters.n_components = state.nComponents;
  }
  const request: FitRequestPayload = {
    split: {
      mode: state.splitMode,
      train_fraction: state.trainFraction,
      seed: state.splitSeed,
    },
    method: state.method,
    hyperparameters,
    standardize: state.standardize,
  };
  if (state.dataset === "example") {
    request.example = {
      mu_start: 2,
      mu_left: -1,
      mu_right: -4,
      mu_end: -5,
      sigma_start: state.sigmaStart,
      sigma_left: state.sigmaLeft,
      sigma_right: state.sigmaRight,
      sigma_end: state.sigmaEnd,
      n_experiments: state.nExperiments,
      n_points: state.nPoints,
      relevant_start_index: state.relevantStart,
      relevant_end_index: state.relevantEnd,
      seed: state.exampleSeed,
    };
  } else {
    request.dataset = state.dataset;
  }
  if (state.noiseSnr !== null && state.noiseSnr > 0) {
    request.noise = { snr: state.noiseSnr, seed: state.exampleSeed };
  }
  return request;
}

/** Map an error detail string onto the control most likely at fault. */
export function errorTarget(detail: string): string | null {
  const table: [string, string][] = [
    ["n_components", "control-n_components"],
    ["components", "control-n_components"],
    ["alpha", "control-alpha"],
    ["lambda", "control-lambda"],
    ["relevant", "control-example"],
    ["sigma", "control-example"],
    ["train_fraction", "control-split"],
    ["group", "control-split"],
    ["snr", "control-noise"],
  ];
  for (const [needle, target] of table) {
    if (detail.toLowerCase().includes(needle)) return target;
  }
  return null;
}
