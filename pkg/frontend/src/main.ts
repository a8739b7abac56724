/** Wires the controls to the fit loop: any control change issues one
 * debounced /fit request; stale responses never overwrite newer plots. */

import { ApiClient, ApiError } from "./api.js";
import { applyDatasetVisibility, applyMethodVisibility, type Method } from "./controls.js";
import { debounce, FIT_DEBOUNCE_MS } from "./debounce.js";
import { renderPanels, type PanelElements } from "./plots.js";
import { buildFitRequest, errorTarget, initialState, redrawSeed } from "./state.js";
import { StaleGuard } from "./staleGuard.js";

const api = new ApiClient("");
const state = initialState();
const guard = new StaleGuard();

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function panelElements(): PanelElements {
  return {
    data: el<HTMLCanvasElement>("plot-data"),
    coefficients: el<HTMLCanvasElement>("plot-coefficients"),
    parityTrain: el<HTMLCanvasElement>("plot-parity-train"),
    parityTest: el<HTMLCanvasElement>("plot-parity-test"),
    rmseTrain: el("rmse-train"),
    rmseTest: el("rmse-test"),
    r2Train: el("r2-train"),
    r2Test: el("r2-test"),
  };
}

function showError(message: string, detail: string): void {
  const banner = el("error-banner");
  banner.textContent = message;
  banner.hidden = false;
  document.querySelectorAll(".control-error").forEach((n) => n.classList.remove("control-error"));
  const target = errorTarget(detail);
  if (target) document.getElementById(target)?.classList.add("control-error");
}

function clearError(): void {
  el("error-banner").hidden = true;
  document.querySelectorAll(".control-error").forEach((n) => n.classList.remove("control-error"));
}

async function runFit(): Promise<void> {
  const ticket = guard.issue();
  el("status").textContent = "fitting...";
  try {
    const payload = await api.fit(buildFitRequest(state));
    if (!guard.admit(ticket)) return; // an out-of-order response; drop it
    clearError();
    renderPanels(panelElements(), payload);
    el("status").textContent = `done (${payload.report.method})`;
  } catch (err) {
    if (!guard.admit(ticket)) return;
    if (err instanceof ApiError) {
      showError(`request rejected (${err.status}): ${err.detail}`, err.detail);
      el("status").textContent = "error";
    } else {
      showError(String(err), "");
      el("status").textContent = "offline?";
    }
  }
}

const scheduleFit = debounce(() => void runFit(), FIT_DEBOUNCE_MS);

function bindNumber(id: string, apply: (value: number) => void, twin?: string): void {
  const input = el<HTMLInputElement>(id);
  input.addEventListener("input", () => {
    const value = Number(input.value);
    if (!Number.isFinite(value)) return;
    apply(value);
    if (twin) el<HTMLInputElement>(twin).value = input.value;
    scheduleFit();
  });
}

async function populateDatasets(): Promise<void> {
  const select = el<HTMLSelectElement>("dataset-select");
  try {
    const descriptors = await api.listDatasets();
    select.innerHTML = "";
    for (const d of descriptors) {
      const option = document.createElement("option");
      option.value = d.name;
      option.textContent = d.kind === "generator" ? `${d.name} (generated)` : `${d.name} (${d.m}x${d.n})`;
      select.appendChild(option);
    }
    select.value = state.dataset;
  } catch {
    showError("could not reach the latentlab service", "");
  }
}

export function init(): void {
  applyMethodVisibility(document, state.method);
  applyDatasetVisibility(document, state.dataset);

  el<HTMLSelectElement>("dataset-select").addEventListener("change", (ev) => {
    state.dataset = (ev.target as HTMLSelectElement).value;
    state.splitMode = state.dataset === "example" ? "random" : "grouped_random";
    el<HTMLSelectElement>("split-mode").value = state.splitMode;
    applyDatasetVisibility(document, state.dataset);
    scheduleFit();
  });

  el<HTMLSelectElement>("method-select").addEventListener("change", (ev) => {
    state.method = (ev.target as HTMLSelectElement).value as Method;
    applyMethodVisibility(document, state.method);
    scheduleFit();
  });

  el<HTMLInputElement>("standardize").addEventListener("change", (ev) => {
    state.standardize = (ev.target as HTMLInputElement).checked;
    scheduleFit();
  });

  bindNumber("lambda-slider", (v) => (state.lambda = 10 ** v), "lambda-value-mirror");
  bindNumber("lambda-value", (v) => (state.lambda = v));
  bindNumber("alpha-slider", (v) => (state.alpha = v), "alpha-value-mirror");
  bindNumber("components-stepper", (v) => (state.nComponents = Math.max(1, Math.round(v))));
  bindNumber("train-fraction", (v) => (state.trainFraction = v));
  bindNumber("split-seed", (v) => (state.splitSeed = Math.round(v)));
  bindNumber("sigma-start", (v) => (state.sigmaStart = v));
  bindNumber("sigma-left", (v) => (state.sigmaLeft = v));
  bindNumber("sigma-right", (v) => (state.sigmaRight = v));
  bindNumber("sigma-end", (v) => (state.sigmaEnd = v));
  bindNumber("n-experiments", (v) => (state.nExperiments = Math.max(1, Math.round(v))));
  bindNumber("n-points", (v) => (state.nPoints = Math.max(2, Math.round(v))));
  bindNumber("relevant-start", (v) => (state.relevantStart = Math.round(v)));
  bindNumber("relevant-end", (v) => (state.relevantEnd = Math.round(v)));
  bindNumber("noise-snr", (v) => (state.noiseSnr = v > 0 ? v : null));
  bindNumber("example-seed", (v) => (state.exampleSeed = Math.round(v)));

  el<HTMLSelectElement>("split-mode").addEventListener("change", (ev) => {
    state.splitMode = (ev.target as HTMLSelectElement).value;
    scheduleFit();
  });

  el<HTMLInputElement>("seed-pinned").addEventListener("change", (ev) => {
    state.seedPinned = (ev.target as HTMLInputElement).checked;
  });

  el("refit-button").addEventListener("click", () => scheduleFit());
  el("redraw-button").addEventListener("click", () => {
    state.exampleSeed = redrawSeed(state);
    el<HTMLInputElement>("example-seed").value = String(state.exampleSeed);
    scheduleFit();
  });

  void populateDatasets();
  scheduleFit();
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  init();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", init);
}
