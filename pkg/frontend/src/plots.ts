/** Canvas renderers for the three linked panels. Train points/curves are
 * blue, test ones red. Every rendered number is copied verbatim from the
 * response payload. */

import type { CurveSeries, FitResponsePayload, ParitySeries } from "./api.js";

export const TRAIN_COLOR = "#1f77b4";
export const TEST_COLOR = "#d62728";

interface Box {
  x0: number;
  y0: number;
  w: number;
  h: number;
}

function extent(values: Iterable<number>): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!isFinite(lo)) return [0, 1];
  if (lo === hi) return [lo - 1, hi + 1];
  return [lo, hi];
}

function scaler(domain: [number, number], range: [number, number]) {
  const d = domain[1] - domain[0];
  return (v: number) => range[0] + ((v - domain[0]) / d) * (range[1] - range[0]);
}

function clear(canvas: HTMLCanvasElement): CanvasRenderingContext2D | null {
  const ctx = canvas.getContext("2d");
  if (!ctx) return null; // jsdom test environments have no 2d context
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  return ctx;
}

function plotBox(canvas: HTMLCanvasElement): Box {
  return { x0: 40, y0: 10, w: canvas.width - 50, h: canvas.height - 35 };
}

export function renderDataPanel(canvas: HTMLCanvasElement, data: CurveSeries): void {
  const ctx = clear(canvas);
  if (!ctx) return;
  const box = plotBox(canvas);
  const allX: number[] = [];
  const allY: number[] = [];
  for (const c of data.curves) {
    allX.push(...c.axis);
    allY.push(...c.values);
  }
  const xs = scaler(extent(allX), [box.x0, box.x0 + box.w]);
  const ys = scaler(extent(allY), [box.y0 + box.h, box.y0]);
  for (const curve of data.curves) {
    ctx.strokeStyle = curve.partition === "test" ? TEST_COLOR : TRAIN_COLOR;
    ctx.globalAlpha = 0.5;
    ctx.beginPath();
    curve.values.forEach((v, i) => {
      const x = xs(curve.axis[i]);
      const y = ys(v);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
  }
  ctx.globalAlpha = 1.0;
}

export function renderCoefficientPanel(
  canvas: HTMLCanvasElement,
  series: { axis: number[]; values: number[] },
): void {
  const ctx = clear(canvas);
  if (!ctx) return;
  const box = plotBox(canvas);
  const xs = scaler(extent(series.axis), [box.x0, box.x0 + box.w]);
  const ys = scaler(extent([...series.values, 0]), [box.y0 + box.h, box.y0]);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(box.x0, ys(0));
  ctx.lineTo(box.x0 + box.w, ys(0));
  ctx.stroke();
  ctx.strokeStyle = "#222";
  ctx.beginPath();
  series.values.forEach((v, i) => {
    const x = xs(series.axis[i]);
    const y = ys(v);
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.stroke();
}

export function renderParityPanel(
  canvas: HTMLCanvasElement,
  series: ParitySeries,
  color: string,
): void {
  const ctx = clear(canvas);
  if (!ctx) return;
  const box = plotBox(canvas);
  const domain = extent([...series.true, ...series.predicted]);
  const xs = scaler(domain, [box.x0, box.x0 + box.w]);
  const ys = scaler(domain, [box.y0 + box.h, box.y0]);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(xs(domain[0]), ys(domain[0]));
  ctx.lineTo(xs(domain[1]), ys(domain[1]));
  ctx.stroke();
  ctx.fillStyle = color;
  series.true.forEach((t, i) => {
    ctx.beginPath();
    ctx.arc(xs(t), ys(series.predicted[i]), 2.5, 0, 2 * Math.PI);
    ctx.fill();
  });
}

export interface PanelElements {
  data: HTMLCanvasElement;
  coefficients: HTMLCanvasElement;
  parityTrain: HTMLCanvasElement;
  parityTest: HTMLCanvasElement;
  rmseTrain: HTMLElement;
  rmseTest: HTMLElement;
  r2Train: HTMLElement;
  r2Test: HTMLElement;
}

/** Paint all three panels and the result annotations from one response.
 * Annotation text is the payload value verbatim (no reformatting). */
export function renderPanels(els: PanelElements, payload: FitResponsePayload): void {
  renderDataPanel(els.data, payload.series.data);
  renderCoefficientPanel(els.coefficients, payload.series.coefficients);
  renderParityPanel(els.parityTrain, payload.series.parity.train, TRAIN_COLOR);
  renderParityPanel(els.parityTest, payload.series.parity.test, TEST_COLOR);
  els.rmseTrain.textContent = `RMSE = ${payload.series.parity.train.rmse}`;
  els.rmseTest.textContent = `RMSE = ${payload.series.parity.test.rmse}`;
  els.r2Train.textContent = payload.report.r2_train === null ? "R2 = n/a" : `R2 = ${payload.report.r2_train}`;
  els.r2Test.textContent = payload.report.r2_test === null ? "R2 = n/a" : `R2 = ${payload.report.r2_test}`;
}
