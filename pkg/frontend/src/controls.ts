/** Which hyperparameter controls each method needs; everything else hides. */

export type Method = "ols" | "ridge" | "lasso" | "elastic_net" | "pcr" | "pls";
export type HyperparameterControl = "lambda" | "alpha" | "n_components";

export const METHODS: readonly Method[] = ["ols", "ridge", "lasso", "elastic_net", "pcr", "pls"];

const VISIBILITY: Record<Method, readonly HyperparameterControl[]> = {
  ols: [],
  ridge: ["lambda"],
  lasso: ["lambda"],
  elastic_net: ["lambda", "alpha"],
  pcr: ["n_components"],
  pls: ["n_components"],
};

export function visibleHyperparameters(method: Method): readonly HyperparameterControl[] {
  return VISIBILITY[method];
}

/** Toggle the `hidden` attribute on every element carrying `data-param`. */
export function applyMethodVisibility(root: ParentNode, method: Method): void {
  const visible = new Set<string>(visibleHyperparameters(method));
  for (const el of root.querySelectorAll<HTMLElement>("[data-param]")) {
    el.hidden = !visible.has(el.dataset.param ?? "");
  }
}

/** Methods using the example generator also show its parameter block. */
export function applyDatasetVisibility(root: ParentNode, dataset: string): void {
  for (const el of root.querySelectorAll<HTMLElement>("[data-example-only]")) {
    el.hidden = dataset !== "example";
  }
  for (const el of root.querySelectorAll<HTMLElement>("[data-grouped-only]")) {
    el.hidden = dataset === "example";
  }
}
