import { describe, expect, it } from "vitest";

import {
  applyDatasetVisibility,
  applyMethodVisibility,
  METHODS,
  visibleHyperparameters,
  type Method,
} from "../src/controls.js";

const CONTROLS_HTML = `
  <div id="control-lambda" data-param="lambda"></div>
  <div id="control-alpha" data-param="alpha"></div>
  <div id="control-n_components" data-param="n_components"></div>
  <div id="control-example" data-example-only></div>
  <div id="control-groups" data-grouped-only></div>
`;

function hiddenMap(root: ParentNode): Record<string, boolean> {
  const out: Record<string, boolean> = {};
  for (const el of root.querySelectorAll<HTMLElement>("[id]")) out[el.id] = el.hidden;
  return out;
}

describe("visibleHyperparameters", () => {
  it("matches each method's needs exactly", () => {
    expect(visibleHyperparameters("ols")).toEqual([]);
    expect(visibleHyperparameters("ridge")).toEqual(["lambda"]);
    expect(visibleHyperparameters("lasso")).toEqual(["lambda"]);
    expect(visibleHyperparameters("elastic_net")).toEqual(["lambda", "alpha"]);
    expect(visibleHyperparameters("pcr")).toEqual(["n_components"]);
    expect(visibleHyperparameters("pls")).toEqual(["n_components"]);
  });
});

describe("applyMethodVisibility", () => {
  it.each(METHODS.map((m) => [m]))("toggles exactly the relevant controls for %s", (method) => {
    document.body.innerHTML = CONTROLS_HTML;
    applyMethodVisibility(document, method as Method);
    const hidden = hiddenMap(document);
    const visible = new Set(visibleHyperparameters(method as Method));
    expect(hidden["control-lambda"]).toBe(!visible.has("lambda"));
    expect(hidden["control-alpha"])?.valueOf;
    expect(hidden["control-alpha"]).toBe(!visible.has("alpha"));
    expect(hidden["control-n_components"]).toBe(!visible.has("n_components"));
  });

  it("switching to pls hides lambda and shows the component stepper", () => {
    document.body.innerHTML = CONTROLS_HTML;
    applyMethodVisibility(document, "lasso");
    expect(hiddenMap(document)["control-lambda"]).toBe(false);
    expect(hiddenMap(document)["control-n_components"]).toBe(true);
    applyMethodVisibility(document, "pls");
    expect(hiddenMap(document)["control-lambda"]).toBe(true);
    expect(hiddenMap(document)["control-n_components"]).toBe(false);
  });
});

describe("applyDatasetVisibility", () => {
  it("shows generator controls only for the example dataset", () => {
    document.body.innerHTML = CONTROLS_HTML;
    applyDatasetVisibility(document, "example");
    expect(hiddenMap(document)["control-example"]).toBe(false);
    expect(hiddenMap(document)["control-groups"]).toBe(true);
    applyDatasetVisibility(document, "ftir-like");
    expect(hiddenMap(document)["control-example"]).toBe(true);
    expect(hiddenMap(document)["control-groups"]).toBe(false);
  });
});
