"""Metrics, the end-to-end fit/evaluate pipeline, and split-stability studies.

The pipeline computes standardization statistics strictly on the training
partition and replays them everywhere else; injecting statistics that differ
from the training ones raises :class:`~latentlab.errors.LeakageError`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace as dc_replace

import numpy as np

from ._checks import as_vector, frozen_array
from .datasets import Dataset, SplitResult, SplitSpec, partitions, split
from .errors import ContractError, LeakageError
from .preprocessing import ColumnStats, compute_stats, standardize
from .regression import (
    Hyperparameters,
    LatentModel,
    LinearModel,
    elastic_net_fit,
    lasso_fit,
    ols_fit,
    pcr_fit,
    pls1_fit,
    predict,
    ridge_fit,
)

SCHEMA_VERSION = "1"
METHODS = ("ols", "ridge", "lasso", "elastic_net", "pcr", "pls")


def rmse(y_true, y_pred) -> float:
    """Root mean squared error."""
    t = as_vector(y_true, "y_true")
    p = as_vector(y_pred, "y_pred")
    if t.shape != p.shape:
        raise ContractError(f"length mismatch: {t.shape[0]} vs {p.shape[0]}")
    return float(np.sqrt(np.mean((t - p) ** 2)))


def r_squared(y_true, y_pred) -> float:
    """Coefficient of determination, 1 - SS_res / SS_tot."""
    t = as_vector(y_true, "y_true")
    p = as_vector(y_pred, "y_pred")
    if t.shape != p.shape:
        raise ContractError(f"length mismatch: {t.shape[0]} vs {p.shape[0]}")
    ss_tot = float(np.sum((t - t.mean()) ** 2))
    if ss_tot == 0.0:
        raise ContractError("R^2 is undefined for a zero-variance truth vector")
    ss_res = float(np.sum((t - p) ** 2))
    return 1.0 - ss_res / ss_tot


@dataclass(frozen=True, eq=False)
class FitReport:
    """Everything one fitted experiment produced, ready to serialize."""

    dataset_name: str
    method: str
    hyperparameters: dict
    standardized: bool
    split_spec: SplitSpec
    split_result: SplitResult
    rmse_train: float
    rmse_test: float
    r2_train: float | None
    r2_test: float | None
    coefficients: np.ndarray
    intercept: float
    predictions_train: np.ndarray
    predictions_test: np.ndarray
    feature_axis: np.ndarray

    def __post_init__(self):
        for name in ("coefficients", "predictions_train", "predictions_test", "feature_axis"):
            object.__setattr__(self, name, frozen_array(getattr(self, name)))
        if self.rmse_train < 0 or self.rmse_test < 0:
            raise ContractError("rmse must be nonnegative")
        for r2 in (self.r2_train, self.r2_test):
            if r2 is not None and r2 > 1.0 + 1e-12:
                raise ContractError("r2 cannot exceed 1")
        if self.predictions_train.shape[0] != self.split_result.train_indices.shape[0]:
            raise ContractError("training predictions must match the training partition size")
        if self.predictions_test.shape[0] != self.split_result.test_indices.shape[0]:
            raise ContractError("test predictions must match the test partition size")


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """Coefficient vectors across repeated splits, plus per-feature spread."""

    dataset_name: str
    method: str
    hyperparameters: dict
    standardized: bool
    base_spec: SplitSpec
    seeds: tuple[int, ...]
    samples: np.ndarray       # repeats x n_features, original coordinates
    spread: np.ndarray        # per-feature standard deviation (ddof=1)
    feature_axis: np.ndarray

    def __post_init__(self):
        for name in ("samples", "spread", "feature_axis"):
            object.__setattr__(self, name, frozen_array(getattr(self, name)))
        if self.samples.shape[0] != len(self.seeds):
            raise ContractError("one coefficient sample per repeat is required")
        if self.samples.shape[1] != self.spread.shape[0]:
            raise ContractError("spread must have one entry per feature")

    @property
    def repeats(self) -> int:
        return self.samples.shape[0]


def _fit_model(method: str, X, y, params: Hyperparameters):
    if method == "ols":
        return ols_fit(X, y, fit_intercept=True)
    if method == "ridge":
        _require(params.lam is not None, "ridge requires lambda")
        return ridge_fit(X, y, params.lam, fit_intercept=True)
    if method == "lasso":
        _require(params.lam is not None, "lasso requires lambda")
        return lasso_fit(X, y, params.lam, fit_intercept=True)
    if method == "elastic_net":
        _require(params.lam is not None, "elastic net requires lambda")
        _require(params.alpha is not None, "elastic net requires alpha")
        return elastic_net_fit(X, y, params.lam, params.alpha, fit_intercept=True)
    if method == "pcr":
        _require(params.n_components is not None, "pcr requires n_components")
        return pcr_fit(X, y, params.n_components)
    if method == "pls":
        _require(params.n_components is not None, "pls requires n_components")
        return pls1_fit(X, y, params.n_components)
    raise ContractError(f"method must be one of {METHODS}, got {method!r}")


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ContractError(message)


def _attach_stats(model, stats: ColumnStats):
    if isinstance(model, LatentModel):
        return dc_replace(model, linear=dc_replace(model.linear, stats=stats))
    return dc_replace(model, stats=stats)


def _original_coordinates(linear: LinearModel) -> tuple[np.ndarray, float]:
    """Coefficients/intercept acting on raw inputs, undoing any standardization."""
    if linear.stats is None:
        return np.array(linear.coefficients), linear.intercept
    scale = linear.stats.scale
    beta = linear.coefficients / scale
    intercept = linear.intercept - float((linear.coefficients * linear.stats.means / scale).sum())
    return beta, intercept


def run_experiment(
    ds: Dataset,
    split_spec: SplitSpec,
    method: str,
    params: Hyperparameters | None = None,
    standardize_inputs: bool = False,
    stats_override: ColumnStats | None = None,
) -> FitReport:
    """Split, optionally standardize on training statistics, fit, and score.

    Reported coefficients are expressed in original feature coordinates
    (latent methods are flattened through their weight matrices first).
    ``stats_override`` exists so callers can prove the leakage guard works:
    statistics that do not match the training partition raise LeakageError.
    """
    params = params or Hyperparameters()
    result = split(ds, split_spec)
    X_tr, y_tr, X_te, y_te = partitions(ds, result)

    stats = None
    if standardize_inputs:
        stats = compute_stats(X_tr)
        if stats_override is not None:
            same = (
                np.array_equal(stats_override.means, stats.means)
                and np.array_equal(stats_override.stds, stats.stds)
            )
            if not same:
                raise LeakageError(
                    "standardization statistics differ from the training partition's: "
                    "test-set statistics must never reach the fit"
                )
        Z_tr = standardize(X_tr, stats)
    elif stats_override is not None:
        raise LeakageError("stats_override was given but standardization is off")
    else:
        Z_tr = X_tr

    model = _fit_model(method, Z_tr, y_tr, params)
    if stats is not None:
        model = _attach_stats(model, stats)

    pred_tr = predict(model, X_tr)
    pred_te = predict(model, X_te)
    linear = model.linear if isinstance(model, LatentModel) else model
    coef, intercept = _original_coordinates(linear)

    def _r2(y_true, y_pred):
        try:
            return r_squared(y_true, y_pred)
        except ContractError:
            return None

    return FitReport(
        dataset_name=ds.name,
        method=method,
        hyperparameters=params.as_dict(),
        standardized=standardize_inputs,
        split_spec=split_spec,
        split_result=result,
        rmse_train=rmse(y_tr, pred_tr),
        rmse_test=rmse(y_te, pred_te),
        r2_train=_r2(y_tr, pred_tr),
        r2_test=_r2(y_te, pred_te),
        coefficients=coef,
        intercept=intercept,
        predictions_train=pred_tr,
        predictions_test=pred_te,
        feature_axis=ds.feature_axis,
    )


def coefficient_stability(
    ds: Dataset,
    spec_template: SplitSpec,
    method: str,
    params: Hyperparameters | None = None,
    repeats: int = 10,
    standardize_inputs: bool = False,
) -> StabilityReport:
    """Refit over ``repeats`` splits with seeds base, base+1, ... and collect coefficients."""
    if repeats < 2:
        raise ContractError(f"repeats must be >= 2, got {repeats}")
    seeds = tuple(spec_template.seed + r for r in range(repeats))
    samples = []
    for seed in seeds:
        report = run_experiment(
            ds, dc_replace(spec_template, seed=seed), method, params, standardize_inputs
        )
        samples.append(report.coefficients)
    samples = np.array(samples)
    spread = samples.std(axis=0, ddof=1)
    return StabilityReport(
        dataset_name=ds.name,
        method=method,
        hyperparameters=(params or Hyperparameters()).as_dict(),
        standardized=standardize_inputs,
        base_spec=spec_template,
        seeds=seeds,
        samples=samples,
        spread=spread,
        feature_axis=ds.feature_axis,
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _split_spec_dict(spec: SplitSpec) -> dict:
    return {
        "mode": spec.mode,
        "train_fraction": spec.train_fraction,
        "forced_groups": list(spec.forced_groups) if spec.forced_groups else None,
        "seed": spec.seed,
    }


def report_to_dict(report: FitReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "dataset": report.dataset_name,
        "method": report.method,
        "hyperparameters": report.hyperparameters,
        "standardized": report.standardized,
        "split": _split_spec_dict(report.split_spec),
        "train_indices": report.split_result.train_indices.tolist(),
        "test_indices": report.split_result.test_indices.tolist(),
        "rmse_train": report.rmse_train,
        "rmse_test": report.rmse_test,
        "r2_train": report.r2_train,
        "r2_test": report.r2_test,
        "intercept": report.intercept,
        "coefficients": report.coefficients.tolist(),
        "feature_axis": report.feature_axis.tolist(),
        "predictions_train": report.predictions_train.tolist(),
        "predictions_test": report.predictions_test.tolist(),
    }


def report_to_json(report: FitReport) -> str:
    return json.dumps(report_to_dict(report), sort_keys=True, separators=(",", ":"))


def stability_to_dict(report: StabilityReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "dataset": report.dataset_name,
        "method": report.method,
        "hyperparameters": report.hyperparameters,
        "standardized": report.standardized,
        "split": _split_spec_dict(report.base_spec),
        "seeds": list(report.seeds),
        "feature_axis": report.feature_axis.tolist(),
        "samples": report.samples.tolist(),
        "spread": report.spread.tolist(),
    }


def stability_to_json(report: StabilityReport) -> str:
    return json.dumps(stability_to_dict(report), sort_keys=True, separators=(",", ":"))


def stability_to_csv(report: StabilityReport, layout: str = "long") -> str:
    """CSV rendering of the coefficient samples.

    ``long``: one row per (repeat, feature); ``wide``: one row per repeat with
    a column per feature. Byte-identical for identical inputs.
    """
    lines: list[str] = []
    if layout == "long":
        lines.append("repeat,seed,feature_index,axis_value,coefficient")
        for r in range(report.repeats):
            for j in range(report.samples.shape[1]):
                lines.append(
                    f"{r},{report.seeds[r]},{j},{report.feature_axis[j]!r},{report.samples[r, j]!r}"
                )
    elif layout == "wide":
        header = ["repeat", "seed"] + [repr(float(v)) for v in report.feature_axis]
        lines.append(",".join(header))
        for r in range(report.repeats):
            cells = [str(r), str(report.seeds[r])] + [repr(float(v)) for v in report.samples[r]]
            lines.append(",".join(cells))
    else:
        raise ContractError(f"layout must be 'long' or 'wide', got {layout!r}")
    return "\n".join(lines) + "\n"


def coefficients_to_csv(report: FitReport) -> str:
    """Plot-ready CSV of the coefficient vector against the feature axis."""
    lines = ["feature_index,axis_value,coefficient"]
    for j in range(report.coefficients.shape[0]):
        lines.append(f"{j},{report.feature_axis[j]!r},{report.coefficients[j]!r}")
    return "\n".join(lines) + "\n"
