"""Matplotlib rendering of fit and stability reports to image files.

Used by the CLI report path: figures land next to the delimited output.
Training data is drawn in blue, test data in red.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .datasets import Dataset
from .evaluation import FitReport, StabilityReport

TRAIN_COLOR = "tab:blue"
TEST_COLOR = "tab:red"


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_fit_figures(report: FitReport, ds: Dataset, outdir) -> list[Path]:
    """Write data/coefficient/parity panels for one experiment; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    axis = report.feature_axis
    paths = []

    fig, ax = plt.subplots(figsize=(7, 4.5))
    train_set = set(report.split_result.train_indices.tolist())
    seen = set()
    for i in range(ds.m):
        in_train = i in train_set
        label = None
        if ("train" if in_train else "test") not in seen:
            label = "train" if in_train else "test"
            seen.add(label)
        ax.plot(axis, ds.X[i], color=TRAIN_COLOR if in_train else TEST_COLOR,
                alpha=0.45, linewidth=0.8, label=label)
    ax.set_xlabel(f"feature axis ({ds.axis_unit})")
    ax.set_ylabel("value")
    ax.set_title(f"{report.dataset_name}: data, train/test split")
    ax.legend()
    paths.append(_save(fig, outdir / "data.png"))

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.axhline(0.0, color="gray", linewidth=0.8)
    ax.plot(axis, report.coefficients, color="black", marker="o", markersize=2.5, linewidth=0.9)
    ax.set_xlabel(f"feature axis ({ds.axis_unit})")
    ax.set_ylabel("coefficient")
    ax.set_title(f"{report.method} coefficients")
    paths.append(_save(fig, outdir / "coefficients.png"))

    fig, axes = plt.subplots(1, 2, figsize=(9, 4.5))
    for ax, part, color in (
        (axes[0], "train", TRAIN_COLOR),
        (axes[1], "test", TEST_COLOR),
    ):
        idx = getattr(report.split_result, f"{part}_indices")
        truth = ds.y[idx]
        pred = getattr(report, f"predictions_{part}")
        ax.scatter(truth, pred, s=14, color=color)
        lims = [min(truth.min(), pred.min()), max(truth.max(), pred.max())]
        ax.plot(lims, lims, color="gray", linewidth=0.8)
        score = getattr(report, f"rmse_{part}")
        ax.set_title(f"{part}: RMSE = {score:.3g}")
        ax.set_xlabel("true")
        ax.set_ylabel("predicted")
    paths.append(_save(fig, outdir / "parity.png"))
    return paths


def render_stability_figure(report: StabilityReport, outdir) -> Path:
    """Overlay per-split coefficient traces with a +/- spread band."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    axis = report.feature_axis
    mean = report.samples.mean(axis=0)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for r in range(report.repeats):
        ax.plot(axis, report.samples[r], alpha=0.35, linewidth=0.8)
    ax.fill_between(axis, mean - report.spread, mean + report.spread,
                    color="gray", alpha=0.3, label="+/- spread")
    ax.set_xlabel("feature axis")
    ax.set_ylabel("coefficient")
    ax.set_title(f"{report.method} coefficients over {report.repeats} splits")
    ax.legend()
    return _save(fig, outdir / "stability.png")
