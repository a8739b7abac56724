"""Dataset container, CSV ingestion, built-in stand-ins, and the split engine.

The three built-in stand-ins are synthetic but mirror the structure of real
chemometric data: infrared-like concentration spectra in six groups (one
deliberately biased), Raman-like bioreactor runs, and battery-like capacity
curves with log cycle-life targets and protocol groups. They regenerate
bit-identically from fixed internal seeds.

CSV schema: one header row with cells ``group``, ``target``, then the
feature-axis values; UTF-8; decimal point ``.``. An optional JSON sidecar
(``<stem>.meta.json`` next to the file) declares the axis unit, target
transform, name, and provenance. Load -> save -> load is a bit-exact round
trip.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import Path

import numpy as np

from ._checks import as_matrix, as_vector, frozen_array
from .errors import ContractError, CsvFormatError
from .preprocessing import NoiseSpec, apply_noise_pair

SPLIT_MODES = (
    "random",
    "grouped_random",
    "grouped_interpolation",
    "grouped_extrapolation",
    "forced_test_groups",
)
TARGET_TRANSFORMS = ("identity", "log10")


@dataclass(frozen=True, eq=False)
class Dataset:
    """An immutable (X, y) pair with group labels and a named feature axis."""

    X: np.ndarray
    y: np.ndarray
    groups: tuple[str, ...]
    feature_axis: np.ndarray
    axis_unit: str = "index"
    name: str = "unnamed"
    provenance: str = ""
    target_transform: str = "identity"

    def __post_init__(self):
        object.__setattr__(self, "X", frozen_array(as_matrix(self.X)))
        object.__setattr__(self, "y", frozen_array(as_vector(self.y)))
        object.__setattr__(self, "groups", tuple(str(g) for g in self.groups))
        object.__setattr__(self, "feature_axis", frozen_array(as_vector(self.feature_axis, "feature_axis")))
        if self.X.shape[0] != self.y.shape[0]:
            raise ContractError("X and y must have the same number of rows")
        if len(self.groups) != self.X.shape[0]:
            raise ContractError("groups must have one label per observation")
        if any(g == "" for g in self.groups):
            raise ContractError("group labels must be nonempty")
        if self.feature_axis.shape[0] != self.X.shape[1]:
            raise ContractError("feature_axis must have one value per column")
        if self.target_transform not in TARGET_TRANSFORMS:
            raise ContractError(f"target_transform must be one of {TARGET_TRANSFORMS}")

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def n(self) -> int:
        return self.X.shape[1]

    @property
    def group_labels(self) -> tuple[str, ...]:
        """Distinct group labels in sorted order."""
        return tuple(sorted(set(self.groups)))


def perturb_dataset(ds: Dataset, noise: NoiseSpec) -> Dataset:
    """A copy of ``ds`` with white Gaussian noise added per ``noise.targets``."""
    X, y = apply_noise_pair(ds.X, ds.y, noise)
    return replace(ds, X=X, y=y, provenance=f"{ds.provenance} + noise(snr={noise.snr}, seed={noise.seed})")


@dataclass(frozen=True)
class SplitSpec:
    """How to divide observations into training and test sets."""

    mode: str = "random"
    train_fraction: float = 0.7
    forced_groups: tuple[str, ...] | None = None
    seed: int = 0

    def __post_init__(self):
        if self.mode not in SPLIT_MODES:
            raise ContractError(f"mode must be one of {SPLIT_MODES}, got {self.mode!r}")
        if not (0.0 < self.train_fraction < 1.0):
            raise ContractError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")
        if self.forced_groups is not None:
            object.__setattr__(self, "forced_groups", tuple(str(g) for g in self.forced_groups))
        if (self.mode == "forced_test_groups") != (self.forced_groups is not None):
            raise ContractError("forced_groups is required exactly when mode is 'forced_test_groups'")


@dataclass(frozen=True, eq=False)
class SplitResult:
    """Disjoint train/test index sets covering all observations."""

    train_indices: np.ndarray
    test_indices: np.ndarray

    def __post_init__(self):
        tr = np.sort(np.asarray(self.train_indices, dtype=np.int64))
        te = np.sort(np.asarray(self.test_indices, dtype=np.int64))
        tr.flags.writeable = False
        te.flags.writeable = False
        object.__setattr__(self, "train_indices", tr)
        object.__setattr__(self, "test_indices", te)
        if tr.size == 0 or te.size == 0:
            raise ContractError("both train and test partitions must be nonempty")
        if np.intersect1d(tr, te).size > 0:
            raise ContractError("train and test partitions must be disjoint")


def _clamped_count(fraction: float, total: int) -> int:
    return int(min(max(round(fraction * total), 1), total - 1))


def _indices_of_groups(groups: tuple[str, ...], chosen: set[str]) -> np.ndarray:
    return np.array([i for i, g in enumerate(groups) if g in chosen], dtype=np.int64)


def split(ds: Dataset, spec: SplitSpec) -> SplitResult:
    """Assign observations to train/test per ``spec``; deterministic per seed.

    Grouped modes never let a group straddle the partition boundary and match
    ``train_fraction`` on group counts rather than observation counts.
    ``grouped_interpolation`` forces the groups with minimum and maximum mean
    target into training; ``grouped_extrapolation`` forces the group with the
    largest mean target into test (negate the target for the minimum side).
    """
    rng = np.random.default_rng(spec.seed)
    m = ds.m

    if spec.mode == "random":
        if m < 2:
            raise ContractError("random split needs at least 2 observations")
        n_train = _clamped_count(spec.train_fraction, m)
        perm = rng.permutation(m)
        return SplitResult(perm[:n_train], perm[n_train:])

    labels = np.array(ds.group_labels)
    n_groups = labels.shape[0]
    if n_groups < 2:
        raise ContractError(f"grouped splitting needs at least 2 groups, got {n_groups}")
    group_means = np.array([
        float(np.mean([ds.y[i] for i in range(m) if ds.groups[i] == g])) for g in labels
    ])

    if spec.mode == "grouped_random":
        k = _clamped_count(spec.train_fraction, n_groups)
        perm = rng.permutation(n_groups)
        train_groups = set(labels[perm[:k]])
    elif spec.mode == "grouped_interpolation":
        forced = {labels[int(np.argmin(group_means))], labels[int(np.argmax(group_means))]}
        if n_groups <= len(forced):
            raise ContractError(
                "grouped_interpolation needs more groups than the forced extremes"
            )
        k = max(_clamped_count(spec.train_fraction, n_groups), len(forced))
        k = min(k, n_groups - 1)
        rest = [g for g in labels if g not in forced]
        perm = rng.permutation(len(rest))
        train_groups = forced | {rest[i] for i in perm[: k - len(forced)]}
    elif spec.mode == "grouped_extrapolation":
        top = labels[int(np.argmax(group_means))]
        rest = [g for g in labels if g != top]
        k = min(_clamped_count(spec.train_fraction, n_groups), len(rest))
        perm = rng.permutation(len(rest))
        train_groups = {rest[i] for i in perm[:k]}
    else:  # forced_test_groups
        forced = set(spec.forced_groups)
        missing = forced - set(labels)
        if missing:
            raise ContractError(f"forced test groups not present in dataset: {sorted(missing)}")
        rest = [g for g in labels if g not in forced]
        if not rest:
            raise ContractError("all groups were forced into test; training would be empty")
        k = max(min(round(spec.train_fraction * len(rest)), len(rest)), 1)
        perm = rng.permutation(len(rest))
        train_groups = {rest[i] for i in perm[:int(k)]}

    train_idx = _indices_of_groups(ds.groups, train_groups)
    test_idx = _indices_of_groups(ds.groups, set(labels) - train_groups)
    return SplitResult(train_idx, test_idx)


def partitions(ds: Dataset, result: SplitResult):
    """Convenience accessor: (X_train, y_train, X_test, y_test)."""
    tr, te = result.train_indices, result.test_indices
    return ds.X[tr], ds.y[tr], ds.X[te], ds.y[te]


# ---------------------------------------------------------------------------
# CSV ingestion
# ---------------------------------------------------------------------------

def _sidecar_path(path: Path) -> Path:
    return path.with_suffix(".meta.json")


def _parse_float(text: str, row: int, column: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise CsvFormatError(f"non-numeric cell {text!r}", row=row, column=column) from None


def load_csv_text(text: str, metadata: dict | None = None, name: str = "uploaded") -> Dataset:
    """Parse the documented CSV schema from a string."""
    metadata = metadata or {}
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise CsvFormatError("empty CSV: a header row is required", row=1)
    header = lines[0].split(",")
    if len(header) < 3 or header[0].strip() != "group" or header[1].strip() != "target":
        raise CsvFormatError(
            "header must start with 'group,target' followed by feature-axis values", row=1
        )
    axis = np.array([_parse_float(cell.strip(), 1, j + 3) for j, cell in enumerate(header[2:])])
    n = axis.shape[0]

    groups: list[str] = []
    target_raw: list[float] = []
    rows: list[list[float]] = []
    for r, line in enumerate(lines[1:], start=2):
        if line == "":
            continue
        cells = line.split(",")
        if len(cells) != n + 2:
            raise CsvFormatError(
                f"expected {n + 2} cells but found {len(cells)}", row=r
            )
        group = cells[0].strip()
        if group == "":
            raise CsvFormatError("empty group label", row=r, column=1)
        groups.append(group)
        target_raw.append(_parse_float(cells[1].strip(), r, 2))
        rows.append([_parse_float(c.strip(), r, j + 3) for j, c in enumerate(cells[2:])])
    if not rows:
        raise CsvFormatError("no data rows found", row=2)

    y = np.array(target_raw)
    transform = metadata.get("target_transform", "identity")
    if transform not in TARGET_TRANSFORMS:
        raise ContractError(f"target_transform must be one of {TARGET_TRANSFORMS}, got {transform!r}")
    if transform == "log10" and not metadata.get("target_is_transformed", False):
        if np.any(y <= 0):
            raise ContractError("log10 target transform requires positive targets")
        y = np.log10(y)
    return Dataset(
        X=np.array(rows),
        y=y,
        groups=tuple(groups),
        feature_axis=axis,
        axis_unit=metadata.get("axis_unit", "index"),
        name=metadata.get("name", name),
        provenance=metadata.get("provenance", ""),
        target_transform=transform,
    )


def load_csv(path) -> Dataset:
    """Load a dataset from ``path``, honoring its JSON sidecar if present."""
    path = Path(path)
    metadata: dict = {}
    sidecar = _sidecar_path(path)
    if sidecar.exists():
        metadata = json.loads(sidecar.read_text(encoding="utf-8"))
    return load_csv_text(path.read_text(encoding="utf-8"), metadata, name=path.stem)


def save_dataset(ds: Dataset, path) -> Path:
    """Write ``ds`` to CSV plus sidecar; loading it back is bit-exact.

    The target column holds the stored (already transformed) values, and the
    sidecar records ``target_is_transformed`` so a reload does not re-apply
    the transform.
    """
    path = Path(path)
    lines = ["group,target," + ",".join(repr(float(v)) for v in ds.feature_axis)]
    for i in range(ds.m):
        cells = [ds.groups[i], repr(float(ds.y[i]))]
        cells.extend(repr(float(v)) for v in ds.X[i])
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    meta = {
        "name": ds.name,
        "axis_unit": ds.axis_unit,
        "target_transform": ds.target_transform,
        "target_is_transformed": ds.target_transform != "identity",
        "provenance": ds.provenance,
    }
    _sidecar_path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# Built-in stand-ins
# ---------------------------------------------------------------------------

def _gaussians(axis: np.ndarray, centers, widths, amplitudes) -> np.ndarray:
    out = np.zeros_like(axis)
    for c, w, a in zip(centers, widths, amplitudes):
        out += a * np.exp(-0.5 * ((axis - c) / w) ** 2)
    return out


def _smooth_noise(rng: np.random.Generator, axis: np.ndarray, scale: float, n_bumps: int = 6) -> np.ndarray:
    """A random smooth curve: a few broad Gaussian bumps."""
    lo, hi = float(axis[0]), float(axis[-1])
    span = hi - lo
    centers = rng.uniform(lo, hi, size=n_bumps)
    widths = rng.uniform(span / 12, span / 4, size=n_bumps)
    amps = rng.normal(0.0, scale, size=n_bumps)
    return _gaussians(axis, centers, widths, amps)


# Tuning constants for the infrared-like stand-in. Above the knee the analyte
# response compresses and a distinct distortion profile appears, so a linear
# model trained without the top concentration group extrapolates badly while
# one trained with it still interpolates fine. Per-observation baselines live
# in a small shared mode space the model can learn to cancel; each group adds
# a small unique curve so grouped splits stay honestly harder than random
# splits.
_FTIR_SEED = 20_240_501
_FTIR_CONCENTRATIONS = tuple(round(0.007 * g, 6) for g in range(1, 7))
_FTIR_BIASED_GROUP_INDEX = 1          # the second-lowest concentration group
_FTIR_BIAS_FACTOR = 1.04
_FTIR_SATURATION_KNEE = 0.036
_FTIR_SATURATION_SLOPE = 0.12
_FTIR_BASELINE_COEF_SCALE = 0.0008
_FTIR_GROUP_UNIQUE_SCALE = 0.00025
_FTIR_WITHIN_SCALE = 0.00012
_FTIR_WHITE_SCALE = 0.00006


def _ftir_response(c: float) -> tuple[float, float]:
    """(peak amplitude, distortion amplitude): linear below the knee, compressed above."""
    if c <= _FTIR_SATURATION_KNEE:
        return c, 0.0
    over = c - _FTIR_SATURATION_KNEE
    return _FTIR_SATURATION_KNEE + _FTIR_SATURATION_SLOPE * over, over


def _make_ftir_like() -> Dataset:
    rng = np.random.default_rng(_FTIR_SEED)
    axis = np.linspace(600.0, 1800.0, 300)
    analyte = _gaussians(axis, centers=(1015, 1240, 1515), widths=(28, 45, 60), amplitudes=(1.0, 0.65, 0.4))
    distortion = _gaussians(axis, centers=(1100, 1015), widths=(35, 12), amplitudes=(1.0, -0.5))
    temper = _gaussians(axis, centers=(900, 1650), widths=(180, 120), amplitudes=(1.0, -0.6))
    baseline_modes = np.array([
        _gaussians(axis, centers=(700,), widths=(250,), amplitudes=(1.0,)),
        _gaussians(axis, centers=(1300,), widths=(300,), amplitudes=(1.0,)),
        _gaussians(axis, centers=(1700,), widths=(150,), amplitudes=(1.0,)),
    ])
    per_group = 10
    X_rows, y_rows, groups = [], [], []
    for g, c in enumerate(_FTIR_CONCENTRATIONS):
        unique = _smooth_noise(rng, axis, _FTIR_GROUP_UNIQUE_SCALE)
        amplitude, sat = _ftir_response(c)
        if g == _FTIR_BIASED_GROUP_INDEX:
            amplitude *= _FTIR_BIAS_FACTOR
        for _ in range(per_group):
            base_coefs = rng.normal(0.0, _FTIR_BASELINE_COEF_SCALE, size=3)
            wiggle = rng.normal(0.0, _FTIR_WITHIN_SCALE)
            row = (
                amplitude * analyte
                + sat * distortion
                + base_coefs @ baseline_modes
                + unique
                + wiggle * temper
                + rng.normal(0.0, _FTIR_WHITE_SCALE, size=axis.shape)
            )
            X_rows.append(row)
            y_rows.append(c)
            groups.append(f"C={c:.3f}")
    return Dataset(
        X=np.array(X_rows),
        y=np.array(y_rows),
        groups=tuple(groups),
        feature_axis=axis,
        axis_unit="wavenumber cm^-1",
        name="ftir-like",
        provenance="synthetic stand-in: six concentration groups, one biased, saturating response",
        target_transform="identity",
    )


_RAMAN_SEED = 20_240_502


def _make_raman_like() -> Dataset:
    rng = np.random.default_rng(_RAMAN_SEED)
    axis = np.linspace(400.0, 1800.0, 351)
    glucose = _gaussians(axis, centers=(912, 1060, 1125), widths=(14, 18, 12), amplitudes=(0.5, 1.0, 0.7))
    per_run = 60
    X_rows, y_rows, groups = [], [], []
    for run in (1, 2):
        background = 0.3 + _smooth_noise(rng, axis, 0.05)
        drift_shape = _smooth_noise(rng, axis, 0.02)
        phase = rng.uniform(0, 2 * np.pi)
        level = rng.uniform(4.0, 7.0)
        for i in range(per_run):
            t = i / (per_run - 1)
            concentration = level - 3.2 * t + 0.5 * np.sin(2.5 * np.pi * t + phase)
            row = (
                concentration * 0.01 * glucose
                + background
                + t * drift_shape
                + rng.normal(0.0, 0.002, size=axis.shape)
            )
            X_rows.append(row)
            y_rows.append(concentration)
            groups.append(f"run-{run}")
    return Dataset(
        X=np.array(X_rows),
        y=np.array(y_rows),
        groups=tuple(groups),
        feature_axis=axis,
        axis_unit="Raman shift cm^-1",
        name="raman-like",
        provenance="synthetic stand-in: two bioreactor runs with drifting backgrounds",
        target_transform="identity",
    )


_LFP_SEED = 20_240_503
# Protocol group sizes between 1 and 9 cells, summing to 124.
_LFP_GROUP_SIZES = (9, 8, 7, 6, 5, 4, 3, 2, 1, 9, 8, 7, 6, 5, 4, 3, 2, 1, 9, 8, 7, 6, 4)


# Protocols 4, 11, 17, and 21 are gentle and long-lived; the rest are harsh
# and short-lived, giving the heavy low-cycle-life concentration.
_LFP_LONG_LIVED = frozenset({4, 11, 17, 21})


def _make_lfp_like() -> Dataset:
    assert sum(_LFP_GROUP_SIZES) == 124
    rng = np.random.default_rng(_LFP_SEED)
    axis = np.linspace(2.0, 3.5, 1100)
    base_shape = _gaussians(axis, centers=(3.05,), widths=(0.22,), amplitudes=(1.0,))
    side_shape = _gaussians(axis, centers=(2.75, 3.25), widths=(0.15, 0.1), amplitudes=(0.4, -0.3))
    X_rows, y_rows, groups = [], [], []
    for g, size in enumerate(_LFP_GROUP_SIZES):
        if (g + 1) in _LFP_LONG_LIVED:
            quality = float(rng.uniform(0.85, 1.0))
        else:
            quality = float(rng.uniform(0.0, 0.3))
        protocol_shape = _smooth_noise(rng, axis, 0.002)
        for _ in range(size):
            log_life = 2.70 + 0.55 * quality + rng.normal(0.0, 0.015)
            depth = 10.0 ** (-0.2 - 1.05 * (log_life - 2.70)) * 0.1
            row = (
                -depth * base_shape
                + 0.15 * depth * side_shape * rng.normal(1.0, 0.2)
                + protocol_shape
                + rng.normal(0.0, 5e-5, size=axis.shape)
            )
            X_rows.append(row)
            y_rows.append(log_life)
            groups.append(f"protocol-{g + 1:02d}")
    return Dataset(
        X=np.array(X_rows),
        y=np.array(y_rows),
        groups=tuple(groups),
        feature_axis=axis,
        axis_unit="voltage V",
        name="lfp-like",
        provenance="synthetic stand-in: 124 capacity-difference curves, log10 cycle-life target",
        target_transform="log10",
    )


@lru_cache(maxsize=1)
def _standins() -> tuple[Dataset, ...]:
    return (_make_ftir_like(), _make_raman_like(), _make_lfp_like())


def builtin_standins() -> list[Dataset]:
    """The three deterministic stand-in datasets (ftir-like, raman-like, lfp-like)."""
    return list(_standins())


def builtin_by_name(name: str) -> Dataset:
    for ds in _standins():
        if ds.name == name:
            return ds
    raise ContractError(f"unknown builtin dataset {name!r}")
