"""Column statistics, standardization, noise injection, and signal cleanup.

Standardization always uses statistics computed from training data; the
evaluation pipeline is responsible for never feeding test-set statistics in
here. The signal-to-noise ratio used throughout is a linear power ratio
(mean squared signal value divided by noise variance), not decibels; see
:func:`snr_from_db` for the conversion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._checks import as_matrix, as_vector, frozen_array
from .errors import ContractError, DegenerateSignalError

NOISE_TARGET_CHOICES = ("X", "y")


@dataclass(frozen=True, eq=False)
class ColumnStats:
    """Per-column means and standard deviations of a data matrix.

    ``stds`` uses the (m-1) denominator. Columns with zero standard
    deviation are flagged ``degenerate`` and are centered but never scaled.
    """

    means: np.ndarray
    stds: np.ndarray
    degenerate: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "means", frozen_array(self.means))
        object.__setattr__(self, "stds", frozen_array(self.stds))
        deg = np.array(self.degenerate, dtype=bool, copy=True)
        deg.flags.writeable = False
        object.__setattr__(self, "degenerate", deg)
        if not (self.means.shape == self.stds.shape == self.degenerate.shape):
            raise ContractError("ColumnStats fields must share one length")
        if np.any(self.stds[~self.degenerate] <= 0):
            raise ContractError("non-degenerate columns must have positive std")

    @property
    def n_features(self) -> int:
        return self.means.shape[0]

    @property
    def scale(self) -> np.ndarray:
        """Divisors used when standardizing: std, or 1 for degenerate columns."""
        return np.where(self.degenerate, 1.0, self.stds)


@dataclass(frozen=True)
class NoiseSpec:
    """Additive white Gaussian noise with a defined linear SNR.

    ``targets`` names which of the data matrix and the target vector get
    perturbed when a dataset is modified; both by default, at the same SNR.
    """

    snr: float
    seed: int = 0
    targets: tuple[str, ...] = ("X", "y")

    def __post_init__(self):
        if not (self.snr > 0):
            raise ContractError(f"snr must be positive, got {self.snr}")
        object.__setattr__(self, "targets", tuple(self.targets))
        for t in self.targets:
            if t not in NOISE_TARGET_CHOICES:
                raise ContractError(f"noise target must be one of {NOISE_TARGET_CHOICES}, got {t!r}")
        if not self.targets:
            raise ContractError("noise targets must not be empty")


def snr_from_db(db: float) -> float:
    """Convert an SNR in decibels to the linear power ratio used here."""
    return float(10.0 ** (db / 10.0))


def compute_stats(X) -> ColumnStats:
    """Column means and (m-1)-denominator standard deviations of ``X``."""
    X = as_matrix(X)
    if X.shape[0] < 2:
        raise ContractError("standard deviations need at least 2 observations")
    means = X.mean(axis=0)
    stds = X.std(axis=0, ddof=1)
    degenerate = stds == 0.0
    return ColumnStats(means=means, stds=stds, degenerate=degenerate)


def standardize(X, stats: ColumnStats) -> np.ndarray:
    """Center every column; scale non-degenerate columns to unit variance."""
    X = as_matrix(X)
    if X.shape[1] != stats.n_features:
        raise ContractError(
            f"X has {X.shape[1]} columns but stats describe {stats.n_features}"
        )
    return (X - stats.means) / stats.scale


def destandardize(Z, stats: ColumnStats) -> np.ndarray:
    """Invert :func:`standardize` with the same statistics."""
    Z = as_matrix(Z, name="Z")
    if Z.shape[1] != stats.n_features:
        raise ContractError(
            f"Z has {Z.shape[1]} columns but stats describe {stats.n_features}"
        )
    return Z * stats.scale + stats.means


def _noise_for(values: np.ndarray, snr: float, rng: np.random.Generator) -> np.ndarray:
    power = float(np.mean(values**2))
    if power == 0.0:
        raise DegenerateSignalError("signal is identically zero; SNR is undefined")
    return rng.normal(0.0, np.sqrt(power / snr), size=values.shape)


def add_noise(values, spec: NoiseSpec) -> np.ndarray:
    """Add zero-mean Gaussian noise with variance mean(values^2)/snr.

    Deterministic for a given ``spec.seed``; the array shape is preserved.
    """
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ContractError("values contain non-finite entries")
    rng = np.random.default_rng(spec.seed)
    return arr + _noise_for(arr, spec.snr, rng)


def apply_noise_pair(X, y, spec: NoiseSpec) -> tuple[np.ndarray, np.ndarray]:
    """Perturb X and/or y (per ``spec.targets``) from one seeded stream."""
    X = as_matrix(X)
    y = as_vector(y)
    rng = np.random.default_rng(spec.seed)
    X_out, y_out = X, y
    if "X" in spec.targets:
        X_out = X + _noise_for(X, spec.snr, rng)
    if "y" in spec.targets:
        y_out = y + _noise_for(y, spec.snr, rng)
    return X_out, y_out


def moving_median_outlier_filter(
    values,
    timestamps,
    window: float,
    k: float = 3.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Remove values deviating from a centered moving median.

    For each point, the median is taken over all points within ``window / 2``
    in time on either side. Points whose absolute deviation from that median
    exceeds ``k`` times the global standard deviation of all deviations are
    removed; surviving values are returned unchanged.

    Returns ``(kept_values, removed_mask)`` where ``removed_mask`` is True
    for entries that were filtered out.
    """
    vals = as_vector(values, name="values")
    ts = as_vector(np.asarray(timestamps, dtype=np.float64), name="timestamps")
    if vals.shape != ts.shape:
        raise ContractError("values and timestamps must have the same length")
    if np.any(np.diff(ts) < 0):
        raise ContractError("timestamps must be nondecreasing")
    if not (window > 0):
        raise ContractError(f"window must be positive, got {window}")
    if not (k > 0):
        raise ContractError(f"k must be positive, got {k}")

    half = window / 2.0
    n = vals.shape[0]
    medians = np.empty(n)
    lo = np.searchsorted(ts, ts - half, side="left")
    hi = np.searchsorted(ts, ts + half, side="right")
    for i in range(n):
        medians[i] = np.median(vals[lo[i]:hi[i]])
    deviations = vals - medians
    sigma = float(np.std(deviations, ddof=1)) if n > 1 else 0.0
    removed = np.abs(deviations) > k * sigma
    return vals[~removed], removed


def restrict_feature_range(X, axis, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """Keep exactly the columns whose axis value lies in [lo, hi], in order."""
    X = as_matrix(X)
    ax = as_vector(np.asarray(axis, dtype=np.float64), name="axis")
    if ax.shape[0] != X.shape[1]:
        raise ContractError(f"axis has {ax.shape[0]} values but X has {X.shape[1]} columns")
    if not (lo < hi):
        raise ContractError(f"lo must be smaller than hi, got lo={lo}, hi={hi}")
    keep = (ax >= lo) & (ax <= hi)
    if not np.any(keep):
        raise ContractError(f"no feature-axis values fall inside [{lo}, {hi}]")
    return X[:, keep], ax[keep]
