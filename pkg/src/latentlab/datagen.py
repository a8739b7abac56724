"""Synthetic example curves: piecewise-linear rows through four random anchors.

Each experiment draws a start, left, right, and end anchor value from Gaussian
distributions and connects them linearly over an integer sampling grid
1..n_points. The left/right anchors sit exactly on the boundary indices of the
"relevant" middle section, and the regression target is that section's average
per-sample slope, so the target is recoverable from the two boundary columns
alone.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ContractError
from .preprocessing import NoiseSpec, apply_noise_pair


@dataclass(frozen=True)
class ExampleConfig:
    """Anchor distributions and sampling grid for the example generator.

    Indices are 1-based and inclusive. When ``relevant_start_index`` is 1 the
    start anchor is unused (the left anchor defines the first sample), and
    when ``relevant_end_index`` equals ``n_points`` — as in the default — the
    end anchor is unused likewise: the relevant section's anchors own their
    boundary indices.
    """

    mu_start: float = 2.0
    mu_left: float = -1.0
    mu_right: float = -4.0
    mu_end: float = -5.0
    sigma_start: float = 0.0
    sigma_left: float = 2.0
    sigma_right: float = 2.0
    sigma_end: float = 0.0
    n_experiments: int = 100
    n_points: int = 30
    relevant_start_index: int = 21
    relevant_end_index: int = 30
    seed: int = 0
    noise: NoiseSpec | None = None

    def __post_init__(self):
        for name in ("sigma_start", "sigma_left", "sigma_right", "sigma_end"):
            if getattr(self, name) < 0:
                raise ContractError(f"{name} must be nonnegative, got {getattr(self, name)}")
        if self.n_experiments < 1:
            raise ContractError(f"n_experiments must be >= 1, got {self.n_experiments}")
        if self.n_points < 2:
            raise ContractError(f"n_points must be >= 2, got {self.n_points}")
        if not (1 <= self.relevant_start_index < self.relevant_end_index <= self.n_points):
            raise ContractError(
                "relevant indices must satisfy 1 <= relevant_start_index < "
                f"relevant_end_index <= n_points, got ({self.relevant_start_index}, "
                f"{self.relevant_end_index}) with n_points={self.n_points}"
            )


def default_config() -> ExampleConfig:
    """The default example: means (2, -1, -4, -5), noise only on the middle anchors."""
    return ExampleConfig()


def generate_example(config: ExampleConfig) -> tuple[np.ndarray, np.ndarray]:
    """Draw the example dataset (X, y) described by ``config``.

    Deterministic for a given seed. The target is (right - left) anchor
    difference divided by the index width of the relevant section; optional
    noise is applied after construction.
    """
    m, n = config.n_experiments, config.n_points
    rs, re = config.relevant_start_index, config.relevant_end_index
    rng = np.random.default_rng(config.seed)
    anchors = rng.normal(
        loc=[config.mu_start, config.mu_left, config.mu_right, config.mu_end],
        scale=[config.sigma_start, config.sigma_left, config.sigma_right, config.sigma_end],
        size=(m, 4),
    )
    a_start, a_left, a_right, a_end = anchors.T

    X = np.empty((m, n))
    cols = np.arange(1, n + 1)

    def fill(lo: int, hi: int, v_lo: np.ndarray, v_hi: np.ndarray) -> None:
        # Convex interpolation so the anchor values land exactly on lo and hi.
        idx = cols[(cols >= lo) & (cols <= hi)]
        w = (idx - lo) / (hi - lo)
        X[:, idx - 1] = np.outer(v_lo, 1.0 - w) + np.outer(v_hi, w)

    if rs > 1:
        fill(1, rs, a_start, a_left)
    fill(rs, re, a_left, a_right)
    if re < n:
        fill(re, n, a_right, a_end)

    y = (a_right - a_left) / (re - rs)

    if config.noise is not None:
        X, y = apply_noise_pair(X, y, config.noise)
    return X, y


def config_with_seed(config: ExampleConfig, seed: int) -> ExampleConfig:
    """A copy of ``config`` with a different draw seed."""
    return replace(config, seed=seed)
