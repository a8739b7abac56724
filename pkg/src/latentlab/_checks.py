"""Input validation helpers used by the public entry points."""

from __future__ import annotations

import numpy as np

from .errors import ContractError


def as_matrix(X, name: str = "X") -> np.ndarray:
    """Return ``X`` as a finite float64 matrix with m, n >= 1."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise ContractError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ContractError(f"{name} must have at least one row and one column, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractError(f"{name} contains non-finite entries")
    return arr


def as_vector(y, name: str = "y") -> np.ndarray:
    """Return ``y`` as a finite float64 vector of length >= 1."""
    arr = np.asarray(y, dtype=np.float64)
    if arr.ndim != 1:
        raise ContractError(f"{name} must be 1-dimensional, got ndim={arr.ndim}")
    if arr.shape[0] < 1:
        raise ContractError(f"{name} must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise ContractError(f"{name} contains non-finite entries")
    return arr


def check_paired(X: np.ndarray, y: np.ndarray) -> None:
    if X.shape[0] != y.shape[0]:
        raise ContractError(
            f"X has {X.shape[0]} rows but y has {y.shape[0]} entries; they must match"
        )


def frozen_array(arr: np.ndarray) -> np.ndarray:
    """Copy ``arr`` and mark it read-only, so models stay immutable."""
    out = np.array(arr, dtype=np.float64, copy=True)
    out.flags.writeable = False
    return out
