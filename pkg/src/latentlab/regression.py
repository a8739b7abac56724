"""Linear and latent-variable regression fitters.

Every fitter is a pure function from (data, hyperparameters) to an immutable
model. Penalized objectives are written without any 1/(2m) loss scaling:

* ridge minimizes        ||y - X b||^2 + lam * ||b||^2
* lasso minimizes        ||y - X b||^2 + lam * ||b||_1
* elastic net minimizes  ||y - X b||^2 + lam * ((1-alpha)/2 ||b||^2 + alpha ||b||_1)

so regularization strengths are not interchangeable with conventions that
rescale the loss. With ``fit_intercept`` the columns of X and y are centered,
coefficients are fit on centered data, and the intercept is recovered as
ybar - xbar . b; the intercept is never penalized. The latent methods (PCA,
PCR, PLS1) always center.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._checks import as_matrix, as_vector, check_paired, frozen_array
from .errors import (
    ContractError,
    ConvergenceError,
    DegenerateTargetError,
    RankError,
    SingularityError,
)
from .preprocessing import ColumnStats, standardize

CD_TOL = 1e-9
CD_MAX_SWEEPS = 200_000


@dataclass(frozen=True, eq=False)
class Hyperparameters:
    """Bundle of the tunable knobs shared by the fitting methods.

    Only the fields a method actually uses need to be set: ``lam`` is the
    regularization strength (lambda >= 0), ``alpha`` the elastic-net mixing
    weight in [0, 1], and ``n_components`` the latent dimensionality.
    """

    lam: float | None = None
    alpha: float | None = None
    n_components: int | None = None

    def __post_init__(self):
        if self.lam is not None and not (self.lam >= 0):
            raise ContractError(f"lambda must be nonnegative, got {self.lam}")
        if self.alpha is not None and not (0.0 <= self.alpha <= 1.0):
            raise ContractError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.n_components is not None and self.n_components < 1:
            raise ContractError(f"n_components must be >= 1, got {self.n_components}")

    def as_dict(self) -> dict:
        out = {}
        if self.lam is not None:
            out["lambda"] = float(self.lam)
        if self.alpha is not None:
            out["alpha"] = float(self.alpha)
        if self.n_components is not None:
            out["n_components"] = int(self.n_components)
        return out


@dataclass(frozen=True, eq=False)
class LinearModel:
    """A fitted linear predictor: yhat = replay(X) . coefficients + intercept.

    ``stats`` holds the standardization statistics applied to the data before
    fitting (training means/stds); :func:`predict` replays them on new data.
    ``stats`` is None when the model was fit on unstandardized data.
    """

    coefficients: np.ndarray
    intercept: float
    method: str
    hyperparameters: dict
    stats: ColumnStats | None = None

    def __post_init__(self):
        coef = frozen_array(as_vector(self.coefficients, name="coefficients"))
        object.__setattr__(self, "coefficients", coef)
        object.__setattr__(self, "intercept", float(self.intercept))
        if not np.isfinite(self.intercept):
            raise ContractError("intercept must be finite")
        if self.stats is not None and self.stats.n_features != coef.shape[0]:
            raise ContractError("preprocessing statistics length must equal n_features")

    @property
    def n_features(self) -> int:
        return self.coefficients.shape[0]


@dataclass(frozen=True, eq=False)
class LatentModel:
    """Weights/loadings/scores of a latent decomposition plus its regressor.

    ``weights`` maps centered inputs to scores (scores = X_centered @ weights),
    ``loadings`` are the rank-one reconstruction directions, ``beta_low`` the
    regression coefficients in score space, and ``linear`` the equivalent
    full-space model (None for a pure PCA decomposition, which has no target).
    ``x_means``/``y_mean`` are the centering offsets used internally.
    """

    weights: np.ndarray
    loadings: np.ndarray
    scores: np.ndarray
    explained_variance: np.ndarray
    x_means: np.ndarray
    beta_low: np.ndarray | None = None
    y_mean: float | None = None
    linear: LinearModel | None = None

    def __post_init__(self):
        for name in ("weights", "loadings", "scores", "explained_variance", "x_means"):
            object.__setattr__(self, name, frozen_array(getattr(self, name)))
        if self.beta_low is not None:
            object.__setattr__(self, "beta_low", frozen_array(self.beta_low))
        k = self.weights.shape[1]
        if self.loadings.shape[1] != k or self.scores.shape[1] != k:
            raise ContractError("weights, loadings, and scores must share a column count")
        if self.explained_variance.shape[0] != k:
            raise ContractError("explained_variance must have one entry per component")
        if self.beta_low is not None and self.beta_low.shape[0] != k:
            raise ContractError("beta_low must have one entry per component")

    @property
    def n_components(self) -> int:
        return self.weights.shape[1]


def _center(X: np.ndarray, y: np.ndarray | None):
    x_means = X.mean(axis=0)
    Xc = X - x_means
    if y is None:
        return Xc, None, x_means, None
    y_mean = float(y.mean())
    return Xc, y - y_mean, x_means, y_mean


def _rank_from_singular_values(s: np.ndarray, m: int, n: int) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    tol = max(m, n) * np.finfo(np.float64).eps * s[0]
    return int(np.count_nonzero(s >= tol))


def _svd_solve(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Full-column-rank least squares via SVD; raises on rank deficiency."""
    m, n = X.shape
    U, s, Vt = np.linalg.svd(X, full_matrices=False)
    rank = _rank_from_singular_values(s, m, n)
    if rank < n:
        raise SingularityError(
            f"design matrix is rank deficient: rank {rank} < {n} columns"
        )
    return Vt.T @ ((U.T @ y) / s)


def _pinv_solve(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Minimum-norm least squares via the pseudoinverse (rank-tolerant)."""
    m, n = X.shape
    U, s, Vt = np.linalg.svd(X, full_matrices=False)
    rank = _rank_from_singular_values(s, m, n)
    if rank == 0:
        return np.zeros(n)
    Ur, sr, Vr = U[:, :rank], s[:rank], Vt[:rank]
    return Vr.T @ ((Ur.T @ y) / sr)


def ols_fit(X, y, fit_intercept: bool = True) -> LinearModel:
    """Ordinary least squares via the normal equations.

    For wide data (fewer observations than effective columns) this dispatches
    to the minimum-norm solution: :func:`min_norm_fit` when no intercept is
    requested, otherwise the minimum-norm least-squares solution on centered
    data (the centered wide matrix is always row-rank deficient, so the plain
    min-norm formula does not apply there).
    """
    X = as_matrix(X)
    y = as_vector(y)
    check_paired(X, y)
    m, n = X.shape
    if fit_intercept:
        Xc, yc, x_means, y_mean = _center(X, y)
        if m <= n:
            beta = _pinv_solve(Xc, yc)
        else:
            beta = _svd_solve(Xc, yc)
        intercept = y_mean - float(x_means @ beta)
        return LinearModel(beta, intercept, "ols", {})
    if m < n:
        return min_norm_fit(X, y)
    beta = _svd_solve(X, y)
    return LinearModel(beta, 0.0, "ols", {})


def min_norm_fit(X, y) -> LinearModel:
    """Minimum-norm exact solution b = X^T (X X^T)^{-1} y for wide, full-row-rank X."""
    X = as_matrix(X)
    y = as_vector(y)
    check_paired(X, y)
    m, n = X.shape
    if m >= n:
        raise ContractError(f"minimum-norm solution needs m < n, got shape {X.shape}")
    s = np.linalg.svd(X, compute_uv=False)
    rank = _rank_from_singular_values(s, m, n)
    if rank < m:
        raise SingularityError(f"design matrix is row-rank deficient: rank {rank} < {m} rows")
    beta = X.T @ np.linalg.solve(X @ X.T, y)
    return LinearModel(beta, 0.0, "min_norm", {})


def ridge_fit(X, y, lam: float, fit_intercept: bool = True) -> LinearModel:
    """Ridge regression via the closed form (X^T X + lam I)^{-1} X^T y."""
    X = as_matrix(X)
    y = as_vector(y)
    check_paired(X, y)
    if not (lam >= 0):
        raise ContractError(f"lambda must be nonnegative, got {lam}")
    if lam == 0:
        return ols_fit(X, y, fit_intercept=fit_intercept)
    n = X.shape[1]
    if fit_intercept:
        Xc, yc, x_means, y_mean = _center(X, y)
    else:
        Xc, yc = X, y
    beta = np.linalg.solve(Xc.T @ Xc + lam * np.eye(n), Xc.T @ yc)
    intercept = (y_mean - float(x_means @ beta)) if fit_intercept else 0.0
    return LinearModel(beta, intercept, "ridge", {"lambda": float(lam)})


def _soft_threshold(x: float, t: float) -> float:
    if x > t:
        return x - t
    if x < -t:
        return x + t
    return 0.0


def _coordinate_descent(
    X: np.ndarray,
    y: np.ndarray,
    l1: float,
    l2: float,
    tol: float,
    max_sweeps: int,
) -> np.ndarray:
    """Cyclic coordinate descent for ||y-Xb||^2 + l1 ||b||_1 + (l2/2) ||b||^2.

    Coordinates are visited in fixed ascending index order; zeros produced by
    the soft threshold are exact. Between full passes over all coordinates
    (which admit new coordinates into the support and refresh the residual),
    the solver sweeps only the current support — highly correlated columns
    trade coefficient mass very slowly, and the restriction makes those
    sweeps cheap. Every sweep, full or restricted, counts against
    ``max_sweeps``; exhaustion raises :class:`ConvergenceError` carrying the
    final subgradient-optimality residual.
    """
    n = X.shape[1]
    columns = [np.ascontiguousarray(X[:, j]) for j in range(n)]
    col_sq = np.array([float(c @ c) for c in columns])
    denom = col_sq + 0.5 * l2
    usable = [j for j in range(n) if col_sq[j] > 0.0]
    beta = np.zeros(n)
    residual = y.astype(np.float64, copy=True)
    threshold = 0.5 * l1
    sweeps = 0

    def sweep(indices) -> float:
        nonlocal sweeps, residual
        sweeps += 1
        delta = 0.0
        for j in indices:
            col = columns[j]
            b_old = beta[j]
            if b_old != 0.0:
                residual += col * b_old
            rho = float(col @ residual)
            b_new = _soft_threshold(rho, threshold) / denom[j]
            if b_new != 0.0:
                residual -= col * b_new
            beta[j] = b_new
            change = abs(b_new - b_old)
            if change > delta:
                delta = change
        return delta

    while sweeps < max_sweeps:
        residual = y - X @ beta
        if sweep(usable) < tol:
            return beta
        while sweeps < max_sweeps:
            support = [j for j in usable if beta[j] != 0.0]
            if not support or sweep(support) < tol:
                break
    lam, alpha = (l1, 1.0) if l2 == 0.0 else (l1 + l2, l1 / (l1 + l2))
    raise ConvergenceError(
        f"coordinate descent did not converge within {max_sweeps} sweeps",
        kkt_residual=kkt_residual(X, y, beta, lam, alpha),
    )


def kkt_residual(X, y, coefficients, lam: float, alpha: float = 1.0) -> float:
    """Max subgradient-optimality violation of the elastic-net objective.

    Measured on the data exactly as given (no centering); ``alpha=1``
    corresponds to the lasso objective.
    """
    X = as_matrix(X)
    y = as_vector(y)
    b = as_vector(coefficients, name="coefficients")
    g = -2.0 * (X.T @ (y - X @ b)) + lam * (1.0 - alpha) * b
    t = lam * alpha
    active = b != 0.0
    viol_active = np.abs(g[active] + t * np.sign(b[active]))
    viol_zero = np.maximum(np.abs(g[~active]) - t, 0.0)
    candidates = np.concatenate([viol_active, viol_zero])
    return float(candidates.max()) if candidates.size else 0.0


def lasso_fit(
    X,
    y,
    lam: float,
    fit_intercept: bool = True,
    tol: float = CD_TOL,
    max_sweeps: int = CD_MAX_SWEEPS,
) -> LinearModel:
    """L1-penalized least squares by cyclic coordinate descent.

    Zero coefficients are exact zeros, not small floats. ``lam == 0`` falls
    back to :func:`ols_fit`.
    """
    X = as_matrix(X)
    y = as_vector(y)
    check_paired(X, y)
    if not (lam >= 0):
        raise ContractError(f"lambda must be nonnegative, got {lam}")
    if lam == 0:
        return ols_fit(X, y, fit_intercept=fit_intercept)
    if fit_intercept:
        Xc, yc, x_means, y_mean = _center(X, y)
    else:
        Xc, yc = X, y
    beta = _coordinate_descent(Xc, yc, l1=lam, l2=0.0, tol=tol, max_sweeps=max_sweeps)
    intercept = (y_mean - float(x_means @ beta)) if fit_intercept else 0.0
    return LinearModel(beta, intercept, "lasso", {"lambda": float(lam)})


def elastic_net_fit(
    X,
    y,
    lam: float,
    alpha: float,
    fit_intercept: bool = True,
    tol: float = CD_TOL,
    max_sweeps: int = CD_MAX_SWEEPS,
) -> LinearModel:
    """Mixed L1/L2 penalty: lam * ((1-alpha)/2 ||b||^2 + alpha ||b||_1).

    ``alpha=1`` reproduces the lasso; ``alpha=0`` reproduces ridge with an
    effective penalty of lam/2 (the (1-alpha)/2 factor in the penalty).
    """
    X = as_matrix(X)
    y = as_vector(y)
    check_paired(X, y)
    if not (lam >= 0):
        raise ContractError(f"lambda must be nonnegative, got {lam}")
    if not (0.0 <= alpha <= 1.0):
        raise ContractError(f"alpha must lie in [0, 1], got {alpha}")
    if lam == 0:
        return ols_fit(X, y, fit_intercept=fit_intercept)
    if fit_intercept:
        Xc, yc, x_means, y_mean = _center(X, y)
    else:
        Xc, yc = X, y
    beta = _coordinate_descent(
        Xc, yc, l1=lam * alpha, l2=lam * (1.0 - alpha), tol=tol, max_sweeps=max_sweeps
    )
    intercept = (y_mean - float(x_means @ beta)) if fit_intercept else 0.0
    return LinearModel(
        beta, intercept, "elastic_net", {"lambda": float(lam), "alpha": float(alpha)}
    )


def _fix_signs(W: np.ndarray, *followers: np.ndarray) -> None:
    """Flip each column of W so its largest-magnitude entry is positive.

    ``followers`` are flipped along with W so products like scores @ loadings
    stay unchanged. In-place; applied where the decomposition (SVD) leaves the
    sign ambiguous.
    """
    for k in range(W.shape[1]):
        idx = int(np.argmax(np.abs(W[:, k])))
        if W[idx, k] < 0:
            W[:, k] *= -1.0
            for F in followers:
                F[:, k] *= -1.0


def pca_decompose(X, n_components: int) -> LatentModel:
    """Principal components of the centered matrix via SVD.

    Weight columns are unit-norm, mutually orthogonal right singular vectors
    in descending singular-value order; explained-variance fractions are the
    covariance eigenvalues normalized by their total.
    """
    X = as_matrix(X)
    m, n = X.shape
    if m < 2:
        raise ContractError("PCA needs at least 2 observations for centering")
    k = int(n_components)
    if not (1 <= k <= min(m - 1, n)):
        raise ContractError(
            f"n_components must lie in [1, {min(m - 1, n)}] for shape {X.shape}, got {k}"
        )
    Xc, _, x_means, _ = _center(X, None)
    U, s, Vt = np.linalg.svd(Xc, full_matrices=False)
    rank = _rank_from_singular_values(s, m, n)
    if k > rank:
        raise RankError(f"requested {k} components but centered X has rank {rank}", attainable=rank)
    W = Vt[:k].T.copy()
    _fix_signs(W)
    T = Xc @ W
    total = float((s**2).sum())
    evr = (s[:k] ** 2) / total
    return LatentModel(
        weights=W,
        loadings=W,
        scores=T,
        explained_variance=evr,
        x_means=x_means,
    )


def pcr_fit(X, y, n_components: int) -> LatentModel:
    """Principal component regression: OLS of y on the first k PCA scores.

    The embedded linear model carries coefficients W_k @ beta_low and an
    intercept reconstructed from the column means, so predictions are made in
    original coordinates.
    """
    X = as_matrix(X)
    y = as_vector(y)
    check_paired(X, y)
    latent = pca_decompose(X, n_components)
    T = latent.scores
    yc = y - float(y.mean())
    beta_low, *_ = np.linalg.lstsq(T, yc, rcond=None)
    beta = latent.weights @ beta_low
    y_mean = float(y.mean())
    intercept = y_mean - float(latent.x_means @ beta)
    linear = LinearModel(beta, intercept, "pcr", {"n_components": int(n_components)})
    return LatentModel(
        weights=latent.weights,
        loadings=latent.loadings,
        scores=T,
        explained_variance=latent.explained_variance,
        x_means=latent.x_means,
        beta_low=beta_low,
        y_mean=y_mean,
        linear=linear,
    )


def pls1_fit(X, y, n_components: int) -> LatentModel:
    """PLS1 by NIPALS with rank-one X-deflation (y is not deflated).

    The first weight vector is X^T y / ||X^T y|| on centered data, the
    closed-form maximizer of squared covariance with the target. ``weights``
    holds the transform R with scores = X_centered @ R, whose first column is
    exactly that vector; ``loadings`` holds the deflation directions P.
    """
    X = as_matrix(X)
    y = as_vector(y)
    check_paired(X, y)
    m, n = X.shape
    if m < 2:
        raise ContractError("PLS needs at least 2 observations for centering")
    k = int(n_components)
    if k < 1:
        raise ContractError(f"n_components must be >= 1, got {k}")
    Xc, yc, x_means, y_mean = _center(X, y)
    s = np.linalg.svd(Xc, compute_uv=False)
    attainable = min(m - 1, _rank_from_singular_values(s, m, n))
    if k > attainable:
        raise RankError(f"requested {k} components", attainable=attainable)

    W = np.empty((n, k))
    P = np.empty((n, k))
    T = np.empty((m, k))
    Xk = Xc.copy()
    first_norm = None
    for j in range(k):
        wv = Xk.T @ yc
        w_norm = float(np.linalg.norm(wv))
        if first_norm is None:
            first_norm = w_norm
        if w_norm == 0.0 or w_norm < 1e-14 * max(1.0, first_norm):
            raise DegenerateTargetError(
                f"target carries no correlation with the deflated inputs at component {j + 1}"
                + ("" if j == 0 else f"; at most {j} components are informative")
            )
        w = wv / w_norm
        t = Xk @ w
        tt = float(t @ t)
        if tt == 0.0:
            raise DegenerateTargetError(
                f"deflated inputs vanished at component {j + 1}"
            )
        p = (Xk.T @ t) / tt
        Xk -= np.outer(t, p)
        W[:, j], P[:, j], T[:, j] = w, p, t

    total = float((Xc**2).sum())
    comp_var = np.array([float(T[:, j] @ T[:, j]) * float(P[:, j] @ P[:, j]) for j in range(k)])
    evr = comp_var / total
    # R maps centered X to scores: T = Xc @ R with R = W (P^T W)^{-1}.
    R = np.linalg.solve((P.T @ W).T, W.T).T
    beta_low, *_ = np.linalg.lstsq(T, yc, rcond=None)
    beta = R @ beta_low
    intercept = y_mean - float(x_means @ beta)
    linear = LinearModel(beta, intercept, "pls", {"n_components": k})
    return LatentModel(
        weights=R,
        loadings=P,
        scores=T,
        explained_variance=evr,
        x_means=x_means,
        beta_low=beta_low,
        y_mean=y_mean,
        linear=linear,
    )


def predict(model: LinearModel | LatentModel, X_new) -> np.ndarray:
    """Apply a fitted model to new data, replaying its stored preprocessing.

    Replay uses the training-time means/stds only; test statistics are never
    computed here.
    """
    if isinstance(model, LatentModel):
        if model.linear is None:
            raise ContractError("this latent model has no regression part to predict with")
        model = model.linear
    if not isinstance(model, LinearModel):
        raise ContractError(f"cannot predict with object of type {type(model).__name__}")
    X_new = as_matrix(X_new, name="X_new")
    if X_new.shape[1] != model.n_features:
        raise ContractError(
            f"X_new has {X_new.shape[1]} columns but the model expects {model.n_features}"
        )
    Z = standardize(X_new, model.stats) if model.stats is not None else X_new
    return Z @ model.coefficients + model.intercept
