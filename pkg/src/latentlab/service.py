"""Stateless HTTP JSON API exposing datasets, generation, splitting, and fits.

All computation is pure; the only shared state is the dataset registry
(builtins plus session uploads/generations), which is guarded by a lock and
expires idle session entries. Identical requests, seeds included, produce
byte-identical response bodies. Every payload carries ``api_version: "1"``.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass

import numpy as np
from fastapi import FastAPI, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import __version__
from .datagen import ExampleConfig, generate_example
from .datasets import Dataset, SplitSpec, builtin_standins, load_csv_text, perturb_dataset
from .errors import ContractError, FitError
from .evaluation import report_to_dict, run_experiment
from .preprocessing import NoiseSpec
from .regression import Hyperparameters

API_VERSION = "1"
PREVIEW_MAX_POINTS = 2000


@dataclass
class Settings:
    host: str = "127.0.0.1"
    port: int = 8000
    upload_limit_bytes: int = 5_000_000
    handle_ttl_seconds: float = 3600.0
    cors_origins: tuple[str, ...] = ("*",)


@dataclass
class _Entry:
    dataset: Dataset
    expires_at: float


class DatasetRegistry:
    """Builtins plus session-scoped uploads/generations with idle expiry."""

    def __init__(self, ttl_seconds: float, clock=time.monotonic):
        self._ttl = ttl_seconds
        self._clock = clock
        self._lock = threading.Lock()
        self._session: dict[str, _Entry] = {}
        self._builtins = {ds.name: ds for ds in builtin_standins()}

    def _prune(self) -> None:
        now = self._clock()
        expired = [h for h, e in self._session.items() if e.expires_at <= now]
        for h in expired:
            del self._session[h]

    def put(self, handle: str, ds: Dataset) -> str:
        with self._lock:
            self._prune()
            self._session[handle] = _Entry(ds, self._clock() + self._ttl)
        return handle

    def get(self, name_or_handle: str) -> Dataset:
        if name_or_handle in self._builtins:
            return self._builtins[name_or_handle]
        with self._lock:
            self._prune()
            entry = self._session.get(name_or_handle)
            if entry is None:
                raise ContractError(f"unknown dataset or expired handle {name_or_handle!r}")
            entry.expires_at = self._clock() + self._ttl
            return entry.dataset

    def descriptors(self) -> list[dict]:
        with self._lock:
            self._prune()
            session = {h: e.dataset for h, e in self._session.items()}
        out = [_descriptor(ds, kind="builtin") for ds in self._builtins.values()]
        out.append(_generator_descriptor())
        out.extend(_descriptor(ds, kind="upload", handle=h) for h, ds in sorted(session.items()))
        return out


def _descriptor(ds: Dataset, kind: str, handle: str | None = None) -> dict:
    return {
        "name": handle or ds.name,
        "kind": kind,
        "m": ds.m,
        "n": ds.n,
        "n_groups": len(ds.group_labels),
        "axis_unit": ds.axis_unit,
    }


def _generator_descriptor() -> dict:
    cfg = ExampleConfig()
    return {
        "name": "example",
        "kind": "generator",
        "m": cfg.n_experiments,
        "n": cfg.n_points,
        "n_groups": cfg.n_experiments,
        "axis_unit": "index",
    }


def maxmin_downsample(axis: np.ndarray, values: np.ndarray, max_points: int = PREVIEW_MAX_POINTS):
    """Decimate a curve by per-bin min/max so the preview keeps its envelope."""
    n = axis.shape[0]
    if n <= max_points:
        return axis, values
    n_bins = max_points // 2
    edges = np.linspace(0, n, n_bins + 1).astype(int)
    idx: list[int] = []
    for b in range(n_bins):
        lo, hi = edges[b], edges[b + 1]
        if hi <= lo:
            continue
        seg = values[lo:hi]
        i_min, i_max = int(np.argmin(seg)) + lo, int(np.argmax(seg)) + lo
        idx.extend(sorted({i_min, i_max}))
    picked = np.array(sorted(set(idx)), dtype=int)
    return axis[picked], values[picked]


# ---------------------------------------------------------------------------
# Request schemas
# ---------------------------------------------------------------------------

class NoiseModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    snr: float = Field(gt=0)
    seed: int = 0
    targets: list[str] = ["X", "y"]

    def to_spec(self) -> NoiseSpec:
        return NoiseSpec(snr=self.snr, seed=self.seed, targets=tuple(self.targets))


class ExampleConfigModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    mu_start: float = 2.0
    mu_left: float = -1.0
    mu_right: float = -4.0
    mu_end: float = -5.0
    sigma_start: float = Field(default=0.0, ge=0)
    sigma_left: float = Field(default=2.0, ge=0)
    sigma_right: float = Field(default=2.0, ge=0)
    sigma_end: float = Field(default=0.0, ge=0)
    n_experiments: int = Field(default=100, ge=1)
    n_points: int = Field(default=30, ge=2)
    relevant_start_index: int = Field(default=21, ge=1)
    relevant_end_index: int = 30
    seed: int = 0
    noise: NoiseModel | None = None

    @model_validator(mode="after")
    def _indices_ordered(self):
        if not (self.relevant_start_index < self.relevant_end_index <= self.n_points):
            raise ValueError(
                "relevant_start_index and relevant_end_index must satisfy "
                "relevant_start_index < relevant_end_index <= n_points"
            )
        return self

    def to_config(self) -> ExampleConfig:
        return ExampleConfig(
            mu_start=self.mu_start,
            mu_left=self.mu_left,
            mu_right=self.mu_right,
            mu_end=self.mu_end,
            sigma_start=self.sigma_start,
            sigma_left=self.sigma_left,
            sigma_right=self.sigma_right,
            sigma_end=self.sigma_end,
            n_experiments=self.n_experiments,
            n_points=self.n_points,
            relevant_start_index=self.relevant_start_index,
            relevant_end_index=self.relevant_end_index,
            seed=self.seed,
            noise=self.noise.to_spec() if self.noise else None,
        )


class SplitModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    mode: str = "random"
    train_fraction: float = Field(default=0.7, gt=0, lt=1)
    forced_groups: list[str] | None = None
    seed: int = 0

    def to_spec(self) -> SplitSpec:
        return SplitSpec(
            mode=self.mode,
            train_fraction=self.train_fraction,
            forced_groups=tuple(self.forced_groups) if self.forced_groups is not None else None,
            seed=self.seed,
        )


class HyperparametersModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)
    lam: float | None = Field(default=None, alias="lambda", ge=0)
    alpha: float | None = Field(default=None, ge=0, le=1)
    n_components: int | None = Field(default=None, ge=1)

    def to_params(self) -> Hyperparameters:
        return Hyperparameters(lam=self.lam, alpha=self.alpha, n_components=self.n_components)


class FitRequestModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    dataset: str | None = None
    example: ExampleConfigModel | None = None
    split: SplitModel = SplitModel()
    method: str
    hyperparameters: HyperparametersModel = HyperparametersModel()
    standardize: bool = False
    noise: NoiseModel | None = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.dataset is None) == (self.example is None):
            raise ValueError("exactly one dataset source is required: 'dataset' or 'example'")
        return self


class UploadModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    csv: str
    metadata: dict = {}


# ---------------------------------------------------------------------------
# Application factory
# ---------------------------------------------------------------------------

def _example_dataset(cfg: ExampleConfig) -> Dataset:
    X, y = generate_example(cfg)
    return Dataset(
        X=X,
        y=y,
        groups=tuple(f"r{i + 1:04d}" for i in range(X.shape[0])),
        feature_axis=np.arange(1, X.shape[1] + 1, dtype=float),
        axis_unit="index",
        name="example",
        provenance="generated",
    )


def _config_handle(cfg_model: ExampleConfigModel) -> str:
    canonical = json.dumps(cfg_model.model_dump(), sort_keys=True)
    return "example-" + hashlib.sha1(canonical.encode()).hexdigest()[:12]


def _curves_payload(ds: Dataset, train_set: set[int] | None) -> dict:
    # Each curve keeps its own (possibly decimated) axis: max-min binning
    # picks different sample positions per curve.
    curves = []
    for i in range(ds.m):
        ax, vals = maxmin_downsample(ds.feature_axis, ds.X[i])
        entry = {"axis": ax.tolist(), "values": vals.tolist()}
        if train_set is not None:
            entry["partition"] = "train" if i in train_set else "test"
        curves.append(entry)
    return {"axis_unit": ds.axis_unit, "curves": curves}


def create_app(settings: Settings | None = None, clock=time.monotonic) -> FastAPI:
    settings = settings or Settings()
    registry = DatasetRegistry(settings.handle_ttl_seconds, clock=clock)
    app = FastAPI(title="latentlab", version=__version__)
    app.state.registry = registry
    app.state.settings = settings
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(settings.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ContractError)
    async def _contract_error(_req: Request, exc: ContractError):
        return JSONResponse(status_code=422, content={"api_version": API_VERSION, "detail": str(exc)})

    @app.exception_handler(FitError)
    async def _fit_error(_req: Request, exc: FitError):
        return JSONResponse(status_code=409, content={"api_version": API_VERSION, "detail": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_req: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"api_version": API_VERSION, "detail": jsonable_encoder(exc.errors(), exclude={"input", "ctx"})},
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__, "api_version": API_VERSION}

    @app.get("/datasets")
    def datasets():
        return {"api_version": API_VERSION, "datasets": registry.descriptors()}

    @app.post("/example/generate")
    def example_generate(cfg_model: ExampleConfigModel):
        cfg = cfg_model.to_config()
        ds = _example_dataset(cfg)
        handle = registry.put(_config_handle(cfg_model), ds)
        return {
            "api_version": API_VERSION,
            "handle": handle,
            "m": ds.m,
            "n": ds.n,
            "preview": _curves_payload(ds, train_set=None),
            "targets": ds.y.tolist(),
        }

    @app.post("/fit")
    def fit(req: FitRequestModel):
        if req.example is not None:
            ds = _example_dataset(req.example.to_config())
        else:
            ds = registry.get(req.dataset)
        if req.noise is not None:
            ds = perturb_dataset(ds, req.noise.to_spec())
        report = run_experiment(
            ds,
            req.split.to_spec(),
            req.method,
            req.hyperparameters.to_params(),
            standardize_inputs=req.standardize,
        )
        train_set = set(report.split_result.train_indices.tolist())
        ax, _ = maxmin_downsample(ds.feature_axis, ds.feature_axis)
        coef_axis, coef_vals = maxmin_downsample(ds.feature_axis, report.coefficients)
        payload = {
            "api_version": API_VERSION,
            "report": report_to_dict(report),
            "series": {
                "data": _curves_payload(ds, train_set),
                "coefficients": {"axis": coef_axis.tolist(), "values": coef_vals.tolist()},
                "parity": {
                    "train": {
                        "true": ds.y[report.split_result.train_indices].tolist(),
                        "predicted": report.predictions_train.tolist(),
                        "rmse": report.rmse_train,
                    },
                    "test": {
                        "true": ds.y[report.split_result.test_indices].tolist(),
                        "predicted": report.predictions_test.tolist(),
                        "rmse": report.rmse_test,
                    },
                },
            },
        }
        return payload

    @app.post("/datasets/upload", status_code=201)
    def upload(body: UploadModel):
        if len(body.csv.encode("utf-8")) > settings.upload_limit_bytes:
            return JSONResponse(
                status_code=413,
                content={
                    "api_version": API_VERSION,
                    "detail": f"upload exceeds the limit of {settings.upload_limit_bytes} bytes",
                },
            )
        handle = "upload-" + hashlib.sha1(body.csv.encode("utf-8")).hexdigest()[:12]
        ds = load_csv_text(body.csv, body.metadata, name=handle)
        registry.put(handle, ds)
        return {"api_version": API_VERSION, "handle": handle, "m": ds.m, "n": ds.n}

    _mount_frontend(app)
    return app


def _mount_frontend(app: FastAPI) -> None:
    """Serve the browser UI if its build output exists; optional by design."""
    from pathlib import Path

    dist = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if dist.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(dist), html=True), name="ui")
