"""Command-line front door: generate data, fit, stability studies, serve.

Exit codes: 0 success, 2 usage errors, 3 computation errors (rank,
convergence, degeneracy), 4 environment errors (port binding). Diagnostics go
to stderr as a single JSON line so scripts can parse them.
"""

from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .datagen import ExampleConfig
from .datasets import (
    Dataset,
    SplitSpec,
    builtin_by_name,
    builtin_standins,
    load_csv,
    perturb_dataset,
    save_dataset,
)
from .errors import ContractError, FitError
from .evaluation import (
    coefficient_stability,
    coefficients_to_csv,
    report_to_dict,
    run_experiment,
    stability_to_csv,
)
from .preprocessing import NoiseSpec, snr_from_db
from .regression import Hyperparameters

EXIT_USAGE = 2
EXIT_COMPUTE = 3
EXIT_ENVIRONMENT = 4


def _fail(code: int, message: str):
    click.echo(json.dumps({"error": message, "exit_code": code}), err=True)
    sys.exit(code)


def _guarded(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ContractError as exc:
        _fail(EXIT_USAGE, str(exc))
    except FitError as exc:
        _fail(EXIT_COMPUTE, str(exc))


@click.group()
@click.version_option(__version__)
def main():
    """Latent-variable regression laboratory."""


def _example_options(fn):
    opts = [
        click.option("--mu-start", type=float, default=2.0, show_default=True),
        click.option("--mu-left", type=float, default=-1.0, show_default=True),
        click.option("--mu-right", type=float, default=-4.0, show_default=True),
        click.option("--mu-end", type=float, default=-5.0, show_default=True),
        click.option("--sigma-start", type=float, default=0.0, show_default=True),
        click.option("--sigma-left", type=float, default=2.0, show_default=True),
        click.option("--sigma-right", type=float, default=2.0, show_default=True),
        click.option("--sigma-end", type=float, default=0.0, show_default=True),
        click.option("--n-experiments", type=int, default=100, show_default=True),
        click.option("--n-points", type=int, default=30, show_default=True),
        click.option("--relevant-start-index", type=int, default=21, show_default=True,
                     help="1-based first index of the relevant section."),
        click.option("--relevant-end-index", type=int, default=30, show_default=True,
                     help="1-based last index of the relevant section."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _noise_options(fn):
    opts = [
        click.option("--noise-snr", type=float, default=None,
                     help="Linear signal-to-noise power ratio."),
        click.option("--noise-snr-db", type=float, default=None,
                     help="SNR in decibels; converted to the linear ratio."),
        click.option("--noise-seed", type=int, default=0, show_default=True),
        click.option("--noise-targets", type=click.Choice(["X", "y", "Xy"]), default="Xy",
                     show_default=True, help="Which arrays receive noise."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _noise_spec(noise_snr, noise_snr_db, noise_seed, noise_targets) -> NoiseSpec | None:
    if noise_snr is not None and noise_snr_db is not None:
        raise click.UsageError("give either --noise-snr or --noise-snr-db, not both")
    snr = noise_snr if noise_snr is not None else (
        snr_from_db(noise_snr_db) if noise_snr_db is not None else None
    )
    if snr is None:
        return None
    targets = ("X", "y") if noise_targets == "Xy" else (noise_targets,)
    return _guarded(NoiseSpec, snr=snr, seed=noise_seed, targets=targets)


def _build_example_config(seed, noise, **kw) -> ExampleConfig:
    return _guarded(
        ExampleConfig,
        mu_start=kw["mu_start"], mu_left=kw["mu_left"],
        mu_right=kw["mu_right"], mu_end=kw["mu_end"],
        sigma_start=kw["sigma_start"], sigma_left=kw["sigma_left"],
        sigma_right=kw["sigma_right"], sigma_end=kw["sigma_end"],
        n_experiments=kw["n_experiments"], n_points=kw["n_points"],
        relevant_start_index=kw["relevant_start_index"],
        relevant_end_index=kw["relevant_end_index"],
        seed=seed, noise=noise,
    )


def _example_dataset(cfg: ExampleConfig) -> Dataset:
    from .datagen import generate_example

    X, y = generate_example(cfg)
    return Dataset(
        X=X,
        y=y,
        groups=tuple(f"r{i + 1:04d}" for i in range(X.shape[0])),
        feature_axis=np.arange(1, X.shape[1] + 1, dtype=float),
        axis_unit="index",
        name="example",
        provenance=f"generated with seed {cfg.seed}",
    )


@main.command()
@_example_options
@_noise_options
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True,
              help="Output CSV path (a .meta.json sidecar is written next to it).")
def generate(seed, out, noise_snr, noise_snr_db, noise_seed, noise_targets, **kw):
    """Generate the synthetic example dataset and write it as CSV."""
    noise = _noise_spec(noise_snr, noise_snr_db, noise_seed, noise_targets)
    cfg = _build_example_config(seed, noise, **kw)
    ds = _example_dataset(cfg)
    _guarded(save_dataset, ds, out)
    click.echo(json.dumps({"written": str(out), "m": ds.m, "n": ds.n}))


def _dataset_options(fn):
    opts = [
        click.option("--dataset", "dataset_name", type=str, default=None,
                     help="Built-in dataset name (see `standins`)."),
        click.option("--input", "input_path", type=click.Path(exists=False, dir_okay=False, path_type=Path),
                     default=None, help="CSV file in the documented schema."),
        click.option("--example", "use_example", is_flag=True, default=False,
                     help="Use the synthetic example generator."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _split_options(fn):
    opts = [
        click.option("--split-mode", type=click.Choice([
            "random", "grouped_random", "grouped_interpolation",
            "grouped_extrapolation", "forced_test_groups"]), default="random", show_default=True),
        click.option("--train-fraction", type=float, default=0.7, show_default=True),
        click.option("--forced-test-groups", type=str, default=None,
                     help="Comma-separated group labels forced into test."),
        click.option("--split-seed", type=int, default=0, show_default=True),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _method_options(fn):
    opts = [
        click.option("--method", type=click.Choice(["ols", "ridge", "lasso", "elastic_net", "pcr", "pls"]),
                     required=True),
        click.option("--lambda", "lam", type=float, default=None,
                     help="Regularization strength (ridge, lasso, elastic_net)."),
        click.option("--alpha", type=float, default=None, help="Elastic-net mixing weight in [0, 1]."),
        click.option("--n-components", "n_components", type=int, default=None,
                     help="Latent dimensionality (pcr, pls)."),
        click.option("--standardize/--no-standardize", default=False, show_default=True),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _resolve_dataset(dataset_name, input_path, use_example, example_kw, seed, noise) -> Dataset:
    sources = [dataset_name is not None, input_path is not None, use_example]
    if sum(sources) != 1:
        raise click.UsageError(
            "exactly one dataset source is required: --dataset, --input, or --example"
        )
    if use_example:
        cfg = _build_example_config(seed, noise, **example_kw)
        return _example_dataset(cfg)
    if dataset_name is not None:
        ds = _guarded(builtin_by_name, dataset_name)
    else:
        if not input_path.exists():
            _fail(EXIT_USAGE, f"input file not found: {input_path}")
        ds = _guarded(load_csv, input_path)
    if noise is not None:
        ds = _guarded(perturb_dataset, ds, noise)
    return ds


def _split_spec(split_mode, train_fraction, forced_test_groups, split_seed) -> SplitSpec:
    forced = tuple(g.strip() for g in forced_test_groups.split(",")) if forced_test_groups else None
    return _guarded(
        SplitSpec, mode=split_mode, train_fraction=train_fraction,
        forced_groups=forced, seed=split_seed,
    )


@main.command()
@_dataset_options
@_example_options
@_noise_options
@_split_options
@_method_options
@click.option("--seed", type=int, default=0, show_default=True, help="Example generator seed.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write the report JSON here instead of stdout.")
@click.option("--coefficients-csv", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Also write a plot-ready coefficients CSV.")
@click.option("--figures", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Render data/coefficient/parity figures into this directory.")
def fit(dataset_name, input_path, use_example, seed, out, coefficients_csv, figures,
        split_mode, train_fraction, forced_test_groups, split_seed,
        method, lam, alpha, n_components, standardize,
        noise_snr, noise_snr_db, noise_seed, noise_targets, **example_kw):
    """Fit one model on one split and report train/test errors."""
    noise = _noise_spec(noise_snr, noise_snr_db, noise_seed, noise_targets)
    ds = _resolve_dataset(dataset_name, input_path, use_example, example_kw, seed, noise)
    spec = _split_spec(split_mode, train_fraction, forced_test_groups, split_seed)
    params = _guarded(Hyperparameters, lam=lam, alpha=alpha, n_components=n_components)
    report = _guarded(run_experiment, ds, spec, method, params, standardize)
    payload = json.dumps(report_to_dict(report), sort_keys=True, indent=2)
    if out is not None:
        out.write_text(payload + "\n", encoding="utf-8")
        click.echo(json.dumps({"written": str(out)}))
    else:
        click.echo(payload)
    if coefficients_csv is not None:
        coefficients_csv.write_text(coefficients_to_csv(report), encoding="utf-8")
    if figures is not None:
        from .plots import render_fit_figures

        paths = render_fit_figures(report, ds, figures)
        click.echo(json.dumps({"figures": [str(p) for p in paths]}))


@main.command()
@_dataset_options
@_example_options
@_noise_options
@_split_options
@_method_options
@click.option("--seed", type=int, default=0, show_default=True, help="Example generator seed.")
@click.option("--repeats", type=int, default=10, show_default=True)
@click.option("--layout", type=click.Choice(["long", "wide"]), default="long", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True,
              help="Output CSV of per-split coefficients.")
@click.option("--figures", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Render the coefficient-stability figure into this directory.")
def stability(dataset_name, input_path, use_example, seed, repeats, layout, out, figures,
              split_mode, train_fraction, forced_test_groups, split_seed,
              method, lam, alpha, n_components, standardize,
              noise_snr, noise_snr_db, noise_seed, noise_targets, **example_kw):
    """Refit across repeated splits and write the coefficient samples as CSV."""
    if repeats < 2:
        raise click.UsageError("--repeats must be at least 2")
    noise = _noise_spec(noise_snr, noise_snr_db, noise_seed, noise_targets)
    ds = _resolve_dataset(dataset_name, input_path, use_example, example_kw, seed, noise)
    spec = _split_spec(split_mode, train_fraction, forced_test_groups, split_seed)
    params = _guarded(Hyperparameters, lam=lam, alpha=alpha, n_components=n_components)
    report = _guarded(coefficient_stability, ds, spec, method, params, repeats, standardize)
    out.write_text(stability_to_csv(report, layout), encoding="utf-8")
    click.echo(json.dumps({
        "written": str(out),
        "repeats": report.repeats,
        "max_spread": float(report.spread.max()),
    }))
    if figures is not None:
        from .plots import render_stability_figure

        path = render_stability_figure(report, figures)
        click.echo(json.dumps({"figures": [str(path)]}))


@main.command()
@click.option("--out-dir", type=click.Path(file_okay=False, path_type=Path), required=True)
def standins(out_dir):
    """Export the built-in stand-in datasets as CSV files."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for ds in builtin_standins():
        path = out_dir / f"{ds.name}.csv"
        _guarded(save_dataset, ds, path)
        written.append(str(path))
    click.echo(json.dumps({"written": written}))


@main.command()
@click.option("--host", type=str, default="127.0.0.1", show_default=True,
              envvar="LATENTLAB_HOST", show_envvar=True)
@click.option("--port", type=int, default=8000, show_default=True,
              envvar="LATENTLAB_PORT", show_envvar=True,
              help="Port to bind; 0 lets the OS pick one (printed on startup).")
@click.option("--handle-ttl", type=float, default=3600.0, show_default=True,
              envvar="LATENTLAB_HANDLE_TTL", show_envvar=True,
              help="Idle seconds before session dataset handles expire.")
@click.option("--upload-limit", type=int, default=5_000_000, show_default=True,
              envvar="LATENTLAB_UPLOAD_LIMIT", show_envvar=True,
              help="Maximum upload size in bytes.")
@click.option("--cors-origin", "cors_origins", type=str, multiple=True, default=("*",),
              show_default=True, envvar="LATENTLAB_CORS_ORIGINS", show_envvar=True,
              help="Allowed CORS origins (repeatable).")
def serve(host, port, handle_ttl, upload_limit, cors_origins):
    """Run the HTTP JSON service until interrupted."""
    import uvicorn

    from .service import Settings, create_app

    settings = Settings(
        host=host,
        port=port,
        upload_limit_bytes=upload_limit,
        handle_ttl_seconds=handle_ttl,
        cors_origins=tuple(cors_origins),
    )
    app = create_app(settings)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
    except OSError as exc:
        sock.close()
        _fail(EXIT_ENVIRONMENT, f"cannot bind {host}:{port}: {exc}")
    bound_port = sock.getsockname()[1]
    click.echo(json.dumps({"listening": f"http://{host}:{bound_port}"}))
    config = uvicorn.Config(app, log_level="warning")
    server = uvicorn.Server(config)
    server.run(sockets=[sock])


if __name__ == "__main__":
    main()
