import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from latentlab import (
    Dataset,
    Hyperparameters,
    SplitSpec,
    builtin_by_name,
    default_config,
    generate_example,
    run_experiment,
)


def example_dataset(seed: int = 0) -> Dataset:
    cfg = default_config()
    if seed != cfg.seed:
        from dataclasses import replace

        cfg = replace(cfg, seed=seed)
    X, y = generate_example(cfg)
    return Dataset(
        X=X,
        y=y,
        groups=tuple(f"r{i + 1:04d}" for i in range(X.shape[0])),
        feature_axis=np.arange(1, X.shape[1] + 1, dtype=float),
        axis_unit="index",
        name="example",
    )


@pytest.fixture(scope="session")
def noise_free_example() -> Dataset:
    """The default example dataset: sigma zero at start/end, no added noise."""
    return example_dataset(seed=0)


@pytest.fixture(scope="session")
def ftir_like() -> Dataset:
    return builtin_by_name("ftir-like")


@pytest.fixture(scope="session")
def raman_like() -> Dataset:
    return builtin_by_name("raman-like")


@pytest.fixture(scope="session")
def lfp_like() -> Dataset:
    return builtin_by_name("lfp-like")


@pytest.fixture(scope="session")
def lasso_flagship_report(noise_free_example):
    """The lasso fit at lambda=0.015 on the default example (slowest solve; fit once)."""
    return run_experiment(
        noise_free_example,
        SplitSpec(mode="random", train_fraction=0.7, seed=0),
        "lasso",
        Hyperparameters(lam=0.015),
    )
