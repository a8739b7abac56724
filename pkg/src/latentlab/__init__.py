"""latentlab: a latent-variable regression laboratory.

Fit, compare, and visualize OLS, lasso, ridge, elastic net, PCR, and PLS1 on
synthetic and loaded datasets, with group-aware train/test splitting, an HTTP
JSON service, and a CLI that renders plot-ready output.
"""

__version__ = "0.1.0"

from .datagen import ExampleConfig, default_config, generate_example
from .datasets import (
    Dataset,
    SplitResult,
    SplitSpec,
    builtin_by_name,
    builtin_standins,
    load_csv,
    perturb_dataset,
    save_dataset,
    split,
)
from .errors import (
    ContractError,
    ConvergenceError,
    CsvFormatError,
    DegenerateSignalError,
    DegenerateTargetError,
    FitError,
    LeakageError,
    RankError,
    SingularityError,
)
from .evaluation import (
    FitReport,
    StabilityReport,
    coefficient_stability,
    r_squared,
    rmse,
    run_experiment,
)
from .preprocessing import (
    ColumnStats,
    NoiseSpec,
    add_noise,
    compute_stats,
    destandardize,
    moving_median_outlier_filter,
    restrict_feature_range,
    snr_from_db,
    standardize,
)
from .regression import (
    Hyperparameters,
    LatentModel,
    LinearModel,
    elastic_net_fit,
    kkt_residual,
    lasso_fit,
    min_norm_fit,
    ols_fit,
    pca_decompose,
    pcr_fit,
    pls1_fit,
    predict,
    ridge_fit,
)

__all__ = [name for name in dir() if not name.startswith("_")]
