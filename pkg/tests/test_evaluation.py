import numpy as np
import pytest

from latentlab import (
    ContractError,
    Dataset,
    Hyperparameters,
    LeakageError,
    SplitSpec,
    coefficient_stability,
    r_squared,
    rmse,
    run_experiment,
)
from latentlab.datasets import partitions, split
from latentlab.evaluation import (
    report_to_json,
    stability_to_csv,
    stability_to_json,
)
from latentlab.preprocessing import compute_stats
from latentlab.regression import predict


class TestMetrics:
    def test_rmse_zero_for_identical(self):
        assert rmse([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_rmse_hand_value(self):
        assert rmse([0.0, 0.0], [3.0, 4.0]) == pytest.approx(np.sqrt(12.5))

    def test_rmse_homogeneous(self):
        rng = np.random.default_rng(0)
        a, b = rng.normal(size=50), rng.normal(size=50)
        assert rmse(3.0 * a, 3.0 * b) == pytest.approx(3.0 * rmse(a, b))

    def test_rmse_length_mismatch(self):
        with pytest.raises(ContractError):
            rmse([1.0], [1.0, 2.0])

    def test_r2_perfect(self):
        assert r_squared([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 1.0

    def test_r2_mean_prediction_is_zero(self):
        y = np.array([1.0, 2.0, 3.0])
        assert r_squared(y, np.full(3, 2.0)) == 0.0

    def test_r2_hand_value(self):
        assert r_squared([1.0, 2.0, 3.0], [1.0, 2.0, 4.0]) == pytest.approx(0.5)

    def test_r2_zero_variance_rejected(self):
        with pytest.raises(ContractError):
            r_squared([2.0, 2.0], [1.0, 2.0])


class TestRunExperiment:
    def test_noise_free_pls_two_components(self, noise_free_example):
        report = run_experiment(
            noise_free_example, SplitSpec(seed=0), "pls", Hyperparameters(n_components=2)
        )
        assert report.rmse_train < 1e-8
        assert report.rmse_test < 1e-8

    def test_lasso_flagship_accuracy_and_sparsity(self, lasso_flagship_report):
        report = lasso_flagship_report
        assert abs(report.rmse_test - 0.011) <= 0.02
        assert (report.coefficients == 0.0).mean() >= 0.8

    def test_extrapolation_much_worse_than_training(self, ftir_like):
        report = run_experiment(
            ftir_like,
            SplitSpec(mode="grouped_extrapolation", seed=0),
            "pls",
            Hyperparameters(n_components=7),
        )
        assert report.rmse_test / report.rmse_train >= 5.0

    def test_leak_guard_trips_on_test_statistics(self, ftir_like):
        spec = SplitSpec(mode="grouped_random", seed=4)
        res = split(ftir_like, spec)
        _, _, X_te, _ = partitions(ftir_like, res)
        test_stats = compute_stats(X_te)
        with pytest.raises(LeakageError):
            run_experiment(
                ftir_like, spec, "pls", Hyperparameters(n_components=3),
                standardize_inputs=True, stats_override=test_stats,
            )

    def test_leak_guard_accepts_true_training_statistics(self, ftir_like):
        spec = SplitSpec(mode="grouped_random", seed=4)
        res = split(ftir_like, spec)
        X_tr, _, _, _ = partitions(ftir_like, res)
        report = run_experiment(
            ftir_like, spec, "pls", Hyperparameters(n_components=3),
            standardize_inputs=True, stats_override=compute_stats(X_tr),
        )
        assert report.standardized

    def test_leak_guard_requires_standardization(self, ftir_like):
        with pytest.raises(LeakageError):
            run_experiment(
                ftir_like, SplitSpec(seed=0), "ols",
                stats_override=compute_stats(ftir_like.X),
            )

    def test_report_deterministic_and_byte_identical(self, noise_free_example):
        spec = SplitSpec(mode="random", seed=9)
        params = Hyperparameters(n_components=2)
        a = run_experiment(noise_free_example, spec, "pcr", params)
        b = run_experiment(noise_free_example, spec, "pcr", params)
        assert report_to_json(a) == report_to_json(b)

    def test_training_loss_monotone_under_regularization(self):
        rng = np.random.default_rng(10)
        X = rng.normal(size=(40, 6))
        y = X @ rng.normal(size=6) + 0.3 * rng.normal(size=40)
        ds = Dataset(X=X, y=y, groups=tuple(f"r{i}" for i in range(40)),
                     feature_axis=np.arange(1.0, 7.0), name="tall")
        spec = SplitSpec(seed=0)
        ols_report = run_experiment(ds, spec, "ols")
        for lam in (0.1, 1.0, 10.0, 100.0):
            ridge_report = run_experiment(ds, spec, "ridge", Hyperparameters(lam=lam))
            assert ols_report.rmse_train <= ridge_report.rmse_train + 1e-12

    def test_back_transformed_coefficients_match_score_path(self, ftir_like):
        from latentlab.regression import pls1_fit

        spec = SplitSpec(mode="grouped_random", seed=2)
        res = split(ftir_like, spec)
        X_tr, y_tr, X_te, _ = partitions(ftir_like, res)
        latent = pls1_fit(X_tr, y_tr, 4)
        flat = predict(latent, X_te)
        scores = (X_te - latent.x_means) @ latent.weights
        via_scores = scores @ latent.beta_low + latent.y_mean
        np.testing.assert_allclose(flat, via_scores, atol=1e-10)

    def test_original_coordinate_coefficients_reproduce_predictions(self, ftir_like):
        report = run_experiment(
            ftir_like, SplitSpec(mode="grouped_random", seed=5), "ridge",
            Hyperparameters(lam=0.1), standardize_inputs=True,
        )
        idx = report.split_result.test_indices
        manual = ftir_like.X[idx] @ report.coefficients + report.intercept
        np.testing.assert_allclose(manual, report.predictions_test, atol=1e-8)

    def test_unknown_method(self, noise_free_example):
        with pytest.raises(ContractError):
            run_experiment(noise_free_example, SplitSpec(seed=0), "magic")

    def test_missing_hyperparameter(self, noise_free_example):
        with pytest.raises(ContractError):
            run_experiment(noise_free_example, SplitSpec(seed=0), "ridge")


class TestStability:
    def test_ten_repeats_shapes(self, lfp_like):
        report = coefficient_stability(
            lfp_like, SplitSpec(mode="grouped_random", seed=0), "pls",
            Hyperparameters(n_components=4), repeats=10,
        )
        assert report.samples.shape == (10, lfp_like.n)
        assert report.spread.shape == (lfp_like.n,)
        assert report.repeats == 10

    def test_deterministic_split_gives_zero_spread(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(20, 3))
        y = X @ np.array([1.0, 2.0, 3.0])
        groups = ("a",) * 10 + ("b",) * 10
        ds = Dataset(X=X, y=y, groups=groups, feature_axis=np.arange(1.0, 4.0), name="two-groups")
        spec = SplitSpec(mode="forced_test_groups", forced_groups=("b",), seed=0)
        report = coefficient_stability(ds, spec, "ols", repeats=5)
        np.testing.assert_allclose(report.spread, 0.0, atol=1e-12)

    def test_noise_free_example_prediction_spread_negligible(self, noise_free_example):
        report = coefficient_stability(
            noise_free_example, SplitSpec(mode="random", seed=0), "pls",
            Hyperparameters(n_components=2), repeats=10,
        )
        probe = noise_free_example.X[:25]
        preds = np.stack([probe @ s for s in report.samples])
        # Coefficients may wander inside the nullspace, but predictions agree.
        assert preds.std(axis=0).max() < 1e-6

    def test_csv_byte_identical(self, lfp_like):
        kwargs = dict(
            spec_template=SplitSpec(mode="grouped_random", seed=3),
            method="pls", params=Hyperparameters(n_components=4), repeats=4,
        )
        a = coefficient_stability(lfp_like, **kwargs)
        b = coefficient_stability(lfp_like, **kwargs)
        assert stability_to_csv(a) == stability_to_csv(b)
        assert stability_to_json(a) == stability_to_json(b)
        assert stability_to_csv(a, "wide") == stability_to_csv(b, "wide")

    def test_csv_layouts(self, noise_free_example):
        report = coefficient_stability(
            noise_free_example, SplitSpec(seed=0), "ridge", Hyperparameters(lam=1.0), repeats=3
        )
        long = stability_to_csv(report, "long").splitlines()
        assert long[0] == "repeat,seed,feature_index,axis_value,coefficient"
        assert len(long) == 1 + 3 * noise_free_example.n
        wide = stability_to_csv(report, "wide").splitlines()
        assert len(wide) == 1 + 3
        with pytest.raises(ContractError):
            stability_to_csv(report, "sideways")

    def test_repeats_lower_bound(self, noise_free_example):
        with pytest.raises(ContractError):
            coefficient_stability(noise_free_example, SplitSpec(seed=0), "ols", repeats=1)
