"""Tests for whitening, SIR/DR initialisation, cross-validation and fit."""

import logging

import numpy as np
import pytest

from rsdr import estimator
from rsdr.dcov import Dataset, centered_distances, sample_dcov_sq
from rsdr.errors import FoldSizeError, ParameterError, SingularCovarianceError, SlicingError
from rsdr.estimator import (
    DEFAULT_ALPHA_GRID,
    InitSource,
    choose_initialization,
    cross_validate_alpha,
    default_slices,
    dr_directions,
    fit,
    sir_directions,
    whiten,
)
from rsdr.simulation import principal_angle
from rsdr.stiefel import OptimizerConfig, objective_f_eta


def single_index_data(seed, link, n=500, p=5, noise=0.01):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    beta = np.zeros(p)
    beta[0] = 1.0
    Y = link(X @ beta) + noise * rng.standard_normal(n)
    return Dataset(X, Y), beta.reshape(-1, 1)


class TestWhiten:
    """Tests for predictor whitening."""

    def test_identity_covariance_only_centers(self, rng):
        n, p = 50, 3
        X = rng.standard_normal((n, p))
        X = X - X.mean(axis=0)
        X = X @ np.linalg.inv(np.linalg.cholesky(np.cov(X, rowvar=False)).T) + 2.0
        w = whiten(Dataset(X, rng.standard_normal(n)), ridge=0.0)
        np.testing.assert_allclose(w.Z, X - X.mean(axis=0), atol=1e-8)

    def test_unit_variances(self, rng):
        X = 7.5 * rng.standard_normal((200, 4))
        w = whiten(Dataset(X, rng.standard_normal(200)), ridge=0.0)
        np.testing.assert_allclose(np.cov(w.Z, rowvar=False), np.eye(4), atol=1e-6)
        np.testing.assert_allclose(w.sigma_half @ w.sigma_neg_half, np.eye(4), atol=1e-8)

    def test_more_predictors_than_samples(self, rng):
        data = Dataset(rng.standard_normal((5, 8)), rng.standard_normal(5))
        with pytest.raises(SingularCovarianceError, match="ridge"):
            whiten(data, ridge=0.0)

    def test_ridge_makes_wide_data_whitenable(self, rng):
        data = Dataset(rng.standard_normal((5, 8)), rng.standard_normal(5))
        assert whiten(data, ridge=1.0).ridge == 1.0

    def test_negative_ridge(self, small_data):
        with pytest.raises(ParameterError):
            whiten(small_data, ridge=-1.0)


class TestSlicedInitializers:
    """Tests for SIR and DR directions."""

    def test_sir_recovers_linear_link(self):
        data, beta = single_index_data(1, lambda t: t)
        assert principal_angle(sir_directions(data, 1), beta) < 0.1

    def test_sir_on_noise_still_returns_direction(self, rng):
        data = Dataset(rng.standard_normal((100, 4)), rng.standard_normal(100))
        assert sir_directions(data, 1).shape == (4, 1)

    def test_dr_recovers_symmetric_link(self):
        data, beta = single_index_data(2, lambda t: t**2)
        dr_angle = principal_angle(dr_directions(data, 1), beta)
        sir_angle = principal_angle(sir_directions(data, 1), beta)
        assert dr_angle < 0.2
        assert dr_angle < sir_angle

    def test_dr_recovers_linear_link(self):
        data, beta = single_index_data(3, lambda t: t, noise=0.0)
        assert principal_angle(dr_directions(data, 1), beta) < 0.15

    def test_dr_constant_response_is_defined(self, rng):
        data = Dataset(rng.standard_normal((60, 3)), np.zeros(60))
        out = dr_directions(data, 2)
        assert out.shape == (3, 2)
        assert np.all(np.isfinite(out))

    def test_too_many_slices(self, rng):
        data = Dataset(rng.standard_normal((6, 2)), rng.standard_normal(6))
        with pytest.raises(SlicingError):
            sir_directions(data, 1, n_slices=7)

    def test_too_few_slices(self, small_data):
        with pytest.raises(ParameterError):
            dr_directions(small_data, 2, n_slices=2)

    def test_default_slices(self):
        assert default_slices(500, 2) == 10
        assert default_slices(30, 1) == 6
        assert default_slices(10, 3) == 4


class TestChooseInitialization:
    """Tests for the SIR/DR selection."""

    def test_quadratic_link_selects_dr(self):
        data, _ = single_index_data(4, lambda t: t**2)
        _, source = choose_initialization(data, 1)
        assert source is InitSource.DR

    def test_source_matches_larger_dcov(self):
        data, _ = single_index_data(5, lambda t: t, noise=0.5, n=200)
        beta, source = choose_initialization(data, 1, alpha=1.0)
        scores = {
            InitSource.SIR: sample_dcov_sq(data.X @ sir_directions(data, 1), data.Y, 1.0),
            InitSource.DR: sample_dcov_sq(data.X @ dr_directions(data, 1), data.Y, 1.0),
        }
        assert scores[source] == max(scores.values())
        assert beta.shape == (5, 1)

    def test_falls_back_to_sir(self, small_data, monkeypatch, caplog):
        def broken(*args, **kwargs):
            raise SlicingError("injected")

        monkeypatch.setattr(estimator, "dr_directions", broken)
        with caplog.at_level(logging.WARNING, logger="rsdr.estimator"):
            _, source = choose_initialization(small_data, 1)
        assert source is InitSource.SIR
        assert "DR initialization failed" in caplog.text


class TestCrossValidateAlpha:
    """Tests for alpha selection by k-fold cross-validation."""

    def test_single_grid_point(self, small_data):
        report = cross_validate_alpha(small_data, 1, grid=[0.4], k_folds=3)
        assert report.chosen_alpha == 0.4

    def test_report_structure(self, linear_data):
        data, _ = linear_data
        report = cross_validate_alpha(data, 1, k_folds=4, config=OptimizerConfig(max_iter=50))
        assert report.grid == sorted(DEFAULT_ALPHA_GRID)
        assert report.fold_scores.shape == (len(DEFAULT_ALPHA_GRID), 4)
        assert np.all(np.isfinite(report.mean_validation_scores))
        best = max(report.mean_validation_scores)
        assert report.mean_validation_scores[report.grid.index(report.chosen_alpha)] == best

    def test_deterministic(self, small_data):
        first = cross_validate_alpha(small_data, 1, grid=[0.3, 0.9], k_folds=3, seed=5)
        second = cross_validate_alpha(small_data, 1, grid=[0.3, 0.9], k_folds=3, seed=5)
        np.testing.assert_array_equal(first.fold_scores, second.fold_scores)
        assert first.chosen_alpha == second.chosen_alpha

    def test_parallel_matches_serial(self, small_data):
        serial = cross_validate_alpha(small_data, 1, grid=[0.5, 1.0], k_folds=3, seed=2)
        threaded = cross_validate_alpha(small_data, 1, grid=[0.5, 1.0], k_folds=3, seed=2, n_jobs=2)
        np.testing.assert_array_equal(serial.fold_scores, threaded.fold_scores)

    def test_too_few_samples(self, rng):
        data = Dataset(rng.standard_normal((7, 2)), rng.standard_normal(7))
        with pytest.raises(FoldSizeError):
            cross_validate_alpha(data, 1, k_folds=4)

    def test_grid_outside_range(self, small_data):
        with pytest.raises(ParameterError):
            cross_validate_alpha(small_data, 1, grid=[0.5, 2.0])


class TestFit:
    """Tests for the end-to-end fit."""

    def test_constraint_holds(self, small_data):
        result = fit(small_data, 2, 0.7)
        M = result.beta_hat.T @ result.covariance @ result.beta_hat
        np.testing.assert_allclose(M, np.eye(2), atol=1e-6)
        assert result.d == 2
        assert result.project(small_data.X).shape == (small_data.n, 2)

    def test_full_dimension_objective(self, small_data):
        # at d = p the objective does not depend on C; eta adds eta^(alpha/2) tr(B) / n^2
        w = whiten(small_data)
        B = centered_distances(small_data.Y, 1.0)
        eta = OptimizerConfig().eta
        result = fit(small_data, small_data.p, 1.0)
        expected = objective_f_eta(np.eye(small_data.p), w.Z, B, 1.0, eta)
        assert result.final_objective == pytest.approx(expected, rel=1e-10)

    def test_full_dimension_objective_tiny_eta(self, small_data):
        result = fit(small_data, small_data.p, 1.0, OptimizerConfig(eta=1e-14))
        w = whiten(small_data)
        assert result.final_objective == pytest.approx(sample_dcov_sq(w.Z, small_data.Y, 1.0), rel=1e-4)

    def test_dimension_too_large(self, small_data):
        with pytest.raises(ParameterError):
            fit(small_data, 10, 1.0)

    def test_bad_alpha_string(self, small_data):
        with pytest.raises(ParameterError):
            fit(small_data, 1, "auto")

    def test_cross_validated_alpha(self, small_data):
        result = fit(small_data, 1, "cv", cv_grid=[0.5, 1.0], k_folds=3)
        assert result.cv_report is not None
        assert result.alpha_used == result.cv_report.chosen_alpha

    def test_user_initialization(self, small_data):
        init = np.zeros((4, 1))
        init[0, 0] = 1.0
        result = fit(small_data, 1, 1.0, init=init)
        assert result.init_source is InitSource.USER

    def test_rotated_start_reaches_same_subspace(self, small_data, rng):
        init = rng.standard_normal((4, 2))
        Q, _ = np.linalg.qr(rng.standard_normal((2, 2)))
        a = fit(small_data, 2, 1.0, init=init)
        b = fit(small_data, 2, 1.0, init=init @ Q)
        assert a.final_objective == pytest.approx(b.final_objective, abs=1e-8)

        def projection(beta):
            return beta @ np.linalg.solve(beta.T @ beta, beta.T)

        np.testing.assert_allclose(projection(a.beta_hat), projection(b.beta_hat), atol=1e-4)

    def test_trace_monotone(self, linear_data):
        data, beta = linear_data
        result = fit(data, 1, 1.0)
        assert np.all(np.diff(result.trace.objective_values) >= -1e-12)
        assert principal_angle(result.beta_hat, beta) < 0.1
