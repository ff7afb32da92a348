"""Tests for sample alpha-distance covariance, variance and correlation."""

import numpy as np
import pytest

from rsdr.dcov import (
    CenteredDistanceMatrix,
    Dataset,
    DistanceMatrix,
    alpha_distance_matrix,
    double_center,
    sample_dcor_sq,
    sample_dcov_sq,
    sample_dvar_sq,
)
from rsdr.errors import InputError, ParameterError


def vstat_oracle(u, v, alpha):
    """S1 + S2 - 2 S3 over raw alpha-distances"""
    u = np.asarray(u, dtype=float).reshape(len(u), -1)
    v = np.asarray(v, dtype=float).reshape(len(v), -1)
    n = u.shape[0]
    a = np.linalg.norm(u[:, None, :] - u[None, :, :], axis=2) ** alpha
    b = np.linalg.norm(v[:, None, :] - v[None, :, :], axis=2) ** alpha
    s1 = np.einsum("kl,kl->", a, b) / n**2
    s2 = (a.sum() / n**2) * (b.sum() / n**2)
    s3 = np.einsum("kl,km->", a, b) / n**3
    return s1 + s2 - 2.0 * s3


class TestDataset:
    """Tests for Dataset validation."""

    def test_vector_x_becomes_column(self):
        data = Dataset(np.arange(4.0), np.arange(4.0))
        assert data.X.shape == (4, 1)
        assert (data.n, data.p) == (4, 1)

    def test_misaligned_rows_rejected(self):
        with pytest.raises(InputError):
            Dataset(np.zeros((5, 2)), np.zeros(4))

    def test_single_row_rejected(self):
        with pytest.raises(InputError):
            Dataset(np.zeros((1, 2)), np.zeros(1))

    def test_non_finite_rejected(self):
        X = np.ones((3, 2))
        X[1, 1] = np.nan
        with pytest.raises(InputError):
            Dataset(X, np.zeros(3))

    def test_subset_keeps_alignment(self, small_data):
        sub = small_data.subset([0, 5, 7])
        assert sub.n == 3
        np.testing.assert_array_equal(sub.Y, small_data.Y[[0, 5, 7]])


class TestAlphaDistanceMatrix:
    """Tests for alpha-powered distance matrices."""

    def test_identical_rows_give_zero(self):
        d = alpha_distance_matrix(np.array([[1.0, 2.0], [1.0, 2.0]]), 0.7)
        np.testing.assert_array_equal(d.values, np.zeros((2, 2)))

    def test_plain_distances_at_alpha_one(self):
        d = alpha_distance_matrix(np.array([0.0, 1.0, 3.0]), 1.0)
        expected = np.array([[0, 1, 3], [1, 0, 2], [3, 2, 0]], dtype=float)
        np.testing.assert_allclose(d.values, expected)

    def test_square_root_at_alpha_half(self):
        d = alpha_distance_matrix(np.array([0.0, 4.0]), 0.5)
        assert d.values[0, 1] == pytest.approx(2.0)
        assert isinstance(d, DistanceMatrix)
        assert d.alpha == 0.5

    @pytest.mark.parametrize("alpha", [0.0, 2.0, -0.5, 3.0])
    def test_alpha_out_of_range(self, alpha):
        with pytest.raises(ParameterError):
            alpha_distance_matrix(np.array([0.0, 1.0]), alpha)

    def test_non_finite_points(self):
        with pytest.raises(InputError):
            alpha_distance_matrix(np.array([0.0, np.inf]), 1.0)


class TestDoubleCenter:
    """Tests for double centering."""

    def test_zero_matrix_fixed_point(self):
        out = double_center(np.zeros((4, 4)))
        np.testing.assert_array_equal(out.values, np.zeros((4, 4)))

    def test_two_point_case(self):
        a = 3.0
        out = double_center(np.array([[0.0, a], [a, 0.0]]))
        expected = np.array([[-a / 2, a / 2], [a / 2, -a / 2]])
        np.testing.assert_allclose(out.values, expected)

    def test_row_and_column_sums_vanish(self, rng):
        out = double_center(alpha_distance_matrix(rng.standard_normal((5, 3)), 1.3))
        assert isinstance(out, CenteredDistanceMatrix)
        assert np.all(np.abs(out.values.sum(axis=1)) < 1e-12)
        assert np.all(np.abs(out.values.sum(axis=0)) < 1e-12)
        np.testing.assert_allclose(out.values, out.values.T)

    def test_non_square_rejected(self):
        with pytest.raises(InputError):
            double_center(np.zeros((3, 2)))


class TestSampleDcov:
    """Tests for the squared sample distance covariance."""

    def test_matches_vstatistic_expansion(self):
        """Centered-product formula equals S1 + S2 - 2 S3 on 50 random instances"""
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = int(rng.integers(2, 51))
            q1, q2 = (int(q) for q in rng.integers(1, 6, size=2))
            alpha = float(rng.choice([0.3, 0.5, 1.0, 1.5]))
            u = rng.standard_normal((n, q1))
            v = rng.standard_normal((n, q2))
            expected = vstat_oracle(u, v, alpha)
            got = sample_dcov_sq(u, v, alpha)
            assert got == pytest.approx(expected, rel=1e-10, abs=1e-14)

    def test_constant_response_gives_zero(self, rng):
        assert sample_dcov_sq(rng.standard_normal((10, 2)), np.full(10, 4.2), 1.0) == 0.0

    def test_two_point_closed_form(self):
        u, v, alpha = np.array([0.0, 3.0]), np.array([1.0, -1.0]), 0.8
        expected = 3.0**alpha * 2.0**alpha / 4.0
        assert sample_dcov_sq(u, v, alpha) == pytest.approx(expected, rel=1e-12)

    def test_nonnegative_and_symmetric(self, rng):
        for alpha in (0.2, 0.9, 1.7):
            u = rng.standard_normal((25, 3))
            v = rng.standard_normal(25)
            assert sample_dcov_sq(u, v, alpha) >= -1e-12
            assert sample_dcov_sq(u, v, alpha) == sample_dcov_sq(v, u, alpha)

    def test_translation_invariance(self, rng):
        u = rng.standard_normal((20, 3))
        v = rng.standard_normal(20)
        base = sample_dcov_sq(u, v, 1.2)
        shifted = sample_dcov_sq(u + np.array([5.0, -2.0, 7.0]), v + 3.0, 1.2)
        assert shifted == pytest.approx(base, rel=1e-10)

    def test_scaling_law(self, rng):
        u = rng.standard_normal((20, 2))
        v = rng.standard_normal(20)
        c, alpha = -2.5, 0.6
        assert sample_dcov_sq(c * u, v, alpha) == pytest.approx(
            abs(c) ** alpha * sample_dcov_sq(u, v, alpha), rel=1e-10
        )

    def test_joint_permutation_invariance(self, rng):
        u = rng.standard_normal((15, 2))
        v = rng.standard_normal(15)
        perm = rng.permutation(15)
        assert sample_dcov_sq(u[perm], v[perm], 1.0) == pytest.approx(
            sample_dcov_sq(u, v, 1.0), rel=1e-13
        )

    def test_mismatched_samples(self):
        with pytest.raises(InputError):
            sample_dcov_sq(np.zeros(4), np.zeros(5), 1.0)


class TestSampleDvar:
    """Tests for the squared sample distance variance."""

    def test_constant_is_zero(self):
        assert sample_dvar_sq(np.ones(6), 1.0) == 0.0

    def test_two_point_closed_form(self):
        alpha = 0.7
        assert sample_dvar_sq(np.array([1.0, 3.0]), alpha) == pytest.approx(2.0 ** (2 * alpha) / 4.0)

    def test_equals_self_covariance(self, rng):
        u = rng.standard_normal((12, 2))
        assert sample_dvar_sq(u, 1.4) == pytest.approx(sample_dcov_sq(u, u, 1.4), rel=1e-12)


class TestSampleDcor:
    """Tests for the squared sample distance correlation."""

    def test_self_correlation_is_one(self, rng):
        u = rng.standard_normal((30, 2))
        assert sample_dcor_sq(u, u) == pytest.approx(1.0, abs=1e-12)

    def test_constant_is_zero(self, rng):
        assert sample_dcor_sq(rng.standard_normal(10), np.zeros(10)) == 0.0

    def test_affine_response_is_one(self, rng):
        u = rng.standard_normal(40)
        assert sample_dcor_sq(u, 2.0 * u + 3.0) == pytest.approx(1.0, abs=1e-12)

    def test_permuted_response_matches_oracle(self, rng):
        v = rng.standard_normal(100)
        u = rng.permutation(v)
        expected = vstat_oracle(u, v, 1.0) / np.sqrt(vstat_oracle(u, u, 1.0) * vstat_oracle(v, v, 1.0))
        got = sample_dcor_sq(u, v, 1.0)
        assert got == pytest.approx(expected, rel=1e-9)
        assert 0.0 <= got < 0.2

    def test_range(self, rng):
        for alpha in (0.3, 1.0, 1.8):
            r = sample_dcor_sq(rng.standard_normal((20, 3)), rng.standard_normal(20), alpha)
            assert 0.0 <= r <= 1.0
