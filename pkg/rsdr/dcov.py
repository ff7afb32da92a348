"""
Sample alpha-distance covariance, variance and correlation.

All statistics are V-statistics (1/n^2 normalisation) built from
double-centered alpha-powered Euclidean distance matrices.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import InputError, ParameterError


@dataclass(frozen=True)
class Dataset:
    """Predictor matrix X (n x p) and row-aligned univariate response Y"""

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        Y = np.asarray(self.Y, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2:
            raise InputError("X must be a 2-D matrix, got shape %s" % (X.shape,))
        if Y.ndim == 2 and Y.shape[1] == 1:
            Y = Y[:, 0]
        if Y.ndim != 1:
            raise InputError("Y must be a vector, got shape %s" % (Y.shape,))
        if X.shape[0] != Y.shape[0]:
            raise InputError(
                "X and Y are not row-aligned: %d rows vs %d responses"
                % (X.shape[0], Y.shape[0])
            )
        if X.shape[0] < 2:
            raise InputError("Dataset needs at least 2 samples, got %d" % X.shape[0])
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
            raise InputError("Dataset contains non-finite values")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]

    def subset(self, rows):
        """Dataset restricted to the given row indices"""
        return Dataset(self.X[rows], self.Y[rows])


@dataclass(frozen=True)
class DistanceMatrix:
    """Pairwise alpha-powered Euclidean distances"""

    values: np.ndarray
    alpha: float


@dataclass(frozen=True)
class CenteredDistanceMatrix:
    """Double-centered distance matrix: every row and column sums to zero"""

    values: np.ndarray


def check_alpha(alpha):
    """Raise ParameterError unless 0 < alpha < 2"""
    if not (0.0 < float(alpha) < 2.0):
        raise ParameterError("alpha must lie in (0, 2), got %r" % alpha)


def _as_samples(points):
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise InputError("Expected an n x q matrix, got shape %s" % (arr.shape,))
    if not np.all(np.isfinite(arr)):
        raise InputError("Input contains non-finite values")
    return arr


def alpha_distance_matrix(points, alpha):
    """
    Pairwise Euclidean distances raised to `alpha`.

    Args:
        points: n x q matrix (a length-n vector is treated as q = 1)
        alpha: Exponent in (0, 2)

    Returns:
        DistanceMatrix, symmetric with a zero diagonal
    """
    check_alpha(alpha)
    arr = _as_samples(points)
    if arr.shape[0] < 2:
        raise InputError("Need at least 2 samples, got %d" % arr.shape[0])
    dist = squareform(pdist(arr, metric="euclidean"))
    return DistanceMatrix(values=dist**alpha, alpha=float(alpha))


def double_center(d):
    """
    A_kl = a_kl - mean_k. - mean_.l + mean_..

    Accepts a DistanceMatrix or a raw square array.
    """
    a = d.values if isinstance(d, DistanceMatrix) else np.asarray(d, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError("Distance matrix must be square, got shape %s" % (a.shape,))
    row_means = a.mean(axis=1, keepdims=True)
    col_means = a.mean(axis=0, keepdims=True)
    return CenteredDistanceMatrix(values=a - row_means - col_means + a.mean())


def centered_distances(points, alpha):
    """Double-centered alpha-distance matrix of `points` as a plain array"""
    return double_center(alpha_distance_matrix(points, alpha)).values


def dcov_from_centered(A, B):
    """(1/n^2) sum_kl A_kl B_kl for already centered matrices"""
    A = A.values if isinstance(A, CenteredDistanceMatrix) else A
    B = B.values if isinstance(B, CenteredDistanceMatrix) else B
    return float(np.mean(A * B))


def _check_matched(u, v):
    if u.shape[0] != v.shape[0]:
        raise InputError(
            "Sample counts differ: %d vs %d" % (u.shape[0], v.shape[0])
        )


def sample_dcov_sq(u, v, alpha):
    """
    Squared sample alpha-distance covariance nu_n^2(u, v; alpha).

    The value is nonnegative up to rounding; it is returned unclamped.
    """
    u = _as_samples(u)
    v = _as_samples(v)
    _check_matched(u, v)
    return dcov_from_centered(centered_distances(u, alpha), centered_distances(v, alpha))


def sample_dvar_sq(u, alpha):
    """Squared sample distance variance nu_n^2(u; alpha) = nu_n^2(u, u; alpha)"""
    A = centered_distances(u, alpha)
    return max(dcov_from_centered(A, A), 0.0)


def dcor_sq_from_centered(A, B):
    """
    Squared distance correlation from centered matrices.

    Zero when either distance variance vanishes; clamped to [0, 1].
    """
    cov = max(dcov_from_centered(A, B), 0.0)
    denom = max(dcov_from_centered(A, A), 0.0) * max(dcov_from_centered(B, B), 0.0)
    if denom <= 0.0:
        return 0.0
    return float(min(max(cov / np.sqrt(denom), 0.0), 1.0))


def sample_dcor_sq(u, v, alpha=1.0):
    """Squared sample distance correlation R_n^2(u, v; alpha)"""
    u = _as_samples(u)
    v = _as_samples(v)
    _check_matched(u, v)
    return dcor_sq_from_centered(centered_distances(u, alpha), centered_distances(v, alpha))
