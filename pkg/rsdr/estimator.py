"""
End-to-end robust SDR fit.

whiten -> SIR/DR initialisation -> (optional) alpha by cross-validation
-> Stiefel optimisation -> back-transformation beta = Sigma^{-1/2} C.
"""

import enum
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from sklearn.model_selection import KFold

from .dcov import check_alpha, centered_distances, sample_dcov_sq
from .errors import (
    FoldSizeError,
    NumericalError,
    ParameterError,
    SingularCovarianceError,
    SlicingError,
)
from .stiefel import OptimizerConfig, OptimizeTrace, StiefelPoint, optimize, project_stiefel
from .utils.helpers import Helpers

logger = logging.getLogger(__name__)

DEFAULT_ALPHA_GRID = tuple(i / 10 for i in range(1, 10))
VALIDATION_ALPHA = 0.5
MAX_SLICES = 10


class InitSource(str, enum.Enum):
    SIR = "SIR"
    DR = "DR"
    USER = "user"


@dataclass(frozen=True)
class WhitenedData:
    """Z = (X - mean) Sigma^{-1/2}, with Sigma = sample covariance + ridge I"""

    Z: np.ndarray
    sigma_half: np.ndarray
    sigma_neg_half: np.ndarray
    ridge: float
    mean: np.ndarray
    covariance: np.ndarray


@dataclass(frozen=True)
class CVReport:
    """Mean validation 0.5-dCov per alpha; chosen_alpha maximises it"""

    grid: list
    fold_scores: np.ndarray
    mean_validation_scores: list
    chosen_alpha: float


@dataclass
class FitResult:
    """Estimated basis of the central subspace"""

    C_hat: StiefelPoint
    beta_hat: np.ndarray
    alpha_used: float
    init_source: InitSource
    trace: OptimizeTrace
    final_objective: float
    cv_report: CVReport | None = None
    covariance: np.ndarray | None = field(default=None, repr=False)

    @property
    def d(self):
        return self.beta_hat.shape[1]

    def project(self, X):
        """Reduced predictors X beta_hat"""
        return np.asarray(X, dtype=float) @ self.beta_hat


def default_ridge(covariance):
    """1e-8 * trace(Sigma) / p"""
    p = covariance.shape[0]
    return 1e-8 * float(np.trace(covariance)) / p


def default_slices(n, d):
    """10 slices, or n // 5 when that is smaller, never fewer than d + 1"""
    return max(d + 1, min(MAX_SLICES, n // 5))


def whiten(data, ridge=None):
    """
    Whiten the predictors.

    Args:
        data: Dataset
        ridge: Added to the covariance diagonal; None uses default_ridge

    Raises:
        SingularCovarianceError: Sigma + ridge I has an eigenvalue <= 1e-12
    """
    if ridge is not None and ridge < 0:
        raise ParameterError("ridge must be >= 0, got %r" % ridge)
    X = data.X
    mean = X.mean(axis=0)
    cov = np.atleast_2d(np.cov(X, rowvar=False, ddof=1))
    if ridge is None:
        ridge = default_ridge(cov)
    cov = cov + ridge * np.eye(cov.shape[0])

    eigvals, eigvecs = scipy.linalg.eigh(cov)
    if eigvals[0] <= 1e-12 * max(1.0, eigvals[-1]):
        raise SingularCovarianceError(
            "Predictor covariance is singular (smallest eigenvalue %.3e); "
            "increase the ridge" % eigvals[0]
        )
    root = np.sqrt(eigvals)
    sigma_half = (eigvecs * root) @ eigvecs.T
    sigma_neg_half = (eigvecs / root) @ eigvecs.T
    Z = (X - mean) @ sigma_neg_half
    return WhitenedData(
        Z=Z,
        sigma_half=sigma_half,
        sigma_neg_half=sigma_neg_half,
        ridge=float(ridge),
        mean=mean,
        covariance=cov,
    )


def _slices(Y, n_slices):
    """Split sample indices into n_slices groups of consecutive response ranks"""
    n = Y.shape[0]
    if n_slices > n:
        raise SlicingError(
            "Cannot form %d nonempty slices from %d samples" % (n_slices, n)
        )
    order = np.argsort(Y, kind="stable")
    return np.array_split(order, n_slices)


def _top_eigenvectors(M, d):
    eigvals, eigvecs = scipy.linalg.eigh((M + M.T) / 2.0)
    return eigvecs[:, ::-1][:, :d]


def _check_slicing_args(data, d, n_slices):
    if not 1 <= d <= data.p:
        raise ParameterError("d must satisfy 1 <= d <= p = %d, got %d" % (data.p, d))
    if n_slices is None:
        n_slices = default_slices(data.n, d)
    if n_slices < d + 1:
        raise ParameterError("n_slices must be >= d + 1 = %d, got %d" % (d + 1, n_slices))
    return n_slices


def _slice_moments(data, d, n_slices, whitened):
    n_slices = _check_slicing_args(data, d, n_slices)
    if whitened is None:
        whitened = whiten(data)
    Z = whitened.Z
    n = data.n
    moments = []
    for rows in _slices(data.Y, n_slices):
        Zh = Z[rows]
        m = Zh.mean(axis=0)
        if len(rows) > 1:
            S = np.atleast_2d(np.cov(Zh, rowvar=False, bias=True))
        else:
            S = np.zeros((Z.shape[1], Z.shape[1]))
        moments.append((len(rows) / n, m, S))
    return moments, whitened


def sir_directions(data, d, n_slices=None, whitened=None):
    """
    Sliced inverse regression: top-d eigenvectors of sum_h p_h m_h m_h^T,
    mapped back to the predictor scale.
    """
    moments, whitened = _slice_moments(data, d, n_slices, whitened)
    M = sum(ph * np.outer(m, m) for ph, m, _ in moments)
    return whitened.sigma_neg_half @ _top_eigenvectors(M, d)


def dr_directions(data, d, n_slices=None, whitened=None):
    """
    Directional regression candidate matrix
    sum_h p_h (S_h + m_h m_h^T - I)^2 + (sum_h p_h m_h m_h^T)^2
    + (sum_h p_h m_h^T m_h)(sum_h p_h m_h m_h^T)
    """
    moments, whitened = _slice_moments(data, d, n_slices, whitened)
    p = data.p
    eye = np.eye(p)
    between = sum(ph * np.outer(m, m) for ph, m, _ in moments)
    spread = sum(ph * float(m @ m) for ph, m, _ in moments)
    M = sum(ph * np.linalg.matrix_power(S + np.outer(m, m) - eye, 2) for ph, m, S in moments)
    M = M + between @ between + spread * between
    return whitened.sigma_neg_half @ _top_eigenvectors(M, d)


def choose_initialization(data, d, n_slices=None, alpha=1.0, whitened=None):
    """
    Pick the SIR or DR basis with the larger sample dCov at `alpha`.

    Ties go to SIR. If one initializer fails the other is used with a warning.

    Returns:
        (p x d matrix, InitSource)
    """
    candidates = []
    errors = []
    for source, method in ((InitSource.SIR, sir_directions), (InitSource.DR, dr_directions)):
        try:
            beta = method(data, d, n_slices=n_slices, whitened=whitened)
        except (SlicingError, NumericalError) as e:
            logger.warning("%s initialization failed: %s", source.value, e)
            errors.append(e)
            continue
        score = sample_dcov_sq(data.X @ beta, data.Y, alpha)
        candidates.append((score, source, beta))

    if not candidates:
        raise errors[0]

    best_score, best_source, best_beta = candidates[0]
    for score, source, beta in candidates[1:]:
        if score > best_score:
            best_score, best_source, best_beta = score, source, beta
    logger.debug("Initialization %s selected (dCov %.6g)", best_source.value, best_score)
    return best_beta, best_source


def _fit_fixed_alpha(data, d, alpha, config, ridge, n_slices, init):
    whitened = whiten(data, ridge)
    if init is not None:
        beta0 = np.asarray(init, dtype=float).reshape(data.p, -1)
        if beta0.shape[1] != d:
            raise ParameterError("Initial basis has %d columns, expected d = %d" % (beta0.shape[1], d))
        source = InitSource.USER
    else:
        beta0, source = choose_initialization(data, d, n_slices, alpha, whitened)

    C0 = project_stiefel(whitened.sigma_half @ beta0)
    B = centered_distances(data.Y, alpha)
    C_hat, trace = optimize(whitened.Z, B, alpha, config, C0)
    beta_hat = whitened.sigma_neg_half @ C_hat.C
    return FitResult(
        C_hat=C_hat,
        beta_hat=beta_hat,
        alpha_used=float(alpha),
        init_source=source,
        trace=trace,
        final_objective=trace.objective_values[-1],
        covariance=whitened.covariance,
    )


def _fold_score(task):
    data, d, alpha, config, ridge, n_slices, train, test = task
    try:
        result = _fit_fixed_alpha(data.subset(train), d, alpha, config, ridge, n_slices, None)
    except SingularCovarianceError as e:
        raise FoldSizeError("Training fold of %d rows cannot be whitened: %s" % (len(train), e))
    except SlicingError as e:
        raise FoldSizeError("Training fold of %d rows cannot be sliced: %s" % (len(train), e))
    val = data.subset(test)
    return sample_dcov_sq(result.project(val.X), val.Y, VALIDATION_ALPHA)


def cross_validate_alpha(
    data,
    d,
    grid=None,
    k_folds=5,
    config=None,
    seed=0,
    n_jobs=1,
    ridge=None,
    n_slices=None,
):
    """
    Choose alpha by k-fold cross-validation of the validation-set 0.5-dCov.

    Folds are contiguous blocks of a seeded shuffle; every (alpha, fold) pair
    is an independent task. Ties in the mean score go to the smaller alpha.
    """
    grid = sorted(float(a) for a in (grid if grid is not None else DEFAULT_ALPHA_GRID))
    if not grid:
        raise ParameterError("alpha grid is empty")
    for a in grid:
        check_alpha(a)
    if k_folds < 2:
        raise ParameterError("k_folds must be >= 2, got %d" % k_folds)
    if data.n < 2 * k_folds:
        raise FoldSizeError(
            "%d samples cannot form %d folds with at least 2 validation rows each"
            % (data.n, k_folds)
        )

    fold_seed = int(Helpers.rng(seed, "folds").integers(0, 2**31 - 1))
    folds = list(KFold(n_splits=k_folds, shuffle=True, random_state=fold_seed).split(data.X))
    tasks = [
        (data, d, alpha, config, ridge, n_slices, train, test)
        for alpha in grid
        for train, test in folds
    ]
    scores = np.asarray(Helpers.parallel_map(_fold_score, tasks, n_jobs), dtype=float)
    scores = scores.reshape(len(grid), k_folds)
    means = scores.mean(axis=1)
    chosen = grid[int(np.argmax(means))]
    logger.info("Cross-validation chose alpha = %g", chosen)
    return CVReport(
        grid=grid,
        fold_scores=scores,
        mean_validation_scores=[float(m) for m in means],
        chosen_alpha=chosen,
    )


def fit(
    data,
    d,
    alpha=1.0,
    config=None,
    *,
    ridge=None,
    n_slices=None,
    init=None,
    cv_grid=None,
    k_folds=5,
    seed=0,
    n_jobs=1,
):
    """
    Fit robust SDR.

    Args:
        data: Dataset
        d: Target dimension, 1 <= d <= p
        alpha: Exponent in (0, 2), or "cv" to choose it by cross-validation
        config: OptimizerConfig (defaults when None)
        ridge: Covariance ridge (None uses default_ridge)
        n_slices: Slices for the SIR/DR initializers
        init: Optional p x d initial basis (skips SIR/DR)
        cv_grid, k_folds, seed, n_jobs: Cross-validation settings

    Returns:
        FitResult
    """
    if not isinstance(d, (int, np.integer)) or not 1 <= d <= data.p:
        raise ParameterError("d must satisfy 1 <= d <= p = %d, got %r" % (data.p, d))
    config = config or OptimizerConfig()

    report = None
    if isinstance(alpha, str):
        if alpha.lower() != "cv":
            raise ParameterError("alpha must be a number in (0, 2) or 'cv', got %r" % alpha)
        report = cross_validate_alpha(
            data, d, cv_grid, k_folds, config, seed, n_jobs, ridge, n_slices
        )
        alpha = report.chosen_alpha
    check_alpha(alpha)

    result = _fit_fixed_alpha(data, d, float(alpha), config, ridge, n_slices, init)
    result.cv_report = report
    logger.info(
        "Fitted d=%d alpha=%g init=%s: F=%.6g after %d iterations",
        d,
        result.alpha_used,
        result.init_source.value,
        result.final_objective,
        result.trace.iterations,
    )
    return result
