"""
Distance-correlation influence scores for outlier detection.

D_i = (1/m) sum_k (dCor(X_k, Y) - dCor(X_k^(i), Y^(i)))^2 over the m columns
of the (possibly reduced) predictors, thresholded by a bootstrap quantile.
"""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from sklearn.decomposition import PCA
from sklearn.metrics import auc, roc_curve

from .dcov import Dataset, alpha_distance_matrix
from .errors import EvaluationError, InputError, ParameterError
from .estimator import fit
from .stiefel import OptimizerConfig
from .utils.helpers import Helpers

logger = logging.getLogger(__name__)

# relative floor under which a leave-one-out distance variance counts as zero
ZERO_VARIANCE_RTOL = 1e-12

# covariance ridge for the rsdr reducer when p >= n, as a fraction of the mean eigenvalue
WIDE_RIDGE_FRACTION = 0.1


class OutlierConfig(BaseModel):
    """Influence-score detection settings"""

    model_config = ConfigDict(frozen=True)

    gamma: float = Field(0.05, gt=0, lt=1)
    n_boot: int = Field(100, ge=1)
    reducer: Literal["none", "pca", "rsdr"] = "rsdr"
    d: int = Field(3, ge=1)
    alpha: float = Field(0.5, gt=0, lt=2)
    ridge: float | None = Field(None, ge=0)
    optimizer: OptimizerConfig = OptimizerConfig()


@dataclass
class OutlierScores:
    """Per-observation influence scores and bootstrap flags"""

    scores: np.ndarray
    threshold: float
    flags: np.ndarray
    reducer: str = "none"

    @property
    def n_flagged(self):
        return int(np.count_nonzero(self.flags))


@dataclass(frozen=True)
class RocResult:
    """ROC points ordered from (0, 0) to (1, 1) and the trapezoid AUC"""

    fpr: np.ndarray
    tpr: np.ndarray
    auc: float

    @property
    def points(self):
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))


def _vstat_parts(a, b):
    """Row sums, totals and the pair sum for a V-statistic over a, b"""
    ra = a.sum(axis=1)
    rb = b.sum(axis=1)
    return ra, rb, ra.sum(), rb.sum(), float(np.sum(a * b))


def _full_and_loo_dcov(a, b):
    """
    nu_n^2 on all n samples and on each of the n leave-one-out subsets.

    Deleting sample i removes row and column i; the masked matrix is
    recentered through the identity
    n^2 nu^2 = sum ab + T_a T_b / n^2 - (2/n) sum_k r^a_k r^b_k
    evaluated with the masked row sums r_k - a_ki and totals T - 2 r_i.
    """
    n = a.shape[0]
    m = n - 1
    ra, rb, ta, tb, sab = _vstat_parts(a, b)
    rr = float(ra @ rb)
    full = (sab + ta * tb / n**2 - 2.0 * rr / n) / n**2

    ab_rows = np.sum(a * b, axis=1)
    sab_i = sab - 2.0 * ab_rows
    ta_i = ta - 2.0 * ra
    tb_i = tb - 2.0 * rb
    q_i = rr - a @ rb - b @ ra + ab_rows - ra * rb
    loo = (sab_i + ta_i * tb_i / m**2 - 2.0 * q_i / m) / m**2
    return full, loo


def _dcor(cov, var_a, var_b, floor_a, floor_b):
    var_a = np.where(var_a <= floor_a, 0.0, var_a)
    var_b = np.where(var_b <= floor_b, 0.0, var_b)
    denom = var_a * var_b
    with np.errstate(divide="ignore", invalid="ignore"):
        r2 = np.where(denom > 0.0, np.maximum(cov, 0.0) / np.sqrt(denom), 0.0)
    return np.sqrt(np.clip(r2, 0.0, 1.0))


def loo_dcor_scores(Xr, Y):
    """
    Leave-one-out influence scores D_i (alpha = 1 distance correlation).

    Args:
        Xr: n x m predictors (raw, m = p, or reduced, m = d)
        Y: Length-n response

    Returns:
        Length-n array of nonnegative scores
    """
    Xr = np.asarray(Xr, dtype=float)
    if Xr.ndim == 1:
        Xr = Xr.reshape(-1, 1)
    Y = np.asarray(Y, dtype=float).ravel()
    n = Xr.shape[0]
    if n < 3:
        raise InputError("Leave-one-out scores need n >= 3, got %d" % n)
    if Y.shape[0] != n:
        raise InputError("Xr has %d rows but Y has %d entries" % (n, Y.shape[0]))

    b = alpha_distance_matrix(Y, 1.0).values
    floor_b = ZERO_VARIANCE_RTOL * float(b.mean()) ** 2
    bb_full, bb_loo = _full_and_loo_dcov(b, b)

    total = np.zeros(n)
    for k in range(Xr.shape[1]):
        a = alpha_distance_matrix(Xr[:, k], 1.0).values
        floor_a = ZERO_VARIANCE_RTOL * float(a.mean()) ** 2
        ab_full, ab_loo = _full_and_loo_dcov(a, b)
        aa_full, aa_loo = _full_and_loo_dcov(a, a)
        full = _dcor(np.array([ab_full]), np.array([aa_full]), np.array([bb_full]), floor_a, floor_b)[0]
        loo = _dcor(ab_loo, aa_loo, bb_loo, floor_a, floor_b)
        total += (full - loo) ** 2
    return total / Xr.shape[1]


def _bootstrap_scores(task):
    Xr, Y, child = task
    rng = np.random.default_rng(child)
    idx = rng.integers(0, Xr.shape[0], size=Xr.shape[0])
    return loo_dcor_scores(Xr[idx], Y[idx])


def bootstrap_threshold(Xr, Y, gamma, n_boot, seed=0, n_jobs=1):
    """
    Upper-gamma quantile of pooled bootstrap influence scores.

    Each replicate resamples rows jointly with replacement from its own
    seed stream, so the threshold does not depend on n_jobs.
    """
    if not 0.0 < gamma < 1.0:
        raise ParameterError("gamma must lie in (0, 1), got %r" % gamma)
    if n_boot < 1:
        raise ParameterError("n_boot must be >= 1, got %r" % n_boot)
    Xr = np.asarray(Xr, dtype=float)
    if Xr.ndim == 1:
        Xr = Xr.reshape(-1, 1)
    Y = np.asarray(Y, dtype=float).ravel()
    tasks = [(Xr, Y, child) for child in Helpers.spawn(seed, "bootstrap", n_boot)]
    pooled = np.concatenate(Helpers.parallel_map(_bootstrap_scores, tasks, n_jobs))
    return float(np.quantile(pooled, 1.0 - gamma))


def pca_reduce(X, d):
    """Scores of the centered X on its top-d principal axes"""
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    if not 1 <= d <= min(n - 1, p):
        raise ParameterError("PCA dimension must satisfy 1 <= d <= min(n-1, p) = %d, got %d" % (min(n - 1, p), d))
    return PCA(n_components=d, svd_solver="full").fit_transform(X)


def reduce_predictors(data, config, seed=0):
    """Apply the configured reducer to data.X"""
    if config.reducer == "none":
        return data.X
    if config.reducer == "pca":
        return pca_reduce(data.X, config.d)

    ridge = config.ridge
    if ridge is None and data.p >= data.n:
        mean_eigenvalue = float(np.trace(np.atleast_2d(np.cov(data.X, rowvar=False)))) / data.p
        ridge = WIDE_RIDGE_FRACTION * mean_eigenvalue
    result = fit(data, config.d, config.alpha, config.optimizer, ridge=ridge, seed=seed)
    return result.project(data.X)


def detect(data, config=None, seed=0, n_jobs=1):
    """
    Score, threshold and flag every observation.

    Returns:
        OutlierScores with flags = scores > threshold
    """
    config = config or OutlierConfig()
    if not isinstance(data, Dataset):
        raise InputError("detect expects a Dataset")
    Xr = reduce_predictors(data, config, seed)
    scores = loo_dcor_scores(Xr, data.Y)
    threshold = bootstrap_threshold(Xr, data.Y, config.gamma, config.n_boot, seed, n_jobs)
    flags = scores > threshold
    logger.info(
        "Outlier detection (%s): %d of %d observations above %.4g",
        config.reducer,
        int(flags.sum()),
        data.n,
        threshold,
    )
    return OutlierScores(scores=scores, threshold=threshold, flags=flags, reducer=config.reducer)


def roc(scores, labels):
    """
    ROC curve over distinct score thresholds (tied scores form one step).

    Raises:
        EvaluationError: labels hold a single class
    """
    scores = np.asarray(scores, dtype=float).ravel()
    labels = np.asarray(labels).astype(bool).ravel()
    if scores.shape != labels.shape:
        raise InputError("scores and labels differ in length")
    if labels.all() or not labels.any():
        raise EvaluationError("ROC needs at least one positive and one negative label")
    fpr, tpr, _ = roc_curve(labels, scores, drop_intermediate=False)
    return RocResult(fpr=fpr, tpr=tpr, auc=float(auc(fpr, tpr)))
