"""
Simulation harness: model generators, principal angles, replication reports
and the outlier-detection ROC study.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field

from .dcov import Dataset
from .errors import InputError, ParameterError, RsdrError
from .estimator import fit
from .outlier import OutlierConfig, loo_dcor_scores, reduce_predictors, roc
from .stiefel import OptimizerConfig
from .utils.helpers import Helpers

logger = logging.getLogger(__name__)

MODEL_DIMS = {"A": 2, "B": 2, "C": 1}
DIST_CODES = {"gaussian": 1, "uniform": 2}
CONTAMINATION_SCALE = 50.0
AR1_RHO = 0.5
AR1_SIGNAL = 5


class ModelSpec(BaseModel):
    """One simulation setting: model, predictor law, size and contamination"""

    model_config = ConfigDict(frozen=True)

    model: Literal["A", "B", "C"] = "A"
    predictor_dist: Literal["gaussian", "uniform"] = "gaussian"
    n: int = Field(100, ge=2)
    p: int = Field(6, ge=3)
    contaminated: bool = False
    seed: int = 0
    contamination_mode: Literal["additive", "replace"] = "additive"
    contamination_prob: float = Field(0.1, ge=0, le=1)

    @property
    def label(self):
        """Model label in the A(1) / C(2) style"""
        return "%s(%d)" % (self.model, DIST_CODES[self.predictor_dist])

    @property
    def d(self):
        return MODEL_DIMS[self.model]


class MethodSpec(BaseModel):
    """A named fit configuration compared by replicate()"""

    model_config = ConfigDict(frozen=True)

    label: str
    alpha: float | Literal["cv"] = 1.0
    optimizer: OptimizerConfig = OptimizerConfig()
    k_folds: int = Field(5, ge=2)


@dataclass(frozen=True)
class TrueSubspace:
    """True directions beta (p x d), the rotation used, and contaminated rows"""

    beta: np.ndarray
    rotation: np.ndarray
    contaminated: np.ndarray


@dataclass
class MethodSummary:
    """Aggregated angles and timings of one method on one model"""

    model: str
    method: str
    angle_mean: float
    angle_sd: float
    time_mean: float
    time_sd: float
    reps: int
    failures: int = 0
    angles: list = field(default_factory=list)

    @property
    def case(self):
        return "%s/%s" % (self.model, self.method)


@dataclass
class ReplicationReport:
    """One MethodSummary per (model, method)"""

    rows: list = field(default_factory=list)
    replications: int = 0


@dataclass
class RocStudyReport:
    """Per-configuration AUCs across replications and the pooled ROC"""

    labels: list
    aucs: dict
    mean_auc: dict
    pooled: dict
    replications: int


def random_rotation(rng, p):
    """
    Haar-distributed element of SO(p): QR of a Gaussian matrix with the
    R-diagonal sign fix, then one column flipped if det = -1.
    """
    Q, R = np.linalg.qr(rng.standard_normal((p, p)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def _base_directions(p):
    b1 = np.zeros(p)
    b1[0] = 1.0
    b2 = np.zeros(p)
    b2[1] = 1.0
    b3 = np.zeros(p)
    b3[:3] = (1.0, 0.5, 1.0)
    return b1, b2, b3


def generate(spec):
    """
    Draw one dataset from model A, B or C.

    A: Y = (b1'X)^2 + b2'X + 0.1 e
    B: Y = sign(2 b1'X + e1) log|2 b2'X + 4 + e2|
    C: Y = exp(b3'X) e
    with b_i = R^T b~_i for a random rotation R. Contamination adds
    (or, in "replace" mode, substitutes) 50 * 1'X_i with the configured probability.

    Returns:
        (Dataset, TrueSubspace)
    """
    n, p = spec.n, spec.p
    rotation = random_rotation(Helpers.rng(spec.seed, "rotation"), p)
    b1, b2, b3 = (rotation.T @ b for b in _base_directions(p))

    rng = Helpers.rng(spec.seed, "data")
    if spec.predictor_dist == "gaussian":
        X = rng.standard_normal((n, p))
    else:
        X = rng.uniform(-2.0, 2.0, size=(n, p))

    if spec.model == "A":
        eps = rng.standard_normal(n)
        Y = (X @ b1) ** 2 + X @ b2 + 0.1 * eps
        beta = np.column_stack([b1, b2])
    elif spec.model == "B":
        eps1 = rng.standard_normal(n)
        eps2 = rng.standard_normal(n)
        Y = np.sign(2.0 * (X @ b1) + eps1) * np.log(np.abs(2.0 * (X @ b2) + 4.0 + eps2))
        beta = np.column_stack([b1, b2])
    else:
        eps = rng.standard_normal(n)
        Y = np.exp(X @ b3) * eps
        beta = b3.reshape(-1, 1)

    contaminated = np.zeros(n, dtype=bool)
    if spec.contaminated:
        contaminated = Helpers.rng(spec.seed, "contamination").random(n) < spec.contamination_prob
        shift = CONTAMINATION_SCALE * X[contaminated].sum(axis=1)
        if spec.contamination_mode == "additive":
            Y[contaminated] = Y[contaminated] + shift
        else:
            Y[contaminated] = shift

    return Dataset(X, Y), TrueSubspace(beta=beta, rotation=rotation, contaminated=contaminated)


def principal_angle(B1, B2):
    """
    Largest principal angle (radians) between span(B1) and span(B2).

    Raises:
        InputError: either basis is rank deficient or the ambient dimensions differ
    """
    B1 = np.asarray(B1, dtype=float)
    B2 = np.asarray(B2, dtype=float)
    B1 = B1.reshape(-1, 1) if B1.ndim == 1 else B1
    B2 = B2.reshape(-1, 1) if B2.ndim == 1 else B2
    if B1.shape[0] != B2.shape[0]:
        raise InputError("Bases live in different dimensions: %d vs %d" % (B1.shape[0], B2.shape[0]))
    for name, B in (("B1", B1), ("B2", B2)):
        if np.linalg.matrix_rank(B) < B.shape[1]:
            raise InputError("%s is rank deficient" % name)
    angles = scipy.linalg.subspace_angles(B1, B2)
    return float(np.clip(np.max(angles), 0.0, np.pi / 2))


def _replication(task):
    spec, methods, rep = task
    data, truth = generate(spec)
    cells = []
    for method in methods:
        start = time.perf_counter()
        try:
            result = fit(
                data,
                spec.d,
                method.alpha,
                method.optimizer,
                k_folds=method.k_folds,
                seed=spec.seed,
            )
        except RsdrError as e:
            logger.warning("Replication %d, method %s failed: %s", rep, method.label, e)
            cells.append(None)
            continue
        elapsed = time.perf_counter() - start
        cells.append((principal_angle(result.beta_hat, truth.beta), elapsed))
    return cells


def replicate(spec_base, methods, reps=30, n_jobs=1):
    """
    Run every method on `reps` datasets drawn with seeds seed_base + 1 .. seed_base + reps.

    Failed fits are excluded from the aggregates and counted per method.
    """
    if reps < 1:
        raise ParameterError("reps must be >= 1, got %r" % reps)
    methods = list(methods)
    tasks = [
        (spec_base.model_copy(update={"seed": spec_base.seed + r}), methods, r)
        for r in range(1, reps + 1)
    ]
    per_rep = Helpers.parallel_map(_replication, tasks, n_jobs)

    report = ReplicationReport(replications=reps)
    for j, method in enumerate(methods):
        done = [cells[j] for cells in per_rep if cells[j] is not None]
        angles = [c[0] for c in done]
        times = [c[1] for c in done]
        angle_mean, angle_sd = Helpers.mean_sd(angles)
        time_mean, time_sd = Helpers.mean_sd(times)
        report.rows.append(
            MethodSummary(
                model=spec_base.label,
                method=method.label,
                angle_mean=angle_mean,
                angle_sd=angle_sd,
                time_mean=time_mean,
                time_sd=time_sd,
                reps=len(done),
                failures=reps - len(done),
                angles=angles,
            )
        )
    return report


def ar1_covariance(p, rho=AR1_RHO):
    """Sigma_jk = rho^|j-k|"""
    return scipy.linalg.toeplitz(rho ** np.arange(p))


def generate_ar1_outlier_data(n, p, n_outliers, seed=0):
    """
    AR(1) design with planted response outliers.

    Clean rows follow Y = X beta + e with beta = (1,1,1,1,1,0,...,0); at
    n_outliers random rows Y = X gamma + e with gamma = (0,0,0,0,0,1,...,1).

    Returns:
        (Dataset, boolean outlier flags)
    """
    if p < 10:
        raise ParameterError("AR(1) design needs p >= 10, got %d" % p)
    if not 0 <= n_outliers < n:
        raise ParameterError("n_outliers must satisfy 0 <= n_outliers < n, got %d" % n_outliers)
    rng = Helpers.rng(seed, "data")
    L = scipy.linalg.cholesky(ar1_covariance(p), lower=True)
    X = rng.standard_normal((n, p)) @ L.T
    eps = rng.standard_normal(n)

    beta = np.zeros(p)
    beta[:AR1_SIGNAL] = 1.0
    gamma = np.ones(p)
    gamma[:AR1_SIGNAL] = 0.0

    Y = X @ beta + eps
    flags = np.zeros(n, dtype=bool)
    if n_outliers:
        idx = Helpers.rng(seed, "outliers").choice(n, size=n_outliers, replace=False)
        flags[idx] = True
        Y[idx] = X[idx] @ gamma + eps[idx]
    return Dataset(X, Y), flags


def reducer_label(config):
    """PCA-2, rSDR-0.5-3 or raw"""
    if config.reducer == "pca":
        return "PCA-%d" % config.d
    if config.reducer == "rsdr":
        return "rSDR-%g-%d" % (config.alpha, config.d)
    return "raw"


def _roc_replication(task):
    n, p, n_outliers, configs, seed = task
    data, flags = generate_ar1_outlier_data(n, p, n_outliers, seed)
    out = []
    for config in configs:
        scores = loo_dcor_scores(reduce_predictors(data, config, seed), data.Y)
        out.append((scores, flags))
    return out


def roc_study(n, p, n_outliers, configs, reps=10, seed=0, n_jobs=1):
    """
    Outlier-detection ROC comparison of reducer configurations.

    Replication r uses seed + r. Every configuration is scored on the same
    datasets; AUCs are computed per replication and on the pooled scores.
    """
    if reps < 1:
        raise ParameterError("reps must be >= 1, got %r" % reps)
    configs = [c if isinstance(c, OutlierConfig) else OutlierConfig(**c) for c in configs]
    tasks = [(n, p, n_outliers, configs, seed + r) for r in range(1, reps + 1)]
    per_rep = Helpers.parallel_map(_roc_replication, tasks, n_jobs)

    labels = [reducer_label(c) for c in configs]
    aucs, mean_auc, pooled = {}, {}, {}
    for j, label in enumerate(labels):
        results = [roc(scores, flags) for scores, flags in (rep[j] for rep in per_rep)]
        aucs[label] = [r.auc for r in results]
        mean_auc[label] = float(np.mean(aucs[label]))
        all_scores = np.concatenate([rep[j][0] for rep in per_rep])
        all_flags = np.concatenate([rep[j][1] for rep in per_rep])
        pooled[label] = roc(all_scores, all_flags)
        logger.info("%s: mean AUC %.4f over %d replications", label, mean_auc[label], reps)
    return RocStudyReport(labels=labels, aucs=aucs, mean_auc=mean_auc, pooled=pooled, replications=reps)
