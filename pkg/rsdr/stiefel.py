"""
Projected gradient ascent of the eta-regularised distance covariance
objective over the Stiefel manifold St(d, p) = {C : C^T C = I_d}.
"""

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field
from scipy.spatial.distance import pdist, squareform

from .errors import DegenerateProjectionError, InputError, ParameterError

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-8


@dataclass(frozen=True)
class StiefelPoint:
    """p x d matrix with orthonormal columns"""

    C: np.ndarray

    def __post_init__(self):
        C = np.asarray(self.C, dtype=float)
        if C.ndim == 1:
            C = C.reshape(-1, 1)
        if C.ndim != 2 or C.shape[1] > C.shape[0]:
            raise ParameterError("Stiefel point must be p x d with d <= p, got %s" % (C.shape,))
        err = np.linalg.norm(C.T @ C - np.eye(C.shape[1]))
        if err > FEASIBILITY_TOL:
            raise InputError("Matrix is not orthonormal: ||C^T C - I||_F = %.3e" % err)
        object.__setattr__(self, "C", C)

    @property
    def p(self):
        return self.C.shape[0]

    @property
    def d(self):
        return self.C.shape[1]


class OptimizerConfig(BaseModel):
    """Settings for the projected gradient ascent"""

    model_config = ConfigDict(frozen=True)

    eta: float = Field(1e-6, gt=0)
    init_step: float = Field(1.0, gt=0)
    backtrack_factor: float = Field(0.5, gt=0, lt=1)
    armijo_c: float = Field(1e-4, gt=0, lt=1)
    tol_obj: float = Field(1e-8, gt=0)
    max_iter: int = Field(500, ge=1)
    max_backtracks: int = Field(30, ge=1)
    grad_tol: float = Field(1e-10, ge=0)
    update: Literal["riemannian", "euclidean"] = "riemannian"


@dataclass
class OptimizeTrace:
    """Objective values of the accepted iterates, starting with C0"""

    objective_values: list = field(default_factory=list)
    step_sizes: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def _as_matrix(C):
    if isinstance(C, StiefelPoint):
        return C.C
    M = np.asarray(C, dtype=float)
    return M.reshape(-1, 1) if M.ndim == 1 else M


def _check_dims(C, Z, B):
    n, p = Z.shape
    if C.shape[0] != p:
        raise InputError("C has %d rows but Z has %d columns" % (C.shape[0], p))
    if B.shape != (n, n):
        raise InputError("B must be %d x %d, got %s" % (n, n, B.shape))


def project_stiefel(M):
    """
    Nearest orthonormal-column matrix: U V^T from the thin SVD of M.

    Raises DegenerateProjectionError when M is numerically rank deficient.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    if not np.all(np.isfinite(M)):
        raise DegenerateProjectionError("Cannot project a matrix with non-finite entries")
    U, s, Vt = scipy.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] <= 0.0 or s[-1] <= 1e-12 * s[0]:
        raise DegenerateProjectionError(
            "Matrix is rank deficient (singular values %s)" % np.array2string(s, precision=3)
        )
    return StiefelPoint(U @ Vt)


def _projected_sq_dists(C, Z):
    P = Z @ C
    return squareform(pdist(P, metric="sqeuclidean"))


def objective_f_eta(C, Z, B, alpha, eta):
    """
    F_eta(C) = (1/n^2) sum_kl (||C^T z_k - C^T z_l||^2 + eta)^(alpha/2) B_kl

    Args:
        C: StiefelPoint or p x d array
        Z: n x p whitened predictors, samples as rows
        B: n x n double-centered response distances (array or CenteredDistanceMatrix)
    """
    C = _as_matrix(C)
    Z = np.asarray(Z, dtype=float)
    B = getattr(B, "values", B)
    _check_dims(C, Z, B)
    n = Z.shape[0]
    weights = (_projected_sq_dists(C, Z) + eta) ** (alpha / 2.0)
    return float(np.sum(weights * B) / n**2)


def euclidean_gradient(C, Z, B, alpha, eta):
    """
    dF_eta/dC = (alpha/n^2) sum_kl (z_k - z_l)(z_k - z_l)^T C B_kl / (||C^T(z_k - z_l)||^2 + eta)^((2-alpha)/2)

    The pair sum is evaluated as 2 Z^T (D - M) Z C with M_kl the scalar pair
    weights and D = diag(M 1).
    """
    C = _as_matrix(C)
    Z = np.asarray(Z, dtype=float)
    B = getattr(B, "values", B)
    _check_dims(C, Z, B)
    n = Z.shape[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        M = B * (_projected_sq_dists(C, Z) + eta) ** ((alpha - 2.0) / 2.0)
    # z_k - z_k = 0, so the diagonal never contributes
    np.fill_diagonal(M, 0.0)
    laplacian = np.diag(M.sum(axis=1)) - M
    return (2.0 * alpha / n**2) * (Z.T @ (laplacian @ (Z @ C)))


def riemannian_gradient(C, G):
    """Tangent-space projection G - C sym(C^T G)"""
    C = _as_matrix(C)
    G = np.asarray(G, dtype=float).reshape(C.shape)
    CtG = C.T @ G
    return G - C @ ((CtG + CtG.T) / 2.0)


def optimize(Z, B, alpha, config, C0):
    """
    Algorithm: C <- P_S(C + step * direction), step from Armijo backtracking.

    The direction is the Riemannian gradient (default) or the raw Euclidean
    gradient (config.update == "euclidean"). Only steps that satisfy
    F(C_new) >= F(C) + c * step * ||grad_R||^2 are accepted, so the trace is
    nondecreasing.

    Returns:
        (StiefelPoint, OptimizeTrace): best iterate and its trace
    """
    config = config or OptimizerConfig()
    Z = np.asarray(Z, dtype=float)
    B = getattr(B, "values", B)
    point = C0 if isinstance(C0, StiefelPoint) else StiefelPoint(C0)
    C = point.C
    _check_dims(C, Z, B)

    f = objective_f_eta(C, Z, B, alpha, config.eta)
    trace = OptimizeTrace(objective_values=[f])

    for it in range(1, config.max_iter + 1):
        trace.iterations = it
        G = euclidean_gradient(C, Z, B, alpha, config.eta)
        rgrad = riemannian_gradient(C, G)
        gnorm2 = float(np.sum(rgrad * rgrad))
        if np.sqrt(gnorm2) <= config.grad_tol:
            trace.converged = True
            break

        direction = rgrad if config.update == "riemannian" else G
        step = config.init_step
        accepted = None
        for _ in range(config.max_backtracks):
            try:
                candidate = project_stiefel(C + step * direction).C
            except DegenerateProjectionError:
                step *= config.backtrack_factor
                continue
            f_new = objective_f_eta(candidate, Z, B, alpha, config.eta)
            if f_new >= f + config.armijo_c * step * gnorm2:
                accepted = (candidate, f_new)
                break
            step *= config.backtrack_factor

        if accepted is None:
            logger.debug("Line search stalled at iteration %d (F=%.6g)", it, f)
            trace.converged = True
            break

        C, f_prev, f = accepted[0], f, accepted[1]
        trace.objective_values.append(f)
        trace.step_sizes.append(step)
        if abs(f - f_prev) <= config.tol_obj:
            trace.converged = True
            break

    return StiefelPoint(C), trace
