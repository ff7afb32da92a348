"""
Estimation service: robust SDR fits and alpha cross-validation.
"""

from ..estimator import cross_validate_alpha, fit
from ..utils import Serializers


class FitService:
    """Fit and cross-validation service"""

    def __init__(self, n_jobs, invoke_fn):
        self.n_jobs = n_jobs
        self._invoke = invoke_fn

    def fit(self, data, d, alpha, optimizer, k_folds=5, seed=0):
        """
        Fit robust SDR.

        Args:
            data: Dataset
            d: Target dimension
            alpha: Exponent in (0, 2) or "cv"
            optimizer: OptimizerConfig
            k_folds: Folds used when alpha is "cv"
            seed: Base seed for the fold shuffle

        Returns:
            dict with the serialized FitResult
        """
        result = self._invoke(
            "fit",
            fit,
            data,
            d,
            alpha,
            optimizer,
            k_folds=k_folds,
            seed=seed,
            n_jobs=self.n_jobs,
        )
        return {"n": data.n, "p": data.p, **Serializers.serialize_fit_result(result)}

    def cross_validate(self, data, d, grid, optimizer, k_folds=5, seed=0):
        """Choose alpha over `grid` (None for the default grid)"""
        report = self._invoke(
            "cv",
            cross_validate_alpha,
            data,
            d,
            grid,
            k_folds,
            optimizer,
            seed,
            self.n_jobs,
        )
        return {"n": data.n, "p": data.p, "k_folds": k_folds, **Serializers.serialize_cv_report(report)}
