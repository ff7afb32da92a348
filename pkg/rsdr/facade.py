"""
rsdr Facade
Single entry point for the command line and scripts. Owns the thread
budget and times every library call it dispatches.
"""

import logging
import time

from .csv_io import load_csv, load_scores
from .services import FitService, OutlierService, SimulationService

logger = logging.getLogger(__name__)


class RsdrFacade:
    """
    Facade for rsdr operations.

    This class delegates all operations to specialized service classes:
    - FitService: robust SDR fits and alpha cross-validation
    - OutlierService: influence scores, ROC evaluation, ROC study
    - SimulationService: replicated model fits
    """

    def __init__(self, threads=1):
        """
        Initialize facade.

        Args:
            threads: Worker count for replications, folds and bootstrap
        """
        self.threads = threads
        self.timings = {}

        # Initialize service classes
        self._fit = FitService(threads, self._invoke)
        self._outlier = OutlierService(threads, self._invoke)
        self._simulation = SimulationService(threads, self._invoke)

    def _invoke(self, label, fn, *args, **kwargs):
        """Call fn and record its wall-clock seconds under `label`"""
        start = time.perf_counter()
        try:
            return fn(*args, **kwargs)
        finally:
            elapsed = time.perf_counter() - start
            self.timings[label] = self.timings.get(label, 0.0) + elapsed
            logger.debug("%s took %.3fs", label, elapsed)

    # ==================== Data ====================

    def load_dataset(self, path, response=None, standardize=False):
        """Load a CSV into a Dataset"""
        return self._invoke("load", load_csv, path, response, standardize)

    def load_scores(self, path):
        """Load score/label columns for ROC evaluation"""
        return self._invoke("load", load_scores, path)

    # ==================== Estimation ====================

    def fit(self, data, d, alpha, optimizer, k_folds=5, seed=0):
        """Fit robust SDR (alpha may be "cv")"""
        return self._fit.fit(data, d, alpha, optimizer, k_folds=k_folds, seed=seed)

    def cross_validate(self, data, d, grid, optimizer, k_folds=5, seed=0):
        """Choose alpha by k-fold cross-validation"""
        return self._fit.cross_validate(data, d, grid, optimizer, k_folds=k_folds, seed=seed)

    # ==================== Outliers ====================

    def detect_outliers(self, data, config, seed=0):
        """Influence scores, bootstrap threshold and flags"""
        return self._outlier.detect(data, config, seed)

    def evaluate_roc(self, scores, labels, table=None):
        """ROC curve and AUC of given scores"""
        return self._outlier.evaluate(scores, labels, table)

    def roc_study(self, n, p, n_outliers, configs, reps, seed=0, table=None):
        """AR(1) outlier-detection ROC study"""
        return self._outlier.study(n, p, n_outliers, configs, reps, seed, table)

    # ==================== Simulation ====================

    def simulate(self, spec, methods, reps, table=None):
        """Replicated fits on generated data"""
        return self._simulation.replicate(spec, methods, reps, table)
