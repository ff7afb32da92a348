"""
Outlier service: influence-score detection, ROC evaluation and the
AR(1) ROC study.
"""

import logging

from ..csv_io import emit_roc
from ..outlier import detect, roc
from ..simulation import roc_study
from ..utils import Serializers

logger = logging.getLogger(__name__)


class OutlierService:
    """Outlier detection service"""

    def __init__(self, n_jobs, invoke_fn):
        self.n_jobs = n_jobs
        self._invoke = invoke_fn

    def detect(self, data, config, seed=0):
        """Score and flag every row of `data`"""
        scores = self._invoke("detect", detect, data, config, seed, self.n_jobs)
        return {
            "n": data.n,
            "p": data.p,
            "gamma": config.gamma,
            "n_boot": config.n_boot,
            **Serializers.serialize_outlier_scores(scores),
        }

    def evaluate(self, scores, labels, table=None):
        """ROC of given scores against 0/1 labels"""
        result = self._invoke("roc", roc, scores, labels)
        if table:
            emit_roc(result, table)
        return Serializers.serialize_roc(result)

    def study(self, n, p, n_outliers, configs, reps, seed=0, table=None):
        """
        AR(1) ROC study over reducer configurations.

        `table` receives the pooled ROC points of the first configuration.
        """
        report = self._invoke(
            "roc_study",
            roc_study,
            n,
            p,
            n_outliers,
            configs,
            reps,
            seed,
            self.n_jobs,
        )
        if table:
            emit_roc(report.pooled[report.labels[0]], table)
            logger.info("ROC points of %s written to %s", report.labels[0], table)
        return {"n": n, "p": p, "n_outliers": n_outliers, **Serializers.serialize_roc_study(report)}
