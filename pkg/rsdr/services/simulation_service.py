"""
Simulation service: replicated model fits summarised Table-style.
"""

from ..csv_io import emit_table
from ..simulation import replicate
from ..utils import Serializers


class SimulationService:
    """Replication service"""

    def __init__(self, n_jobs, invoke_fn):
        self.n_jobs = n_jobs
        self._invoke = invoke_fn

    def replicate(self, spec, methods, reps, table=None):
        """
        Run every method on `reps` generated datasets.

        Returns:
            dict with the report and, under "timing", its wall-clock columns
        """
        report = self._invoke("simulate", replicate, spec, methods, reps, self.n_jobs)
        if table:
            emit_table(report, table)
        return {
            "model": spec.label,
            "n": spec.n,
            "p": spec.p,
            "contaminated": spec.contaminated,
            **Serializers.serialize_replication_report(report),
            "timing": Serializers.serialize_replication_timing(report),
        }
