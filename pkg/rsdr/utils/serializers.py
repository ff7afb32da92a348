"""
Serialization utility functions for rsdr result objects.
"""

import math

import numpy as np


class Serializers:
    """Serialization utility functions (static methods)"""

    @staticmethod
    def serialize_value(value):
        """Convert numpy scalars/arrays to JSON types; NaN and inf become None"""
        if isinstance(value, np.ndarray):
            return [Serializers.serialize_value(v) for v in value.tolist()]
        if isinstance(value, (list, tuple)):
            return [Serializers.serialize_value(v) for v in value]
        if isinstance(value, (np.bool_, bool)):
            return bool(value)
        if isinstance(value, (np.integer, int)):
            return int(value)
        if isinstance(value, (np.floating, float)):
            value = float(value)
            return value if math.isfinite(value) else None
        return value

    @staticmethod
    def serialize_trace(trace):
        """Serialize an OptimizeTrace"""
        return {
            "objective_values": Serializers.serialize_value(trace.objective_values),
            "step_sizes": Serializers.serialize_value(trace.step_sizes),
            "iterations": trace.iterations,
            "converged": bool(trace.converged),
        }

    @staticmethod
    def serialize_cv_report(report):
        """Serialize a CVReport"""
        if report is None:
            return None
        return {
            "grid": Serializers.serialize_value(report.grid),
            "fold_scores": Serializers.serialize_value(report.fold_scores),
            "mean_validation_scores": Serializers.serialize_value(report.mean_validation_scores),
            "chosen_alpha": float(report.chosen_alpha),
        }

    @staticmethod
    def serialize_fit_result(result):
        """Serialize a FitResult; matrices are lists of rows"""
        return {
            "d": result.d,
            "alpha_used": result.alpha_used,
            "init_source": result.init_source.value,
            "beta_hat": Serializers.serialize_value(result.beta_hat),
            "C_hat": Serializers.serialize_value(result.C_hat.C),
            "final_objective": Serializers.serialize_value(result.final_objective),
            "trace": Serializers.serialize_trace(result.trace),
            "cv_report": Serializers.serialize_cv_report(result.cv_report),
        }

    @staticmethod
    def serialize_outlier_scores(scores):
        """Serialize OutlierScores with the flagged row indices"""
        return {
            "reducer": scores.reducer,
            "threshold": Serializers.serialize_value(scores.threshold),
            "scores": Serializers.serialize_value(scores.scores),
            "flags": Serializers.serialize_value(scores.flags),
            "flagged_rows": [int(i) for i in np.flatnonzero(scores.flags)],
            "n_flagged": scores.n_flagged,
        }

    @staticmethod
    def serialize_roc(result):
        """Serialize a RocResult"""
        return {
            "auc": float(result.auc),
            "fpr": Serializers.serialize_value(result.fpr),
            "tpr": Serializers.serialize_value(result.tpr),
        }

    @staticmethod
    def serialize_replication_report(report):
        """
        Serialize a ReplicationReport without wall-clock fields.

        Timings live in serialize_replication_timing so the result document
        stays identical across runs with the same seed.
        """
        rows = []
        for row in report.rows:
            rows.append(
                {
                    "case": row.case,
                    "model": row.model,
                    "method": row.method,
                    "angle_mean": Serializers.serialize_value(row.angle_mean),
                    "angle_sd": Serializers.serialize_value(row.angle_sd),
                    "reps": row.reps,
                    "failures": row.failures,
                    "angles": Serializers.serialize_value(row.angles),
                }
            )
        return {"replications": report.replications, "rows": rows}

    @staticmethod
    def serialize_replication_timing(report):
        """Wall-clock seconds per (model, method)"""
        return {
            row.case: {
                "time_mean_s": Serializers.serialize_value(row.time_mean),
                "time_sd_s": Serializers.serialize_value(row.time_sd),
            }
            for row in report.rows
        }

    @staticmethod
    def serialize_roc_study(report):
        """Serialize a RocStudyReport"""
        return {
            "replications": report.replications,
            "configurations": [
                {
                    "label": label,
                    "aucs": Serializers.serialize_value(report.aucs[label]),
                    "mean_auc": Serializers.serialize_value(report.mean_auc[label]),
                    "pooled_roc": Serializers.serialize_roc(report.pooled[label]),
                }
                for label in report.labels
            ],
        }
