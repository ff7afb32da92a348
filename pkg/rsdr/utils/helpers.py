"""
Common helper functions for rsdr computations.
"""

import zlib

import numpy as np
from joblib import Parallel, delayed


class Helpers:
    """Common helper functions (static methods)"""

    @staticmethod
    def seed_sequence(seed, purpose):
        """
        Derive an independent SeedSequence for a named purpose.

        Args:
            seed: Base 64-bit integer seed
            purpose: Stream name such as "data", "folds", "bootstrap", "rotation"

        The same (seed, purpose) pair always yields the same stream, and
        streams with different purposes never share draws.
        """
        entropy = int(seed) & 0xFFFFFFFFFFFFFFFF
        tag = zlib.crc32(purpose.encode("utf-8"))
        return np.random.SeedSequence([entropy, tag])

    @staticmethod
    def rng(seed, purpose):
        """Generator for the named stream of `seed`"""
        return np.random.default_rng(Helpers.seed_sequence(seed, purpose))

    @staticmethod
    def spawn(seed, purpose, count):
        """Split a named stream into `count` child streams (one per task)"""
        return Helpers.seed_sequence(seed, purpose).spawn(count)

    @staticmethod
    def parallel_map(fn, items, n_jobs=1):
        """
        Apply fn to every item, preserving input order.

        n_jobs=1 runs in-process; results never depend on n_jobs because
        every task carries its own inputs (and its own seed stream).
        """
        items = list(items)
        if n_jobs is None or n_jobs == 1 or len(items) <= 1:
            return [fn(item) for item in items]
        return Parallel(n_jobs=n_jobs)(delayed(fn)(item) for item in items)

    @staticmethod
    def mean_sd(values):
        """Mean and sample standard deviation; sd is 0 for fewer than two values"""
        arr = np.asarray(values, dtype=float)
        if arr.size == 0:
            return float("nan"), float("nan")
        mean = float(np.mean(arr))
        sd = float(np.std(arr, ddof=1)) if arr.size > 1 else 0.0
        return mean, sd
