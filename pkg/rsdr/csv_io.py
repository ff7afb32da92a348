"""
CSV ingestion and result emission: datasets, Table-style replication
summaries, ROC point sets and the JSON result document.
"""

import json
import logging
import sys

import numpy as np
import pandas as pd
from pandas.api.types import is_numeric_dtype

from .dcov import Dataset
from .errors import InputError

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ["case", "angle_mean", "angle_sd", "time_mean_s", "time_sd_s", "reps"]


def _read_frame(path):
    try:
        return pd.read_csv(path, float_precision="round_trip", skipinitialspace=True)
    except FileNotFoundError:
        raise InputError("File not found: %s" % path)
    except (OSError, UnicodeDecodeError) as e:
        raise InputError("Cannot read %s: %s" % (path, e))
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InputError("Malformed CSV %s: %s" % (path, e))


def _coerce_numeric(frame, path):
    """Convert every column to float, reporting the first non-numeric cell"""
    for column in frame.columns:
        if is_numeric_dtype(frame[column]):
            frame[column] = frame[column].astype(float)
            continue
        coerced = pd.to_numeric(frame[column], errors="coerce")
        bad = frame[column].notna() & coerced.isna()
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            # header is line 1
            raise InputError(
                "%s: non-numeric value %r at line %d, column %r"
                % (path, frame[column].iloc[row], row + 2, column)
            )
        frame[column] = coerced.astype(float)
    return frame


def _resolve_response(frame, selector):
    columns = list(frame.columns)
    if selector is None:
        return columns[-1]
    if isinstance(selector, (int, np.integer)):
        if not -len(columns) <= selector < len(columns):
            raise InputError(
                "Response index %d is out of range for %d columns" % (selector, len(columns))
            )
        return columns[selector]
    if selector not in columns:
        raise InputError("Response column %r not found (columns: %s)" % (selector, ", ".join(map(str, columns))))
    return selector


def load_csv(path, response=None, standardize=False):
    """
    Load a header-row CSV into a Dataset.

    Args:
        path: CSV file
        response: Column name, integer position, or None for the last column
        standardize: Scale every column, response included, to mean 0 and variance 1

    Rows with any missing cell are dropped with a warning.

    Raises:
        InputError: unreadable file, non-numeric cell, unknown response column,
            or fewer than 2 complete rows
    """
    frame = _read_frame(path)
    if frame.shape[1] < 2:
        raise InputError("%s needs at least one predictor and one response column" % path)
    target = _resolve_response(frame, response)
    frame = _coerce_numeric(frame, path)

    missing = frame.isna().any(axis=1)
    if missing.any():
        logger.warning("Dropped %d of %d rows with missing cells", int(missing.sum()), len(frame))
        frame = frame.loc[~missing]
    if len(frame) < 2:
        raise InputError("%s has %d complete rows; at least 2 are required" % (path, len(frame)))

    if standardize:
        sd = frame.std(ddof=1)
        constant = sd.index[sd.to_numpy() <= 0.0].tolist()
        if constant:
            raise InputError("Cannot standardize constant columns: %s" % ", ".join(map(str, constant)))
        frame = (frame - frame.mean()) / sd
    Y = frame[target].to_numpy(dtype=float)
    X = frame.drop(columns=[target])
    logger.info("Loaded %s: n=%d, p=%d, response %r", path, X.shape[0], X.shape[1], target)
    return Dataset(X.to_numpy(dtype=float), Y)


def _write_frame(frame, path, float_format):
    try:
        frame.to_csv(path, index=False, float_format=float_format)
    except OSError as e:
        raise InputError("Cannot write %s: %s" % (path, e))


def emit_dataset(data, path):
    """Write a Dataset as x1..xp,y at full precision"""
    columns = ["x%d" % (j + 1) for j in range(data.p)]
    frame = pd.DataFrame(data.X, columns=columns)
    frame["y"] = data.Y
    _write_frame(frame, path, "%.17g")


def emit_table(report, path):
    """
    One row per (model, method): angle and time mean/sd at 4 decimals.

    An empty report produces a header-only file.
    """
    rows = [
        [row.case, row.angle_mean, row.angle_sd, row.time_mean, row.time_sd, row.reps]
        for row in report.rows
    ]
    _write_frame(pd.DataFrame(rows, columns=TABLE_COLUMNS), path, "%.4f")


def emit_roc(result, path):
    """Two-column (fpr, tpr) CSV ordered by fpr"""
    frame = pd.DataFrame({"fpr": result.fpr, "tpr": result.tpr})
    _write_frame(frame, path, "%.17g")


def load_scores(path):
    """
    Read `score` and `label` columns for an ROC evaluation.

    Labels may be 0/1 or true/false.
    """
    frame = _read_frame(path)
    for column in ("score", "label"):
        if column not in frame.columns:
            raise InputError("%s lacks a %r column" % (path, column))
    frame = frame[["score", "label"]].dropna()
    labels = frame["label"]
    if labels.dtype == object:
        labels = labels.astype(str).str.strip().str.lower().map({"true": 1, "false": 0, "1": 1, "0": 0})
        if labels.isna().any():
            raise InputError("%s: labels must be 0/1 or true/false" % path)
    frame = _coerce_numeric(frame[["score"]].copy(), path)
    return frame["score"].to_numpy(dtype=float), labels.to_numpy().astype(bool)


def write_document(document, path=None, timing=None):
    """
    Write the JSON result document to `path` (stdout when None).

    Wall-clock data goes to `<path>.timing.json` so the document itself is
    reproducible byte for byte.
    """
    text = json.dumps(document, indent=2, allow_nan=False) + "\n"
    if path is None:
        sys.stdout.write(text)
        if timing:
            logger.debug("Timing: %s", json.dumps(timing, allow_nan=False))
        return
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        if timing:
            with open(path + ".timing.json", "w", encoding="utf-8") as f:
                f.write(json.dumps(timing, indent=2, allow_nan=False) + "\n")
    except OSError as e:
        raise InputError("Cannot write %s: %s" % (path, e))
    logger.info("Wrote %s", path)
