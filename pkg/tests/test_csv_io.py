"""Tests for CSV ingestion and result emission."""

import json
import logging

import numpy as np
import pandas as pd
import pytest

from rsdr.csv_io import (
    TABLE_COLUMNS,
    emit_dataset,
    emit_roc,
    emit_table,
    load_csv,
    load_scores,
    write_document,
)
from rsdr.dcov import Dataset
from rsdr.errors import InputError
from rsdr.outlier import roc
from rsdr.simulation import MethodSummary, ReplicationReport


def write(tmp_path, text, name="in.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadCsv:
    """Tests for load_csv."""

    def test_last_column_is_response(self, tmp_path):
        data = load_csv(write(tmp_path, "a,b,y\n1,2,3\n4,5,6\n7,8,10\n"))
        assert (data.n, data.p) == (3, 2)
        np.testing.assert_array_equal(data.Y, [3.0, 6.0, 10.0])

    def test_response_by_name_and_index(self, tmp_path):
        path = write(tmp_path, "a,y,b\n1,2,3\n4,5,6\n")
        np.testing.assert_array_equal(load_csv(path, "y").Y, [2.0, 5.0])
        np.testing.assert_array_equal(load_csv(path, 0).Y, [1.0, 4.0])
        np.testing.assert_array_equal(load_csv(path, -1).Y, [3.0, 6.0])

    def test_missing_cell_row_dropped(self, tmp_path, caplog):
        path = write(tmp_path, "a,b,y\n1,2,3\n4,,6\n7,8,9\n10,11,12\n")
        with caplog.at_level(logging.WARNING, logger="rsdr.csv_io"):
            data = load_csv(path)
        assert data.n == 3
        assert "Dropped 1 of 4 rows" in caplog.text

    def test_standardize(self, csv_path):
        data = load_csv(csv_path, standardize=True)
        assert np.all(np.abs(data.X.mean(axis=0)) < 1e-10)
        np.testing.assert_allclose(data.X.var(axis=0, ddof=1), 1.0, atol=1e-10)
        assert abs(data.Y.mean()) < 1e-10
        assert data.Y.var(ddof=1) == pytest.approx(1.0, abs=1e-10)

    def test_non_numeric_cell_located(self, tmp_path):
        path = write(tmp_path, "a,b,y\n1,2,3\n4,oops,6\n")
        with pytest.raises(InputError, match=r"line 3, column 'b'"):
            load_csv(path)

    def test_unknown_response(self, tmp_path):
        with pytest.raises(InputError, match="not found"):
            load_csv(write(tmp_path, "a,y\n1,2\n3,4\n"), "z")

    def test_too_few_complete_rows(self, tmp_path):
        with pytest.raises(InputError, match="complete rows"):
            load_csv(write(tmp_path, "a,y\n1,2\n3,\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError):
            load_csv(tmp_path / "absent.csv")

    def test_constant_column_cannot_be_standardized(self, tmp_path):
        with pytest.raises(InputError, match="constant"):
            load_csv(write(tmp_path, "a,b,y\n1,5,1\n2,5,2\n3,5,4\n"), standardize=True)

    def test_round_trip_full_precision(self, tmp_path, rng):
        original = Dataset(rng.standard_normal((25, 3)) * 1e3, np.exp(rng.standard_normal(25)))
        path = tmp_path / "round.csv"
        emit_dataset(original, path)
        loaded = load_csv(path)
        np.testing.assert_array_equal(loaded.X, original.X)
        np.testing.assert_array_equal(loaded.Y, original.Y)


class TestEmitters:
    """Tests for table, ROC and document emission."""

    def test_table_row_per_case(self, tmp_path):
        report = ReplicationReport(
            rows=[MethodSummary("A(1)", "rSDR-1", 0.271234, 0.09, 0.5, 0.01, 30)], replications=30
        )
        path = tmp_path / "table.csv"
        emit_table(report, path)
        frame = pd.read_csv(path)
        assert list(frame.columns) == TABLE_COLUMNS
        assert len(frame) == 1
        assert path.read_text().splitlines()[1].startswith("A(1)/rSDR-1,0.2712,")

    def test_empty_table_is_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_table(ReplicationReport(), path)
        assert path.read_text().strip() == ",".join(TABLE_COLUMNS)

    def test_roc_points(self, tmp_path):
        path = tmp_path / "roc.csv"
        emit_roc(roc([0.9, 0.1, 0.5, 0.3], [1, 0, 1, 0]), path)
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["fpr", "tpr"]
        assert frame["fpr"].is_monotonic_increasing

    def test_load_scores(self, tmp_path):
        path = write(tmp_path, "score,label\n0.9,true\n0.2,false\n0.4,1\n")
        scores, labels = load_scores(path)
        np.testing.assert_array_equal(scores, [0.9, 0.2, 0.4])
        np.testing.assert_array_equal(labels, [True, False, True])

    def test_load_scores_needs_columns(self, tmp_path):
        with pytest.raises(InputError):
            load_scores(write(tmp_path, "s,l\n1,0\n"))

    def test_document_and_timing_sidecar(self, tmp_path):
        path = tmp_path / "out.json"
        write_document({"value": 0.1 + 0.2}, str(path), {"wall_clock_s": {"fit": 1.5}})
        assert json.loads(path.read_text())["value"] == 0.1 + 0.2
        assert json.loads((tmp_path / "out.json.timing.json").read_text())["wall_clock_s"]["fit"] == 1.5

    def test_document_to_stdout(self, capsys):
        write_document({"ok": True})
        assert json.loads(capsys.readouterr().out) == {"ok": True}

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(InputError):
            emit_table(ReplicationReport(), tmp_path / "missing" / "table.csv")
