"""Shared fixtures for the rsdr test suite."""

import numpy as np
import pytest

from rsdr.dcov import Dataset


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


@pytest.fixture
def linear_data(rng):
    """n=200, p=5, Y = beta'X + 0.01 noise with beta = e1 + e2"""
    X = rng.standard_normal((200, 5))
    beta = np.array([1.0, 1.0, 0.0, 0.0, 0.0]) / np.sqrt(2.0)
    Y = X @ beta + 0.01 * rng.standard_normal(200)
    return Dataset(X, Y), beta.reshape(-1, 1)


@pytest.fixture
def small_data(rng):
    """Small nondegenerate dataset for shape and error checks"""
    X = rng.standard_normal((30, 4))
    Y = X[:, 0] ** 2 + 0.5 * X[:, 1] + 0.1 * rng.standard_normal(30)
    return Dataset(X, Y)


@pytest.fixture
def csv_path(tmp_path, rng):
    """Model-C style CSV with a header row (x1..x6, y)"""
    X = rng.standard_normal((80, 6))
    Y = np.exp(X[:, 0] + 0.5 * X[:, 1]) * rng.standard_normal(80)
    lines = ["x1,x2,x3,x4,x5,x6,y"]
    for row, y in zip(X, Y):
        lines.append(",".join("%.17g" % v for v in row) + ",%.17g" % y)
    path = tmp_path / "data.csv"
    path.write_text("\n".join(lines) + "\n")
    return path
