"""Training data container and column matching."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from paydev.errors import ColumnMismatchError, SingleClassError


@dataclass
class Dataset:
    """Feature matrix with binary labels (1 = hired)."""

    X: np.ndarray
    y: np.ndarray
    columns: list[str]
    ids: list[str]


def make_dataset(X, y, columns, ids) -> Dataset:
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int8)
    if X.ndim != 2 or X.shape[0] != len(y):
        raise ValueError("X and y shapes disagree")
    if X.shape[1] != len(columns):
        raise ValueError("column names do not match X width")
    return Dataset(X=X, y=y, columns=list(columns), ids=list(ids))


def check_training(data: Dataset) -> None:
    if len(data.y) < 2:
        raise ValueError("training needs at least two rows")
    if len(np.unique(data.y)) < 2:
        raise SingleClassError("training data contains a single class")


def impute_median(X):
    """Fill NaN with per-column medians; returns (filled X, medians)."""
    X = np.array(X, dtype=np.float64, copy=True)
    medians = np.zeros(X.shape[1])
    for j in range(X.shape[1]):
        col = X[:, j]
        nan = np.isnan(col)
        if nan.any():
            good = col[~nan]
            medians[j] = float(np.median(good)) if good.size else 0.0
            col[nan] = medians[j]
        else:
            medians[j] = float(np.median(col)) if col.size else 0.0
    return X, medians


def fill_missing(X, medians):
    X = np.array(X, dtype=np.float64, copy=True)
    for j in range(X.shape[1]):
        nan = np.isnan(X[:, j])
        if nan.any():
            X[nan, j] = medians[j]
    return X


def align_columns(X, columns, model_columns):
    """Reorder X's columns to the model's order; error on any mismatch."""
    if list(columns) == list(model_columns):
        return X
    missing = set(model_columns) - set(columns)
    extra = set(columns) - set(model_columns)
    if missing or extra:
        raise ColumnMismatchError(missing=missing, extra=extra)
    order = [list(columns).index(c) for c in model_columns]
    return X[:, order]
