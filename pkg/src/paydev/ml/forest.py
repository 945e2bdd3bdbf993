"""Random forest: bagged fully-grown CART trees with per-node feature
sampling.

Every random draw comes from a per-tree generator seeded by (seed, tree
index), so the fitted model is a pure function of (seed, data) no matter
how many worker threads fit the trees.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from paydev.ml.dataset import Dataset, check_training, fill_missing, impute_median
from paydev.ml.tree import TreeNode, grow_tree, tree_proba


@dataclass
class ForestModel:
    trees: list[TreeNode]
    columns: list[str]
    impute: np.ndarray
    n_trees: int
    mtry: int
    seed: int
    bootstrap: bool
    importance: np.ndarray


def _tree_rng(seed, tree_index):
    return np.random.default_rng(np.random.SeedSequence(entropy=[int(seed), tree_index]))


def fit_forest(
    data: Dataset,
    n_trees=500,
    mtry=None,
    seed=0,
    bootstrap=True,
    n_jobs=1,
) -> ForestModel:
    check_training(data)
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    X, medians = impute_median(data.X)
    X = np.ascontiguousarray(X)
    y = np.asarray(data.y, dtype=np.int8)
    n, p = X.shape
    if mtry is None:
        mtry = max(1, int(math.isqrt(p)))
    if not 1 <= mtry <= p:
        raise ValueError(f"mtry must be in [1, {p}]")

    def build(t):
        rng = _tree_rng(seed, t)
        if bootstrap:
            idx = np.sort(rng.integers(0, n, size=n)).astype(np.int64)
        else:
            idx = np.arange(n, dtype=np.int64)
        return grow_tree(
            X, y, idx, minsplit=2, cp=0.0, maxdepth=None, mtry=mtry, rng=rng
        )

    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            grown = list(pool.map(build, range(n_trees)))
    else:
        grown = [build(t) for t in range(n_trees)]

    trees = [root for root, _ in grown]
    importance = np.zeros(p)
    for _, imp in grown:
        importance += imp
    importance /= n_trees

    return ForestModel(
        trees=trees,
        columns=list(data.columns),
        impute=medians,
        n_trees=n_trees,
        mtry=mtry,
        seed=seed,
        bootstrap=bootstrap,
        importance=importance,
    )


def predict_forest(model: ForestModel, X) -> np.ndarray:
    """Mean of the trees' leaf probabilities, accumulated in tree order."""
    X = fill_missing(np.asarray(X, dtype=np.float64), model.impute)
    total = np.zeros(len(X), dtype=np.float64)
    for root in model.trees:
        total += tree_proba(root, X)
    return total / model.n_trees
