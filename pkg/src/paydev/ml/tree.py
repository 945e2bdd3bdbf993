"""Binary CART classifier grown by greedy Gini minimization.

Splits are midpoints between consecutive distinct feature values; a split
is kept only when it cuts the tree's misclassification cost by at least
cp relative to the root's cost. Defaults mirror the usual recursive
partitioning settings (minsplit 20, cp 0.01, maxdepth 30).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from paydev.ml import kernels
from paydev.ml.dataset import Dataset, check_training, fill_missing, impute_median


@dataclass
class TreeNode:
    n: int
    pos: int
    feature: int = -1  # -1 marks a leaf
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0

    def proba_hired(self) -> float:
        return self.pos / self.n


@dataclass
class TreeModel:
    root: TreeNode
    columns: list[str]
    impute: np.ndarray
    minsplit: int
    cp: float
    maxdepth: int | None
    importance: np.ndarray = field(default=None)


def grow_tree(X, y, idx, *, minsplit, cp, maxdepth, mtry=None, rng=None):
    """Grow one tree over rows `idx`; returns (root, importance).

    mtry, when set, samples that many candidate features (without
    replacement, from rng) at every node. Iterative preorder so depth is
    not bounded by the interpreter recursion limit.
    """
    p = X.shape[1]
    all_feats = np.arange(p, dtype=np.int64)
    n_root = len(idx)
    pos_root = int(y[idx].sum())
    root_err = n_root - max(pos_root, n_root - pos_root)
    importance = np.zeros(p)

    root = TreeNode(n=n_root, pos=pos_root)
    stack = [(root, idx, 0)]
    while stack:
        node, node_idx, depth = stack.pop()
        n = node.n
        pos = node.pos
        if pos == 0 or pos == n or n < minsplit:
            continue
        if maxdepth is not None and depth >= maxdepth:
            continue
        if mtry is not None and mtry < p:
            feats = np.sort(rng.choice(p, size=mtry, replace=False)).astype(np.int64)
        else:
            feats = all_feats
        f, thr, child_score = kernels.best_split(X, y, node_idx, feats)
        if f < 0:
            continue

        left_mask = X[node_idx, f] <= thr
        left_idx = node_idx[left_mask]
        right_idx = node_idx[~left_mask]
        pos_l = int(y[left_idx].sum())
        pos_r = pos - pos_l

        # rpart-style pruning: relative misclassification improvement >= cp.
        err_node = n - max(pos, n - pos)
        err_children = (
            len(left_idx) - max(pos_l, len(left_idx) - pos_l)
            + len(right_idx) - max(pos_r, len(right_idx) - pos_r)
        )
        if root_err > 0 and (err_node - err_children) / root_err < cp:
            continue

        importance[f] += kernels.node_score(n, pos) - child_score
        node.feature = int(f)
        node.threshold = float(thr)
        node.left = TreeNode(n=len(left_idx), pos=pos_l)
        node.right = TreeNode(n=len(right_idx), pos=pos_r)
        stack.append((node.right, right_idx, depth + 1))
        stack.append((node.left, left_idx, depth + 1))
    return root, importance


def fit_tree(data: Dataset, minsplit=20, cp=0.01, maxdepth=30) -> TreeModel:
    check_training(data)
    X, medians = impute_median(data.X)
    X = np.ascontiguousarray(X)
    y = np.asarray(data.y, dtype=np.int8)
    idx = np.arange(len(y), dtype=np.int64)
    root, importance = grow_tree(X, y, idx, minsplit=minsplit, cp=cp, maxdepth=maxdepth)
    return TreeModel(
        root=root,
        columns=list(data.columns),
        impute=medians,
        minsplit=minsplit,
        cp=cp,
        maxdepth=maxdepth,
        importance=importance,
    )


def tree_proba(root: TreeNode, X) -> np.ndarray:
    """P(hired) per row of X."""
    out = np.empty(len(X), dtype=np.float64)
    stack = [(root, np.arange(len(X)))]
    while stack:
        node, idx = stack.pop()
        if idx.size == 0:
            continue
        if node.is_leaf:
            out[idx] = node.proba_hired()
            continue
        mask = X[idx, node.feature] <= node.threshold
        stack.append((node.right, idx[~mask]))
        stack.append((node.left, idx[mask]))
    return out


def predict_tree(model: TreeModel, X) -> np.ndarray:
    X = fill_missing(np.asarray(X, dtype=np.float64), model.impute)
    return tree_proba(model.root, X)
