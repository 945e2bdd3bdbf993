"""Human-readable model reports.

The tree report shows, per node, the volunteer ratio and the percentage of
developers the node covers; the logit report lists standardized
coefficients by absolute size; the forest report ranks features by mean
decrease in Gini.
"""

from __future__ import annotations

import numpy as np

from paydev.ml.forest import ForestModel
from paydev.ml.logit import LogitModel
from paydev.ml.tree import TreeModel, TreeNode


def _tree_lines(node: TreeNode, columns, n_root, depth, lines):
    indent = "  " * depth
    volunteer_ratio = (node.n - node.pos) / node.n
    share = 100.0 * node.n / n_root
    if node.is_leaf:
        label = "hired" if node.proba_hired() >= 0.5 else "volunteer"
        lines.append(
            f"{indent}leaf: {label} (volunteer {volunteer_ratio:.3f}, {share:.1f}%)"
        )
        return
    lines.append(
        f"{indent}split: {columns[node.feature]} <= {node.threshold:.6g} "
        f"(volunteer {volunteer_ratio:.3f}, {share:.1f}%)"
    )
    _tree_lines(node.left, columns, n_root, depth + 1, lines)
    _tree_lines(node.right, columns, n_root, depth + 1, lines)


def root_split_feature(model: TreeModel) -> str | None:
    """Name of the first splitting feature, None for a single-leaf tree."""
    if model.root.is_leaf:
        return None
    return model.columns[model.root.feature]


def introspect(model) -> str:
    if isinstance(model, LogitModel):
        order = np.argsort(-np.abs(model.coef))
        lines = ["logit coefficients (standardized features, |value| desc):"]
        lines += [f"  {model.columns[j]} {model.coef[j]:+.4f}" for j in order]
        lines.append(f"  intercept {model.intercept:+.4f}")
        return "\n".join(lines)
    if isinstance(model, TreeModel):
        lines = ["decision tree:"]
        _tree_lines(model.root, model.columns, model.root.n, 1, lines)
        return "\n".join(lines)
    if isinstance(model, ForestModel):
        order = np.argsort(-model.importance)
        lines = ["forest feature importance (mean decrease in Gini):"]
        lines += [f"  {model.columns[j]} {model.importance[j]:.4f}" for j in order]
        return "\n".join(lines)
    raise TypeError(f"not a model: {type(model).__name__}")
