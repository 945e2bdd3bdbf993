"""Versioned model files.

A model file is one JSON object starting with the magic string
PAYDEVMODEL/1; floats serialize via repr so save/load round-trips exactly.
"""

from __future__ import annotations

import json

import numpy as np

from paydev.errors import SchemaError
from paydev.ml.forest import ForestModel
from paydev.ml.logit import LogitModel
from paydev.ml.tree import TreeModel, TreeNode

MAGIC = "PAYDEVMODEL/1"


def _node_to_obj(node: TreeNode):
    obj = {"n": node.n, "pos": node.pos}
    if not node.is_leaf:
        obj["feature"] = node.feature
        obj["threshold"] = node.threshold
        obj["left"] = _node_to_obj(node.left)
        obj["right"] = _node_to_obj(node.right)
    return obj


def _node_from_obj(obj) -> TreeNode:
    node = TreeNode(n=obj["n"], pos=obj["pos"])
    if "feature" in obj:
        node.feature = obj["feature"]
        node.threshold = obj["threshold"]
        node.left = _node_from_obj(obj["left"])
        node.right = _node_from_obj(obj["right"])
    return node


def model_kind(model) -> str:
    if isinstance(model, LogitModel):
        return "logit"
    if isinstance(model, TreeModel):
        return "tree"
    if isinstance(model, ForestModel):
        return "forest"
    raise TypeError(f"not a model: {type(model).__name__}")


def save_model(model, fileobj) -> None:
    kind = model_kind(model)
    if kind == "logit":
        params = {}
        payload = {
            "coef": list(model.coef),
            "intercept": model.intercept,
            "mean": list(model.mean),
            "scale": list(model.scale),
            "impute": list(model.impute),
            "converged": model.converged,
            "n_iter": model.n_iter,
            "loss_history": list(model.loss_history),
        }
    elif kind == "tree":
        params = {"minsplit": model.minsplit, "cp": model.cp, "maxdepth": model.maxdepth}
        payload = {
            "root": _node_to_obj(model.root),
            "impute": list(model.impute),
            "importance": list(model.importance),
        }
    else:
        params = {
            "n_trees": model.n_trees,
            "mtry": model.mtry,
            "seed": model.seed,
            "bootstrap": model.bootstrap,
        }
        payload = {
            "trees": [_node_to_obj(t) for t in model.trees],
            "impute": list(model.impute),
            "importance": list(model.importance),
        }
    obj = {
        "magic": MAGIC,
        "kind": kind,
        "columns": list(model.columns),
        "params": params,
        "payload": payload,
    }
    json.dump(obj, fileobj)
    fileobj.write("\n")


def load_model(fileobj):
    try:
        obj = json.load(fileobj)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"model file is not valid JSON: {exc.msg}") from None
    if not isinstance(obj, dict) or obj.get("magic") != MAGIC:
        raise SchemaError(f"not a {MAGIC} model file")
    kind = obj.get("kind")
    columns = obj.get("columns")
    params = obj.get("params", {})
    payload = obj.get("payload", {})
    if kind == "logit":
        return LogitModel(
            coef=np.array(payload["coef"], dtype=np.float64),
            intercept=payload["intercept"],
            mean=np.array(payload["mean"], dtype=np.float64),
            scale=np.array(payload["scale"], dtype=np.float64),
            columns=columns,
            impute=np.array(payload["impute"], dtype=np.float64),
            converged=payload["converged"],
            n_iter=payload["n_iter"],
            loss_history=list(payload.get("loss_history", [])),
        )
    if kind == "tree":
        return TreeModel(
            root=_node_from_obj(payload["root"]),
            columns=columns,
            impute=np.array(payload["impute"], dtype=np.float64),
            minsplit=params["minsplit"],
            cp=params["cp"],
            maxdepth=params["maxdepth"],
            importance=np.array(payload["importance"], dtype=np.float64),
        )
    if kind == "forest":
        return ForestModel(
            trees=[_node_from_obj(t) for t in payload["trees"]],
            columns=columns,
            impute=np.array(payload["impute"], dtype=np.float64),
            n_trees=params["n_trees"],
            mtry=params["mtry"],
            seed=params["seed"],
            bootstrap=params["bootstrap"],
            importance=np.array(payload["importance"], dtype=np.float64),
        )
    raise SchemaError(f"unknown model kind {kind!r}")
