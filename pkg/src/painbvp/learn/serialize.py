"""Model persistence: a versioned, self-describing JSON container.

JSON floats round-trip exactly (repr-based shortest representation), so a
reloaded model reproduces its predictions bit for bit.
"""

from __future__ import annotations

import json

import numpy as np

from ..errors import InvalidInputError
from .boost import AdaBoostClassifier, AdaBoostRegressor, GradientBoostedClassifier, GradientBoostedRegressor
from .forest import ExtraTreesClassifier, RandomForestClassifier, RandomForestRegressor
from .linear import LinearRegressor, LinearSVMClassifier, LinearSVR, LogisticRegressionClassifier
from .tree import tree_from_dict, tree_to_dict

__all__ = ["FAMILIES", "save_model", "load_model", "model_to_dict", "model_from_dict"]

FORMAT_VERSION = 1

#: family tag -> estimator class (classification and regression variants)
FAMILIES = {
    "logreg": LogisticRegressionClassifier,
    "linsvm": LinearSVMClassifier,
    "rforest": RandomForestClassifier,
    "extratrees": ExtraTreesClassifier,
    "adaboost": AdaBoostClassifier,
    "gbt": GradientBoostedClassifier,
    "linreg": LinearRegressor,
    "svr_linear": LinearSVR,
    "rforest_reg": RandomForestRegressor,
    "adaboost_reg": AdaBoostRegressor,
    "gbt_reg": GradientBoostedRegressor,
}

_CLASS_TO_FAMILY = {cls: name for name, cls in FAMILIES.items()}


def _encode(value):
    if isinstance(value, np.ndarray):
        return {"__ndarray__": value.tolist(), "dtype": str(value.dtype)}
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def _decode(value):
    if isinstance(value, dict) and "__ndarray__" in value:
        return np.array(value["__ndarray__"], dtype=value["dtype"])
    return value


def model_to_dict(model) -> dict:
    family = _CLASS_TO_FAMILY.get(type(model))
    if family is None:
        raise InvalidInputError(f"unknown model family {type(model).__name__}")
    state = {}
    for name, value in vars(model).items():
        if name in model.get_params():
            continue
        if name == "trees_":
            if family in ("gbt",):  # list of per-column tree lists
                state[name] = [[tree_to_dict(t) for t in col] for col in value]
            else:
                state[name] = [tree_to_dict(t) for t in value]
        elif name == "stumps_":
            state[name] = [tree_to_dict(t) for t in value]
        else:
            state[name] = _encode(value)
    return {
        "format_version": FORMAT_VERSION,
        "family": family,
        "hyperparameters": {k: _encode(v) for k, v in model.get_params().items()},
        "state": state,
    }


def model_from_dict(doc: dict):
    if doc.get("format_version") != FORMAT_VERSION:
        raise InvalidInputError(f"unsupported model format version {doc.get('format_version')}")
    family = doc["family"]
    if family not in FAMILIES:
        raise InvalidInputError(f"unknown model family {family!r}")
    model = FAMILIES[family](**doc["hyperparameters"])
    for name, value in doc["state"].items():
        if name == "trees_":
            if family == "gbt":
                value = [[tree_from_dict(t) for t in col] for col in value]
            else:
                value = [tree_from_dict(t) for t in value]
        elif name == "stumps_":
            value = [tree_from_dict(t) for t in value]
        else:
            value = _decode(value)
        setattr(model, name, value)
    return model


def save_model(model, path):
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh)


def load_model(path):
    with open(path) as fh:
        return model_from_dict(json.load(fh))
