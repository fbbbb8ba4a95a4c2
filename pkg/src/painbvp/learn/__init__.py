"""From-scratch model families behind a fit/predict estimator API."""

from .base import Estimator, check_X, check_X_y, check_is_fitted
from .boost import (
    AdaBoostClassifier,
    AdaBoostRegressor,
    GradientBoostedClassifier,
    GradientBoostedRegressor,
)
from .forest import (
    ExtraTreesClassifier,
    RandomForestClassifier,
    RandomForestRegressor,
    extra_trees_importance,
)
from .grid import grid_points, grid_search
from .linear import (
    LinearRegressor,
    LinearSVMClassifier,
    LinearSVR,
    LogisticRegressionClassifier,
    logistic_loss_grad,
)
from .serialize import FAMILIES, load_model, model_from_dict, model_to_dict, save_model

__all__ = [
    "Estimator",
    "check_X",
    "check_X_y",
    "check_is_fitted",
    "AdaBoostClassifier",
    "AdaBoostRegressor",
    "GradientBoostedClassifier",
    "GradientBoostedRegressor",
    "ExtraTreesClassifier",
    "RandomForestClassifier",
    "RandomForestRegressor",
    "extra_trees_importance",
    "grid_points",
    "grid_search",
    "LinearRegressor",
    "LinearSVMClassifier",
    "LinearSVR",
    "LogisticRegressionClassifier",
    "logistic_loss_grad",
    "FAMILIES",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "save_model",
]
