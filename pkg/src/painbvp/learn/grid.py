"""Exhaustive grid search scored on a held-out tuning set."""

from __future__ import annotations

import itertools
import logging

import numpy as np

from ..errors import InvalidParameterError, PipelineError, SearchFailedError

__all__ = ["grid_points", "grid_search"]

log = logging.getLogger(__name__)


def grid_points(grid: dict) -> list[dict]:
    """Cartesian product of a {param: [values]} grid, in insertion order."""
    if not grid:
        raise InvalidParameterError("grid must be non-empty")
    names = list(grid)
    for name in names:
        if not grid[name]:
            raise InvalidParameterError(f"grid entry {name!r} has no values")
    return [dict(zip(names, combo)) for combo in itertools.product(*(grid[n] for n in names))]


def grid_search(model_factory, grid: dict, train, tuning, score_fn):
    """Pick the grid point with the best tuning score.

    ``model_factory(**params)`` builds an unfitted estimator;
    ``score_fn(model, X, y) -> float`` is maximized.  Ties break in grid
    enumeration order.  Grid points whose training raises a pipeline or
    numerical error are skipped (and logged); if every point fails the
    search fails.
    """
    X_tr, y_tr = train
    X_tu, y_tu = tuning
    best_params = None
    best_score = -np.inf
    results = []
    for params in grid_points(grid):
        try:
            model = model_factory(**params).fit(X_tr, y_tr)
            score = float(score_fn(model, X_tu, y_tu))
        except (PipelineError, FloatingPointError, np.linalg.LinAlgError) as exc:
            log.warning("grid point %s failed: %s", params, exc)
            results.append({"params": params, "score": None, "error": str(exc)})
            continue
        results.append({"params": params, "score": score, "error": None})
        if score > best_score:
            best_score = score
            best_params = params
    if best_params is None:
        raise SearchFailedError("every grid point failed to train")
    return best_params, results
