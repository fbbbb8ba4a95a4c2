"""Nonparametric statistics across pain states: one-sample KS normality,
Kruskal-Wallis omnibus, and Dunn's pairwise post-hoc test.

The KS test compares against a normal with the sample's own mean/std, as
is common practice; because the parameters are estimated the asymptotic
p-value is conservative, and results carry ``parameters_estimated=True``
to make that explicit.  Dunn p-values are reported both unadjusted (the
default significance call) and Bonferroni-adjusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc, ndtr

from .dataset import Dataset, PainState
from .errors import DegenerateInputError, InsufficientDataError, InvalidInputError, UndefinedStatisticError

__all__ = [
    "KsResult",
    "KwResult",
    "DunnResult",
    "ks_normality",
    "kruskal_wallis",
    "dunn_test",
    "feature_pain_analysis",
]


@dataclass(frozen=True)
class KsResult:
    statistic: float
    p_value: float
    parameters_estimated: bool = True


@dataclass(frozen=True)
class KwResult:
    statistic: float
    p_value: float
    df: int


@dataclass(frozen=True)
class DunnResult:
    group_a: str
    group_b: str
    z: float
    p_value: float
    p_adjusted: float
    significant_at_0_05: bool


def _kolmogorov_sf(lam: float) -> float:
    """Asymptotic Kolmogorov survival function Q(lambda)."""
    if lam <= 0:
        return 1.0
    total = 0.0
    for k in range(1, 101):
        term = 2.0 * (-1.0) ** (k - 1) * math.exp(-2.0 * k * k * lam * lam)
        total += term
        if abs(term) < 1e-16:
            break
    return min(max(total, 0.0), 1.0)


def ks_normality(sample) -> KsResult:
    """One-sample KS statistic of the data against N(sample mean, sample std).

    p-value from the asymptotic Kolmogorov distribution with lambda =
    sqrt(n) * D (no correction for the estimated parameters).
    """
    x = np.asarray(sample, dtype=np.float64)
    if len(x) < 8:
        raise InsufficientDataError("ks_normality needs at least 8 samples")
    std = x.std(ddof=1)
    if std == 0.0:
        raise DegenerateInputError("zero-variance sample")
    xs = np.sort(x)
    cdf = ndtr((xs - x.mean()) / std)
    n = len(x)
    upper = np.max(np.arange(1, n + 1) / n - cdf)
    lower = np.max(cdf - np.arange(0, n) / n)
    d = float(max(upper, lower))
    return KsResult(statistic=d, p_value=_kolmogorov_sf(math.sqrt(n) * d))


def _midranks(pooled: np.ndarray) -> np.ndarray:
    order = np.argsort(pooled, kind="stable")
    ranks = np.empty(len(pooled))
    sx = pooled[order]
    i = 0
    while i < len(sx):
        j = i
        while j + 1 < len(sx) and sx[j + 1] == sx[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _tie_counts(pooled: np.ndarray) -> np.ndarray:
    _, counts = np.unique(pooled, return_counts=True)
    return counts[counts > 1]


def kruskal_wallis(groups) -> KwResult:
    """Rank-based omnibus H statistic with tie correction; chi-square p-value."""
    groups = [np.asarray(g, dtype=np.float64) for g in groups]
    if len(groups) < 2 or any(len(g) < 2 for g in groups):
        raise InvalidInputError("need >= 2 groups with >= 2 values each")
    pooled = np.concatenate(groups)
    n = len(pooled)
    if np.all(pooled == pooled[0]):
        raise DegenerateInputError("all values identical")
    ranks = _midranks(pooled)
    h = 0.0
    offset = 0
    for g in groups:
        r = ranks[offset : offset + len(g)]
        h += len(g) * (r.mean() - (n + 1) / 2.0) ** 2
        offset += len(g)
    h *= 12.0 / (n * (n + 1))
    ties = _tie_counts(pooled)
    correction = 1.0 - float(np.sum(ties**3 - ties)) / (n**3 - n)
    h /= correction
    df = len(groups) - 1
    p = float(gammaincc(df / 2.0, h / 2.0))
    return KwResult(statistic=float(h), p_value=p, df=df)


def dunn_test(groups, labels=None) -> list[DunnResult]:
    """Dunn's pairwise z tests on joint midranks, all group pairs.

    z_ij = (Rbar_i - Rbar_j) / sqrt((N(N+1)/12 - T) (1/n_i + 1/n_j)) with
    tie term T = sum(t^3 - t) / (12 (N-1)); two-sided normal p-values, plus
    Bonferroni adjustment over the C(k,2) pairs.  The significance flag
    uses the unadjusted p-value at 0.05.
    """
    groups = [np.asarray(g, dtype=np.float64) for g in groups]
    if len(groups) < 2 or any(len(g) < 2 for g in groups):
        raise InvalidInputError("need >= 2 groups with >= 2 values each")
    if labels is None:
        labels = [f"group{i}" for i in range(len(groups))]
    pooled = np.concatenate(groups)
    n = len(pooled)
    ranks = _midranks(pooled)
    mean_ranks = []
    offset = 0
    for g in groups:
        mean_ranks.append(ranks[offset : offset + len(g)].mean())
        offset += len(g)
    ties = _tie_counts(pooled)
    tie_term = float(np.sum(ties**3 - ties)) / (12.0 * (n - 1))
    base_var = n * (n + 1) / 12.0 - tie_term
    if base_var <= 0:
        raise UndefinedStatisticError("all values tied; Dunn z undefined")
    n_pairs = len(groups) * (len(groups) - 1) // 2
    results = []
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            se = math.sqrt(base_var * (1.0 / len(groups[i]) + 1.0 / len(groups[j])))
            z = (mean_ranks[i] - mean_ranks[j]) / se
            p = float(2.0 * (1.0 - ndtr(abs(z))))
            p = min(p, 1.0)
            results.append(
                DunnResult(
                    group_a=str(labels[i]),
                    group_b=str(labels[j]),
                    z=float(z),
                    p_value=p,
                    p_adjusted=min(1.0, n_pairs * p),
                    significant_at_0_05=p < 0.05,
                )
            )
    return results


def feature_pain_analysis(ds: Dataset, feature_name: str) -> list[DunnResult]:
    """Dunn results for one feature across every present pain-state pair."""
    if feature_name not in ds.column_names:
        raise InvalidInputError(f"unknown feature {feature_name!r}")
    values = ds.column(feature_name)
    groups = []
    labels = []
    for state in PainState:
        rows = ds.pain_state == int(state)
        if rows.sum() >= 2:
            groups.append(values[rows])
            labels.append(state.name)
    if len(groups) < 2:
        raise InvalidInputError("need >= 2 pain states with >= 2 windows each")
    return dunn_test(groups, labels=labels)
