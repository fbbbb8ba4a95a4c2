"""The 20 heart-rate-variability features computed from an IBI series.

Features that cannot be computed for a window are reported as NaN (an
explicit undefined marker) rather than a silent zero; dataset assembly
drops windows containing any NaN and logs how many.

Conventions, documented here because they matter for reproducibility:

* ``rr_std`` and ``sdsd`` are sample (1/(N-1)) standard deviations; the
  Poincare quantities use population (1/N) variances.
* pNNx counts successive differences strictly greater than x ms.
* Spectral powers come from the tachogram cubic-interpolated to a uniform
  grid (4 Hz by default), mean removed.  A 5-s window cannot resolve the
  VLF band [0.003, 0.04) Hz, so ``vlf_pow`` is ~0 there by construction.
* ``dfa_alpha1`` needs at least two box sizes in {4..min(16, N//4)}, i.e.
  at least 20 intervals, otherwise it is undefined.
* ``apen`` is Pincus ApEn(m, r) with self-matches, Chebyshev distance,
  natural log, r = 0.2 * sample std; zero-variance input gives 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np
from scipy.interpolate import CubicSpline

from .beats import IbiSeries
from .signal_core import SampledSignal, band_power, power_spectrum

__all__ = [
    "HrvFeatures",
    "HRV_FEATURE_NAMES",
    "time_domain_hrv",
    "frequency_domain_hrv",
    "poincare",
    "dfa_alpha1",
    "approx_entropy",
    "hrv_feature_vector",
]

VLF_BAND = (0.003, 0.04)
LF_BAND = (0.04, 0.15)
HF_BAND = (0.15, 0.4)


@dataclass(frozen=True)
class HrvFeatures:
    """The 20 IBI-derived features; NaN marks an undefined field."""

    rmssd_ms: float
    sdsd_ms: float
    pnn50_pct: float
    pnn25_pct: float
    pnn10_pct: float
    rr_mean_ms: float
    rr_std_ms: float
    rr_med_ms: float
    rr_min_ms: float
    rr_max_ms: float
    vlf_pow: float
    lf_pow: float
    hf_pow: float
    total_pow: float
    sd1_ms: float
    sd2_ms: float
    sd12_ratio: float
    sdell_ms2: float
    dfa_alpha1: float
    apen: float

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, f.name) for f in fields(self)], dtype=np.float64)


HRV_FEATURE_NAMES = [f.name for f in fields(HrvFeatures)]

_NAN10 = (math.nan,) * 10


def time_domain_hrv(ibi: IbiSeries) -> tuple:
    """(rmssd, sdsd, pnn50, pnn25, pnn10, rr_mean, rr_std, rr_med, rr_min, rr_max).

    All NaN when fewer than 3 intervals are available.
    """
    v = ibi.intervals_ms
    if len(v) < 3:
        return _NAN10
    d = np.diff(v)
    rmssd = float(np.sqrt(np.mean(d * d)))
    sdsd = float(d.std(ddof=1))
    abs_d = np.abs(d)
    pnn50 = float(np.mean(abs_d > 50.0) * 100.0)
    pnn25 = float(np.mean(abs_d > 25.0) * 100.0)
    pnn10 = float(np.mean(abs_d > 10.0) * 100.0)
    return (
        rmssd,
        sdsd,
        pnn50,
        pnn25,
        pnn10,
        float(v.mean()),
        float(v.std(ddof=1)),
        float(np.median(v)),
        float(v.min()),
        float(v.max()),
    )


def frequency_domain_hrv(ibi: IbiSeries, resample_hz: float = 4.0) -> tuple:
    """(vlf, lf, hf, total) band powers in ms^2 of the resampled tachogram.

    The tachogram (interval value vs. time of its later beat) is cubic
    spline interpolated to a uniform ``resample_hz`` grid.  Needs >= 4
    intervals spanning >= 2.5 s, else all NaN.
    """
    v = ibi.intervals_ms
    t = ibi.interval_times_s
    if len(v) < 4 or (t[-1] - t[0]) < 2.5:
        return (math.nan,) * 4
    span = t[-1] - t[0]
    grid = t[0] + np.arange(int(np.floor(span * resample_hz)) + 1) / resample_hz
    tach = CubicSpline(t, v)(grid)
    spec = power_spectrum(SampledSignal(resample_hz, tach, start_time_s=t[0]))
    vlf = band_power(spec, *VLF_BAND)
    lf = band_power(spec, *LF_BAND)
    hf = band_power(spec, *HF_BAND)
    total = band_power(spec, VLF_BAND[0], HF_BAND[1])
    return (vlf, lf, hf, total)


def poincare(ibi: IbiSeries) -> tuple:
    """(sd1, sd2, sd1/sd2, pi*sd1*sd2) from the Poincare plot of the intervals."""
    v = ibi.intervals_ms
    if len(v) < 3:
        return (math.nan,) * 4
    var_d = float(np.var(np.diff(v)))
    var_v = float(np.var(v))
    sd1 = math.sqrt(var_d / 2.0)
    sd2 = math.sqrt(max(2.0 * var_v - var_d / 2.0, 0.0))
    ratio = sd1 / sd2 if sd2 > 0.0 else math.nan
    return (sd1, sd2, ratio, math.pi * sd1 * sd2)


def dfa_alpha1(ibi: IbiSeries) -> float:
    """Short-term detrended fluctuation slope over box sizes 4..min(16, N//4).

    Integrates the mean-centred intervals, detrends each non-overlapping box
    linearly, and fits the log-log slope of the rms fluctuation.  Undefined
    (NaN) for fewer than 16 intervals or when fewer than two box sizes fit.
    """
    v = ibi.intervals_ms
    n = len(v)
    if n < 16:
        return math.nan
    sizes = np.arange(4, min(16, n // 4) + 1)
    if len(sizes) < 2:
        return math.nan
    y = np.cumsum(v - v.mean())
    fluct = np.empty(len(sizes))
    for k, size in enumerate(sizes):
        nb = n // size
        seg = y[: nb * size].reshape(nb, size)
        t = np.arange(size) - (size - 1) / 2.0
        slope = (seg @ t) / (t @ t)
        resid = seg - seg.mean(axis=1, keepdims=True) - slope[:, None] * t[None, :]
        fluct[k] = np.sqrt(np.mean(resid * resid))
    if np.any(fluct <= 0.0):
        return math.nan
    alpha, _ = np.polyfit(np.log(sizes), np.log(fluct), 1)
    return float(alpha)


def _phi(v: np.ndarray, m: int, r: float) -> float:
    n_templates = len(v) - m + 1
    templates = np.lib.stride_tricks.sliding_window_view(v, m)
    dist = np.abs(templates[:, None, :] - templates[None, :, :]).max(axis=2)
    counts = np.count_nonzero(dist <= r, axis=1) / n_templates
    return float(np.mean(np.log(counts)))


def approx_entropy(ibi: IbiSeries, m: int = 2, r_factor: float = 0.2) -> float:
    """Pincus approximate entropy ApEn(m, r) of the intervals, in nats.

    r = ``r_factor`` * sample std.  Returns 0 for zero-variance input and
    NaN when fewer than m + 2 intervals are available.
    """
    v = ibi.intervals_ms
    if len(v) < m + 2:
        return math.nan
    std = float(v.std(ddof=1))
    if std == 0.0:
        return 0.0
    r = r_factor * std
    return max(_phi(v, m, r) - _phi(v, m + 1, r), 0.0)


def hrv_feature_vector(
    ibi: IbiSeries,
    resample_hz: float = 4.0,
    apen_m: int = 2,
    apen_r_factor: float = 0.2,
) -> HrvFeatures:
    """All 20 HRV features; undefined fields propagate as NaN per group."""
    td = time_domain_hrv(ibi)
    fd = frequency_domain_hrv(ibi, resample_hz=resample_hz)
    pc = poincare(ibi)
    return HrvFeatures(
        *td,
        *fd,
        *pc,
        dfa_alpha1(ibi),
        approx_entropy(ibi, m=apen_m, r_factor=apen_r_factor),
    )
