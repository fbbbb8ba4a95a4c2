"""The 24 features computed directly from a BVP window.

The exported vector follows a fixed 24-column order: raw-scale mean and
standard deviation, then 20 distinct shape statistics evaluated on the
z-scored window, plus two alias columns (``*_dup``) that mirror their twin
so the column count matches the canonical 24-wide table.  Shape features
are invariant to positive affine rescaling of the raw window because of
the z-scoring.

Degenerate-case conventions (each unit tested):

* constant window: mean/std reported, every shape feature NaN;
* ACF timescales that never cross/dip within len/2 lags report len/2;
* no below-threshold events: the event-interval feature reports len;
* fewer than 64 samples: the two fluctuation proportions are NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InsufficientDataError
from .signal_core import autocorrelation, zscore

__all__ = [
    "BvpFeatures",
    "BVP_FEATURE_NAMES",
    "histogram_modes",
    "acf_timescales",
    "auto_mutual_information",
    "ami_first_min",
    "below_mean_event_interval",
    "spectral_summaries",
    "forecast_and_trev",
    "symbolic_stats",
    "periodicity_wang",
    "embed2_expfit",
    "fluctuation_props",
    "bvp_feature_vector",
]


@dataclass(frozen=True)
class BvpFeatures:
    """The 22 distinct per-window BVP features; NaN marks undefined."""

    mean: float
    std: float
    dn_hist_mode5: float
    dn_hist_mode10: float
    acf_first_1e_crossing: float
    ami2_tau5: float
    below_mean_event_interval: float
    acf_first_min: float
    spow_lowest_fifth: float
    spow_centroid: float
    fc_rollmean3_err: float
    co_trev: float
    ami_first_min_lag: float
    md_pnn40: float
    sb_longest_decrease_run: float
    sb_motif3_entropy: float
    sb_transmat3_trace_cov: float
    sb_periodicity_wang: float
    fc_tau_resrat: float
    co_embed2_expfit: float
    sc_dfa_prop: float
    sc_rs_prop: float

    def to_array(self) -> np.ndarray:
        """The 24 exported values in canonical column order (with aliases)."""
        return np.array([getattr(self, _EXPORT_SOURCE[name]) for name in BVP_FEATURE_NAMES])


#: Exported column order mirrors the 24-row feature table; the duplicated
#: rows become alias columns of their canonical twin.
BVP_FEATURE_NAMES = [
    "mean",
    "std",
    "dn_hist_mode5",
    "dn_hist_mode10",
    "acf_first_1e_crossing",
    "ami2_tau5",
    "below_mean_event_interval",
    "acf_first_1e_crossing_dup",
    "acf_first_min",
    "spow_lowest_fifth",
    "spow_centroid",
    "fc_rollmean3_err",
    "co_trev",
    "ami2_tau5_dup",
    "ami_first_min_lag",
    "md_pnn40",
    "sb_longest_decrease_run",
    "sb_motif3_entropy",
    "sb_transmat3_trace_cov",
    "sb_periodicity_wang",
    "fc_tau_resrat",
    "co_embed2_expfit",
    "sc_dfa_prop",
    "sc_rs_prop",
]

_EXPORT_SOURCE = {name: name.removesuffix("_dup") for name in BVP_FEATURE_NAMES}


def _check_series(x, min_len: int, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if len(arr) < min_len:
        raise InsufficientDataError(f"{name} needs at least {min_len} samples, got {len(arr)}")
    if arr.std() == 0.0:
        raise DegenerateInputError(f"{name} is undefined for a constant series")
    return arr


def histogram_modes(x) -> tuple[float, float]:
    """Centers of the fullest bin of the 5- and 10-bin z-scored histograms.

    Equal-width bins over [min, max]; ties resolve to the lowest center.
    """
    arr = _check_series(x, 10, "histogram_modes")
    z = zscore(arr)
    out = []
    for bins in (5, 10):
        counts, edges = np.histogram(z, bins=bins)
        centers = (edges[:-1] + edges[1:]) / 2.0
        out.append(float(centers[np.argmax(counts)]))
    return out[0], out[1]


def acf_timescales(x, acf: np.ndarray | None = None) -> tuple[int, int]:
    """(first lag with r < 1/e, first local-minimum lag) of the ACF.

    Both are capped at len(x)//2 when no crossing or minimum occurs within
    that range.  ``acf`` may be passed pre-computed up to len//2 lags.
    """
    arr = _check_series(x, 16, "acf_timescales")
    max_lag = len(arr) // 2
    r = autocorrelation(arr, max_lag) if acf is None else acf[: max_lag + 1]
    below = np.flatnonzero(r[1:] < 1.0 / math.e)
    first_1e = int(below[0]) + 1 if len(below) else max_lag
    interior = np.flatnonzero((r[1:-1] < r[:-2]) & (r[1:-1] < r[2:]))
    first_min = int(interior[0]) + 1 if len(interior) else max_lag
    return first_1e, first_min


def _mutual_information_bits(a: np.ndarray, b: np.ndarray, edges: np.ndarray) -> float:
    joint, _, _ = np.histogram2d(a, b, bins=[edges, edges])
    p = joint / joint.sum()
    px = p.sum(axis=1)
    py = p.sum(axis=0)
    mask = p > 0
    outer = np.outer(px, py)
    return float(np.sum(p[mask] * np.log2(p[mask] / outer[mask])))


def auto_mutual_information(x, tau: int = 5, n_bins: int = 10) -> float:
    """Histogram mutual information (bits) between x_t and x_{t+tau}.

    Both axes are binned with ``n_bins`` equal-width bins spanning the full
    series range, so an exact self-copy recovers the binned entropy.
    """
    arr = _check_series(x, tau + 11, "auto_mutual_information")
    edges = np.linspace(arr.min(), arr.max(), n_bins + 1)
    edges[-1] += 1e-12  # include the max in the last bin
    return _mutual_information_bits(arr[:-tau], arr[tau:], edges)


def ami_first_min(x, max_lag: int = 40, n_bins: int = 10) -> int:
    """First local minimum lag of the auto-mutual-information function.

    Scans AMI(1..L) with L = min(max_lag, len//2, longest lag the AMI
    precondition admits); returns L when no interior minimum exists.
    """
    arr = _check_series(x, 16, "ami_first_min")
    limit = min(max_lag, len(arr) // 2, len(arr) - 11)
    limit = max(limit, 3)
    edges = np.linspace(arr.min(), arr.max(), n_bins + 1)
    edges[-1] += 1e-12
    ami = np.array(
        [_mutual_information_bits(arr[:-tau], arr[tau:], edges) for tau in range(1, limit + 1)]
    )
    interior = np.flatnonzero((ami[1:-1] < ami[:-2]) & (ami[1:-1] < ami[2:]))
    return int(interior[0]) + 2 if len(interior) else limit


def below_mean_event_interval(x) -> float:
    """Mean spacing (samples) between successive dips below mean - 1 std.

    Fewer than two events reports len(x).
    """
    arr = np.asarray(x, dtype=np.float64)
    if len(arr) < 16:
        raise InsufficientDataError("below_mean_event_interval needs at least 16 samples")
    threshold = arr.mean() - arr.std()
    events = np.flatnonzero(arr < threshold)
    if len(events) < 2:
        return float(len(arr))
    return float(np.mean(np.diff(events)))


def spectral_summaries(x, fs: float) -> tuple[float, float]:
    """(fraction of power below Nyquist/5, power-weighted centroid in Hz).

    Plain one-sided periodogram of the mean-removed series.
    """
    arr = np.asarray(x, dtype=np.float64)
    if len(arr) < 32:
        raise InsufficientDataError("spectral_summaries needs at least 32 samples")
    power = np.abs(np.fft.rfft(arr - arr.mean())) ** 2
    freqs = np.fft.rfftfreq(len(arr), d=1.0 / fs)
    total = power.sum()
    if total == 0.0:
        raise DegenerateInputError("zero spectral power")
    frac = float(power[freqs < fs / 10.0].sum() / total)  # Nyquist/5 = fs/10
    centroid = float((freqs * power).sum() / total)
    return frac, centroid


def forecast_and_trev(x, acf: np.ndarray | None = None) -> tuple[float, float, float]:
    """(rolling-mean-3 forecast error, ACF-timescale ratio, time reversibility).

    * forecast error: mean |x_t - mean(x_{t-3..t-1})|;
    * timescale ratio: first-1/e ACF lag of diff(x) over that of x (NaN when
      the differenced series is constant);
    * trev: mean(d^3) / mean(d^2)^1.5 for d = successive differences.
    """
    arr = _check_series(x, 16, "forecast_and_trev")
    forecast = (arr[:-3] + arr[1:-2] + arr[2:-1]) / 3.0
    roll_err = float(np.mean(np.abs(arr[3:] - forecast)))
    d = np.diff(arr)
    m2 = float(np.mean(d * d))
    trev = float(np.mean(d**3) / m2**1.5)
    tau_x = acf_timescales(arr, acf=acf)[0]
    try:
        tau_d = acf_timescales(d)[0]
        resrat = tau_d / tau_x
    except DegenerateInputError:
        resrat = math.nan
    return roll_err, resrat, trev


def symbolic_stats(x) -> tuple[float, int, float, float]:
    """(pnn40-style diff fraction, longest decrease run, motif entropy, transition trace).

    * fraction of |successive difference| > 0.04 * population std;
    * longest run of strictly decreasing consecutive samples;
    * Shannon entropy (bits) of successive tercile-letter pairs;
    * trace of the covariance (columns as variables) of the 3x3 empirical
      transition matrix, normalised by total transitions.
    """
    arr = _check_series(x, 32, "symbolic_stats")
    d = np.abs(np.diff(arr))
    pnn40 = float(np.mean(d > 0.04 * arr.std()))

    dec = np.diff(arr) < 0
    longest = run = 0
    for flag in dec:
        run = run + 1 if flag else 0
        longest = max(longest, run)

    z = zscore(arr)
    q1, q2 = np.quantile(z, [1.0 / 3.0, 2.0 / 3.0])
    letters = (z > q1).astype(np.int64) + (z > q2).astype(np.int64)
    pair_idx = 3 * letters[:-1] + letters[1:]
    pair_counts = np.bincount(pair_idx, minlength=9).astype(np.float64)
    p = pair_counts / pair_counts.sum()
    nz = p > 0
    entropy = float(-np.sum(p[nz] * np.log2(p[nz])))

    trans = (pair_counts / pair_counts.sum()).reshape(3, 3)
    cov = np.cov(trans, rowvar=False, ddof=1)
    trace = float(np.trace(cov))
    return pnn40, longest, entropy, trace


def periodicity_wang(x, threshold: float = 0.01) -> int:
    """Wang-style periodicity: lag of the first ACF peak, after some trough,
    whose value exceeds ``threshold`` on the linearly detrended series.

    Returns 0 when no qualifying peak exists (including constant input).
    Note: on pure noise the ACF wiggle routinely clears the conventional
    0.01 threshold, so a nonzero answer there is expected behaviour of this
    definition; raise the threshold to suppress it.
    """
    arr = np.asarray(x, dtype=np.float64)
    if len(arr) < 64 or arr.std() == 0.0:
        return 0
    t = np.arange(len(arr), dtype=np.float64)
    slope, intercept = np.polyfit(t, arr, 1)
    detrended = arr - (slope * t + intercept)
    if detrended.std() == 0.0:
        return 0
    max_lag = len(arr) // 3
    r = autocorrelation(detrended, max_lag)
    mid = r[1:-1]
    trough_mask = (mid < r[:-2]) & (mid < r[2:])
    peak_mask = (mid > r[:-2]) & (mid > r[2:])
    troughs = np.flatnonzero(trough_mask) + 1
    peaks = np.flatnonzero(peak_mask) + 1
    if len(troughs) == 0:
        return 0
    for lag in peaks:
        if lag > troughs[0] and r[lag] > threshold:
            return int(lag)
    return 0


def embed2_expfit(x, acf: np.ndarray | None = None) -> float:
    """Goodness of an exponential fit to successive 2-d embedding distances.

    Embeds (x_t, x_{t+tau}) with tau the first 1/e ACF crossing, fits an
    exponential law (rate 1/mean) to the successive Euclidean distances and
    returns the mean absolute difference between the fitted CDF and the
    empirical CDF at the sorted distances.
    """
    arr = _check_series(x, 64, "embed2_expfit")
    tau = acf_timescales(arr, acf=acf)[0]
    a = arr[:-tau]
    b = arr[tau:]
    dist = np.hypot(np.diff(a), np.diff(b))
    mu = dist.mean()
    if mu == 0.0:
        return math.nan
    ds = np.sort(dist)
    fitted = 1.0 - np.exp(-ds / mu)
    empirical = np.arange(1, len(ds) + 1) / len(ds)
    return float(np.mean(np.abs(fitted - empirical)))


def _fluct_scales(n: int, n_scales: int = 50) -> np.ndarray:
    """Box-size grid: unique floors of 50 log-spaced values in [5, n/2].

    The grid is part of the feature definition; the small nudge keeps the
    floor stable when a grid point lands within rounding of an integer.
    """
    lo = math.log(5.0)
    hi = math.log(n / 2.0)
    raw = {int(math.floor(math.exp(lo + i * (hi - lo) / (n_scales - 1)) + 1e-9)) for i in range(n_scales)}
    return np.array(sorted(t for t in raw if 5 <= t <= n // 2), dtype=np.int64)


def _two_regime_split(log_tau: np.ndarray, log_f: np.ndarray, min_points: int = 6) -> float:
    """Proportion of scales in the first of two fitted log-log linear regimes."""
    n = len(log_tau)
    best_sse = math.inf
    best_split = min_points
    for split in range(min_points, n - min_points + 1):
        sse = 0.0
        for lo, hi in ((0, split), (split, n)):
            t = log_tau[lo:hi]
            f = log_f[lo:hi]
            slope, intercept = np.polyfit(t, f, 1)
            resid = f - (slope * t + intercept)
            sse += float(resid @ resid)
        if sse < best_sse:
            best_sse = sse
            best_split = split
    return best_split / n


def fluctuation_props(x) -> tuple[float, float]:
    """Two-regime scaling proportions of DFA and rescaled-range fluctuations.

    For ~50 log-spaced box sizes in [5, N/2] the fluctuation function of the
    integrated series is computed two ways (rms of linear-detrend residuals;
    rms of linear-fit residual ranges); each log-log curve is then split
    into the two linear regimes minimising total squared error and the
    proportion of scales falling in the first regime is returned.  NaN for
    fewer than 64 samples or too few usable scales.
    """
    arr = np.asarray(x, dtype=np.float64)
    if len(arr) < 64 or arr.std() == 0.0:
        return (math.nan, math.nan)
    n = len(arr)
    y = np.cumsum(arr - arr.mean())
    taus = _fluct_scales(n)
    if len(taus) < 12:
        return (math.nan, math.nan)
    f_dfa = np.empty(len(taus))
    f_rs = np.empty(len(taus))
    for k, tau in enumerate(taus):
        nb = n // tau
        seg = y[: nb * tau].reshape(nb, tau)
        t = np.arange(tau) - (tau - 1) / 2.0
        slope = (seg @ t) / (t @ t)
        resid = seg - seg.mean(axis=1, keepdims=True) - slope[:, None] * t[None, :]
        f_dfa[k] = np.sqrt(np.mean(resid * resid))
        ranges = resid.max(axis=1) - resid.min(axis=1)
        f_rs[k] = np.sqrt(np.mean(ranges * ranges))
    if np.any(f_dfa <= 0.0) or np.any(f_rs <= 0.0):
        return (math.nan, math.nan)
    log_tau = np.log(taus.astype(np.float64))
    return (
        _two_regime_split(log_tau, np.log(f_dfa)),
        _two_regime_split(log_tau, np.log(f_rs)),
    )


def bvp_feature_vector(
    samples,
    sample_rate_hz: float,
    ami_tau: int = 5,
    ami_bins: int = 10,
    periodicity_threshold: float = 0.01,
) -> BvpFeatures:
    """All 24 BVP features for one window.

    Mean and std come from the raw window (sample std); every other feature
    is computed on the z-scored window.  A constant window reports mean/std
    and NaN for the rest.
    """
    arr = np.asarray(samples, dtype=np.float64)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    if arr.std() == 0.0:
        return BvpFeatures(mean, std, *((math.nan,) * 20))
    z = zscore(arr)
    acf = autocorrelation(z, len(z) // 2)

    mode5, mode10 = histogram_modes(z)
    first_1e, first_min = acf_timescales(z, acf=acf)
    ami = auto_mutual_information(z, tau=ami_tau, n_bins=ami_bins)
    roll_err, resrat, trev = forecast_and_trev(z, acf=acf)
    pnn40, longest_dec, motif_h, trans_trace = symbolic_stats(z)
    frac5, centroid = spectral_summaries(z, sample_rate_hz)
    dfa_prop, rs_prop = fluctuation_props(z)
    return BvpFeatures(
        mean=mean,
        std=std,
        dn_hist_mode5=mode5,
        dn_hist_mode10=mode10,
        acf_first_1e_crossing=float(first_1e),
        ami2_tau5=ami,
        below_mean_event_interval=below_mean_event_interval(z),
        acf_first_min=float(first_min),
        spow_lowest_fifth=frac5,
        spow_centroid=centroid,
        fc_rollmean3_err=roll_err,
        co_trev=trev,
        ami_first_min_lag=float(ami_first_min(z, n_bins=ami_bins)),
        md_pnn40=pnn40,
        sb_longest_decrease_run=float(longest_dec),
        sb_motif3_entropy=motif_h,
        sb_transmat3_trace_cov=trans_trace,
        sb_periodicity_wang=float(periodicity_wang(z, threshold=periodicity_threshold)),
        fc_tau_resrat=resrat,
        co_embed2_expfit=embed2_expfit(z, acf=acf),
        sc_dfa_prop=dfa_prop,
        sc_rs_prop=rs_prop,
    )
