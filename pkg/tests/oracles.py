"""Independent naive-definition oracles used by the test suite.

Everything here is written directly from the feature definitions with
plain loops or explicit matrix algebra, deliberately sharing no code with
the package implementations it checks.  Slow is fine; independent is the
point.
"""

from __future__ import annotations

import math

import numpy as np

# ---------------------------------------------------------------------------
# generic signal oracles


def naive_autocorrelation(x, max_lag):
    """Double-loop normalized sample autocorrelation."""
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    m = sum(x) / n
    xc = x - m
    denom = sum(v * v for v in xc)
    out = []
    for lag in range(max_lag + 1):
        acc = 0.0
        for t in range(n - lag):
            acc += xc[t] * xc[t + lag]
        out.append(acc / denom)
    out[0] = 1.0
    return np.array(out)


def naive_autocorrelation_fast(x, max_lag):
    """Per-lag dot products (same definition, faster for long inputs)."""
    x = np.asarray(x, dtype=np.float64)
    xc = x - x.mean()
    denom = float(xc @ xc)
    out = np.array([float(xc[: len(x) - lag] @ xc[lag:]) / denom for lag in range(max_lag + 1)])
    out[0] = 1.0
    return out


def butter_double_pass_gain(f, cutoff, order):
    """Analytic squared-magnitude of a forward-backward Butterworth lowpass."""
    return 1.0 / (1.0 + (f / cutoff) ** (2 * order))


def fit_sine_amplitude(x, freq, fs):
    """Least-squares amplitude of a sinusoid at a known frequency."""
    t = np.arange(len(x)) / fs
    basis = np.column_stack([np.sin(2 * np.pi * freq * t), np.cos(2 * np.pi * freq * t)])
    coef, *_ = np.linalg.lstsq(basis, x, rcond=None)
    return float(np.hypot(coef[0], coef[1]))


# ---------------------------------------------------------------------------
# spline + spectrum oracle (for the frequency-domain HRV path)


def notaknot_spline_eval(t, v, query):
    """Not-a-knot cubic spline through (t, v), evaluated at query points,
    solved as a dense linear system in the knot second derivatives."""
    t = np.asarray(t, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    n = len(t)
    if n < 4:
        raise ValueError("not-a-knot spline needs >= 4 points")
    h = np.diff(t)
    A = np.zeros((n, n))
    rhs = np.zeros(n)
    for i in range(1, n - 1):
        A[i, i - 1] = h[i - 1] / 6.0
        A[i, i] = (h[i - 1] + h[i]) / 3.0
        A[i, i + 1] = h[i] / 6.0
        rhs[i] = (v[i + 1] - v[i]) / h[i] - (v[i] - v[i - 1]) / h[i - 1]
    # third-derivative continuity at the second and second-to-last knots
    A[0, 0] = 1.0 / h[0]
    A[0, 1] = -(1.0 / h[0] + 1.0 / h[1])
    A[0, 2] = 1.0 / h[1]
    A[n - 1, n - 3] = 1.0 / h[n - 3]
    A[n - 1, n - 2] = -(1.0 / h[n - 3] + 1.0 / h[n - 2])
    A[n - 1, n - 1] = 1.0 / h[n - 2]
    M = np.linalg.solve(A, rhs)

    out = np.empty(len(query))
    for qi, x in enumerate(np.asarray(query, dtype=np.float64)):
        i = min(max(int(np.searchsorted(t, x, side="right")) - 1, 0), n - 2)
        hi = h[i]
        a = (t[i + 1] - x) / hi
        b = (x - t[i]) / hi
        out[qi] = (
            M[i] * (t[i + 1] - x) ** 3 / (6.0 * hi)
            + M[i + 1] * (x - t[i]) ** 3 / (6.0 * hi)
            + (v[i] - M[i] * hi * hi / 6.0) * a
            + (v[i + 1] - M[i + 1] * hi * hi / 6.0) * b
        )
    return out


def naive_power_spectrum(x, fs):
    """Hann-windowed one-sided periodogram, renormalized to the population
    variance, via an explicit DFT matrix."""
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    xm = x - x.mean()
    w = 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)
    xw = w * xm
    k = np.arange(n // 2 + 1)
    angles = -2.0 * np.pi * np.outer(k, np.arange(n)) / n
    real = np.cos(angles) @ xw
    imag = np.sin(angles) @ xw
    power = real * real + imag * imag
    power[1:] *= 2.0
    if n % 2 == 0:
        power[-1] /= 2.0
    freqs = np.fft.rfftfreq(n, d=1.0 / fs)
    df = freqs[1] - freqs[0]
    total = power.sum() * df
    var = float(xm @ xm) / n
    if total > 0 and var > 0:
        power = power * (var / total)
    else:
        power = np.zeros_like(power)
    return freqs, power


def naive_band_power(freqs, power, lo, hi):
    """Hand-rolled trapezoid over bins with lo <= f < hi."""
    idx = [i for i in range(len(freqs)) if lo <= freqs[i] < hi]
    if len(idx) < 2:
        return 0.0
    acc = 0.0
    for a, b in zip(idx[:-1], idx[1:]):
        acc += 0.5 * (power[a] + power[b]) * (freqs[b] - freqs[a])
    return acc


# ---------------------------------------------------------------------------
# HRV feature oracles (Table-1 analogues)


def naive_time_domain(v):
    v = [float(x) for x in v]
    n = len(v)
    if n < 3:
        return (math.nan,) * 10
    d = [v[i + 1] - v[i] for i in range(n - 1)]
    rmssd = math.sqrt(sum(x * x for x in d) / len(d))
    dm = sum(d) / len(d)
    sdsd = math.sqrt(sum((x - dm) ** 2 for x in d) / (len(d) - 1))
    pnn50 = 100.0 * sum(1 for x in d if abs(x) > 50.0) / len(d)
    pnn25 = 100.0 * sum(1 for x in d if abs(x) > 25.0) / len(d)
    pnn10 = 100.0 * sum(1 for x in d if abs(x) > 10.0) / len(d)
    mean = sum(v) / n
    std = math.sqrt(sum((x - mean) ** 2 for x in v) / (n - 1))
    s = sorted(v)
    med = s[n // 2] if n % 2 == 1 else 0.5 * (s[n // 2 - 1] + s[n // 2])
    return (rmssd, sdsd, pnn50, pnn25, pnn10, mean, std, med, min(v), max(v))


def naive_poincare(v):
    v = [float(x) for x in v]
    if len(v) < 3:
        return (math.nan,) * 4
    d = [v[i + 1] - v[i] for i in range(len(v) - 1)]
    dmean = sum(d) / len(d)
    var_d = sum((x - dmean) ** 2 for x in d) / len(d)
    vmean = sum(v) / len(v)
    var_v = sum((x - vmean) ** 2 for x in v) / len(v)
    sd1 = math.sqrt(var_d / 2.0)
    sd2 = math.sqrt(max(2.0 * var_v - var_d / 2.0, 0.0))
    ratio = sd1 / sd2 if sd2 > 0 else math.nan
    return (sd1, sd2, ratio, math.pi * sd1 * sd2)


def _lsq_line(xs, ys):
    n = len(xs)
    sx = sum(xs)
    sy = sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, ys))
    denom = n * sxx - sx * sx
    slope = (n * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / n
    return slope, intercept


def naive_dfa_alpha1(v):
    v = [float(x) for x in v]
    n = len(v)
    if n < 16:
        return math.nan
    sizes = list(range(4, min(16, n // 4) + 1))
    if len(sizes) < 2:
        return math.nan
    mean = sum(v) / n
    y = []
    acc = 0.0
    for x in v:
        acc += x - mean
        y.append(acc)
    fluct = []
    for size in sizes:
        nb = n // size
        sq = 0.0
        count = 0
        for b in range(nb):
            seg = y[b * size : (b + 1) * size]
            xs = list(range(size))
            slope, intercept = _lsq_line(xs, seg)
            for i, val in enumerate(seg):
                resid = val - (slope * i + intercept)
                sq += resid * resid
                count += 1
        fluct.append(math.sqrt(sq / count))
    if any(f <= 0 for f in fluct):
        return math.nan
    slope, _ = _lsq_line([math.log(s) for s in sizes], [math.log(f) for f in fluct])
    return slope


def naive_apen(v, m=2, r_factor=0.2):
    v = np.asarray(v, dtype=np.float64)
    n = len(v)
    if n < m + 2:
        return math.nan
    mean = v.sum() / n
    std = math.sqrt(float(((v - mean) ** 2).sum()) / (n - 1))
    if std == 0.0:
        return 0.0
    r = r_factor * std

    def phi(mm):
        nt = n - mm + 1
        templates = [v[i : i + mm] for i in range(nt)]
        total = 0.0
        for i in range(nt):
            count = 0
            for j in range(nt):
                if np.max(np.abs(templates[i] - templates[j])) <= r:
                    count += 1
            total += math.log(count / nt)
        return total / nt

    return max(phi(m) - phi(m + 1), 0.0)


def naive_frequency_domain(interval_times, intervals, resample_hz=4.0):
    t = np.asarray(interval_times, dtype=np.float64)
    v = np.asarray(intervals, dtype=np.float64)
    if len(v) < 4 or (t[-1] - t[0]) < 2.5:
        return (math.nan,) * 4
    span = t[-1] - t[0]
    grid = t[0] + np.arange(int(np.floor(span * resample_hz)) + 1) / resample_hz
    tach = notaknot_spline_eval(t, v, grid)
    freqs, power = naive_power_spectrum(tach, resample_hz)
    return (
        naive_band_power(freqs, power, 0.003, 0.04),
        naive_band_power(freqs, power, 0.04, 0.15),
        naive_band_power(freqs, power, 0.15, 0.4),
        naive_band_power(freqs, power, 0.003, 0.4),
    )


def naive_hrv_vector(ibi):
    """All 20 HRV features from an IbiSeries, oracle path."""
    v = ibi.intervals_ms
    return np.array(
        [
            *naive_time_domain(v),
            *naive_frequency_domain(ibi.interval_times_s, v),
            *naive_poincare(v),
            naive_dfa_alpha1(v),
            naive_apen(v),
        ]
    )


# ---------------------------------------------------------------------------
# BVP feature oracles (Table-2 analogues)


def _naive_zscore(x):
    x = np.asarray(x, dtype=np.float64)
    mean = x.sum() / len(x)
    std = math.sqrt(float(((x - mean) ** 2).sum()) / len(x))
    return (x - mean) / std


def _bin_index(val, edges):
    for j in range(len(edges) - 1):
        if edges[j] <= val < edges[j + 1]:
            return j
        if j == len(edges) - 2 and val == edges[j + 1]:
            return j
    return None


def naive_histogram_mode(x, bins):
    z = _naive_zscore(x)
    edges = np.linspace(z.min(), z.max(), bins + 1)
    counts = [0] * bins
    for val in z:
        j = _bin_index(val, edges)
        if j is not None:
            counts[j] += 1
    best = max(range(bins), key=lambda j: (counts[j], -j))
    return 0.5 * (edges[best] + edges[best + 1])


def naive_acf_first_1e(x, acf=None):
    n = len(x)
    r = naive_autocorrelation_fast(x, n // 2) if acf is None else acf
    for lag in range(1, n // 2 + 1):
        if r[lag] < 1.0 / math.e:
            return lag
    return n // 2


def naive_acf_first_min(x, acf=None):
    n = len(x)
    r = naive_autocorrelation_fast(x, n // 2) if acf is None else acf
    for lag in range(1, n // 2):
        if r[lag] < r[lag - 1] and r[lag] < r[lag + 1]:
            return lag
    return n // 2


def naive_ami(x, tau=5, bins=10):
    x = np.asarray(x, dtype=np.float64)
    edges = np.linspace(x.min(), x.max(), bins + 1)
    edges[-1] += 1e-12
    a = x[:-tau]
    b = x[tau:]
    joint = np.zeros((bins, bins))
    for va, vb in zip(a, b):
        ia = _bin_index(va, edges)
        ib = _bin_index(vb, edges)
        joint[ia, ib] += 1
    p = joint / joint.sum()
    px = p.sum(axis=1)
    py = p.sum(axis=0)
    mi = 0.0
    for i in range(bins):
        for j in range(bins):
            if p[i, j] > 0:
                mi += p[i, j] * math.log2(p[i, j] / (px[i] * py[j]))
    return mi


def naive_ami_first_min(x, max_lag=40, bins=10):
    n = len(x)
    limit = max(min(max_lag, n // 2, n - 11), 3)
    ami = [naive_ami(x, tau=tau, bins=bins) for tau in range(1, limit + 1)]
    for i in range(1, len(ami) - 1):
        if ami[i] < ami[i - 1] and ami[i] < ami[i + 1]:
            return i + 1
    return limit


def naive_below_mean_event_interval(x):
    x = np.asarray(x, dtype=np.float64)
    mean = x.sum() / len(x)
    std = math.sqrt(float(((x - mean) ** 2).sum()) / len(x))
    threshold = mean - std
    events = [i for i, val in enumerate(x) if val < threshold]
    if len(events) < 2:
        return float(len(x))
    gaps = [b - a for a, b in zip(events[:-1], events[1:])]
    return sum(gaps) / len(gaps)


def naive_spectral_summaries(x, fs):
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    xm = x - x.sum() / n
    k = np.arange(n // 2 + 1)
    angles = -2.0 * np.pi * np.outer(k, np.arange(n)) / n
    power = (np.cos(angles) @ xm) ** 2 + (np.sin(angles) @ xm) ** 2
    freqs = np.fft.rfftfreq(n, d=1.0 / fs)
    total = power.sum()
    frac = sum(p for f, p in zip(freqs, power) if f < fs / 10.0) / total
    centroid = sum(f * p for f, p in zip(freqs, power)) / total
    return frac, centroid


def naive_forecast_err(x):
    x = np.asarray(x, dtype=np.float64)
    errs = [abs(x[t] - (x[t - 3] + x[t - 2] + x[t - 1]) / 3.0) for t in range(3, len(x))]
    return sum(errs) / len(errs)


def naive_trev(x):
    x = np.asarray(x, dtype=np.float64)
    d = [x[i + 1] - x[i] for i in range(len(x) - 1)]
    m2 = sum(v * v for v in d) / len(d)
    m3 = sum(v**3 for v in d) / len(d)
    return m3 / m2**1.5


def naive_tau_resrat(x):
    d = np.diff(np.asarray(x, dtype=np.float64))
    if d.std() == 0:
        return math.nan
    return naive_acf_first_1e(d) / naive_acf_first_1e(x)


def _naive_quantile(sorted_vals, q):
    n = len(sorted_vals)
    h = q * (n - 1)
    lo = int(math.floor(h))
    hi = min(lo + 1, n - 1)
    frac = h - lo
    return sorted_vals[lo] + frac * (sorted_vals[hi] - sorted_vals[lo])


def naive_symbolic(x):
    x = np.asarray(x, dtype=np.float64)
    mean = x.sum() / len(x)
    std = math.sqrt(float(((x - mean) ** 2).sum()) / len(x))
    d = [abs(x[i + 1] - x[i]) for i in range(len(x) - 1)]
    pnn40 = sum(1 for v in d if v > 0.04 * std) / len(d)

    longest = run = 0
    for i in range(len(x) - 1):
        run = run + 1 if x[i + 1] < x[i] else 0
        longest = max(longest, run)

    z = _naive_zscore(x)
    s = np.sort(z)
    q1 = _naive_quantile(s, 1.0 / 3.0)
    q2 = _naive_quantile(s, 2.0 / 3.0)
    letters = [0 if v <= q1 else (1 if v <= q2 else 2) for v in z]
    counts = np.zeros((3, 3))
    for a, b in zip(letters[:-1], letters[1:]):
        counts[a, b] += 1
    p = counts / counts.sum()
    entropy = -sum(p[i, j] * math.log2(p[i, j]) for i in range(3) for j in range(3) if p[i, j] > 0)

    # covariance with the three columns as variables (ddof=1), trace only
    trace = 0.0
    for j in range(3):
        col = p[:, j]
        cm = col.sum() / 3.0
        trace += sum((v - cm) ** 2 for v in col) / 2.0
    return pnn40, longest, entropy, trace


def naive_periodicity_wang(x, threshold=0.01):
    x = np.asarray(x, dtype=np.float64)
    if len(x) < 64 or x.std() == 0:
        return 0
    t = list(range(len(x)))
    slope, intercept = _lsq_line(t, list(x))
    detr = np.array([v - (slope * i + intercept) for i, v in enumerate(x)])
    if detr.std() == 0:
        return 0
    max_lag = len(x) // 3
    r = naive_autocorrelation_fast(detr, max_lag)
    troughs = [i for i in range(1, max_lag) if r[i] < r[i - 1] and r[i] < r[i + 1]]
    peaks = [i for i in range(1, max_lag) if r[i] > r[i - 1] and r[i] > r[i + 1]]
    if not troughs:
        return 0
    for lag in peaks:
        if lag > troughs[0] and r[lag] > threshold:
            return lag
    return 0


def naive_embed2_expfit(x):
    x = np.asarray(x, dtype=np.float64)
    tau = naive_acf_first_1e(x)
    a = x[:-tau]
    b = x[tau:]
    dist = [math.hypot(a[i + 1] - a[i], b[i + 1] - b[i]) for i in range(len(a) - 1)]
    mu = sum(dist) / len(dist)
    if mu == 0:
        return math.nan
    ds = sorted(dist)
    n = len(ds)
    return sum(abs((1.0 - math.exp(-d / mu)) - (i + 1) / n) for i, d in enumerate(ds)) / n


def naive_fluct_props(x):
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    if n < 64 or x.std() == 0:
        return (math.nan, math.nan)
    mean = x.sum() / n
    y = np.cumsum(x - mean)
    # the box-size grid formula is part of the feature definition and is
    # shared verbatim; the fluctuations and regime split below are not
    lo = math.log(5.0)
    hi = math.log(n / 2.0)
    raw = {int(math.floor(math.exp(lo + i * (hi - lo) / 49.0) + 1e-9)) for i in range(50)}
    taus = sorted(t for t in raw if 5 <= t <= n // 2)
    if len(taus) < 12:
        return (math.nan, math.nan)
    f_dfa = []
    f_rs = []
    for tau in taus:
        nb = n // tau
        sq = 0.0
        count = 0
        sq_range = 0.0
        for bidx in range(nb):
            seg = y[bidx * tau : (bidx + 1) * tau]
            xs = list(range(tau))
            slope, intercept = _lsq_line(xs, list(seg))
            resid = [seg[i] - (slope * i + intercept) for i in range(tau)]
            sq += sum(v * v for v in resid)
            count += tau
            sq_range += (max(resid) - min(resid)) ** 2
        f_dfa.append(math.sqrt(sq / count))
        f_rs.append(math.sqrt(sq_range / nb))
    if any(f <= 0 for f in f_dfa) or any(f <= 0 for f in f_rs):
        return (math.nan, math.nan)
    log_tau = [math.log(t) for t in taus]

    def split_prop(log_f):
        nn = len(log_tau)
        best = (math.inf, 6)
        for split in range(6, nn - 6 + 1):
            sse = 0.0
            for a, b in ((0, split), (split, nn)):
                slope, intercept = _lsq_line(log_tau[a:b], log_f[a:b])
                sse += sum((log_f[i] - (slope * log_tau[i] + intercept)) ** 2 for i in range(a, b))
            if sse < best[0]:
                best = (sse, split)
        return best[1] / nn

    return split_prop([math.log(f) for f in f_dfa]), split_prop([math.log(f) for f in f_rs])


def naive_bvp_vector(x, fs, ami_tau=5, ami_bins=10):
    """All 24 exported BVP features (with alias slots), oracle path."""
    x = np.asarray(x, dtype=np.float64)
    mean = x.sum() / len(x)
    std = math.sqrt(float(((x - mean) ** 2).sum()) / (len(x) - 1))
    z = _naive_zscore(x)
    acf = naive_autocorrelation_fast(z, len(z) // 2)
    first_1e = naive_acf_first_1e(z, acf=acf)
    first_min = naive_acf_first_min(z, acf=acf)
    ami = naive_ami(z, tau=ami_tau, bins=ami_bins)
    frac5, centroid = naive_spectral_summaries(z, fs)
    pnn40, longest, entropy, trace = naive_symbolic(z)
    dfa_prop, rs_prop = naive_fluct_props(z)
    return np.array(
        [
            mean,
            std,
            naive_histogram_mode(z, 5),
            naive_histogram_mode(z, 10),
            float(first_1e),
            ami,
            naive_below_mean_event_interval(z),
            float(first_1e),
            float(first_min),
            frac5,
            centroid,
            naive_forecast_err(z),
            naive_trev(z),
            ami,
            float(naive_ami_first_min(z, bins=ami_bins)),
            pnn40,
            float(longest),
            entropy,
            trace,
            float(naive_periodicity_wang(z)),
            naive_tau_resrat(z),
            naive_embed2_expfit(z),
            dfa_prop,
            rs_prop,
        ]
    )


# ---------------------------------------------------------------------------
# metric and statistics oracles


def pairwise_auc(scores, labels):
    """AUC as the explicit pairwise win fraction (U / (n1 n0))."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    wins = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                wins += 1.0
            elif p == q:
                wins += 0.5
    return wins / (len(pos) * len(neg))


def joint_midranks(pooled):
    """Midranks by explicit tie grouping over the sorted order."""
    pooled = list(pooled)
    order = sorted(range(len(pooled)), key=lambda i: pooled[i])
    ranks = [0.0] * len(pooled)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def naive_dunn_z(groups):
    """Brute-force Dunn z for every pair, from the ranking definition."""
    pooled = [v for g in groups for v in g]
    ranks = joint_midranks(pooled)
    n = len(pooled)
    mean_ranks = []
    offset = 0
    for g in groups:
        mean_ranks.append(sum(ranks[offset : offset + len(g)]) / len(g))
        offset += len(g)
    tie_sum = 0.0
    seen = {}
    for v in pooled:
        seen[v] = seen.get(v, 0) + 1
    for count in seen.values():
        if count > 1:
            tie_sum += count**3 - count
    base = n * (n + 1) / 12.0 - tie_sum / (12.0 * (n - 1))
    out = {}
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            se = math.sqrt(base * (1.0 / len(groups[i]) + 1.0 / len(groups[j])))
            out[(i, j)] = (mean_ranks[i] - mean_ranks[j]) / se
    return out, mean_ranks


def mann_whitney_z_squared(a, b):
    """Tie-corrected normal-approximation z^2 for the two-group rank test."""
    pooled = list(a) + list(b)
    ranks = joint_midranks(pooled)
    n1, n2 = len(a), len(b)
    n = n1 + n2
    r1 = sum(ranks[:n1])
    u = r1 - n1 * (n1 + 1) / 2.0
    seen = {}
    for v in pooled:
        seen[v] = seen.get(v, 0) + 1
    tie_sum = sum(c**3 - c for c in seen.values() if c > 1)
    var_u = n1 * n2 / 12.0 * ((n + 1) - tie_sum / (n * (n - 1)))
    z = (u - n1 * n2 / 2.0) / math.sqrt(var_u)
    return z * z
