"""Uniformly sampled signal container and shared DSP primitives.

Every operation here is a pure function of its inputs; there is no shared
mutable state, so everything is safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .errors import (
    DegenerateInputError,
    InsufficientDataError,
    InvalidInputError,
    InvalidParameterError,
)

__all__ = [
    "SampledSignal",
    "PowerSpectrum",
    "butterworth_lowpass",
    "zscore",
    "autocorrelation",
    "power_spectrum",
    "band_power",
]

#: Recordings at least this long are estimated with Welch averaging instead
#: of a single periodogram.
WELCH_MIN_DURATION_S = 60.0


def as_float_array(x, name: str = "x") -> np.ndarray:
    """Coerce to a 1-D float64 array, rejecting higher dimensions."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class SampledSignal:
    """A uniformly sampled, finite, real-valued waveform.

    ``duration_s`` is ``len(samples) / sample_rate_hz``; sample ``i`` sits at
    ``start_time_s + i / sample_rate_hz``.
    """

    sample_rate_hz: float
    samples: np.ndarray
    start_time_s: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.sample_rate_hz) or self.sample_rate_hz <= 0:
            raise InvalidParameterError(f"sample_rate_hz must be > 0, got {self.sample_rate_hz}")
        arr = as_float_array(self.samples, "samples")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("samples contain NaN or Inf")
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate_hz

    def times(self) -> np.ndarray:
        """Sample times in seconds."""
        return self.start_time_s + np.arange(len(self.samples)) / self.sample_rate_hz


@dataclass(frozen=True)
class PowerSpectrum:
    """One-sided power spectral density on an ascending frequency grid from 0."""

    freqs_hz: np.ndarray
    power: np.ndarray

    def __post_init__(self):
        f = as_float_array(self.freqs_hz, "freqs_hz")
        p = as_float_array(self.power, "power")
        if len(f) != len(p):
            raise InvalidInputError("freqs_hz and power must have equal length")
        if len(f) == 0 or f[0] != 0.0 or np.any(np.diff(f) <= 0):
            raise InvalidInputError("freqs_hz must ascend strictly from 0")
        if np.any(p < 0):
            raise InvalidInputError("power must be nonnegative")
        object.__setattr__(self, "freqs_hz", f)
        object.__setattr__(self, "power", p)

    def total_power(self) -> float:
        """Trapezoid integral over the whole frequency grid."""
        return band_power(self, 0.0, float(self.freqs_hz[-1]) + 1.0)


def butterworth_lowpass(signal: SampledSignal, cutoff_hz: float, order: int = 2) -> SampledSignal:
    """Zero-phase Butterworth low-pass filter (forward-backward, SOS form).

    The double pass squares the magnitude response and cancels the phase, so
    the effective attenuation is ``1 / (1 + (f/fc)^(2*order))`` and pulse
    timing is preserved.  Edges are odd-reflection padded by ``6 * order``
    samples before filtering.
    """
    if not (1 <= int(order) <= 8) or int(order) != order:
        raise InvalidParameterError(f"order must be an integer in 1..8, got {order}")
    order = int(order)
    nyquist = signal.sample_rate_hz / 2.0
    if not (0.0 < cutoff_hz < nyquist):
        raise InvalidParameterError(
            f"cutoff_hz must lie in (0, {nyquist}) for fs={signal.sample_rate_hz}, got {cutoff_hz}"
        )
    padlen = 3 * (order * 2)
    if len(signal) <= padlen:
        raise InsufficientDataError(
            f"need more than {padlen} samples for edge padding at order {order}, got {len(signal)}"
        )
    sos = sps.butter(order, cutoff_hz, btype="lowpass", fs=signal.sample_rate_hz, output="sos")
    filtered = sps.sosfiltfilt(sos, signal.samples, padtype="odd", padlen=padlen)
    return SampledSignal(signal.sample_rate_hz, filtered, signal.start_time_s)


def zscore(x) -> np.ndarray:
    """Standardize to mean 0 and population (1/N) standard deviation 1."""
    arr = as_float_array(x)
    if len(arr) < 2:
        raise InsufficientDataError("zscore needs at least 2 samples")
    std = arr.std()
    if std == 0.0:
        raise DegenerateInputError("zero variance input cannot be z-scored")
    return (arr - arr.mean()) / std


def autocorrelation(x, max_lag: int) -> np.ndarray:
    """Normalized sample autocorrelation r[0..max_lag] with r[0] = 1.

    Uses the standard biased estimator
    ``r[k] = sum_t (x_t - m)(x_{t+k} - m) / sum_t (x_t - m)^2``,
    evaluated via FFT (linear, not circular, correlation).
    """
    arr = as_float_array(x)
    if max_lag < 1 or int(max_lag) != max_lag:
        raise InvalidParameterError(f"max_lag must be a positive integer, got {max_lag}")
    max_lag = int(max_lag)
    if len(arr) <= max_lag:
        raise InsufficientDataError(f"need more than max_lag={max_lag} samples, got {len(arr)}")
    xc = arr - arr.mean()
    denom = float(xc @ xc)
    if denom == 0.0:
        raise DegenerateInputError("constant input has no autocorrelation")
    nfft = 1 << int(np.ceil(np.log2(2 * len(arr))))
    spec = np.fft.rfft(xc, nfft)
    acov = np.fft.irfft(spec * np.conj(spec), nfft)[: max_lag + 1]
    r = acov / denom
    r[0] = 1.0
    return r


def _hann_periodic(n: int) -> np.ndarray:
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def power_spectrum(signal: SampledSignal) -> PowerSpectrum:
    """One-sided power spectral density of a signal.

    Short signals (< 60 s) get a Hann-windowed periodogram; longer ones
    Welch averaging (4 segments, 50% overlap).  The mean is removed first
    and the result is rescaled so that the rectangle-rule integral
    ``sum(power) * df`` equals the population variance of the input exactly,
    i.e. Parseval holds by construction despite the tapering window.
    """
    n = len(signal)
    if n < 8:
        raise InsufficientDataError(f"power_spectrum needs at least 8 samples, got {n}")
    fs = signal.sample_rate_hz
    x = signal.samples
    if signal.duration_s < WELCH_MIN_DURATION_S:
        freqs, power = sps.periodogram(x, fs=fs, window=_hann_periodic(n), detrend="constant")
    else:
        nperseg = max(8, int(np.ceil(2 * n / 5)))  # 4 segments at 50% overlap
        freqs, power = sps.welch(
            x,
            fs=fs,
            window=_hann_periodic(nperseg),
            nperseg=nperseg,
            noverlap=nperseg // 2,
            detrend="constant",
        )
    df = freqs[1] - freqs[0]
    raw_total = float(power.sum() * df)
    variance = float(x.var())
    if raw_total > 0.0 and variance > 0.0:
        power = power * (variance / raw_total)
    else:
        power = np.zeros_like(power)
    return PowerSpectrum(freqs, power)


def band_power(spec: PowerSpectrum, lo_hz: float, hi_hz: float) -> float:
    """Trapezoid integral of the spectrum over bins with lo <= f < hi.

    Bands containing fewer than two bins integrate to 0.
    """
    if lo_hz < 0 or not lo_hz < hi_hz:
        raise InvalidParameterError(f"need 0 <= lo < hi, got lo={lo_hz}, hi={hi_hz}")
    mask = (spec.freqs_hz >= lo_hz) & (spec.freqs_hz < hi_hz)
    if np.count_nonzero(mask) < 2:
        return 0.0
    return float(np.trapezoid(spec.power[mask], spec.freqs_hz[mask]))
