"""Synthetic cold-pressor-style BVP generator with ground truth.

Because the original human recordings are private, this generator is the
project's end-to-end oracle: it emits recordings whose beat times, pain
epochs and per-state physiology are known exactly.  The planted effect is
a pain-state-dependent shortening of the mean RR interval plus a pulse
amplitude reduction (the sympathetic-activation direction); both are
config values, not physiological claims.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dataset import PainState, SubjectRecording, bin_pain
from .errors import InvalidConfigurationError
from .signal_core import SampledSignal

__all__ = ["SynthConfig", "GroundTruth", "generate_recording", "generate_cohort"]

#: Keep beats away from the record edges so every pulse is fully rendered.
_EDGE_GUARD_S = 0.4


@dataclass(frozen=True)
class SynthConfig:
    """Generator tunables; defaults mimic the 220-s cold-pressor protocol."""

    seed: int = 0
    duration_s: float = 220.0
    sample_rate_hz: float = 2048.0
    epoch_scores: tuple = (0, 2, 3, 4, 5, 6, 6, 7, 7, 8, 8)
    epoch_len_s: float = 20.0
    state_rr_ms: tuple = (850.0, 765.0, 688.0, 620.0)  # NP, LP, MP, HP
    state_amplitude: tuple = (1.0, 0.88, 0.77, 0.67)
    lf_mod_depth_ms: float = 20.0
    lf_mod_hz: float = 0.1
    hf_mod_depth_ms: float = 12.0
    hf_mod_hz: float = 0.25
    rr_jitter_sd_ms: float = 8.0
    noise_sd: float = 0.02
    pulse_width_s: float = 0.045
    dicrotic_delay_s: float = 0.30
    dicrotic_width_s: float = 0.08
    dicrotic_amp: float = 0.25

    def __post_init__(self):
        if self.duration_s <= 0 or self.sample_rate_hz <= 0:
            raise InvalidConfigurationError("duration and sample rate must be positive")
        if len(self.epoch_scores) < 1 or self.epoch_scores[0] != 0:
            raise InvalidConfigurationError("first epoch score must be 0 (baseline)")
        for s in self.epoch_scores:
            bin_pain(int(s))
        if len(self.state_rr_ms) != 4 or len(self.state_amplitude) != 4:
            raise InvalidConfigurationError("need one RR and amplitude entry per pain state")
        for rr in self.state_rr_ms:
            if not (300.0 <= rr <= 2000.0):
                raise InvalidConfigurationError(f"state mean RR {rr} ms outside [300, 2000]")
        if np.any(np.diff(self.state_rr_ms) >= 0):
            raise InvalidConfigurationError("mean RR must strictly decrease with pain state")
        if self.rr_jitter_sd_ms < 0 or self.noise_sd < 0:
            raise InvalidConfigurationError("noise levels must be >= 0")


@dataclass(frozen=True)
class GroundTruth:
    """What the generator actually emitted."""

    beat_times_s: np.ndarray
    epoch_scores: tuple
    sample_states: np.ndarray  # per-sample PainState value


def _state_at(t: float, cfg: SynthConfig) -> PainState:
    epoch = min(int(t // cfg.epoch_len_s), len(cfg.epoch_scores) - 1)
    return bin_pain(int(cfg.epoch_scores[epoch]))


def generate_recording(cfg: SynthConfig, subject_id: str = "S01"):
    """One recording plus its ground truth; bit-identical per seed.

    Beats follow an RR process (state mean + LF/HF sinusoids + Gaussian
    jitter); the waveform is a per-beat two-Gaussian pulse (systolic peak
    plus dicrotic bump) scaled by the state amplitude, plus white noise.
    """
    rng = np.random.default_rng(cfg.seed)
    beats = []
    t = _EDGE_GUARD_S
    while t < cfg.duration_s - _EDGE_GUARD_S:
        beats.append(t)
        state = _state_at(t, cfg)
        rr = (
            cfg.state_rr_ms[int(state)]
            + cfg.lf_mod_depth_ms * np.sin(2.0 * np.pi * cfg.lf_mod_hz * t)
            + cfg.hf_mod_depth_ms * np.sin(2.0 * np.pi * cfg.hf_mod_hz * t)
            + cfg.rr_jitter_sd_ms * rng.standard_normal()
        )
        rr = float(np.clip(rr, 300.0, 2000.0))
        t += rr / 1000.0
    beat_times = np.array(beats)

    n = int(round(cfg.duration_s * cfg.sample_rate_hz))
    times = np.arange(n) / cfg.sample_rate_hz
    wave = np.zeros(n)
    fs = cfg.sample_rate_hz
    for tb in beat_times:
        amp = cfg.state_amplitude[int(_state_at(tb, cfg))]
        lo = max(0, int((tb - 4.0 * cfg.pulse_width_s) * fs))
        hi = min(n, int((tb + cfg.dicrotic_delay_s + 4.0 * cfg.dicrotic_width_s) * fs) + 1)
        seg = times[lo:hi]
        wave[lo:hi] += amp * (
            np.exp(-((seg - tb) ** 2) / (2.0 * cfg.pulse_width_s**2))
            + cfg.dicrotic_amp
            * np.exp(-((seg - tb - cfg.dicrotic_delay_s) ** 2) / (2.0 * cfg.dicrotic_width_s**2))
        )
    if cfg.noise_sd > 0:
        wave = wave + cfg.noise_sd * rng.standard_normal(n)

    epoch_reports = tuple(
        (i * cfg.epoch_len_s, int(s)) for i, s in enumerate(cfg.epoch_scores)
    )
    recording = SubjectRecording(
        subject_id=subject_id,
        bvp=SampledSignal(cfg.sample_rate_hz, wave),
        epoch_reports=epoch_reports,
    )
    epoch_idx = np.clip(
        (times // cfg.epoch_len_s).astype(np.int64), 0, len(cfg.epoch_scores) - 1
    )
    score_to_state = np.array([int(bin_pain(int(s))) for s in cfg.epoch_scores], dtype=np.int64)
    truth = GroundTruth(
        beat_times_s=beat_times,
        epoch_scores=tuple(int(s) for s in cfg.epoch_scores),
        sample_states=score_to_state[epoch_idx],
    )
    return recording, truth


def generate_cohort(n_subjects: int, base_cfg: SynthConfig, seed: int = 0):
    """n recordings with per-subject parameter jitter.

    Mean RR is perturbed by +-10% and pulse amplitude by +-20% per subject;
    subject ids are S01, S02, ...  Returns (recordings, truths).
    """
    if n_subjects < 1:
        raise InvalidConfigurationError("n_subjects must be >= 1")
    rng = np.random.default_rng(seed)
    recordings = []
    truths = []
    for i in range(n_subjects):
        rr_factor = rng.uniform(0.9, 1.1)
        amp_factor = rng.uniform(0.8, 1.2)
        sub_seed = int(rng.integers(0, 2**31 - 1))
        cfg = replace(
            base_cfg,
            seed=sub_seed,
            state_rr_ms=tuple(min(max(r * rr_factor, 300.0), 2000.0) for r in base_cfg.state_rr_ms),
            state_amplitude=tuple(a * amp_factor for a in base_cfg.state_amplitude),
        )
        rec, truth = generate_recording(cfg, subject_id=f"S{i + 1:02d}")
        recordings.append(rec)
        truths.append(truth)
    return recordings, truths
