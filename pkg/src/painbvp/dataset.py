"""Labeled windowed feature datasets: segmentation, binning, normalization,
SMOTE oversampling, and stratified splits."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    CannotOversampleError,
    InvalidConfigurationError,
    InvalidInputError,
    InvalidParameterError,
)
from .signal_core import SampledSignal

__all__ = [
    "PainState",
    "SubjectRecording",
    "LabeledWindow",
    "Dataset",
    "segment_windows",
    "bin_pain",
    "label_window",
    "normalize_per_subject",
    "smote",
    "stratified_kfold",
    "tuning_split",
]

log = logging.getLogger(__name__)

EPOCH_LEN_S = 20.0


class PainState(enum.IntEnum):
    """The four-bin pain labeling: NP=0, LP (0,3], MP (3,6], HP (6,10]."""

    NP = 0
    LP = 1
    MP = 2
    HP = 3


def bin_pain(score: int) -> PainState:
    """Map a 0-10 self-report score to its pain state."""
    if not (0 <= score <= 10) or int(score) != score:
        raise InvalidInputError(f"pain score must be an integer in 0..10, got {score}")
    if score == 0:
        return PainState.NP
    if score <= 3:
        return PainState.LP
    if score <= 6:
        return PainState.MP
    return PainState.HP


@dataclass(frozen=True)
class SubjectRecording:
    """One subject's BVP recording plus the per-epoch self-reports."""

    subject_id: str
    bvp: SampledSignal
    epoch_reports: tuple  # ((epoch_start_s, pain_score), ...)

    def __post_init__(self):
        reports = tuple((float(t), int(s)) for t, s in self.epoch_reports)
        if not reports:
            raise InvalidInputError("recording needs at least one epoch report")
        starts = np.array([t for t, _ in reports])
        if np.any(np.diff(starts) <= 0):
            raise InvalidInputError("epoch starts must be ascending")
        if reports[0][1] != 0:
            raise InvalidInputError("first epoch must be the zero-pain baseline")
        for _, score in reports:
            bin_pain(score)  # range check
        object.__setattr__(self, "epoch_reports", reports)

    @property
    def epoch_starts(self) -> np.ndarray:
        return np.array([t for t, _ in self.epoch_reports])

    @property
    def epoch_scores(self) -> np.ndarray:
        return np.array([s for _, s in self.epoch_reports], dtype=np.int64)


@dataclass(frozen=True)
class LabeledWindow:
    """One feature row: a window's 44 features plus its labels."""

    subject_id: str
    window_start_s: float
    features: np.ndarray
    pain_score: int
    pain_state: PainState
    is_synthetic: bool = False


@dataclass(frozen=True)
class Dataset:
    """Columnar table of labeled windows with a fixed feature-column order."""

    X: np.ndarray  # (n, n_features) float64, no NaN
    pain_score: np.ndarray  # (n,) int
    pain_state: np.ndarray  # (n,) int (PainState values)
    subject_id: np.ndarray  # (n,) str
    window_start_s: np.ndarray  # (n,) float
    is_synthetic: np.ndarray  # (n,) bool
    column_names: tuple

    def __post_init__(self):
        n = len(self.X)
        for name in ("pain_score", "pain_state", "subject_id", "window_start_s", "is_synthetic"):
            if len(getattr(self, name)) != n:
                raise InvalidInputError(f"{name} length must match X")
        if self.X.ndim != 2 or self.X.shape[1] != len(self.column_names):
            raise InvalidInputError("X width must match column_names")
        if np.any(~np.isfinite(self.X)):
            raise InvalidInputError("dataset must not contain NaN/Inf features")
        object.__setattr__(self, "column_names", tuple(self.column_names))

    def __len__(self) -> int:
        return len(self.X)

    @classmethod
    def from_windows(cls, windows: list[LabeledWindow], column_names) -> "Dataset":
        if windows:
            X = np.vstack([w.features for w in windows])
        else:
            X = np.empty((0, len(column_names)))
        return cls(
            X=X,
            pain_score=np.array([w.pain_score for w in windows], dtype=np.int64),
            pain_state=np.array([int(w.pain_state) for w in windows], dtype=np.int64),
            subject_id=np.array([w.subject_id for w in windows], dtype=object),
            window_start_s=np.array([w.window_start_s for w in windows], dtype=np.float64),
            is_synthetic=np.array([w.is_synthetic for w in windows], dtype=bool),
            column_names=tuple(column_names),
        )

    def select(self, idx) -> "Dataset":
        """Row subset (keeps column order)."""
        idx = np.asarray(idx)
        return Dataset(
            X=self.X[idx],
            pain_score=self.pain_score[idx],
            pain_state=self.pain_state[idx],
            subject_id=self.subject_id[idx],
            window_start_s=self.window_start_s[idx],
            is_synthetic=self.is_synthetic[idx],
            column_names=self.column_names,
        )

    def column(self, name: str) -> np.ndarray:
        return self.X[:, self.column_names.index(name)]


def segment_windows(duration_s: float, len_s: float = 5.0, overlap: float = 0.5) -> np.ndarray:
    """Start times of sliding windows fully contained in [0, duration_s].

    Stride is ``len_s * (1 - overlap)``; windows start at 0, stride, ...
    """
    if len_s <= 0:
        raise InvalidParameterError("len_s must be positive")
    if not (0 <= overlap < 1):
        raise InvalidParameterError("overlap must lie in [0, 1)")
    stride = len_s * (1.0 - overlap)
    if duration_s < len_s:
        return np.empty(0)
    n = int(np.floor((duration_s - len_s) / stride + 1e-9)) + 1
    return np.arange(n) * stride


def label_window(window_start_s: float, len_s: float, epoch_reports) -> int:
    """Pain score of the epoch containing the window's center time.

    A center exactly on an epoch boundary takes the later epoch; a center
    past the end of the last epoch is invalid.
    """
    center = window_start_s + len_s / 2.0
    starts = np.array([t for t, _ in epoch_reports])
    scores = [s for _, s in epoch_reports]
    if center < starts[0]:
        raise InvalidInputError(f"window center {center} precedes the first epoch")
    idx = int(np.searchsorted(starts, center, side="right")) - 1
    epoch_len = starts[1] - starts[0] if len(starts) > 1 else EPOCH_LEN_S
    if center >= starts[-1] + epoch_len:
        raise InvalidInputError(f"window center {center} lies beyond the last epoch")
    return scores[idx]


def normalize_per_subject(ds: Dataset) -> Dataset:
    """Z-score every feature column within each subject (population std).

    A zero-variance column within a subject becomes zeros; the number of
    such occurrences is logged.
    """
    X = ds.X.copy()
    degenerate = 0
    for subject in np.unique(ds.subject_id):
        rows = np.flatnonzero(ds.subject_id == subject)
        if len(rows) < 2:
            raise InvalidConfigurationError(
                f"subject {subject} has {len(rows)} window(s); need >= 2 to normalize"
            )
        block = X[rows]
        mean = block.mean(axis=0)
        std = block.std(axis=0)
        flat = std == 0.0
        degenerate += int(flat.sum())
        std[flat] = 1.0
        block = (block - mean) / std
        block[:, flat] = 0.0
        X[rows] = block
    if degenerate:
        log.warning("per-subject normalization zeroed %d constant feature column(s)", degenerate)
    return replace(ds, X=X)


def smote(ds: Dataset, k: int = 5, seed: int = 0) -> Dataset:
    """Balance classes by synthesizing minority points on segments between
    minority neighbours (SMOTE).

    Every class is raised to the majority count.  Each synthetic row is
    ``x + u * (x' - x)`` for a random minority row x, one of its k nearest
    minority neighbours x' (Euclidean), and u ~ Uniform[0, 1).  Synthetic
    rows carry ``is_synthetic=True`` and inherit their parent's labels.
    """
    if len(ds) == 0:
        raise CannotOversampleError("empty dataset")
    rng = np.random.default_rng(seed)
    labels = ds.pain_state
    classes, counts = np.unique(labels, return_counts=True)
    target = counts.max()
    new_rows = []
    new_meta = []  # (score, state, subject, start)
    for cls, count in zip(classes, counts):
        need = int(target - count)
        if need == 0:
            continue
        if count < 2:
            raise CannotOversampleError(f"class {cls} has {count} row(s); need >= 2 to oversample")
        k_eff = min(k, count - 1)
        if k_eff < k:
            log.warning("SMOTE k reduced from %d to %d for class %s", k, k_eff, cls)
        rows = np.flatnonzero(labels == cls)
        pts = ds.X[rows]
        # pairwise distances within the minority class
        d2 = np.sum((pts[:, None, :] - pts[None, :, :]) ** 2, axis=2)
        np.fill_diagonal(d2, np.inf)
        neighbours = np.argsort(d2, axis=1, kind="stable")[:, :k_eff]
        for _ in range(need):
            i = int(rng.integers(len(rows)))
            j = int(neighbours[i, rng.integers(k_eff)])
            u = rng.uniform()
            new_rows.append(pts[i] + u * (pts[j] - pts[i]))
            src = rows[i]
            new_meta.append(
                (ds.pain_score[src], labels[src], ds.subject_id[src], ds.window_start_s[src])
            )
    if not new_rows:
        return ds
    X = np.vstack([ds.X, np.vstack(new_rows)])
    return Dataset(
        X=X,
        pain_score=np.concatenate([ds.pain_score, [m[0] for m in new_meta]]),
        pain_state=np.concatenate([ds.pain_state, [m[1] for m in new_meta]]),
        subject_id=np.concatenate([ds.subject_id, np.array([m[2] for m in new_meta], dtype=object)]),
        window_start_s=np.concatenate([ds.window_start_s, [m[3] for m in new_meta]]),
        is_synthetic=np.concatenate([ds.is_synthetic, np.ones(len(new_meta), dtype=bool)]),
        column_names=ds.column_names,
    )


def stratified_kfold(labels, k: int = 5, seed: int = 0) -> list[np.ndarray]:
    """k disjoint test index sets preserving class proportions within +-1.

    Rows of each class are shuffled (seeded) and dealt to folds; the folds
    partition all indices.
    """
    labels = np.asarray(labels)
    if k < 2:
        raise InvalidConfigurationError("k must be >= 2")
    rng = np.random.default_rng(seed)
    folds = [[] for _ in range(k)]
    classes, counts = np.unique(labels, return_counts=True)
    if counts.min() < k:
        bad = classes[np.argmin(counts)]
        raise InvalidConfigurationError(
            f"class {bad} has {counts.min()} sample(s); stratified {k}-fold needs >= {k}"
        )
    offset = 0
    for cls in classes:
        rows = np.flatnonzero(labels == cls)
        rng.shuffle(rows)
        # rotate which folds receive the remainder so fold sizes stay balanced
        for i, row in enumerate(rows):
            folds[(i + offset) % k].append(row)
        offset += len(rows) % k
    return [np.sort(np.array(f, dtype=np.int64)) for f in folds]


def tuning_split(ds: Dataset, frac: float = 0.16, seed: int = 0) -> tuple[Dataset, Dataset]:
    """Carve a class-stratified tuning subset out of a dataset.

    Returns ``(main, tuning)``; the tuning rows are used only for grid
    search / feature selection and never enter cross-validation folds.
    ``frac=0`` returns the input and an empty tuning set.
    """
    if not (0 <= frac < 1):
        raise InvalidParameterError("frac must lie in [0, 1)")
    n = len(ds)
    if frac == 0.0:
        return ds, ds.select(np.empty(0, dtype=np.int64))
    rng = np.random.default_rng(seed)
    tune_rows = []
    for cls in np.unique(ds.pain_state):
        rows = np.flatnonzero(ds.pain_state == cls)
        take = int(round(frac * len(rows)))
        take = max(1, take)
        if take >= len(rows):
            raise InvalidConfigurationError(
                f"class {cls} has only {len(rows)} row(s); cannot stratify a {frac:.0%} tuning split"
            )
        rng.shuffle(rows)
        tune_rows.append(rows[:take])
    tune_idx = np.sort(np.concatenate(tune_rows))
    main_idx = np.setdiff1d(np.arange(n), tune_idx)
    if len(main_idx) == 0:
        raise InvalidConfigurationError("tuning split would leave the main set empty")
    return ds.select(main_idx), ds.select(tune_idx)
