"""Plain delimited-text file formats for recordings, labels, manifests,
feature tables and reports.

Everything is inspectable text with a header row (except the manifest,
which is one `subject_id,recording_path,labels_path` line per subject).
Writers are deterministic: fixed float formats, fixed column orders, no
timestamps, so re-runs are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from .dataset import Dataset, PainState
from .errors import InvalidInputError
from .signal_core import SampledSignal

__all__ = [
    "Manifest",
    "write_recording_csv",
    "read_recording_csv",
    "write_labels_csv",
    "read_labels_csv",
    "write_manifest",
    "read_manifest",
    "write_feature_table",
    "read_feature_table",
    "write_report_json",
    "write_confusion_csv",
]

_FLOAT_FMT = "%.10g"


@dataclass(frozen=True)
class Manifest:
    """Per-subject file locations; ids must be unique."""

    entries: tuple  # ((subject_id, recording_path, labels_path), ...)
    schema_version: str = "1"

    def __post_init__(self):
        ids = [e[0] for e in self.entries]
        if len(set(ids)) != len(ids):
            raise InvalidInputError("duplicate subject ids in manifest")


def write_recording_csv(path, signal: SampledSignal) -> None:
    # fixed-point time keeps the step quantization uniform over long records
    frame = pd.DataFrame(
        {
            "time_s": [f"{t:.8f}" for t in signal.times()],
            "bvp": signal.samples,
        }
    )
    frame.to_csv(path, index=False, float_format=_FLOAT_FMT)


def read_recording_csv(path) -> SampledSignal:
    frame = pd.read_csv(path)
    if list(frame.columns) != ["time_s", "bvp"]:
        raise InvalidInputError(f"{path}: expected header time_s,bvp, got {list(frame.columns)}")
    t = frame["time_s"].to_numpy(dtype=np.float64)
    if len(t) < 2:
        raise InvalidInputError(f"{path}: recording needs at least 2 samples")
    steps = np.diff(t)
    if np.any(steps <= 0):
        bad = int(np.argmax(steps <= 0)) + 2  # 1-based line after the header
        raise InvalidInputError(f"{path}:{bad}: time_s must increase strictly")
    step = float(np.median(steps))
    if np.max(np.abs(steps - step)) > 1e-3 * step:
        raise InvalidInputError(f"{path}: time_s must advance at a fixed step")
    fs = 1.0 / step
    if abs(fs - round(fs)) < 1e-4 * fs:
        fs = float(round(fs))
    return SampledSignal(fs, frame["bvp"].to_numpy(dtype=np.float64), start_time_s=float(t[0]))


def write_labels_csv(path, epoch_reports) -> None:
    frame = pd.DataFrame(
        {
            "epoch_start_s": [t for t, _ in epoch_reports],
            "pain_score": [int(s) for _, s in epoch_reports],
        }
    )
    frame.to_csv(path, index=False, float_format=_FLOAT_FMT)


def read_labels_csv(path):
    frame = pd.read_csv(path)
    if list(frame.columns) != ["epoch_start_s", "pain_score"]:
        raise InvalidInputError(
            f"{path}: expected header epoch_start_s,pain_score, got {list(frame.columns)}"
        )
    reports = []
    for line, row in enumerate(frame.itertuples(index=False), start=2):
        score = row.pain_score
        if float(score) != int(score) or not (0 <= int(score) <= 10):
            raise InvalidInputError(f"{path}:{line}: pain score must be an integer in 0..10, got {score}")
        reports.append((float(row.epoch_start_s), int(score)))
    return tuple(reports)


def write_manifest(path, manifest: Manifest) -> None:
    lines = [f"{sid},{rec},{lab}" for sid, rec, lab in manifest.entries]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def read_manifest(path) -> Manifest:
    entries = []
    text = Path(path).read_text()
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise InvalidInputError(
                f"{path}:{line_no}: expected subject_id,recording_path,labels_path"
            )
        entries.append(tuple(p.strip() for p in parts))
    return Manifest(entries=tuple(entries))


_META_COLUMNS = ["subject_id", "window_start_s", "pain_score", "pain_state", "is_synthetic"]


def write_feature_table(path, ds: Dataset) -> None:
    frame = pd.DataFrame(
        {
            "subject_id": ds.subject_id,
            "window_start_s": ds.window_start_s,
            "pain_score": ds.pain_score,
            "pain_state": [PainState(int(s)).name for s in ds.pain_state],
            "is_synthetic": ds.is_synthetic.astype(int),
        }
    )
    for j, name in enumerate(ds.column_names):
        frame[name] = ds.X[:, j]
    frame.to_csv(path, index=False, float_format="%.12g")


def read_feature_table(path) -> Dataset:
    frame = pd.read_csv(path)
    missing = [c for c in _META_COLUMNS if c not in frame.columns]
    if missing:
        raise InvalidInputError(f"{path}: missing columns {missing}")
    feature_cols = [c for c in frame.columns if c not in _META_COLUMNS]
    return Dataset(
        X=frame[feature_cols].to_numpy(dtype=np.float64),
        pain_score=frame["pain_score"].to_numpy(dtype=np.int64),
        pain_state=np.array([int(PainState[s]) for s in frame["pain_state"]], dtype=np.int64),
        subject_id=frame["subject_id"].to_numpy(dtype=object),
        window_start_s=frame["window_start_s"].to_numpy(dtype=np.float64),
        is_synthetic=frame["is_synthetic"].to_numpy(dtype=bool),
        column_names=tuple(feature_cols),
    )


def write_report_json(path, report_dict: dict) -> None:
    Path(path).write_text(json.dumps(report_dict, indent=2, sort_keys=False) + "\n")


def write_confusion_csv(path, classes, counts) -> None:
    names = [PainState(int(c)).name if isinstance(c, (int, np.integer)) else str(c) for c in classes]
    frame = pd.DataFrame(np.asarray(counts), index=names, columns=names)
    frame.index.name = "true\\pred"
    frame.to_csv(path)
