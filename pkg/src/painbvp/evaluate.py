"""Evaluation metrics and stratified cross-validated reporting.

Conventions: 0/0 metric ratios resolve to 0 (logged); fold aggregation is
mean +- population std; ROC-AUC is the midrank (Mann-Whitney) estimator.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, smote, stratified_kfold
from .errors import InvalidInputError, RunFailedError, UndefinedClassError

__all__ = [
    "ConfusionMatrix",
    "EvalReport",
    "precision_recall_f1",
    "balanced_accuracy",
    "accuracy",
    "roc_auc",
    "macro_ovr_auc",
    "mae_rmse",
    "macro_f1",
    "cross_validate",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts[i, j] = samples with true class i predicted as class j."""

    classes: tuple
    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        k = len(self.classes)
        if counts.shape != (k, k) or np.any(counts < 0):
            raise InvalidInputError("counts must be a nonnegative KxK matrix")
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_predictions(cls, y_true, y_pred, classes=None) -> "ConfusionMatrix":
        y_true = np.asarray(y_true)
        y_pred = np.asarray(y_pred)
        if len(y_true) != len(y_pred):
            raise InvalidInputError("y_true and y_pred must have equal length")
        if classes is None:
            classes = np.unique(np.concatenate([y_true, y_pred]))
        classes = list(classes)
        index = {c: i for i, c in enumerate(classes)}
        counts = np.zeros((len(classes), len(classes)), dtype=np.int64)
        for t, p in zip(y_true, y_pred):
            counts[index[t], index[p]] += 1
        return cls(tuple(classes), counts)

    @property
    def n_samples(self) -> int:
        return int(self.counts.sum())


def _safe_ratio(num: float, den: float, what: str) -> float:
    if den == 0:
        log.warning("%s is 0/0; reporting 0 by convention", what)
        return 0.0
    return num / den


def precision_recall_f1(cm: ConfusionMatrix, class_label) -> tuple[float, float, float]:
    """One class's precision, recall and F1; 0/0 cases give 0 (logged)."""
    if class_label not in cm.classes:
        raise InvalidInputError(f"class {class_label!r} not in confusion matrix")
    i = cm.classes.index(class_label)
    tp = float(cm.counts[i, i])
    fp = float(cm.counts[:, i].sum() - tp)
    fn = float(cm.counts[i, :].sum() - tp)
    precision = _safe_ratio(tp, tp + fp, f"precision[{class_label}]")
    recall = _safe_ratio(tp, tp + fn, f"recall[{class_label}]")
    f1 = _safe_ratio(2.0 * precision * recall, precision + recall, f"f1[{class_label}]")
    return precision, recall, f1


def balanced_accuracy(cm: ConfusionMatrix) -> float:
    """Mean per-class recall; every class must have at least one true sample."""
    row_sums = cm.counts.sum(axis=1)
    if np.any(row_sums == 0):
        missing = cm.classes[int(np.argmin(row_sums))]
        raise UndefinedClassError(f"class {missing!r} has no true samples")
    recalls = np.diag(cm.counts) / row_sums
    return float(recalls.mean())


def accuracy(cm: ConfusionMatrix) -> float:
    return float(np.trace(cm.counts) / cm.n_samples)


def macro_f1(cm: ConfusionMatrix) -> float:
    return float(np.mean([precision_recall_f1(cm, c)[2] for c in cm.classes]))


def _midranks(x: np.ndarray) -> np.ndarray:
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x))
    sx = x[order]
    i = 0
    while i < len(sx):
        j = i
        while j + 1 < len(sx) and sx[j + 1] == sx[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def roc_auc(scores, labels) -> float:
    """Probability a random positive outranks a random negative (midrank ties).

    ``labels`` must contain exactly the values 0 and 1.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    pos = labels == 1
    neg = labels == 0
    n1 = int(pos.sum())
    n0 = int(neg.sum())
    if n1 == 0 or n0 == 0 or n1 + n0 != len(labels):
        raise UndefinedClassError("roc_auc needs both classes present (labels in {0,1})")
    ranks = _midranks(scores)
    u = ranks[pos].sum() - n1 * (n1 + 1) / 2.0
    return float(u / (n1 * n0))


def macro_ovr_auc(prob_matrix, labels, classes) -> float:
    """Unweighted mean of one-vs-rest AUCs; absent classes are skipped (logged)."""
    prob_matrix = np.asarray(prob_matrix, dtype=np.float64)
    labels = np.asarray(labels)
    aucs = []
    for i, cls in enumerate(classes):
        binary = (labels == cls).astype(np.int64)
        if binary.sum() in (0, len(binary)):
            log.warning("macro AUC: class %r absent from labels; skipped", cls)
            continue
        aucs.append(roc_auc(prob_matrix[:, i], binary))
    if not aucs:
        raise UndefinedClassError("macro AUC undefined: fewer than 2 classes present")
    return float(np.mean(aucs))


def mae_rmse(y_true, y_pred) -> tuple[float, float]:
    """Mean absolute error and root mean squared error."""
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    if len(y_true) != len(y_pred) or len(y_true) == 0:
        raise InvalidInputError("y_true and y_pred must be equal-length and non-empty")
    err = y_true - y_pred
    return float(np.mean(np.abs(err))), float(np.sqrt(np.mean(err * err)))


def _fmt(mean: float, std: float) -> str:
    return f"{mean:.4f} ± {std:.4f}"


@dataclass
class EvalReport:
    """Per-fold metric values with mean +- population-std summaries."""

    task: str
    model: str
    k: int
    seed: int
    metrics: dict = field(default_factory=dict)  # name -> {"per_fold": [...], "mean", "std", "formatted"}
    folds: list = field(default_factory=list)  # per-fold diagnostics
    confusion: list = field(default_factory=list)  # per-fold confusion matrices (classes, counts)
    config_echo: dict = field(default_factory=dict)

    def add_metric(self, name: str, per_fold):
        values = [float(v) for v in per_fold]
        mean = float(np.mean(values))
        std = float(np.std(values))
        self.metrics[name] = {
            "per_fold": values,
            "mean": mean,
            "std": std,
            "formatted": _fmt(mean, std),
        }

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "model": self.model,
            "k": self.k,
            "seed": self.seed,
            "metrics": self.metrics,
            "folds": self.folds,
            "confusion": self.confusion,
            "config": self.config_echo,
        }


def _classification_fold_metrics(model, X_test, y_test, classes):
    cm = ConfusionMatrix.from_predictions(y_test, model.predict(X_test), classes=classes)
    proba = model.predict_proba(X_test)
    out = {
        "accuracy": accuracy(cm),
        "balanced_accuracy": balanced_accuracy(cm),
        "f1_macro": macro_f1(cm),
    }
    if len(classes) == 2:
        positive = classes[-1]
        p, r, f1 = precision_recall_f1(cm, positive)
        out["precision"] = p
        out["recall"] = r
        out["f1"] = f1
        out["roc_auc"] = roc_auc(proba[:, 1], (y_test == positive).astype(np.int64))
    else:
        prf = [precision_recall_f1(cm, c) for c in classes]
        out["precision"] = float(np.mean([v[0] for v in prf]))
        out["recall"] = float(np.mean([v[1] for v in prf]))
        out["roc_auc"] = macro_ovr_auc(proba, y_test, classes)
    return out, cm


def cross_validate(
    model_factory,
    ds: Dataset,
    *,
    task: str = "classification",
    k: int = 5,
    seed: int = 0,
    smote_k: int = 5,
    oversample: bool = True,
    cv_mode: str = "window",
    model_name: str = "model",
    task_name: str = "task",
) -> EvalReport:
    """Stratified k-fold evaluation with SMOTE applied to training folds only.

    ``model_factory()`` must build a fresh unfitted estimator.  For
    classification the target is ``ds.pain_state``; for regression it is
    ``ds.pain_score`` (folds still stratify on pain state).  ``cv_mode``
    "subject" keeps each subject's windows inside a single fold.
    Synthetic rows never appear in a test fold: oversampling happens after
    the split, inside each training fold.
    """
    if np.any(ds.is_synthetic):
        raise InvalidInputError("cross_validate expects a dataset without synthetic rows")
    y = ds.pain_state if task == "classification" else ds.pain_score
    if cv_mode == "subject":
        folds = _subject_folds(ds, k, seed)
    else:
        folds = stratified_kfold(ds.pain_state, k=k, seed=seed)
    classes = tuple(int(c) for c in np.unique(ds.pain_state)) if task == "classification" else ()
    report = EvalReport(task=task_name, model=model_name, k=k, seed=seed)
    per_fold: dict[str, list] = {}
    n_failed = 0
    all_idx = np.arange(len(ds))
    for fold_idx, test_idx in enumerate(folds):
        train_idx = np.setdiff1d(all_idx, test_idx)
        train = ds.select(train_idx)
        test = ds.select(test_idx)
        if task == "classification" and oversample:
            train = smote(train, k=smote_k, seed=seed + fold_idx)
        X_train = train.X
        y_train = train.pain_state if task == "classification" else train.pain_score
        try:
            model = model_factory()
            if "seed" in model.get_params():
                model.set_params(seed=seed + fold_idx)
            model.fit(X_train, y_train)
            if task == "classification":
                fold_metrics, cm = _classification_fold_metrics(
                    model, test.X, test.pain_state, classes
                )
                report.confusion.append(
                    {"classes": list(cm.classes), "counts": cm.counts.tolist()}
                )
            else:
                mae, rmse = mae_rmse(test.pain_score, model.predict(test.X))
                fold_metrics = {"mae": mae, "rmse": rmse}
        except Exception as exc:  # noqa: BLE001 - fold failures are reported, not fatal
            log.warning("fold %d failed: %s", fold_idx, exc)
            n_failed += 1
            report.folds.append({"fold": fold_idx, "failed": True, "error": str(exc)})
            continue
        for name, value in fold_metrics.items():
            per_fold.setdefault(name, []).append(value)
        report.folds.append(
            {
                "fold": fold_idx,
                "failed": False,
                "n_train_real": int((~train.is_synthetic).sum()),
                "n_train_synthetic": int(train.is_synthetic.sum()),
                "n_test": len(test),
                "n_test_synthetic": int(test.is_synthetic.sum()),
            }
        )
    if n_failed >= 2:
        raise RunFailedError(f"{n_failed} of {k} folds failed")
    for name, values in per_fold.items():
        report.add_metric(name, values)
    return report


def _subject_folds(ds: Dataset, k: int, seed: int) -> list[np.ndarray]:
    """Round-robin subjects into k folds (subject-grouped CV mode)."""
    subjects = np.unique(ds.subject_id)
    if len(subjects) < k:
        raise InvalidInputError(f"subject-grouped CV needs >= {k} subjects, got {len(subjects)}")
    rng = np.random.default_rng(seed)
    rng.shuffle(subjects)
    folds = []
    for i in range(k):
        members = subjects[i::k]
        folds.append(np.flatnonzero(np.isin(ds.subject_id, members)))
    return folds
