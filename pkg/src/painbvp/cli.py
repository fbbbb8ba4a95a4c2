"""Operator-facing command line: synth | ingest | extract | train-eval |
importance | stats.

Workspace convention: every command reads and writes inside ``--out DIR``
(recordings, ``ingest.json``, ``features.csv``, reports).  All outputs are
deterministic given inputs, config and seed, so re-runs are byte-identical.

Exit codes: 0 success, 1 usage/config error, 2 data validation error,
3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .config import RunConfig, load_config, merge_config
from .dataset import Dataset, PainState, SubjectRecording, normalize_per_subject, smote, stratified_kfold, tuning_split
from .errors import (
    InvalidConfigurationError,
    InvalidInputError,
    InvalidParameterError,
    PipelineError,
)
from .evaluate import cross_validate, macro_f1, ConfusionMatrix, mae_rmse
from .learn import FAMILIES, extra_trees_importance, grid_search
from .learn.linear import ConstantRegressor
from .pipeline import FEATURE_COLUMNS, extract_dataset
from .stats import feature_pain_analysis
from .synth import SynthConfig, generate_cohort

log = logging.getLogger("painbvp")

TASKS = {
    "np-vs-lp": (PainState.NP, PainState.LP),
    "np-vs-mp": (PainState.NP, PainState.MP),
    "np-vs-hp": (PainState.NP, PainState.HP),
    "lp-vs-mp": (PainState.LP, PainState.MP),
    "lp-vs-hp": (PainState.LP, PainState.HP),
    "mp-vs-hp": (PainState.MP, PainState.HP),
    "multiclass": (PainState.LP, PainState.MP, PainState.HP),
    "regression": None,
}

#: model flag -> family tag, per task kind
CLASSIFIER_MODELS = {
    "logreg": "logreg",
    "linsvm": "linsvm",
    "rforest": "rforest",
    "adaboost": "adaboost",
    "gbt": "gbt",
}
REGRESSOR_MODELS = {
    "linreg": "linreg",
    "svr": "svr_linear",
    "rforest": "rforest_reg",
    "adaboost": "adaboost_reg",
    "gbt": "gbt_reg",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        raise SystemExit(f"error: {message}") from None


def _build_parser() -> _Parser:
    parser = _Parser(prog="painbvp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", required=True, help="workspace directory")
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--seed", type=int, help="master seed override")
        p.add_argument("--jobs", type=int, help="worker threads")

    p_synth = sub.add_parser("synth", help="generate a synthetic cohort + manifest")
    common(p_synth)
    p_synth.add_argument("--subjects", type=int, default=32)
    p_synth.add_argument("--duration", type=float, default=220.0)

    p_ingest = sub.add_parser("ingest", help="validate a manifest of recordings")
    common(p_ingest)
    p_ingest.add_argument("--manifest", required=True)

    p_extract = sub.add_parser("extract", help="window the recordings into a feature table")
    common(p_extract)

    p_train = sub.add_parser("train-eval", help="grid search + cross-validated evaluation")
    common(p_train)
    p_train.add_argument("--task", required=True, choices=sorted(TASKS))
    p_train.add_argument("--model", default="gbt")

    p_imp = sub.add_parser("importance", help="extra-trees feature importances across folds")
    common(p_imp)

    p_stats = sub.add_parser("stats", help="Dunn's test tables per feature across pain states")
    common(p_stats)
    p_stats.add_argument("--feature", action="append", required=True)

    return parser


def _load_runconfig(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    return merge_config(cfg, seed=args.seed, n_jobs=args.jobs)


def cmd_synth(args) -> int:
    cfg = _load_runconfig(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    synth_cfg = SynthConfig(seed=cfg.seed, duration_s=args.duration)
    recordings, _ = generate_cohort(args.subjects, synth_cfg, seed=cfg.seed)
    entries = []
    for rec in recordings:
        rec_path = out / f"{rec.subject_id}.csv"
        lab_path = out / f"{rec.subject_id}_labels.csv"
        fileio.write_recording_csv(rec_path, rec.bvp)
        fileio.write_labels_csv(lab_path, rec.epoch_reports)
        entries.append((rec.subject_id, str(rec_path), str(lab_path)))
    fileio.write_manifest(out / "manifest.csv", fileio.Manifest(entries=tuple(entries)))
    print(f"wrote {len(entries)} subjects and manifest to {out}")
    return 0


def cmd_ingest(args) -> int:
    cfg = _load_runconfig(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = fileio.read_manifest(args.manifest)
    if not manifest.entries:
        print("error: manifest is empty", file=sys.stderr)
        return 1
    subjects = []
    rejected = []
    for subject_id, rec_path, lab_path in manifest.entries:
        try:
            signal = fileio.read_recording_csv(rec_path)
            reports = fileio.read_labels_csv(lab_path)
            rec = SubjectRecording(subject_id=subject_id, bvp=signal, epoch_reports=reports)
        except (PipelineError, OSError, ValueError) as exc:
            rejected.append({"subject_id": subject_id, "reason": str(exc)})
            continue
        scores = rec.epoch_scores
        subjects.append(
            {
                "subject_id": subject_id,
                "recording_path": rec_path,
                "labels_path": lab_path,
                "duration_s": rec.bvp.duration_s,
                "sample_rate_hz": rec.bvp.sample_rate_hz,
                "n_epochs": len(reports),
                "score_histogram": {str(s): int((scores == s).sum()) for s in np.unique(scores)},
            }
        )
    store = {
        "schema_version": manifest.schema_version,
        "config": cfg.to_dict(),
        "subjects": subjects,
        "rejected": rejected,
    }
    (out / "ingest.json").write_text(json.dumps(store, indent=2) + "\n")
    print(f"ingested {len(subjects)} subject(s), {len(rejected)} reject(s)")
    for r in rejected:
        print(f"  rejected {r['subject_id']}: {r['reason']}", file=sys.stderr)
    durations = [s["duration_s"] for s in subjects]
    if durations:
        print(f"durations: min {min(durations):.1f} s, max {max(durations):.1f} s")
    if not subjects:
        print("error: no valid subjects", file=sys.stderr)
        return 2
    return 0


def _load_store(out: Path) -> list[SubjectRecording]:
    store_path = out / "ingest.json"
    if not store_path.exists():
        raise InvalidConfigurationError(f"{store_path} not found; run ingest first")
    store = json.loads(store_path.read_text())
    recordings = []
    for s in store["subjects"]:
        signal = fileio.read_recording_csv(s["recording_path"])
        reports = fileio.read_labels_csv(s["labels_path"])
        recordings.append(
            SubjectRecording(subject_id=s["subject_id"], bvp=signal, epoch_reports=reports)
        )
    return recordings


def cmd_extract(args) -> int:
    cfg = _load_runconfig(args)
    out = Path(args.out)
    recordings = _load_store(out)
    ds, extraction = extract_dataset(recordings, cfg)
    fileio.write_feature_table(out / "features.csv", ds)
    log_doc = {
        "config": cfg.to_dict(),
        "kept": extraction.kept,
        "dropped": extraction.dropped,
        "rows": len(ds),
        "columns": list(FEATURE_COLUMNS),
    }
    (out / "extract_log.json").write_text(json.dumps(log_doc, indent=2) + "\n")
    print(
        f"extracted {len(ds)} windows "
        f"({extraction.total_dropped()} dropped for undefined features)"
    )
    for subject, n_dropped in extraction.dropped.items():
        if n_dropped:
            print(f"  {subject}: dropped {n_dropped} window(s)")
    return 0


def _task_dataset(ds: Dataset, task: str) -> Dataset:
    states = TASKS[task]
    if states is None:
        return ds
    keep = np.isin(ds.pain_state, [int(s) for s in states])
    sub = ds.select(np.flatnonzero(keep))
    if len(sub) == 0:
        raise InvalidInputError(f"no rows left for task {task}")
    present = set(int(v) for v in np.unique(sub.pain_state))
    missing = [s.name for s in states if int(s) not in present]
    if missing:
        raise InvalidInputError(f"task {task}: class(es) {missing} absent from the feature table")
    return sub


def _model_factory(family: str, params: dict, seed: int):
    cls = FAMILIES[family]

    def factory(**overrides):
        merged = dict(params)
        merged.update(overrides)
        model = cls(**merged)
        if "seed" in model.get_params():
            model.set_params(seed=seed)
        return model

    return factory


def cmd_train_eval(args) -> int:
    cfg = _load_runconfig(args)
    out = Path(args.out)
    task = args.task
    is_regression = task == "regression"
    models = REGRESSOR_MODELS if is_regression else CLASSIFIER_MODELS
    if args.model not in models:
        raise InvalidConfigurationError(
            f"model {args.model!r} not available for task {task}; choose from {sorted(models)}"
        )
    family = models[args.model]

    ds = fileio.read_feature_table(out / "features.csv")
    ds = normalize_per_subject(ds)
    ds = _task_dataset(ds, task)
    main, tuning = tuning_split(ds, frac=cfg.tuning_frac, seed=cfg.seed)

    grid = cfg.grids.get(family, {})
    factory = _model_factory(family, {}, cfg.seed)
    if grid and len(tuning) > 0:
        if is_regression:
            train_X, train_y = main.X, main.pain_score
            tune_y = tuning.pain_score

            def score_fn(model, X, y):
                return -mae_rmse(y, model.predict(X))[0]

        else:
            fit_ds = smote(main, k=cfg.smote_k, seed=cfg.seed)
            train_X, train_y = fit_ds.X, fit_ds.pain_state
            tune_y = tuning.pain_state

            def score_fn(model, X, y):
                cm = ConfusionMatrix.from_predictions(y, model.predict(X))
                return macro_f1(cm)

        best_params, search_log = grid_search(
            factory, grid, (train_X, train_y), (tuning.X, tune_y), score_fn
        )
    else:
        best_params, search_log = {}, []

    final_factory = _model_factory(family, best_params, cfg.seed)
    report = cross_validate(
        final_factory,
        main,
        task="regression" if is_regression else "classification",
        k=cfg.cv_k,
        seed=cfg.seed,
        smote_k=cfg.smote_k,
        oversample=not is_regression,
        cv_mode=cfg.cv_mode,
        model_name=args.model,
        task_name=task,
    )
    report.config_echo = cfg.to_dict()
    doc = report.to_dict()
    doc["grid_best"] = best_params
    doc["grid_log"] = search_log
    if is_regression:
        naive = cross_validate(
            lambda: ConstantRegressor(value=5.0),
            main,
            task="regression",
            k=cfg.cv_k,
            seed=cfg.seed,
            oversample=False,
            cv_mode=cfg.cv_mode,
            model_name="naive-p5",
            task_name=task,
        )
        doc["naive_benchmark_p5"] = {
            name: entry for name, entry in naive.to_dict()["metrics"].items()
        }
    stem = f"report_{task}_{args.model}"
    fileio.write_report_json(out / f"{stem}.json", doc)
    for fold_idx, item in enumerate(doc["confusion"]):
        fileio.write_confusion_csv(
            out / f"{stem}_confusion_fold{fold_idx}.csv", item["classes"], item["counts"]
        )
    for name, entry in doc["metrics"].items():
        print(f"{name}: {entry['formatted']}")
    print(f"report written to {out / (stem + '.json')}")
    return 0


def cmd_importance(args) -> int:
    cfg = _load_runconfig(args)
    out = Path(args.out)
    ds = fileio.read_feature_table(out / "features.csv")
    ds = normalize_per_subject(ds)
    folds = stratified_kfold(ds.pain_state, k=cfg.cv_k, seed=cfg.seed)
    all_idx = np.arange(len(ds))
    fold_importances = []
    for fold_idx, test_idx in enumerate(folds):
        train = ds.select(np.setdiff1d(all_idx, test_idx))
        train = smote(train, k=cfg.smote_k, seed=cfg.seed + fold_idx)
        imp = extra_trees_importance(
            train.X, train.pain_state, n_trees=cfg.importance_trees, seed=cfg.seed + fold_idx
        )
        fold_importances.append(imp)
    mean_imp = np.mean(fold_importances, axis=0)
    order = np.argsort(-mean_imp, kind="stable")
    lines = ["feature,importance,top"]
    for j in order:
        top = int(mean_imp[j] > cfg.importance_top_threshold)
        lines.append(f"{ds.column_names[j]},{mean_imp[j]:.8f},{top}")
    (out / "importance.csv").write_text("\n".join(lines) + "\n")
    n_top = int(np.sum(mean_imp > cfg.importance_top_threshold))
    print(f"{n_top} feature(s) above the {cfg.importance_top_threshold} importance threshold")
    return 0


def cmd_stats(args) -> int:
    cfg = _load_runconfig(args)
    out = Path(args.out)
    ds = fileio.read_feature_table(out / "features.csv")
    ds = normalize_per_subject(ds)
    for feature in args.feature:
        results = feature_pain_analysis(ds, feature)
        lines = ["feature,pair,z,p,p_adj,significant"]
        for r in results:
            lines.append(
                f"{feature},{r.group_a}-vs-{r.group_b},{r.z:.8f},{r.p_value:.8g},"
                f"{r.p_adjusted:.8g},{int(r.significant_at_0_05)}"
            )
        path = out / f"stats_{feature}.csv"
        path.write_text("\n".join(lines) + "\n")
        print(f"wrote {path}")
    return 0


_COMMANDS = {
    "synth": cmd_synth,
    "ingest": cmd_ingest,
    "extract": cmd_extract,
    "train-eval": cmd_train_eval,
    "importance": cmd_importance,
    "stats": cmd_stats,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 1
        return 0 if exc.code in (0, None) else 1
    try:
        return _COMMANDS[args.command](args)
    except (InvalidConfigurationError, InvalidParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except InvalidInputError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except PipelineError as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
