"""Run configuration: every pipeline tunable, with defaults matching the
published protocol settings (8 Hz cutoff, 5-s windows at 50% overlap,
5 folds, 16% tuning fraction).

Precedence when running the CLI: command-line flag > config file >
built-in default.  The effective configuration is echoed into every
report so runs are self-describing.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace

from .errors import InvalidConfigurationError

__all__ = ["RunConfig", "DEFAULT_GRIDS", "load_config", "merge_config"]

DEFAULT_GRIDS = {
    "logreg": {"l2_lambda": [0.1, 1.0, 10.0]},
    "linsvm": {"C": [0.1, 1.0, 10.0]},
    "rforest": {"n_trees": [100, 300], "max_depth": [4, 6]},
    "adaboost": {"n_rounds": [50, 100]},
    "gbt": {
        "n_rounds": [100, 300],
        "max_depth": [2, 3, 4, 6],
        "learning_rate": [0.05, 0.1, 0.3],
        "l2_leaf_lambda": [0.1, 1.0, 10.0],
    },
    "linreg": {},
    "svr_linear": {"C": [0.1, 1.0, 10.0]},
    "rforest_reg": {"n_trees": [100, 300], "max_depth": [4, 6]},
    "adaboost_reg": {"n_rounds": [50, 100]},
    "gbt_reg": {
        "n_rounds": [100, 300],
        "max_depth": [2, 3, 4, 6],
        "learning_rate": [0.05, 0.1, 0.3],
        "l2_leaf_lambda": [0.1, 1.0, 10.0],
    },
}


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    # filtering
    filter_cutoff_hz: float = 8.0
    filter_order: int = 2
    # beat detection
    beat_window_s: float = 2.0
    beat_std_factor: float = 0.5
    beat_refractory_s: float = 0.25
    # interval cleaning ("strict paper-following mode" disables the gate)
    ibi_clean: bool = True
    ibi_min_ms: float = 300.0
    ibi_max_ms: float = 2000.0
    # windowing
    window_len_s: float = 5.0
    window_overlap: float = 0.5
    # HRV feature tunables
    tachogram_hz: float = 4.0
    apen_m: int = 2
    apen_r_factor: float = 0.2
    # BVP feature tunables
    ami_tau: int = 5
    ami_bins: int = 10
    periodicity_threshold: float = 0.01
    # modelling
    cv_k: int = 5
    tuning_frac: float = 0.16
    smote_k: int = 5
    cv_mode: str = "window"  # or "subject"
    grids: dict = field(default_factory=lambda: {k: dict(v) for k, v in DEFAULT_GRIDS.items()})
    importance_trees: int = 200
    importance_top_threshold: float = 0.025
    # execution
    n_jobs: int = 1

    def validate(self) -> "RunConfig":
        if self.filter_cutoff_hz <= 0:
            raise InvalidConfigurationError("filter_cutoff_hz must be positive")
        if not (1 <= self.filter_order <= 8):
            raise InvalidConfigurationError("filter_order must be in 1..8")
        if self.window_len_s <= 0 or not (0 <= self.window_overlap < 1):
            raise InvalidConfigurationError("bad windowing settings")
        if self.cv_k < 2:
            raise InvalidConfigurationError("cv_k must be >= 2")
        if not (0 <= self.tuning_frac < 1):
            raise InvalidConfigurationError("tuning_frac must lie in [0, 1)")
        if self.smote_k < 1:
            raise InvalidConfigurationError("smote_k must be >= 1")
        if self.cv_mode not in ("window", "subject"):
            raise InvalidConfigurationError("cv_mode must be 'window' or 'subject'")
        if self.ibi_min_ms >= self.ibi_max_ms:
            raise InvalidConfigurationError("ibi_min_ms must be < ibi_max_ms")
        if self.n_jobs < 1:
            raise InvalidConfigurationError("n_jobs must be >= 1")
        return self

    def to_dict(self) -> dict:
        return asdict(self)


_FIELD_NAMES = {f.name for f in fields(RunConfig)}


def load_config(path) -> RunConfig:
    """RunConfig from a JSON file of field overrides."""
    with open(path) as fh:
        data = json.load(fh)
    unknown = set(data) - _FIELD_NAMES
    if unknown:
        raise InvalidConfigurationError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**data).validate()


def merge_config(base: RunConfig, **overrides) -> RunConfig:
    """Apply non-None overrides (CLI flags beat file values)."""
    updates = {k: v for k, v in overrides.items() if v is not None}
    unknown = set(updates) - _FIELD_NAMES
    if unknown:
        raise InvalidConfigurationError(f"unknown config overrides: {sorted(unknown)}")
    return replace(base, **updates).validate()
