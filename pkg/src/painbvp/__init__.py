"""BVP-based pain assessment: signal processing, feature engineering,
imbalance-aware model training, evaluation and statistical analysis."""

from .beats import IbiSeries, detect_beats, extract_ibi
from .bvp_features import BVP_FEATURE_NAMES, BvpFeatures, bvp_feature_vector
from .config import RunConfig
from .dataset import (
    Dataset,
    LabeledWindow,
    PainState,
    SubjectRecording,
    bin_pain,
    normalize_per_subject,
    smote,
    stratified_kfold,
    tuning_split,
)
from .hrv import HRV_FEATURE_NAMES, HrvFeatures, hrv_feature_vector
from .pipeline import FEATURE_COLUMNS, extract_dataset, extract_recording
from .signal_core import (
    PowerSpectrum,
    SampledSignal,
    autocorrelation,
    band_power,
    butterworth_lowpass,
    power_spectrum,
    zscore,
)
from .synth import GroundTruth, SynthConfig, generate_cohort, generate_recording

__version__ = "0.1.0"

__all__ = [
    "IbiSeries",
    "detect_beats",
    "extract_ibi",
    "BVP_FEATURE_NAMES",
    "BvpFeatures",
    "bvp_feature_vector",
    "RunConfig",
    "Dataset",
    "LabeledWindow",
    "PainState",
    "SubjectRecording",
    "bin_pain",
    "normalize_per_subject",
    "smote",
    "stratified_kfold",
    "tuning_split",
    "HRV_FEATURE_NAMES",
    "HrvFeatures",
    "hrv_feature_vector",
    "FEATURE_COLUMNS",
    "extract_dataset",
    "extract_recording",
    "PowerSpectrum",
    "SampledSignal",
    "autocorrelation",
    "band_power",
    "butterworth_lowpass",
    "power_spectrum",
    "zscore",
    "GroundTruth",
    "SynthConfig",
    "generate_cohort",
    "generate_recording",
    "__version__",
]
