"""Acoustic detector: WAV I/O, feature extraction and the SVM classifier."""

from .audio_io import read_wav, write_wav, resample
from .features import (
    frame_signal,
    zero_crossing_rate,
    short_time_energy,
    power_spectrum,
    spectral_centroid_spread,
    mel_filterbank,
    mfcc,
    extract_features,
    extract_feature_matrix,
    write_feature_dump,
)
from .svm import (
    Kernel,
    SvmModel,
    Standardization,
    standardize_fit,
    train,
    train_arrays,
    decision_value,
    decision_values,
    classify_clip,
    save_model,
    load_model,
    resolve_feature_subset,
)
from .validators import (
    FEATURE_NAMES,
    AudioClip,
    FeatureVector,
    FrameSpec,
    Label,
    LabeledSample,
    Spectrum,
    WindowKind,
)

__all__ = [
    "read_wav",
    "write_wav",
    "resample",
    "frame_signal",
    "zero_crossing_rate",
    "short_time_energy",
    "power_spectrum",
    "spectral_centroid_spread",
    "mel_filterbank",
    "mfcc",
    "extract_features",
    "extract_feature_matrix",
    "write_feature_dump",
    "Kernel",
    "SvmModel",
    "Standardization",
    "standardize_fit",
    "train",
    "train_arrays",
    "decision_value",
    "decision_values",
    "classify_clip",
    "save_model",
    "load_model",
    "resolve_feature_subset",
    "FEATURE_NAMES",
    "AudioClip",
    "FeatureVector",
    "FrameSpec",
    "Label",
    "LabeledSample",
    "Spectrum",
    "WindowKind",
]
