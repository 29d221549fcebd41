"""TV Sense - shared errors, configuration and logging."""

from .errors import (
    TvSenseError,
    AudioFormatError,
    UnsupportedCodecError,
    EmptyClipError,
    WriteError,
    UnsupportedDirectionError,
    InsufficientDataError,
    InvalidSizeError,
    UndefinedCentroidError,
    InvalidConfigurationError,
    DegenerateTrainingError,
    ConvergenceError,
    ShapeError,
    ModelFormatError,
    ImageFormatError,
    DegenerateContourError,
    NoEvidenceError,
    UndefinedRateError,
)
from .log import setup_logging

__all__ = [
    "TvSenseError",
    "AudioFormatError",
    "UnsupportedCodecError",
    "EmptyClipError",
    "WriteError",
    "UnsupportedDirectionError",
    "InsufficientDataError",
    "InvalidSizeError",
    "UndefinedCentroidError",
    "InvalidConfigurationError",
    "DegenerateTrainingError",
    "ConvergenceError",
    "ShapeError",
    "ModelFormatError",
    "ImageFormatError",
    "DegenerateContourError",
    "NoEvidenceError",
    "UndefinedRateError",
    "setup_logging",
]
