"""Exception hierarchy shared by every TV Sense package."""

from typing import Optional


class TvSenseError(Exception):
    """Base error. Carries the file and pipeline stage that failed, when known."""

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        stage: Optional[str] = None,
    ):
        super().__init__(message)
        self.message = message
        self.path = path
        self.stage = stage

    def describe(self) -> str:
        """Human diagnostic naming the failing file and stage."""
        parts = []
        if self.stage:
            parts.append(f"[{self.stage}]")
        if self.path:
            parts.append(f"{self.path}:")
        parts.append(self.message)
        return " ".join(parts)


# Audio I/O
class AudioFormatError(TvSenseError, ValueError):
    """Malformed RIFF/WAVE container."""


class UnsupportedCodecError(TvSenseError, ValueError):
    """WAVE file uses a compressed codec or unsupported sample layout."""


class EmptyClipError(TvSenseError, ValueError):
    """Audio data chunk holds no samples."""


class WriteError(TvSenseError, OSError):
    """Output file could not be written."""


class UnsupportedDirectionError(TvSenseError, ValueError):
    """Resampling was asked to raise the sample rate."""


# Signal processing
class InsufficientDataError(TvSenseError, ValueError):
    """Input is shorter than the operation needs."""


class InvalidSizeError(TvSenseError, ValueError):
    """Transform size is not a usable power of two."""


class UndefinedCentroidError(TvSenseError, ValueError):
    """Spectral moments requested for an all-zero spectrum."""


class InvalidConfigurationError(TvSenseError, ValueError):
    """Parameters are inconsistent with each other or with the input."""


# Classifier
class DegenerateTrainingError(TvSenseError, ValueError):
    """Training set holds a single class."""


class ConvergenceError(TvSenseError, RuntimeError):
    """SMO hit its iteration cap before meeting the KKT tolerance."""

    def __init__(self, message: str, worst_violation: float, **kwargs):
        super().__init__(message, **kwargs)
        self.worst_violation = worst_violation


class ShapeError(TvSenseError, ValueError):
    """Array dimensions do not match what the model or sequence expects."""


class ModelFormatError(TvSenseError, ValueError):
    """Model file is truncated, corrupted or from another format version."""


# Vision
class ImageFormatError(TvSenseError, ValueError):
    """Malformed or unsupported PGM image."""


class DegenerateContourError(TvSenseError, ValueError):
    """Contour has too few points to simplify."""


# Fusion and evaluation
class NoEvidenceError(TvSenseError, ValueError):
    """No modality verdict is available to fuse."""


class UndefinedRateError(TvSenseError, ValueError):
    """Corpus lacks positives or negatives, so a rate has no denominator."""
