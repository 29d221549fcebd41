"""Pydantic models for acoustic data validation."""

from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core import config

FEATURE_NAMES: Tuple[str, ...] = (
    "zcr",
    "ste",
    "spectral_centroid",
    "spectrum_spread",
) + tuple(f"mfcc_{i}" for i in range(config.N_MFCC))


class Label(str, Enum):
    """Binary decision classes."""
    TV = "tv"
    NON_TV = "non_tv"

    @classmethod
    def from_class(cls, scene_class: str) -> "Label":
        """Fold a scene class (tv, laptop, conversation, ...) onto TV vs rest."""
        return cls.TV if scene_class.strip().lower() in ("tv", "tv_screen") else cls.NON_TV

    @property
    def sign(self) -> float:
        return 1.0 if self is Label.TV else -1.0


class WindowKind(str, Enum):
    """Analysis window applied to each frame."""
    RECTANGULAR = "rectangular"
    HAMMING = "hamming"


class AudioClip(BaseModel):
    """Mono PCM clip with samples normalized to [-1, 1]."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    samples: np.ndarray
    sample_rate: int = Field(..., gt=0)
    source_label: Optional[str] = None

    @field_validator("samples", mode="before")
    @classmethod
    def normalize_samples(cls, v) -> np.ndarray:
        """Coerce to a read-only float64 vector and check the amplitude range."""
        arr = np.array(v, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError(f"samples must be one-dimensional, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        if arr.size and np.max(np.abs(arr)) > 1.0:
            raise ValueError("samples must lie in [-1, 1]")
        arr.flags.writeable = False
        return arr

    @property
    def duration(self) -> float:
        """Clip length in seconds."""
        return self.samples.size / self.sample_rate

    def __len__(self) -> int:
        return int(self.samples.size)


class FrameSpec(BaseModel):
    """Framing parameters in samples."""

    frame_length: int = Field(..., gt=0)
    hop_length: int = Field(..., gt=0)
    window: WindowKind = WindowKind.HAMMING

    @model_validator(mode="after")
    def check_hop(self) -> "FrameSpec":
        if self.hop_length > self.frame_length:
            raise ValueError("hop_length must not exceed frame_length")
        return self

    @classmethod
    def for_rate(
        cls,
        sample_rate: int,
        frame_seconds: float = config.FRAME_SECONDS,
        hop_seconds: float = config.HOP_SECONDS,
        window: WindowKind = WindowKind.HAMMING,
    ) -> "FrameSpec":
        """Standard speech framing (25 ms / 10 ms) at a given rate."""
        frame = max(2, int(round(frame_seconds * sample_rate)))
        hop = max(1, min(frame, int(round(hop_seconds * sample_rate))))
        return cls(frame_length=frame, hop_length=hop, window=window)


class Spectrum(BaseModel):
    """Magnitude spectrum, bins 0..fft_size/2 along the last axis."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    magnitudes: np.ndarray
    bin_width: float = Field(..., gt=0)

    @field_validator("magnitudes", mode="before")
    @classmethod
    def check_magnitudes(cls, v) -> np.ndarray:
        arr = np.asarray(v, dtype=np.float64)
        if arr.ndim == 0 or arr.shape[-1] < 2:
            raise ValueError("spectrum needs at least two bins")
        if np.any(arr < 0):
            raise ValueError("magnitudes must be non-negative")
        return arr

    @property
    def n_bins(self) -> int:
        return int(self.magnitudes.shape[-1])

    @property
    def fft_size(self) -> int:
        return 2 * (self.n_bins - 1)

    @property
    def frequencies(self) -> np.ndarray:
        """Bin center frequencies in Hz."""
        return np.arange(self.n_bins) * self.bin_width


class FeatureVector(BaseModel):
    """Per-window acoustic descriptor."""

    zcr: float = Field(..., ge=0.0, le=1.0)
    ste: float = Field(..., ge=0.0)
    spectral_centroid: float = Field(..., ge=0.0)
    spectrum_spread: float = Field(..., ge=0.0)
    mfcc: Tuple[float, ...]

    @field_validator("mfcc")
    @classmethod
    def check_mfcc(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if len(v) != config.N_MFCC:
            raise ValueError(f"mfcc must have {config.N_MFCC} coefficients, got {len(v)}")
        if not all(np.isfinite(c) for c in v):
            raise ValueError("mfcc coefficients must be finite")
        return v

    def to_array(self) -> np.ndarray:
        """Flatten to the 17 columns named by FEATURE_NAMES."""
        return np.array(
            [self.zcr, self.ste, self.spectral_centroid, self.spectrum_spread, *self.mfcc],
            dtype=np.float64,
        )

    @classmethod
    def from_array(cls, values: np.ndarray) -> "FeatureVector":
        values = [float(x) for x in values]
        return cls(
            zcr=values[0],
            ste=values[1],
            spectral_centroid=values[2],
            spectrum_spread=values[3],
            mfcc=tuple(values[4:]),
        )


class LabeledSample(BaseModel):
    """Flattened feature point with its TV / NonTV label."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    features: np.ndarray
    label: Label

    @field_validator("features", mode="before")
    @classmethod
    def check_features(cls, v) -> np.ndarray:
        if isinstance(v, FeatureVector):
            v = v.to_array()
        arr = np.asarray(v, dtype=np.float64).ravel()
        if not np.all(np.isfinite(arr)):
            raise ValueError("feature entries must be finite")
        return arr
