"""Time and frequency domain descriptors: ZCR, STE, spectral moments, MFCC.

Per-frame values are averaged into one FeatureVector per analysis window
(1 s by default). Time-domain features use the raw frames, spectral features
use the window-weighted frames of the same framing.
"""

import csv
import logging
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Tuple, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.fft import dct

from core import config
from core.errors import (
    InsufficientDataError,
    InvalidConfigurationError,
    InvalidSizeError,
    UndefinedCentroidError,
    WriteError,
)

from .validators import FEATURE_NAMES, AudioClip, FeatureVector, FrameSpec, Spectrum, WindowKind

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Framing
# ---------------------------------------------------------------------------

def _raw_frames(samples: np.ndarray, frame_length: int, hop_length: int) -> np.ndarray:
    if samples.size < frame_length:
        raise InsufficientDataError(
            f"clip has {samples.size} samples, one frame needs {frame_length}",
            stage="frame_signal",
        )
    return sliding_window_view(samples, frame_length)[::hop_length]


def window_coefficients(kind: WindowKind, length: int) -> np.ndarray:
    """Symmetric analysis window of the given kind."""
    if kind is WindowKind.HAMMING:
        return np.hamming(length)
    return np.ones(length)


def frame_signal(clip: AudioClip, spec: FrameSpec) -> np.ndarray:
    """Split a clip into overlapping frames multiplied by the analysis window.

    Returns:
        Array of shape (floor((N - frame_length) / hop) + 1, frame_length).

    Raises:
        InsufficientDataError: The clip is shorter than one frame.
    """
    frames = _raw_frames(clip.samples, spec.frame_length, spec.hop_length)
    return frames * window_coefficients(spec.window, spec.frame_length)


# ---------------------------------------------------------------------------
# Time domain
# ---------------------------------------------------------------------------

def zero_crossing_rate(frame) -> Union[float, np.ndarray]:
    """Fraction of adjacent sample pairs whose signs differ.

    A zero sample carries the sign of the last non-zero sample before it;
    leading zeros have no sign and never count as a crossing. Works on the
    last axis, so a 2-D array of frames gives one rate per frame.

    Raises:
        InsufficientDataError: Fewer than two samples per frame.
    """
    x = np.asarray(frame, dtype=np.float64)
    n = x.shape[-1] if x.ndim else 0
    if n < 2:
        raise InsufficientDataError("zero crossing rate needs at least 2 samples", stage="zcr")

    signs = np.sign(x)
    last_nonzero = np.where(signs != 0, np.arange(n), -1)
    last_nonzero = np.maximum.accumulate(last_nonzero, axis=-1)
    held = np.take_along_axis(signs, np.maximum(last_nonzero, 0), axis=-1)
    held = np.where(last_nonzero >= 0, held, 0.0)

    rate = np.count_nonzero(held[..., 1:] * held[..., :-1] < 0, axis=-1) / (n - 1)
    return float(rate) if x.ndim == 1 else rate


def short_time_energy(frame) -> Union[float, np.ndarray]:
    """Mean squared amplitude along the last axis.

    Raises:
        InsufficientDataError: Empty frame.
    """
    x = np.asarray(frame, dtype=np.float64)
    if x.ndim == 0 or x.shape[-1] == 0:
        raise InsufficientDataError("short time energy of an empty frame", stage="ste")
    energy = np.mean(x * x, axis=-1)
    return float(energy) if x.ndim == 1 else energy


# ---------------------------------------------------------------------------
# Frequency domain
# ---------------------------------------------------------------------------

def next_power_of_two(n: int) -> int:
    return 1 << max(0, int(n) - 1).bit_length()


def power_spectrum(frame, fft_size: int, sample_rate: float = 1.0) -> Spectrum:
    """Magnitude of the DFT of the zero-padded frame, bins 0..fft_size/2.

    Accepts a single frame or a 2-D stack of frames.

    Raises:
        InvalidSizeError: fft_size is not a power of two or is shorter than the frame.
    """
    x = np.asarray(frame, dtype=np.float64)
    if fft_size < 2 or fft_size & (fft_size - 1):
        raise InvalidSizeError(f"fft size must be a power of two, got {fft_size}", stage="power_spectrum")
    if x.shape[-1] > fft_size:
        raise InvalidSizeError(
            f"fft size {fft_size} is shorter than the frame ({x.shape[-1]})", stage="power_spectrum"
        )
    magnitudes = np.abs(np.fft.rfft(x, n=fft_size, axis=-1))
    return Spectrum(magnitudes=magnitudes, bin_width=sample_rate / fft_size)


def _moments(magnitudes: np.ndarray, frequencies: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Centroid and spread along the last axis; NaN where the spectrum is all zero."""
    total = magnitudes.sum(axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        centroid = (magnitudes @ frequencies) / total
        deviation = frequencies - np.expand_dims(np.asarray(centroid), -1)
        spread = np.sqrt(np.sum(deviation * deviation * magnitudes, axis=-1) / total)
    silent = total <= 0
    centroid = np.where(silent, np.nan, centroid)
    spread = np.where(silent, np.nan, spread)
    return centroid, spread


def spectral_centroid_spread(spec: Spectrum) -> Tuple[float, float]:
    """Center of mass of a magnitude spectrum and its spread around it, in Hz.

    Raises:
        UndefinedCentroidError: Every magnitude is zero.
    """
    magnitudes = spec.magnitudes
    if magnitudes.ndim != 1:
        raise InvalidConfigurationError("expected a single spectrum", stage="spectral_centroid_spread")
    centroid, spread = _moments(magnitudes, spec.frequencies)
    if np.isnan(centroid):
        raise UndefinedCentroidError("centroid of an all-zero spectrum", stage="spectral_centroid_spread")
    return float(centroid), float(spread)


def hz_to_mel(hz):
    return 2595.0 * np.log10(1.0 + np.asarray(hz, dtype=np.float64) / 700.0)


def mel_to_hz(mel):
    return 700.0 * (10.0 ** (np.asarray(mel, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(n_filters: int, fft_size: int, sample_rate: float) -> np.ndarray:
    """Triangular filters with edges equally spaced on the mel scale from 0 Hz to Nyquist.

    Each filter rises from its lower edge to a peak of 1 at its center and
    falls back to 0 at its upper edge; the center of filter m is the lower
    edge of filter m + 1.

    Returns:
        Array of shape (n_filters, fft_size // 2 + 1).

    Raises:
        InvalidConfigurationError: More filters than spectrum bins.
    """
    n_bins = fft_size // 2 + 1
    if n_filters < 1 or n_filters > n_bins:
        raise InvalidConfigurationError(
            f"{n_filters} mel filters cannot fit {n_bins} spectrum bins", stage="mel_filterbank"
        )
    edges = mel_to_hz(np.linspace(0.0, hz_to_mel(sample_rate / 2.0), n_filters + 2))
    lower, center, upper = edges[:-2, None], edges[1:-1, None], edges[2:, None]
    frequencies = np.arange(n_bins) * (sample_rate / fft_size)

    rising = (frequencies - lower) / (center - lower)
    falling = (upper - frequencies) / (upper - center)
    return np.maximum(0.0, np.minimum(rising, falling))


def mfcc(
    spec: Spectrum,
    n_filters: int = config.N_MEL_FILTERS,
    n_coeffs: int = config.N_MFCC,
) -> np.ndarray:
    """Mel-frequency cepstral coefficients of one spectrum or a stack of spectra.

    Power spectrum through the mel filterbank, energies floored at 1e-10,
    natural log, then an orthonormal type-II DCT. Coefficient 0 is kept.

    Raises:
        InvalidConfigurationError: n_coeffs exceeds n_filters, or n_filters exceeds the bin count.
    """
    if n_coeffs < 1 or n_coeffs > n_filters:
        raise InvalidConfigurationError(
            f"cannot take {n_coeffs} coefficients from {n_filters} filters", stage="mfcc"
        )
    sample_rate = spec.bin_width * spec.fft_size
    bank = mel_filterbank(n_filters, spec.fft_size, sample_rate)
    energies = (spec.magnitudes ** 2) @ bank.T
    log_energies = np.log(np.maximum(energies, config.ENERGY_FLOOR))
    return dct(log_energies, type=2, norm="ortho", axis=-1)[..., :n_coeffs]


# ---------------------------------------------------------------------------
# Window aggregation
# ---------------------------------------------------------------------------

def extract_feature_matrix(
    clip: AudioClip,
    spec: Optional[FrameSpec] = None,
    window_seconds: float = config.WINDOW_SECONDS,
) -> np.ndarray:
    """Per-window feature rows, columns ordered as FEATURE_NAMES.

    Frames belong to the window containing their first sample. Silent frames
    do not enter the centroid/spread mean; an entirely silent window reports
    0 for both.

    Raises:
        InsufficientDataError: The clip is shorter than one window.
    """
    spec = spec or FrameSpec.for_rate(clip.sample_rate)
    window_length = int(round(window_seconds * clip.sample_rate))
    n_windows = clip.samples.size // window_length if window_length > 0 else 0
    if n_windows == 0 or window_length < spec.frame_length:
        raise InsufficientDataError(
            f"clip of {clip.duration:.3f} s is shorter than one {window_seconds} s window",
            stage="extract_features",
        )

    raw = _raw_frames(clip.samples, spec.frame_length, spec.hop_length)
    owner = (np.arange(raw.shape[0]) * spec.hop_length) // window_length
    keep = owner < n_windows
    raw, owner = raw[keep], owner[keep]

    counts = np.bincount(owner, minlength=n_windows)
    if np.any(counts == 0):
        raise InsufficientDataError("an analysis window holds no complete frame", stage="extract_features")

    zcr = zero_crossing_rate(raw)
    ste = short_time_energy(raw)

    weighted = raw * window_coefficients(spec.window, spec.frame_length)
    spectrum = power_spectrum(weighted, next_power_of_two(spec.frame_length), clip.sample_rate)
    centroid, spread = _moments(spectrum.magnitudes, spectrum.frequencies)
    cepstra = mfcc(spectrum)

    def window_mean(values: np.ndarray) -> np.ndarray:
        return np.bincount(owner, weights=values, minlength=n_windows) / counts

    voiced = ~np.isnan(centroid)
    voiced_counts = np.bincount(owner[voiced], minlength=n_windows)
    with np.errstate(invalid="ignore", divide="ignore"):
        sc = np.bincount(owner[voiced], weights=centroid[voiced], minlength=n_windows) / voiced_counts
        bw = np.bincount(owner[voiced], weights=spread[voiced], minlength=n_windows) / voiced_counts
    sc = np.where(voiced_counts > 0, sc, 0.0)
    bw = np.where(voiced_counts > 0, bw, 0.0)

    columns = [window_mean(zcr), window_mean(ste), sc, bw]
    columns += [window_mean(cepstra[:, k]) for k in range(cepstra.shape[1])]
    matrix = np.column_stack(columns)

    logger.debug(
        "Extracted %d windows from %d frames (%d silent)",
        n_windows, raw.shape[0], int(np.count_nonzero(~voiced)),
    )
    return matrix


def extract_features(
    clip: AudioClip,
    spec: Optional[FrameSpec] = None,
    window_seconds: float = config.WINDOW_SECONDS,
) -> List[FeatureVector]:
    """One FeatureVector per analysis window of the clip."""
    return [FeatureVector.from_array(row) for row in extract_feature_matrix(clip, spec, window_seconds)]


def write_feature_dump(
    rows: Iterable[Tuple[str, np.ndarray]],
    path: Union[str, Path],
    margins: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> int:
    """Write per-window features as CSV with a header naming the 17 columns.

    Args:
        rows: (clip_id, feature matrix) pairs.
        path: Output CSV path.
        margins: Maps a feature matrix to one decision value per row; when
            given, a trailing ``margin`` column is written.

    Returns:
        Number of data lines written.
    """
    path = Path(path)
    written = 0
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            header = ("clip_id", "window") + FEATURE_NAMES
            writer.writerow(header + ("margin",) if margins else header)
            for clip_id, matrix in rows:
                matrix = np.atleast_2d(matrix)
                if margins:
                    matrix = np.column_stack([matrix, margins(matrix)])
                for window, values in enumerate(matrix):
                    writer.writerow([clip_id, window] + [format(float(v), ".10g") for v in values])
                    written += 1
    except OSError as e:
        raise WriteError(f"cannot write feature dump: {e}", path=str(path), stage="features") from e
    return written
