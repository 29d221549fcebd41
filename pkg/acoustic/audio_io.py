"""WAVE reading and writing plus anti-aliased downsampling."""

import logging
import warnings
from math import gcd
from pathlib import Path
from typing import Union

import numpy as np
from scipy.io import wavfile
from scipy.signal import firwin, resample_poly

from core import config
from core.errors import (
    AudioFormatError,
    EmptyClipError,
    InvalidConfigurationError,
    UnsupportedCodecError,
    UnsupportedDirectionError,
    WriteError,
)

from .validators import AudioClip

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# scipy reports an unknown format tag or bit depth with these prefixes
_CODEC_MESSAGES = ("Unknown wave file format", "Unsupported bit depth")
_SCALE = {np.dtype(np.int16): (0.0, 32768.0), np.dtype(np.uint8): (128.0, 128.0)}


def read_wav(path: PathLike) -> AudioClip:
    """Read an uncompressed PCM WAVE file as a mono clip.

    Stereo frames are averaged. 16-bit samples are divided by 32768,
    8-bit unsigned samples are centered on 128 and divided by 128.

    Args:
        path: WAVE file path.

    Returns:
        AudioClip with the header's sample rate.

    Raises:
        AudioFormatError: Not a RIFF/WAVE container or a required chunk is missing.
        UnsupportedCodecError: Compressed codec, unsupported bit depth or channel count.
        EmptyClipError: The data chunk holds no complete frame.
    """
    path = Path(path)
    where = {"path": str(path), "stage": "read_wav"}
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", wavfile.WavFileWarning)
            sample_rate, raw = wavfile.read(path)
    except OSError as e:
        raise AudioFormatError(f"cannot read file: {e}", **where) from e
    except ValueError as e:
        if str(e).startswith(_CODEC_MESSAGES):
            raise UnsupportedCodecError(str(e), **where) from e
        raise AudioFormatError(str(e), **where) from e

    if raw.dtype not in _SCALE:
        raise UnsupportedCodecError(f"{raw.dtype} samples are not supported, only 8 or 16-bit PCM", **where)
    channels = 1 if raw.ndim == 1 else raw.shape[1]
    if channels not in (1, 2):
        raise UnsupportedCodecError(f"{channels} channels are not supported", **where)
    if sample_rate <= 0:
        raise AudioFormatError("sample rate must be positive", **where)
    if raw.shape[0] == 0:
        raise EmptyClipError("data chunk is empty", **where)

    offset, scale = _SCALE[raw.dtype]
    samples = (raw.astype(np.float64) - offset) / scale
    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    logger.debug("Read %d frames @ %d Hz from %s", samples.size, sample_rate, path)
    return AudioClip(samples=samples, sample_rate=int(sample_rate))


def write_wav(clip: AudioClip, path: PathLike) -> None:
    """Write a clip as 16-bit mono PCM, rounding and clamping to full scale.

    Raises:
        WriteError: The file could not be written.
    """
    path = Path(path)
    quantized = np.clip(np.round(clip.samples * 32768.0), -32768, 32767).astype(np.int16)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        wavfile.write(path, clip.sample_rate, quantized)
    except OSError as e:
        raise WriteError(f"cannot write file: {e}", path=str(path), stage="write_wav") from e


def resample(
    clip: AudioClip,
    target_rate: int,
    taps_per_output: int = config.ANTIALIAS_TAPS,
) -> AudioClip:
    """Downsample with a windowed-sinc anti-alias filter.

    The rate ratio is reduced to up/down integers and the clip goes through
    polyphase rational resampling. The Hamming-windowed low-pass has its
    cutoff at 0.45 x target_rate and spans ``taps_per_output`` output sample
    periods, so its transition width is the same at every ratio.

    Raises:
        InvalidConfigurationError: target_rate is not positive.
        UnsupportedDirectionError: target_rate exceeds the clip's rate.
    """
    if target_rate <= 0:
        raise InvalidConfigurationError(f"target rate must be positive, got {target_rate}", stage="resample")
    if target_rate > clip.sample_rate:
        raise UnsupportedDirectionError(
            f"cannot upsample {clip.sample_rate} Hz to {target_rate} Hz", stage="resample"
        )
    if target_rate == clip.sample_rate:
        return clip

    g = gcd(int(target_rate), int(clip.sample_rate))
    up = int(target_rate) // g
    down = int(clip.sample_rate) // g

    taps = firwin(
        taps_per_output * down + 1,
        config.ANTIALIAS_CUTOFF * target_rate,
        window="hamming",
        fs=clip.sample_rate * up,
    )
    out = resample_poly(clip.samples, up, down, window=taps)
    logger.debug("Resampled %d -> %d Hz (up=%d, down=%d, taps=%d)", clip.sample_rate, target_rate, up, down, taps.size)
    return AudioClip(
        samples=np.clip(out, -1.0, 1.0),
        sample_rate=int(target_rate),
        source_label=clip.source_label,
    )
