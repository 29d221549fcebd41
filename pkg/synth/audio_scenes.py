"""Generative models of the acoustic scene classes.

conversation  voiced syllables with harmonics below 3.8 kHz, phrase pauses,
              low-passed at 4 kHz
tv            the same speech mixed with music partials reaching 16 kHz and a
              4-16 kHz noise band, at the highest level
laptop        the tv mixture low-passed at 8 kHz at reduced level
silence       the noise floor alone
"""

import logging
from typing import Tuple

import numpy as np
from scipy.signal import butter, sosfilt, sosfiltfilt

from acoustic.validators import AudioClip
from core.errors import InvalidConfigurationError

from .rng import Lcg64
from .validators import PhonePosition, SceneClass, SceneSpec, ShowType, TalkLevel, Voice

logger = logging.getLogger(__name__)

TABLE_SIZE = 2048
SPEECH_CEILING = 3800.0
MUSIC_CEILING = 15500.0

TARGET_RMS = {
    SceneClass.TV: 0.2,
    SceneClass.LAPTOP: 0.08,
    SceneClass.CONVERSATION: 0.1,
}

# (speech, music, noise band) weights of a TV programme
SHOW_MIX = {
    ShowType.MOVIE: (0.6, 0.5, 0.25),
    ShowType.TALK_SHOW: (0.8, 0.25, 0.15),
    ShowType.SPORTS: (0.6, 0.15, 0.5),
    ShowType.MUSIC: (0.3, 0.8, 0.3),
}

POSITION_GAIN = {PhonePosition.HAND: 1.0, PhonePosition.COUCH: 0.6, PhonePosition.POCKET: 0.4}
TALK_GAIN = {TalkLevel.QUIET: 0.5, TalkLevel.NORMAL: 1.0, TalkLevel.LOUD: 1.6}
VOICE_F0 = {Voice.LOW: (85.0, 155.0), Voice.HIGH: (165.0, 255.0)}


def _harmonic_table(amplitudes: np.ndarray) -> np.ndarray:
    """One period of sum_h a_h sin(2 pi h t)."""
    t = np.arange(TABLE_SIZE) / TABLE_SIZE
    h = np.arange(1, amplitudes.size + 1)[:, None]
    return amplitudes @ np.sin(2.0 * np.pi * h * t)


def _lookup(table: np.ndarray, frequency: np.ndarray, sample_rate: int, phase0: float) -> np.ndarray:
    phase = phase0 + np.cumsum(frequency) / sample_rate
    return table[(phase * TABLE_SIZE).astype(np.int64) % TABLE_SIZE]


def _unit_rms(x: np.ndarray) -> np.ndarray:
    rms = np.sqrt(np.mean(x * x))
    return x / rms if rms > 0 else x


def _lowpass(x: np.ndarray, cutoff: float, sample_rate: int, order: int = 8) -> np.ndarray:
    if cutoff >= sample_rate / 2:
        return x
    return sosfiltfilt(butter(order, cutoff, fs=sample_rate, output="sos"), x)


def speech(rng: Lcg64, n: int, sample_rate: int, voice: Voice) -> np.ndarray:
    """Voiced syllables grouped into phrases separated by pauses."""
    out = np.zeros(n)
    low, high = VOICE_F0[voice]
    base = rng.uniform(low, high)
    t = int(rng.uniform(0.0, 0.3) * sample_rate)
    while t < n:
        for _ in range(rng.integers(4, 11)):
            length = min(int(rng.uniform(0.12, 0.35) * sample_rate), n - t)
            if length <= 1:
                break
            f0 = base * rng.uniform(0.85, 1.2)
            glide = rng.uniform(-0.15, 0.15)
            track = f0 * (1.0 + glide * np.linspace(0.0, 1.0, length))

            f1, f2 = rng.uniform(300.0, 900.0), rng.uniform(900.0, 2500.0)
            count = max(1, int(SPEECH_CEILING // track.max()))
            partials = np.arange(1, count + 1) * f0
            amplitudes = (1.0 / np.arange(1, count + 1)) * (
                1.0
                + 2.0 * np.exp(-(((partials - f1) / 150.0) ** 2))
                + 1.5 * np.exp(-(((partials - f2) / 250.0) ** 2))
            )

            envelope = np.sin(np.pi * np.linspace(0.0, 1.0, length)) ** 0.6
            burst = _lookup(_harmonic_table(amplitudes), track, sample_rate, rng.uniform())
            out[t: t + length] += rng.uniform(0.5, 1.0) * envelope * burst
            t += length + int(rng.uniform(0.04, 0.15) * sample_rate)
            if t >= n:
                break
        t += int(rng.uniform(0.3, 1.0) * sample_rate)
    return out


def music(rng: Lcg64, n: int, sample_rate: int, lines: int = 3) -> np.ndarray:
    """Polyphonic notes whose harmonics extend up to the music ceiling."""
    out = np.zeros(n)
    ceiling = min(MUSIC_CEILING, 0.45 * sample_rate)
    for _ in range(lines):
        t = 0
        while t < n:
            length = min(int(rng.uniform(0.25, 1.0) * sample_rate), n - t)
            midi = rng.integers(45, 82)
            f = 440.0 * 2.0 ** ((midi - 69) / 12.0)
            count = max(1, min(60, int(ceiling // f)))
            jitter = rng.uniform(0.6, 1.0, count)
            amplitudes = jitter / np.arange(1, count + 1) ** 0.9

            k = np.arange(length) / sample_rate
            envelope = np.minimum(1.0, k / 0.01) * np.exp(-k * rng.uniform(1.0, 4.0))
            tone = _lookup(_harmonic_table(amplitudes), np.full(length, f), sample_rate, rng.uniform())
            out[t: t + length] += envelope * tone
            t += length
    return out


def noise_band(rng: Lcg64, n: int, sample_rate: int, low: float = 4000.0, high: float = 16000.0) -> np.ndarray:
    """Band-limited noise with a slowly wandering level."""
    high = min(high, 0.45 * sample_rate)
    if low >= high:
        return np.zeros(n)
    sos = butter(4, [low, high], btype="bandpass", fs=sample_rate, output="sos")
    band = sosfilt(sos, rng.noise(n))
    knots = max(2, int(n / (0.25 * sample_rate)) + 2)
    level = 0.5 + 0.5 * rng.uniform(n=knots)
    return band * np.interp(np.arange(n), np.linspace(0, n - 1, knots), level)


def noise_floor(rng: Lcg64, n: int, sample_rate: int) -> np.ndarray:
    """Unit-RMS room noise concentrated below 1 kHz."""
    return _unit_rms(_lowpass(rng.noise(n), 1000.0, sample_rate, order=2))


def programme(rng: Lcg64, n: int, sample_rate: int, show: ShowType, voice: Voice) -> np.ndarray:
    """TV programme audio: speech, music and a high noise band mixed by show type."""
    w_speech, w_music, w_noise = SHOW_MIX[show]
    talk = _lowpass(speech(rng, n, sample_rate, voice), 4000.0, sample_rate)
    return (
        w_speech * _unit_rms(talk)
        + w_music * _unit_rms(music(rng, n, sample_rate))
        + w_noise * _unit_rms(noise_band(rng, n, sample_rate))
    )


def recording_conditions(spec: SceneSpec, rng: Lcg64) -> Tuple[PhonePosition, ShowType, TalkLevel, Voice]:
    """Fill unset recording conditions from the generator, in a fixed draw order."""
    position = rng.choice([PhonePosition.HAND, PhonePosition.COUCH])
    show = rng.choice(list(ShowType))
    talk = rng.choice(list(TalkLevel))
    voice = rng.choice(list(Voice))
    return (
        spec.phone_position or position,
        spec.show_type or show,
        spec.talk_level or talk,
        spec.voice or voice,
    )


def synth_audio(spec: SceneSpec) -> AudioClip:
    """Render an audio scene as a clip at ``spec.sample_rate``.

    Raises:
        InvalidConfigurationError: The scene class is a visual one.
    """
    if not spec.scene_class.is_audio:
        raise InvalidConfigurationError(
            f"{spec.scene_class.value} is not an audio scene", stage="synth_audio"
        )
    rng = Lcg64(spec.seed)
    fs = spec.sample_rate
    n = int(round(spec.duration * fs))
    position, show, talk, voice = recording_conditions(spec, rng)

    if spec.scene_class is SceneClass.SILENCE:
        signal = np.zeros(n)
    else:
        if spec.scene_class is SceneClass.CONVERSATION:
            signal = _lowpass(speech(rng, n, fs, voice), 4000.0, fs)
            level = TALK_GAIN[talk]
        else:
            signal = programme(rng, n, fs, show, voice)
            if spec.scene_class is SceneClass.LAPTOP:
                signal = _lowpass(signal, 8000.0, fs)
            level = 1.0

        if position is PhonePosition.POCKET:
            signal = _lowpass(signal, 2000.0, fs, order=2)
        target = TARGET_RMS[spec.scene_class] * spec.gain * level * POSITION_GAIN[position]
        signal = target * _unit_rms(signal)

    signal = signal + spec.noise_level * noise_floor(rng, n, fs)
    logger.debug(
        "synth_audio %s seed=%d (%s, %s, %s, %s)",
        spec.scene_class.value, spec.seed, position.value, show.value, talk.value, voice.value,
    )
    return AudioClip(
        samples=np.clip(signal, -1.0, 1.0),
        sample_rate=fs,
        source_label=spec.scene_class.value,
    )
