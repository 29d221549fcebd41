"""Pytest configuration and fixtures for TV Sense tests."""

import os

import numpy as np
import pytest

# Keep test runs quiet and single-process regardless of the caller's .env
os.environ["TVSENSE_LOG"] = "WARNING"
os.environ["TVSENSE_JOBS"] = "1"

from acoustic import AudioClip
from controller import ControllerConfig, train_detector
from synth import CorpusSpec, load_clips, load_shots, read_manifest, synth_corpus
from visual import GrayImage


# ---------------------------------------------------------------------------
# Factories
# ---------------------------------------------------------------------------

@pytest.fixture
def make_tone():
    """Factory for sine clips: make_tone(freq, rate, seconds, amplitude)."""
    def _make(freq: float, rate: int = 8000, seconds: float = 1.0, amplitude: float = 0.5) -> AudioClip:
        t = np.arange(int(round(rate * seconds))) / rate
        return AudioClip(samples=amplitude * np.sin(2 * np.pi * freq * t), sample_rate=rate)
    return _make


@pytest.fixture
def make_image():
    """Factory for uint8 images from any array-like."""
    def _make(pixels) -> GrayImage:
        return GrayImage(pixels=np.asarray(pixels, dtype=np.uint8))
    return _make


@pytest.fixture
def rng():
    """Seeded numpy generator for randomized oracle tests."""
    return np.random.default_rng(20240611)


# ---------------------------------------------------------------------------
# Small corpus, shared by the whole session
# ---------------------------------------------------------------------------

SMALL_SPEC = CorpusSpec(
    audio={"tv": 4, "laptop": 3, "conversation": 3},
    visual={"tv_screen": 2, "picture_frame": 1, "moving_blob": 1, "empty": 1},
    paired={"tv": 2, "conversation": 2},
    duration=4.0,
    seed=11,
    test_fraction=0.5,
)


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    """A few short recordings and shots written to disk once."""
    root = tmp_path_factory.mktemp("small_corpus")
    summary = synth_corpus(SMALL_SPEC, root)
    return root, summary


@pytest.fixture(scope="session")
def small_model(small_corpus):
    """Classifier trained on the small corpus' training recordings."""
    root, _ = small_corpus
    clips = load_clips(read_manifest(root / "train.csv"), root)
    return train_detector(((c.clip, c.label) for c in clips), ControllerConfig())


# ---------------------------------------------------------------------------
# Default-size corpora for the end-to-end runs
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def default_audio_corpus(tmp_path_factory):
    """151 thirty-second recordings: 91 train, 60 test."""
    root = tmp_path_factory.mktemp("default_audio")
    synth_corpus(CorpusSpec.default_audio(seed=1), root)
    return root


@pytest.fixture(scope="session")
def default_model(default_audio_corpus):
    root = default_audio_corpus
    clips = load_clips(read_manifest(root / "train.csv"), root)
    return train_detector(((c.clip, c.label) for c in clips), ControllerConfig())


@pytest.fixture(scope="session")
def default_test_clips(default_audio_corpus):
    root = default_audio_corpus
    return load_clips(read_manifest(root / "test.csv"), root)


@pytest.fixture(scope="session")
def default_shots(tmp_path_factory):
    """26 shots of 8 frames, 14 with a TV."""
    root = tmp_path_factory.mktemp("default_visual")
    synth_corpus(CorpusSpec.default_visual(seed=1), root)
    return load_shots(read_manifest(root / "manifest.csv"), root)
