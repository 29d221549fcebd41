"""Pydantic models describing synthetic scenes and corpora."""

from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator

from acoustic.validators import Label
from core import config

AUDIO_CLASSES = ("tv", "laptop", "conversation", "silence")
VISUAL_CLASSES = ("tv_screen", "picture_frame", "moving_blob", "empty")


class SceneClass(str, Enum):
    TV = "tv"
    LAPTOP = "laptop"
    CONVERSATION = "conversation"
    SILENCE = "silence"
    TV_SCREEN = "tv_screen"
    PICTURE_FRAME = "picture_frame"
    MOVING_BLOB = "moving_blob"
    EMPTY = "empty"

    @property
    def is_audio(self) -> bool:
        return self.value in AUDIO_CLASSES

    @property
    def label(self) -> Label:
        return Label.from_class(self.value)


class PhonePosition(str, Enum):
    HAND = "hand"
    COUCH = "couch"
    POCKET = "pocket"


class ShowType(str, Enum):
    MOVIE = "movie"
    TALK_SHOW = "talk_show"
    SPORTS = "sports"
    MUSIC = "music"


class TalkLevel(str, Enum):
    QUIET = "quiet"
    NORMAL = "normal"
    LOUD = "loud"


class Voice(str, Enum):
    LOW = "low"
    HIGH = "high"


class SceneSpec(BaseModel):
    """One synthetic scene. Unset recording conditions are drawn from the seed."""

    scene_class: SceneClass
    seed: int = Field(default=0, ge=0)
    gain: float = Field(default=1.0, gt=0, le=1)
    noise_level: float = Field(default=1e-4, ge=0)

    # audio
    duration: float = Field(default=30.0, gt=0)
    sample_rate: int = Field(default=config.CAPTURE_RATE, gt=0)
    phone_position: Optional[PhonePosition] = None
    show_type: Optional[ShowType] = None
    talk_level: Optional[TalkLevel] = None
    voice: Optional[Voice] = None

    # frames
    frames: int = Field(default=config.FRAMES_PER_SHOT, ge=1)
    width: int = Field(default=160, ge=32)
    height: int = Field(default=120, ge=32)
    rect_fraction: Optional[float] = None

    @field_validator("scene_class", mode="before")
    @classmethod
    def normalize_class(cls, v):
        if isinstance(v, str):
            return v.strip().lower()
        return v

    @field_validator("rect_fraction")
    @classmethod
    def check_fraction(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not 0.0 < v < 1.0:
            raise ValueError("rect_fraction must lie strictly between 0 and 1")
        return v


class CorpusSpec(BaseModel):
    """Per-class item counts of a synthetic corpus.

    ``paired`` items carry both a recording and a shot under one clip id and
    are keyed by their audio class.
    """

    audio: Dict[str, int] = Field(default_factory=dict)
    visual: Dict[str, int] = Field(default_factory=dict)
    paired: Dict[str, int] = Field(default_factory=dict)
    seed: int = Field(default=0, ge=0)
    duration: float = Field(default=30.0, gt=0)
    frames: int = Field(default=config.FRAMES_PER_SHOT, ge=2)
    test_fraction: float = Field(default=60 / 151, ge=0, le=1)

    @field_validator("audio", "paired")
    @classmethod
    def check_audio(cls, v: Dict[str, int]) -> Dict[str, int]:
        return _check_counts(v, AUDIO_CLASSES)

    @field_validator("visual")
    @classmethod
    def check_visual(cls, v: Dict[str, int]) -> Dict[str, int]:
        return _check_counts(v, VISUAL_CLASSES)

    @classmethod
    def default_audio(cls, seed: int = 0) -> "CorpusSpec":
        """91 training and 60 test recordings of 30 s."""
        return cls(audio={"tv": 51, "laptop": 50, "conversation": 50}, seed=seed)

    @classmethod
    def default_visual(cls, seed: int = 0) -> "CorpusSpec":
        """26 shots of 8 frames, 14 showing a TV."""
        return cls(visual={"tv_screen": 14, "picture_frame": 4, "moving_blob": 4, "empty": 4}, seed=seed)


def _check_counts(counts: Dict[str, int], allowed) -> Dict[str, int]:
    for name, count in counts.items():
        if name not in allowed:
            raise ValueError(f"unknown class {name!r}; expected one of {', '.join(allowed)}")
        if count < 1:
            raise ValueError(f"count for {name!r} must be at least 1")
    return counts


class ManifestEntry(BaseModel):
    """One manifest line: relative path, scene class and split."""

    path: str
    scene_class: str
    split: Optional[str] = None

    @property
    def is_audio(self) -> bool:
        return self.path.lower().endswith(".wav")

    @property
    def clip_id(self) -> str:
        p = Path(self.path)
        return p.stem if self.is_audio else p.name

    @property
    def label(self) -> Label:
        return Label.from_class(self.scene_class)

    def to_row(self) -> List[str]:
        return [self.path, self.scene_class] + ([self.split] if self.split else [])
