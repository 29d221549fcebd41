"""Deterministic synthetic recordings, camera shots and corpora."""

from .audio_scenes import recording_conditions, synth_audio
from .corpus import (
    CorpusSummary,
    LabeledClip,
    LabeledShot,
    load_clips,
    load_shots,
    manifest_digest,
    plan_items,
    read_manifest,
    synth_corpus,
    write_manifest,
)
from .frame_scenes import screen_rect, synth_blink, synth_frames
from .rng import Lcg64, derive_seed
from .validators import (
    AUDIO_CLASSES,
    VISUAL_CLASSES,
    CorpusSpec,
    ManifestEntry,
    PhonePosition,
    SceneClass,
    SceneSpec,
    ShowType,
    TalkLevel,
    Voice,
)

__all__ = [
    "recording_conditions",
    "synth_audio",
    "CorpusSummary",
    "LabeledClip",
    "LabeledShot",
    "load_clips",
    "load_shots",
    "manifest_digest",
    "plan_items",
    "read_manifest",
    "synth_corpus",
    "write_manifest",
    "screen_rect",
    "synth_blink",
    "synth_frames",
    "Lcg64",
    "derive_seed",
    "AUDIO_CLASSES",
    "VISUAL_CLASSES",
    "CorpusSpec",
    "ManifestEntry",
    "PhonePosition",
    "SceneClass",
    "SceneSpec",
    "ShowType",
    "TalkLevel",
    "Voice",
]
