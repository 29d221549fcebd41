"""End-to-end detection of one clip: acoustic branch, visual branch, fusion."""

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from acoustic.audio_io import resample
from acoustic.features import extract_feature_matrix
from acoustic.svm import SvmModel, classify_clip, resolve_feature_subset, train_arrays
from acoustic.validators import AudioClip, FrameSpec, Label
from core.errors import InsufficientDataError, InvalidConfigurationError, NoEvidenceError, TvSenseError
from visual.detector import DetectorConfig, detect_tv
from visual.validators import GrayImage, RectCandidate

from .fusion import fuse
from .schemas import ControllerConfig, DetectionRecord

logger = logging.getLogger(__name__)


def detector_settings(settings: ControllerConfig) -> DetectorConfig:
    return DetectorConfig(
        intersection_mode=settings.intersection_mode,
        center_mode=settings.center_mode,
    )


def window_features(clip: AudioClip, settings: ControllerConfig) -> np.ndarray:
    """Feature rows of a clip after resampling to the configured rate."""
    clip = resample(clip, settings.audio_sample_rate)
    return extract_feature_matrix(
        clip,
        FrameSpec.for_rate(clip.sample_rate),
        settings.audio_window_seconds,
    )


def train_detector(
    clips: Iterable[Tuple[AudioClip, Label]],
    settings: Optional[ControllerConfig] = None,
) -> SvmModel:
    """Train the window classifier on every window of every labeled clip.

    Raises:
        InsufficientDataError: No clips supplied.
        DegenerateTrainingError: All clips carry the same label.
    """
    settings = settings or ControllerConfig()
    blocks, labels = [], []
    for clip, label in clips:
        rows = window_features(clip, settings)
        blocks.append(rows)
        labels.append(np.full(rows.shape[0], label.sign))
    if not blocks:
        raise InsufficientDataError("no training clips", stage="train")
    x, y = np.vstack(blocks), np.concatenate(labels)
    logger.info("Training on %d windows from %d clips", y.size, len(blocks))
    return train_arrays(
        x,
        y,
        kernel=settings.kernel,
        c=settings.c,
        tol=settings.tol,
        gamma=settings.gamma,
        feature_indices=resolve_feature_subset(settings.feature_subset),
    )


def acoustic_verdict(
    clip: AudioClip,
    model: SvmModel,
    settings: ControllerConfig,
) -> Tuple[bool, float]:
    """Resample to the configured rate, extract window features and vote.

    Returns:
        (is_tv, fraction of windows voting TV)
    """
    label, score = classify_clip(model, window_features(clip, settings))
    return label is Label.TV, score


def visual_verdict(
    frames: Sequence[GrayImage],
    settings: ControllerConfig,
) -> Tuple[bool, Optional[RectCandidate]]:
    """Detect on the first ``frames_per_shot`` frames of a shot."""
    return detect_tv(list(frames)[: settings.frames_per_shot], detector_settings(settings))


def acoustic_record(
    clip_id: str,
    clip: AudioClip,
    model: SvmModel,
    settings: ControllerConfig,
    ground_truth: Optional[bool] = None,
    scene_class: Optional[str] = None,
) -> DetectionRecord:
    """Record carrying only the acoustic verdict; fused mirrors it."""
    verdict, score = acoustic_verdict(clip, model, settings)
    return DetectionRecord(
        clip_id=clip_id,
        scene_class=scene_class,
        acoustic_verdict=verdict,
        acoustic_score=score,
        fused_verdict=verdict,
        ground_truth=ground_truth,
        config_digest=settings.digest(),
    )


def visual_record(
    clip_id: str,
    frames: Sequence[GrayImage],
    settings: ControllerConfig,
    ground_truth: Optional[bool] = None,
    scene_class: Optional[str] = None,
) -> DetectionRecord:
    """Record carrying only the visual verdict; fused mirrors it."""
    verdict, found = visual_verdict(frames, settings)
    return DetectionRecord(
        clip_id=clip_id,
        scene_class=scene_class,
        visual_verdict=verdict,
        visual_region=found.corner_list() if found is not None else None,
        fused_verdict=verdict,
        ground_truth=ground_truth,
        config_digest=settings.digest(),
    )


def run_pipeline(
    audio: Optional[AudioClip],
    frames: Optional[Sequence[GrayImage]],
    model: Optional[SvmModel],
    settings: Optional[ControllerConfig] = None,
    clip_id: str = "clip",
    ground_truth: Optional[bool] = None,
    scene_class: Optional[str] = None,
) -> DetectionRecord:
    """Produce a fused detection record for one clip.

    A failing modality is noted on the record and dropped when the other
    modality still yields a verdict; with nothing left, the error propagates.

    Raises:
        NoEvidenceError: Neither audio nor frames were supplied.
        TvSenseError: The only available modality failed.
    """
    settings = settings or ControllerConfig()
    if audio is None and frames is None:
        raise NoEvidenceError("neither audio nor frames supplied", stage="run_pipeline")

    notes: List[str] = []
    failures: List[TvSenseError] = []
    acoustic = score = visual = None
    region = None

    if audio is not None:
        try:
            if model is None:
                raise InvalidConfigurationError("audio supplied without a model", stage="run_pipeline")
            acoustic, score = acoustic_verdict(audio, model, settings)
        except TvSenseError as e:
            logger.warning("%s: acoustic branch dropped: %s", clip_id, e.describe())
            notes.append(f"acoustic: {e.describe()}")
            failures.append(e)

    if frames is not None:
        try:
            visual, found = visual_verdict(frames, settings)
            region = found.corner_list() if found is not None else None
        except TvSenseError as e:
            logger.warning("%s: visual branch dropped: %s", clip_id, e.describe())
            notes.append(f"visual: {e.describe()}")
            failures.append(e)

    if acoustic is None and visual is None:
        if len(failures) == 1:
            raise failures[0]
        raise NoEvidenceError("; ".join(notes), stage="run_pipeline")

    return DetectionRecord(
        clip_id=clip_id,
        scene_class=scene_class,
        acoustic_verdict=acoustic,
        acoustic_score=score,
        visual_verdict=visual,
        visual_region=region,
        fused_verdict=fuse(acoustic, visual, settings.fusion_rule),
        ground_truth=ground_truth,
        config_digest=settings.digest(),
        notes=notes,
    )
