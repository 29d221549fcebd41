"""Sensing-rate sweeps: audio sample rate and frames per shot."""

import logging
from typing import Callable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from acoustic.svm import SvmModel
from controller.pipeline import acoustic_record, train_detector, visual_record
from controller.schemas import ControllerConfig, DetectionRecord, Modality
from core.errors import InvalidConfigurationError
from core.parallel import ordered_map
from synth.corpus import LabeledClip, LabeledShot

from .metrics import Metrics, score, try_score

logger = logging.getLogger(__name__)


class SweepRow(BaseModel):
    """Scores at one sweep point."""

    value: int
    metrics: Optional[Metrics] = None
    skipped: int = 0
    notes: List[str] = Field(default_factory=list)


def _with(settings: ControllerConfig, **changes) -> ControllerConfig:
    return ControllerConfig.model_validate({**settings.model_dump(), **changes})


def _classify_job(job: Tuple[LabeledClip, SvmModel, ControllerConfig]) -> DetectionRecord:
    item, model, settings = job
    return acoustic_record(
        item.clip_id, item.clip, model, settings, ground_truth=item.is_tv, scene_class=item.scene_class
    )


def _detect_job(job: Tuple[LabeledShot, ControllerConfig]) -> DetectionRecord:
    item, settings = job
    return visual_record(
        item.clip_id, item.frames, settings, ground_truth=item.is_tv, scene_class=item.scene_class
    )


def classify_clips(
    clips: Sequence[LabeledClip],
    model: SvmModel,
    settings: ControllerConfig,
    jobs: int = 1,
) -> List[DetectionRecord]:
    """Acoustic records for every clip, in input order."""
    return list(ordered_map(_classify_job, [(c, model, settings) for c in clips], jobs))


def detect_shots(
    shots: Sequence[LabeledShot],
    settings: ControllerConfig,
    jobs: int = 1,
) -> List[DetectionRecord]:
    """Visual records for every shot, in input order."""
    return list(ordered_map(_detect_job, [(s, settings) for s in shots], jobs))


def sweep_audio_rate(
    clips: Sequence[LabeledClip],
    model: SvmModel,
    rates: Sequence[int],
    settings: Optional[ControllerConfig] = None,
    train_clips: Optional[Sequence[LabeledClip]] = None,
    jobs: int = 1,
    progress: Optional[Callable[[int], None]] = None,
) -> List[SweepRow]:
    """Re-classify the corpus at each sample rate and score the acoustic verdicts.

    With ``train_clips`` the classifier is retrained at every rate on those
    clips; otherwise ``model`` is reused as is.

    Raises:
        UnsupportedDirectionError: A rate exceeds a clip's native rate.
        UndefinedRateError: The corpus lacks positives or negatives.
    """
    settings = settings or ControllerConfig()
    rows = []
    for done, rate in enumerate(rates, start=1):
        point = _with(settings, audio_sample_rate=rate)
        current = model
        if train_clips:
            current = train_detector(((c.clip, c.label) for c in train_clips), point)
        records = classify_clips(clips, current, point, jobs)
        metrics = score(records, Modality.ACOUSTIC)
        logger.info("rate %d Hz: fn %.3f fp %.3f F %.3f", rate, metrics.fn_rate, metrics.fp_rate, metrics.f_measure)
        rows.append(SweepRow(value=rate, metrics=metrics))
        if progress:
            progress(done)
    return rows


def sweep_frame_count(
    shots: Sequence[LabeledShot],
    counts: Sequence[int],
    settings: Optional[ControllerConfig] = None,
    jobs: int = 1,
    progress: Optional[Callable[[int], None]] = None,
) -> List[SweepRow]:
    """Detect on the first N frames of every shot for each N and score.

    Shots with fewer than N frames are annotated and left out of that row.

    Raises:
        InvalidConfigurationError: A count below 2.
    """
    settings = settings or ControllerConfig()
    bad = [n for n in counts if n < 2]
    if bad:
        raise InvalidConfigurationError(f"frame counts must be at least 2, got {bad}", stage="sweep_frames")

    rows = []
    for done, count in enumerate(counts, start=1):
        point = _with(settings, frames_per_shot=count)
        usable, notes = [], []
        for shot in shots:
            if len(shot.frames) < count:
                notes.append(f"{shot.clip_id}: {count} frames requested, {len(shot.frames)} available")
            else:
                usable.append(shot)
        metrics = try_score(detect_shots(usable, point, jobs), Modality.VISUAL) if usable else None
        if notes:
            logger.warning("frames %d: skipped %d shot(s)", count, len(notes))
        rows.append(SweepRow(value=count, metrics=metrics, skipped=len(notes), notes=notes))
        if progress:
            progress(done)
    return rows
