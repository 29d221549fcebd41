"""Detection decision controller: configuration, fusion and record streams."""

from .fusion import fuse
from .pipeline import (
    acoustic_record,
    acoustic_verdict,
    detector_settings,
    run_pipeline,
    train_detector,
    visual_record,
    visual_verdict,
    window_features,
)
from .records import dump_records, join_records, read_records, write_records
from .schemas import ControllerConfig, DetectionRecord, FusionRule, Modality

__all__ = [
    "fuse",
    "acoustic_record",
    "acoustic_verdict",
    "detector_settings",
    "run_pipeline",
    "train_detector",
    "visual_record",
    "visual_verdict",
    "window_features",
    "dump_records",
    "join_records",
    "read_records",
    "write_records",
    "ControllerConfig",
    "DetectionRecord",
    "FusionRule",
    "Modality",
]
