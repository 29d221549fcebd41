"""Controller configuration and detection record schemas."""

import hashlib
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from acoustic.svm import Kernel
from acoustic.validators import FEATURE_NAMES
from core import config
from visual.validators import CenterMode, IntersectionMode


# Enums
class FusionRule(str, Enum):
    OR = "or"
    AND = "and"
    ACOUSTIC_ONLY = "acoustic"
    VISUAL_ONLY = "visual"


class Modality(str, Enum):
    ACOUSTIC = "acoustic"
    VISUAL = "visual"
    FUSED = "fused"


class ControllerConfig(BaseModel):
    """Sensing-rate knobs and decision settings for one detection run."""

    audio_sample_rate: int = Field(default=config.CAPTURE_RATE, gt=0)
    audio_window_seconds: float = Field(default=config.WINDOW_SECONDS, gt=0)
    frames_per_shot: int = Field(default=config.FRAMES_PER_SHOT, ge=2)
    feature_subset: Tuple[str, ...] = ()
    fusion_rule: FusionRule = FusionRule.OR
    intersection_mode: IntersectionMode = IntersectionMode.CANDIDATE
    center_mode: CenterMode = CenterMode.COMPONENT
    kernel: Kernel = Kernel.RBF
    c: float = Field(default=config.SVM_C, gt=0)
    gamma: Optional[float] = Field(default=None, gt=0)
    tol: float = Field(default=config.SVM_TOL, gt=0)

    @field_validator("feature_subset", mode="before")
    @classmethod
    def parse_subset(cls, v) -> Tuple[str, ...]:
        """Accept a comma-separated string or a sequence of names."""
        if v is None:
            return ()
        if isinstance(v, str):
            v = v.split(",")
        names = tuple(n.strip() for n in v if n and n.strip())
        unknown = [n for n in names if n not in FEATURE_NAMES]
        if unknown:
            raise ValueError(f"unknown feature(s): {', '.join(unknown)}")
        return tuple(n for n in FEATURE_NAMES if n in names)

    def digest(self) -> str:
        """Short stable hash of every setting, recorded alongside results."""
        canonical = self.model_dump_json()
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


class DetectionRecord(BaseModel):
    """Per-clip verdicts of each modality and their fusion."""

    clip_id: str = Field(..., min_length=1)
    scene_class: Optional[str] = None
    acoustic_verdict: Optional[bool] = None
    acoustic_score: Optional[float] = Field(default=None, ge=0, le=1)
    visual_verdict: Optional[bool] = None
    visual_region: Optional[List[List[float]]] = None
    fused_verdict: Optional[bool] = None
    ground_truth: Optional[bool] = None
    config_digest: Optional[str] = None
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_fused(self) -> "DetectionRecord":
        has_evidence = self.acoustic_verdict is not None or self.visual_verdict is not None
        if has_evidence and self.fused_verdict is None:
            raise ValueError("fused_verdict is required when a modality verdict is present")
        if not has_evidence and self.fused_verdict is not None:
            raise ValueError("fused_verdict without any modality verdict")
        return self

    def verdict(self, modality: Modality) -> Optional[bool]:
        """Verdict of the selected modality, None when absent."""
        if modality is Modality.ACOUSTIC:
            return self.acoustic_verdict
        if modality is Modality.VISUAL:
            return self.visual_verdict
        return self.fused_verdict
