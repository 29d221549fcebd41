"""Three-step TV detector over a frame sequence.

1. A background model turns each frame into a foreground mask; the centers
   of large enough foreground regions are recorded.
2. Every frame is searched for convex quadrilateral contours in the area band.
3. The TV is the smallest candidate enclosing every recorded center.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import ndimage

from core import config
from core.errors import InsufficientDataError, ShapeError

from .background import BackgroundModel, MixtureSettings
from .contours import EIGHT_CONNECTED, binarize_edges, find_contours, rectangle_candidates
from .validators import CenterMode, ForegroundMask, GrayImage, IntersectionMode, RectCandidate

logger = logging.getLogger(__name__)


class DetectorConfig(BaseModel):
    """Visual detector knobs."""

    intersection_mode: IntersectionMode = IntersectionMode.CANDIDATE
    center_mode: CenterMode = CenterMode.COMPONENT
    min_component_fraction: float = Field(default=config.MIN_COMPONENT_FRACTION, ge=0, lt=1)
    epsilon_fraction: float = Field(default=config.RDP_EPSILON_FRACTION, gt=0, lt=1)
    min_area_fraction: float = Field(default=config.MIN_AREA_FRACTION, ge=0, le=1)
    max_area_fraction: float = Field(default=config.MAX_AREA_FRACTION, gt=0, le=1)
    mixture: MixtureSettings = Field(default_factory=MixtureSettings)

    @model_validator(mode="after")
    def check_band(self) -> "DetectorConfig":
        if self.min_area_fraction > self.max_area_fraction:
            raise ValueError("min_area_fraction must not exceed max_area_fraction")
        return self


class ShotEvidence(BaseModel):
    """Everything the detector accumulated over one shot."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    centers: np.ndarray
    candidates: List[RectCandidate]
    foreground_fraction: float = 0.0


def foreground_centers(mask: ForegroundMask, min_pixels: float, mode: CenterMode) -> np.ndarray:
    """(x, y) centers of 8-connected foreground regions with at least ``min_pixels`` pixels.

    In contour mode the center is the mean of the region's outer border points.
    """
    labels, count = ndimage.label(mask.bits, structure=EIGHT_CONNECTED)
    if count == 0:
        return np.empty((0, 2))
    sizes = np.bincount(labels.ravel())[1:]
    keep = [int(i) + 1 for i in np.flatnonzero(sizes >= min_pixels)]
    if not keep:
        return np.empty((0, 2))

    if mode is CenterMode.COMPONENT:
        rows_cols = ndimage.center_of_mass(mask.bits, labels, keep)
        return np.array([(c, r) for r, c in rows_cols], dtype=np.float64)

    image = GrayImage(pixels=np.isin(labels, keep).astype(np.uint8) * 255)
    return np.array([c.points.mean(axis=0) for c in find_contours(image)], dtype=np.float64)


def collect_evidence(frames: Sequence[GrayImage], settings: Optional[DetectorConfig] = None) -> ShotEvidence:
    """Run the foreground and rectangle steps over a shot.

    The first mask is the model's cold start and contributes no centers.

    Raises:
        InsufficientDataError: Fewer than 2 frames.
        ShapeError: Frames of different sizes.
    """
    settings = settings or DetectorConfig()
    if len(frames) < 2:
        raise InsufficientDataError(f"need at least 2 frames, got {len(frames)}", stage="detect_tv")
    shape = frames[0].shape
    for index, frame in enumerate(frames):
        if frame.shape != shape:
            raise ShapeError(
                f"frame {index} is {frame.width}x{frame.height}, expected {shape[1]}x{shape[0]}",
                stage="detect_tv",
            )

    area = frames[0].area
    min_pixels = settings.min_component_fraction * area
    model = BackgroundModel(settings.mixture)

    centers = []
    candidates: List[RectCandidate] = []
    foreground = []
    for index, frame in enumerate(frames):
        mask = model.update(frame)
        if index > 0:
            centers.append(foreground_centers(mask, min_pixels, settings.center_mode))
            foreground.append(mask.fraction)
        contours = find_contours(binarize_edges(frame), min_box_area=settings.min_area_fraction * area)
        candidates.extend(
            rectangle_candidates(
                contours,
                area,
                settings.epsilon_fraction,
                settings.min_area_fraction,
                settings.max_area_fraction,
            )
        )

    stacked = np.vstack(centers) if centers else np.empty((0, 2))
    logger.debug("Shot evidence: %d centers, %d candidates", len(stacked), len(candidates))
    return ShotEvidence(
        centers=stacked,
        candidates=candidates,
        foreground_fraction=float(np.mean(foreground)) if foreground else 0.0,
    )


def intersect(evidence: ShotEvidence, mode: IntersectionMode) -> Tuple[bool, Optional[RectCandidate]]:
    """Combine recorded centers with rectangle candidates into a verdict."""
    centers = evidence.centers
    if centers.shape[0] == 0:
        return False, None

    if mode is IntersectionMode.BBOX:
        (x0, y0), (x1, y1) = centers.min(axis=0), centers.max(axis=0)
        return True, RectCandidate.from_corners([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])

    enclosing = [c for c in evidence.candidates if all(c.contains(p) for p in centers)]
    if not enclosing:
        return False, None
    return True, min(enclosing, key=lambda c: c.area)


def detect_tv(
    frames: Sequence[GrayImage],
    settings: Optional[DetectorConfig] = None,
) -> Tuple[bool, Optional[RectCandidate]]:
    """Decide whether a shot shows an operating TV.

    Args:
        frames: Consecutive frames of one shot, all the same size.
        settings: Detector configuration; defaults when None.

    Returns:
        (verdict, region). In candidate mode the region is the smallest
        rectangle candidate containing every foreground center; in bbox mode
        it is the bounding box of the centers.
    """
    settings = settings or DetectorConfig()
    evidence = collect_evidence(frames, settings)
    verdict, region = intersect(evidence, settings.intersection_mode)
    logger.info(
        "detect_tv: %s (%d centers, %d candidates)",
        "TV" if verdict else "no TV", len(evidence.centers), len(evidence.candidates),
    )
    return verdict, region
