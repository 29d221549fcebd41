"""Visual detector: background subtraction, rectangle contours and the TV verdict."""

from .background import BackgroundModel, MixtureSettings, update_background
from .contours import binarize_edges, find_contours, rectangle_candidates
from .detector import DetectorConfig, ShotEvidence, collect_evidence, detect_tv, foreground_centers, intersect
from .geometry import is_convex, point_in_convex, shoelace_area, simplify_rdp
from .images import load_shot, read_pgm, write_pgm, write_shot
from .validators import (
    CenterMode,
    Contour,
    ForegroundMask,
    GrayImage,
    IntersectionMode,
    RectCandidate,
)

__all__ = [
    "BackgroundModel",
    "MixtureSettings",
    "update_background",
    "binarize_edges",
    "find_contours",
    "rectangle_candidates",
    "DetectorConfig",
    "ShotEvidence",
    "collect_evidence",
    "detect_tv",
    "foreground_centers",
    "intersect",
    "is_convex",
    "point_in_convex",
    "shoelace_area",
    "simplify_rdp",
    "load_shot",
    "read_pgm",
    "write_pgm",
    "write_shot",
    "CenterMode",
    "Contour",
    "ForegroundMask",
    "GrayImage",
    "IntersectionMode",
    "RectCandidate",
]
