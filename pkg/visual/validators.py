"""Pydantic models for camera frames, masks and detected shapes."""

from enum import Enum
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .geometry import is_convex, point_in_convex, shoelace_area

MIN_SIDE = 8


class IntersectionMode(str, Enum):
    """How foreground centers and rectangle candidates are combined."""
    CANDIDATE = "candidate"
    BBOX = "bbox"


class CenterMode(str, Enum):
    """Where foreground centers come from."""
    COMPONENT = "component"
    CONTOUR = "contour"


class GrayImage(BaseModel):
    """8-bit grayscale frame, rows top to bottom."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    pixels: np.ndarray

    @field_validator("pixels", mode="before")
    @classmethod
    def check_pixels(cls, v) -> np.ndarray:
        arr = np.asarray(v)
        if arr.ndim != 2:
            raise ValueError(f"image must be two-dimensional, got shape {arr.shape}")
        if arr.shape[0] < MIN_SIDE or arr.shape[1] < MIN_SIDE:
            raise ValueError(f"image must be at least {MIN_SIDE}x{MIN_SIDE}, got {arr.shape[1]}x{arr.shape[0]}")
        if arr.dtype != np.uint8:
            if np.any(arr < 0) or np.any(arr > 255):
                raise ValueError("intensities must lie in 0..255")
            arr = arr.astype(np.uint8)
        else:
            arr = arr.copy()
        arr.flags.writeable = False
        return arr

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.pixels.shape

    @property
    def area(self) -> int:
        return self.width * self.height


class ForegroundMask(BaseModel):
    """Per-pixel foreground flags of one frame."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    bits: np.ndarray

    @field_validator("bits", mode="before")
    @classmethod
    def check_bits(cls, v) -> np.ndarray:
        arr = np.asarray(v, dtype=bool)
        if arr.ndim != 2:
            raise ValueError("mask must be two-dimensional")
        return arr

    @property
    def height(self) -> int:
        return int(self.bits.shape[0])

    @property
    def width(self) -> int:
        return int(self.bits.shape[1])

    @property
    def fraction(self) -> float:
        """Share of pixels marked foreground."""
        return float(self.bits.mean())


class Contour(BaseModel):
    """Ordered boundary points as (x, y) pairs; closing edge implied."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    points: np.ndarray

    @field_validator("points", mode="before")
    @classmethod
    def check_points(cls, v) -> np.ndarray:
        arr = np.asarray(v)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
            raise ValueError("contour points must be a non-empty (n, 2) array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("contour points must be finite")
        return arr

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def perimeter(self) -> float:
        """Length of the closed polyline through the points."""
        closed = np.vstack([self.points, self.points[:1]]).astype(np.float64)
        return float(np.sum(np.hypot(*np.diff(closed, axis=0).T)))

    def bbox_area(self) -> float:
        extent = self.points.max(axis=0) - self.points.min(axis=0)
        return float(extent[0] * extent[1])


class RectCandidate(BaseModel):
    """Convex quadrilateral kept by the rectangle filter."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    corners: np.ndarray
    area: float = Field(..., ge=0)
    centroid: Tuple[float, float]

    @field_validator("corners", mode="before")
    @classmethod
    def check_corners(cls, v) -> np.ndarray:
        arr = np.asarray(v, dtype=np.float64)
        if arr.shape != (4, 2):
            raise ValueError(f"a rectangle candidate has exactly 4 corners, got shape {arr.shape}")
        return arr

    @model_validator(mode="after")
    def check_geometry(self) -> "RectCandidate":
        if not is_convex(self.corners):
            raise ValueError("corners must form a convex polygon")
        if not np.isclose(self.area, shoelace_area(self.corners), rtol=1e-9, atol=1e-9):
            raise ValueError("area must equal the shoelace area of the corners")
        return self

    @classmethod
    def from_corners(cls, corners) -> "RectCandidate":
        corners = np.asarray(corners, dtype=np.float64)
        cx, cy = corners.mean(axis=0)
        return cls(corners=corners, area=shoelace_area(corners), centroid=(float(cx), float(cy)))

    def contains(self, point) -> bool:
        """Point-in-polygon test with the boundary counted as inside."""
        return point_in_convex(point, self.corners)

    def corner_list(self) -> List[List[float]]:
        return [[float(x), float(y)] for x, y in self.corners]
