"""Edge binarization, outer-border following and rectangle candidates."""

import logging
from typing import Iterable, List, Tuple

import numpy as np
from scipy import ndimage

from core import config
from core.errors import InvalidConfigurationError

from .geometry import is_convex, shoelace_area, simplify_rdp
from .validators import Contour, GrayImage, RectCandidate

logger = logging.getLogger(__name__)

EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)

# Neighbour offsets (drow, dcol), clockwise on screen starting east
_OFFSETS: Tuple[Tuple[int, int], ...] = (
    (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1),
)
_DIRECTION = {offset: index for index, offset in enumerate(_OFFSETS)}
_WEST = 4


def binarize_edges(frame: GrayImage) -> GrayImage:
    """Sobel gradient magnitude thresholded at its mean plus one standard deviation.

    Returns:
        Binary image with edge pixels at 255 and everything else at 0.
    """
    pixels = frame.pixels.astype(np.float64)
    magnitude = np.hypot(
        ndimage.sobel(pixels, axis=1, mode="reflect"),
        ndimage.sobel(pixels, axis=0, mode="reflect"),
    )
    threshold = magnitude.mean() + magnitude.std()
    return GrayImage(pixels=np.where(magnitude > threshold, 255, 0).astype(np.uint8))


def _trace_outer_border(mask: np.ndarray, start: Tuple[int, int]) -> List[Tuple[int, int]]:
    """Follow the outer border of the component containing ``start``.

    ``mask`` must have a background margin of at least one pixel and
    ``start`` must be the component's first pixel in raster order, so its
    west neighbour is outside.
    """
    r0, c0 = start
    first = None
    for k in range(8):
        dr, dc = _OFFSETS[(_WEST + k) % 8]
        if mask[r0 + dr, c0 + dc]:
            first = (r0 + dr, c0 + dc)
            break
    if first is None:
        return [start]

    border = []
    previous, current = first, start
    limit = 4 * mask.size + 8
    while len(border) < limit:
        border.append(current)
        toward_previous = _DIRECTION[(previous[0] - current[0], previous[1] - current[1])]
        following = previous
        for k in range(1, 9):
            dr, dc = _OFFSETS[(toward_previous - k) % 8]
            if mask[current[0] + dr, current[1] + dc]:
                following = (current[0] + dr, current[1] + dc)
                break
        if following == start and current == first:
            break
        previous, current = current, following
    return border


def find_contours(binary: GrayImage, min_box_area: float = 0.0) -> List[Contour]:
    """Outer border of every 8-connected foreground region, in raster order of the regions.

    Points are (x, y) pixel coordinates in tracing order. Regions whose
    bounding box spans less than ``min_box_area`` are skipped untraced.
    """
    labels, _ = ndimage.label(binary.pixels > 0, structure=EIGHT_CONNECTED)
    contours = []
    for label, window in enumerate(ndimage.find_objects(labels), start=1):
        if window is None:
            continue
        rows, cols = window
        if (rows.stop - rows.start - 1) * (cols.stop - cols.start - 1) < min_box_area:
            continue
        component = np.pad(labels[window] == label, 1)
        top = int(np.flatnonzero(component.any(axis=1))[0])
        left = int(np.flatnonzero(component[top])[0])
        border = _trace_outer_border(component, (top, left))
        points = np.array([(c - 1 + cols.start, r - 1 + rows.start) for r, c in border], dtype=np.int64)
        contours.append(Contour(points=points))
    logger.debug("Found %d contours", len(contours))
    return contours


def rectangle_candidates(
    contours: Iterable[Contour],
    image_area: float,
    epsilon_frac: float = config.RDP_EPSILON_FRACTION,
    min_fraction: float = config.MIN_AREA_FRACTION,
    max_fraction: float = config.MAX_AREA_FRACTION,
) -> List[RectCandidate]:
    """Contours that simplify to a convex quadrilateral within the area band.

    Each contour is simplified with epsilon = epsilon_frac x its perimeter and
    kept when exactly 4 points remain, they are convex, and the enclosed area
    lies within [min_fraction, max_fraction] of the image.
    """
    if image_area <= 0:
        raise InvalidConfigurationError("image area must be positive", stage="rectangle_candidates")
    low, high = min_fraction * image_area, max_fraction * image_area

    candidates = []
    for contour in contours:
        if len(contour) < 4 or contour.bbox_area() < low:
            continue
        perimeter = contour.perimeter
        if perimeter <= 0:
            continue
        polygon = simplify_rdp(contour, epsilon_frac * perimeter)
        if len(polygon) != 4 or not is_convex(polygon):
            continue
        area = shoelace_area(polygon)
        if low <= area <= high:
            candidates.append(RectCandidate.from_corners(polygon))
    return candidates
