"""Synthetic camera shots.

tv_screen      dark bezel around an interior of block noise redrawn every frame
picture_frame  the same layout with a static interior
moving_blob    an irregular dark region sliding across a smooth wall
empty          static block noise
"""

import logging
from typing import List, Tuple

import numpy as np

from core.errors import InvalidConfigurationError
from visual.validators import GrayImage

from .rng import Lcg64
from .validators import SceneClass, SceneSpec

logger = logging.getLogger(__name__)

BLOCK = 8
BEZEL = 4
BEZEL_LEVEL = 20
SENSOR_NOISE = 2
MARGIN = 6
BLOB_STEP = 6.0


def _wall(rng: Lcg64, height: int, width: int) -> np.ndarray:
    """Smooth linear gradient between two mid-grey levels."""
    base = rng.uniform(130.0, 170.0)
    gx, gy = rng.uniform(-25.0, 25.0), rng.uniform(-20.0, 20.0)
    y, x = np.mgrid[0:height, 0:width]
    return base + gx * x / width + gy * y / height


def _block_noise(rng: Lcg64, height: int, width: int, low: int = 0, high: int = 256) -> np.ndarray:
    rows, cols = -(-height // BLOCK), -(-width // BLOCK)
    blocks = rng.integers(low, high, rows * cols).reshape(rows, cols)
    return np.kron(blocks, np.ones((BLOCK, BLOCK)))[:height, :width].astype(np.float64)


def _sensor(rng: Lcg64, canvas: np.ndarray) -> GrayImage:
    noise = rng.integers(-SENSOR_NOISE, SENSOR_NOISE + 1, canvas.size).reshape(canvas.shape)
    return GrayImage(pixels=np.clip(np.round(canvas) + noise, 0, 255).astype(np.uint8))


def screen_rect(rng: Lcg64, spec: SceneSpec) -> Tuple[int, int, int, int]:
    """(top, left, height, width) of the outer bezel, covering the requested share of the image."""
    fraction = spec.rect_fraction if spec.rect_fraction is not None else rng.uniform(0.10, 0.50)
    aspect = rng.uniform(4 / 3, 16 / 9)
    area = fraction * spec.width * spec.height
    w = int(round(np.sqrt(area * aspect)))
    h = int(round(area / max(w, 1)))
    w = min(max(w, 2 * BEZEL + 2), spec.width - 2 * MARGIN)
    h = min(max(h, 2 * BEZEL + 2), spec.height - 2 * MARGIN)
    if w <= 2 * BEZEL or h <= 2 * BEZEL:
        raise InvalidConfigurationError("image too small for a bezelled screen", stage="synth_frames")
    top = rng.integers(MARGIN, spec.height - MARGIN - h + 1)
    left = rng.integers(MARGIN, spec.width - MARGIN - w + 1)
    return top, left, h, w


def _screen_frames(rng: Lcg64, spec: SceneSpec, live: bool) -> List[GrayImage]:
    wall = _wall(rng, spec.height, spec.width)
    top, left, h, w = screen_rect(rng, spec)
    wall[top: top + h, left: left + w] = BEZEL_LEVEL
    inner = (slice(top + BEZEL, top + h - BEZEL), slice(left + BEZEL, left + w - BEZEL))
    inner_shape = (h - 2 * BEZEL, w - 2 * BEZEL)

    still = _block_noise(rng, *inner_shape)
    frames = []
    for _ in range(spec.frames):
        canvas = wall.copy()
        canvas[inner] = _block_noise(rng, *inner_shape) if live else still
        frames.append(_sensor(rng, canvas))
    return frames


def _blob_frames(rng: Lcg64, spec: SceneSpec) -> List[GrayImage]:
    wall = _wall(rng, spec.height, spec.width)
    radius = rng.uniform(9.0, 13.0)
    lobes = (rng.uniform(0.15, 0.3), rng.uniform(0, 2 * np.pi), rng.uniform(0.1, 0.2), rng.uniform(0, 2 * np.pi))
    reach = radius * (1.0 + lobes[0] + lobes[2])

    heading = rng.uniform(0, 2 * np.pi)
    dx, dy = BLOB_STEP * np.cos(heading), BLOB_STEP * np.sin(heading)
    travel_x, travel_y = abs(dx) * (spec.frames - 1), abs(dy) * (spec.frames - 1)
    x_lo, x_hi = reach + 1, spec.width - reach - 1 - travel_x
    y_lo, y_hi = reach + 1, spec.height - reach - 1 - travel_y
    cx = rng.uniform(x_lo, max(x_lo, x_hi)) + (travel_x if dx < 0 else 0.0)
    cy = rng.uniform(y_lo, max(y_lo, y_hi)) + (travel_y if dy < 0 else 0.0)
    level = rng.uniform(30.0, 60.0)

    y, x = np.mgrid[0:spec.height, 0:spec.width]
    frames = []
    for k in range(spec.frames):
        px, py = cx + k * dx, cy + k * dy
        theta = np.arctan2(y - py, x - px)
        edge = radius * (1.0 + lobes[0] * np.sin(3 * theta + lobes[1]) + lobes[2] * np.sin(5 * theta + lobes[3]))
        canvas = wall.copy()
        canvas[np.hypot(x - px, y - py) <= edge] = level
        frames.append(_sensor(rng, canvas))
    return frames


def _empty_frames(rng: Lcg64, spec: SceneSpec) -> List[GrayImage]:
    still = _block_noise(rng, spec.height, spec.width, 60, 200)
    return [_sensor(rng, still) for _ in range(spec.frames)]


def synth_frames(spec: SceneSpec) -> List[GrayImage]:
    """Render a shot of ``spec.frames`` frames.

    Raises:
        InvalidConfigurationError: Audio scene class, or a screen that does not fit.
    """
    rng = Lcg64(spec.seed)
    kind = spec.scene_class
    if kind is SceneClass.TV_SCREEN:
        frames = _screen_frames(rng, spec, live=True)
    elif kind is SceneClass.PICTURE_FRAME:
        frames = _screen_frames(rng, spec, live=False)
    elif kind is SceneClass.MOVING_BLOB:
        frames = _blob_frames(rng, spec)
    elif kind is SceneClass.EMPTY:
        frames = _empty_frames(rng, spec)
    else:
        raise InvalidConfigurationError(f"{kind.value} is not a visual scene", stage="synth_frames")
    logger.debug("synth_frames %s seed=%d: %d frames", kind.value, spec.seed, len(frames))
    return frames


def synth_blink(
    frames: int = 50,
    size: Tuple[int, int] = (64, 64),
    region: Tuple[slice, slice] = (slice(16, 48), slice(16, 48)),
    levels: int = 5,
    step: int = 60,
    base: int = 128,
) -> List[GrayImage]:
    """Constant scene whose region cycles through ``levels`` intensities spaced by ``step``.

    With more levels than mixture components the region never settles into the background.
    """
    values = [(base + step * (k - levels // 2)) % 256 for k in range(levels)]
    out = []
    for index in range(frames):
        canvas = np.full(size, base, dtype=np.uint8)
        canvas[region] = values[index % levels]
        out.append(GrayImage(pixels=canvas))
    return out
