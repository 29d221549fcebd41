"""Grayscale PGM frames and shot directories."""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import cv2
import numpy as np

from core.errors import ImageFormatError, InsufficientDataError, WriteError

from .validators import GrayImage

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

FRAME_PATTERN = "frame_*.pgm"


def frame_name(index: int) -> str:
    return f"frame_{index:04d}.pgm"


def read_pgm(path: PathLike) -> GrayImage:
    """Read an 8-bit single-channel image, normally a binary PGM.

    Raises:
        ImageFormatError: Missing or undecodable file, colour or 16-bit raster.
    """
    path = Path(path)
    where = {"path": str(path), "stage": "read_pgm"}
    pixels = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if pixels is None:
        raise ImageFormatError("cannot read or decode image", **where)
    if pixels.ndim != 2:
        raise ImageFormatError(f"expected one channel, found shape {pixels.shape}", **where)
    if pixels.dtype != np.uint8:
        raise ImageFormatError(f"only 8-bit images are supported, found {pixels.dtype}", **where)
    try:
        return GrayImage(pixels=pixels)
    except ValueError as e:
        raise ImageFormatError(str(e), **where) from e


def write_pgm(image: GrayImage, path: PathLike) -> None:
    """Write an image as binary PGM with maxval 255."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        written = cv2.imwrite(str(path), np.ascontiguousarray(image.pixels), [cv2.IMWRITE_PXM_BINARY, 1])
    except (OSError, cv2.error) as e:
        raise WriteError(f"cannot write image: {e}", path=str(path), stage="write_pgm") from e
    if not written:
        raise WriteError("image encoder refused the file", path=str(path), stage="write_pgm")


def write_shot(frames: Sequence[GrayImage], directory: PathLike) -> List[Path]:
    """Write frames as frame_0000.pgm, frame_0001.pgm, ... into a shot directory."""
    directory = Path(directory)
    paths = []
    for index, frame in enumerate(frames):
        target = directory / frame_name(index)
        write_pgm(frame, target)
        paths.append(target)
    return paths


def load_shot(directory: PathLike, limit: Optional[int] = None) -> List[GrayImage]:
    """Load the numbered frames of a shot in index order.

    Args:
        directory: Shot directory holding frame_NNNN.pgm files.
        limit: Keep only the first ``limit`` frames.

    Raises:
        InsufficientDataError: The directory holds no frames, or fewer than ``limit``.
    """
    directory = Path(directory)
    paths = sorted(directory.glob(FRAME_PATTERN))
    if not paths:
        raise InsufficientDataError("no frame_*.pgm files in shot", path=str(directory), stage="load_shot")
    if limit is not None:
        if limit > len(paths):
            raise InsufficientDataError(
                f"shot has {len(paths)} frames, {limit} requested",
                path=str(directory),
                stage="load_shot",
            )
        paths = paths[:limit]
    logger.debug("Loading %d frames from %s", len(paths), directory)
    return [read_pgm(p) for p in paths]
