"""Per-pixel adaptive Gaussian mixture background model."""

import logging
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from core import config
from core.errors import ShapeError

from .validators import ForegroundMask, GrayImage

logger = logging.getLogger(__name__)


class MixtureSettings(BaseModel):
    """Tunable parameters of the background mixture."""

    components: int = Field(default=config.MIXTURE_COMPONENTS, ge=1)
    learning_rate: float = Field(default=config.LEARNING_RATE, gt=0, lt=1)
    match_sigmas: float = Field(default=config.MATCH_SIGMAS, gt=0)
    background_fraction: float = Field(default=config.BACKGROUND_FRACTION, gt=0, le=1)
    variance_floor: float = Field(default=config.VARIANCE_FLOOR, gt=0)
    initial_variance: float = Field(default=config.INITIAL_VARIANCE, gt=0)


class BackgroundModel:
    """Mixture of up to K Gaussians per pixel, updated one frame at a time.

    A pixel matches a component when it lies within ``match_sigmas`` standard
    deviations of its mean; the heaviest matching component wins. It is
    background when the winner belongs to the weight-sorted prefix of
    components that first reaches ``background_fraction`` of the weight
    (all components while the total stays below it). An unmatched pixel
    replaces its weakest component and is foreground. The model starts empty,
    so the first frame is entirely foreground.
    """

    def __init__(self, settings: Optional[MixtureSettings] = None):
        self.settings = settings or MixtureSettings()
        self.shape: Optional[Tuple[int, int]] = None
        self.frames_seen = 0
        self.mean: Optional[np.ndarray] = None
        self.variance: Optional[np.ndarray] = None
        self.weight: Optional[np.ndarray] = None

    def reset(self) -> None:
        self.shape = None
        self.frames_seen = 0
        self.mean = self.variance = self.weight = None

    def _allocate(self, shape: Tuple[int, int]) -> None:
        k = self.settings.components
        self.shape = shape
        self.mean = np.zeros(shape + (k,))
        self.variance = np.full(shape + (k,), self.settings.initial_variance)
        self.weight = np.zeros(shape + (k,))

    def background_set(self) -> np.ndarray:
        """Boolean (H, W, K) flags of the components currently modelling background."""
        order = np.argsort(-self.weight, axis=-1, kind="stable")
        sorted_weight = np.take_along_axis(self.weight, order, axis=-1)
        weight_before = np.cumsum(sorted_weight, axis=-1) - sorted_weight
        in_set = np.zeros_like(self.weight, dtype=bool)
        np.put_along_axis(in_set, order, weight_before < self.settings.background_fraction, axis=-1)
        return in_set

    def update(self, frame: GrayImage) -> ForegroundMask:
        """Classify every pixel of the frame, then fold the frame into the model.

        Raises:
            ShapeError: Frame dimensions differ from earlier frames.
        """
        if self.shape is None:
            self._allocate(frame.shape)
        elif frame.shape != self.shape:
            raise ShapeError(
                f"frame is {frame.width}x{frame.height}, model is {self.shape[1]}x{self.shape[0]}",
                stage="update_background",
            )

        s = self.settings
        x = frame.pixels.astype(np.float64)[..., None]
        diff = x - self.mean

        matches = (self.weight > 0) & (np.abs(diff) <= s.match_sigmas * np.sqrt(self.variance))
        matched = matches.any(axis=-1)
        best = np.argmax(np.where(matches, self.weight, -1.0), axis=-1)[..., None]

        winner_is_background = np.take_along_axis(self.background_set(), best, axis=-1)[..., 0]
        foreground = ~(matched & winner_is_background)

        hit = (np.arange(s.components) == best) & matched[..., None]
        rate = s.learning_rate
        self.weight *= 1.0 - rate
        self.weight += rate * hit
        self.mean = np.where(hit, self.mean + rate * diff, self.mean)
        self.variance = np.where(
            hit,
            np.maximum((1.0 - rate) * self.variance + rate * diff * diff, s.variance_floor),
            self.variance,
        )

        missed = ~matched
        if np.any(missed):
            weakest = np.argmin(self.weight, axis=-1)[..., None]
            replace = (np.arange(s.components) == weakest) & missed[..., None]
            self.mean = np.where(replace, x, self.mean)
            self.variance = np.where(replace, s.initial_variance, self.variance)
            self.weight = np.where(replace, rate, self.weight)

        self.frames_seen += 1
        logger.debug("Frame %d: %.1f%% foreground", self.frames_seen, 100.0 * foreground.mean())
        return ForegroundMask(bits=foreground)


def update_background(model: BackgroundModel, frame: GrayImage) -> ForegroundMask:
    """Feed one frame to the model and return its foreground mask."""
    return model.update(frame)
