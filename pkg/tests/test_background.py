"""Tests for the adaptive mixture background model."""

import numpy as np
import pytest
from pydantic import ValidationError

from core.errors import ShapeError
from synth import synth_blink
from visual import BackgroundModel, MixtureSettings, update_background


class TestBackgroundModel:
    """Tests for BackgroundModel.update."""

    def test_first_frame_is_foreground(self, make_image):
        """Test that the cold model marks every pixel of the first frame foreground."""
        model = BackgroundModel()

        mask = update_background(model, make_image(np.full((16, 16), 100)))

        assert mask.bits.all()

    def test_static_scene_becomes_background(self, make_image):
        """Test that a repeated frame is background from the second frame on."""
        model = BackgroundModel()
        frame = make_image(np.arange(256).reshape(16, 16))

        masks = [model.update(frame) for _ in range(10)]

        assert masks[0].bits.all()
        assert not any(m.bits.any() for m in masks[1:])
        assert model.frames_seen == 10

    def test_small_noise_stays_background(self, make_image, rng):
        """Test that sensor jitter of a few levels does not create foreground."""
        model = BackgroundModel()
        base = rng.integers(20, 230, size=(24, 24))
        model.update(make_image(base))

        for _ in range(5):
            mask = model.update(make_image(base + rng.integers(-3, 4, size=base.shape)))
            assert mask.fraction == 0.0

    def test_blinking_region_stays_foreground(self):
        """Test that five cycling levels never settle into three components."""
        model = BackgroundModel()
        frames = synth_blink(frames=30)

        masks = [model.update(f) for f in frames]

        for mask in masks[1:]:
            assert mask.bits[16:48, 16:48].all()
            assert not mask.bits[:16].any()
            assert not mask.bits[:, :16].any()

    def test_sudden_change_is_foreground(self, make_image):
        """Test that a new object appearing in a learned scene is flagged."""
        model = BackgroundModel()
        scene = np.full((20, 20), 150)
        for _ in range(5):
            model.update(make_image(scene))
        scene[5:10, 5:10] = 30

        mask = model.update(make_image(scene))

        assert mask.bits[5:10, 5:10].all()
        assert mask.bits.sum() == 25

    def test_mismatched_frame_size_raises(self, make_image):
        """Test that frames must keep the model's dimensions."""
        model = BackgroundModel()
        model.update(make_image(np.zeros((16, 16))))

        with pytest.raises(ShapeError):
            model.update(make_image(np.zeros((16, 20))))

    def test_reset_forgets_the_scene(self, make_image):
        """Test that reset returns the model to its cold state."""
        model = BackgroundModel()
        frame = make_image(np.full((12, 12), 80))
        model.update(frame)
        model.update(frame)

        model.reset()

        assert model.frames_seen == 0
        assert model.update(frame).bits.all()

    def test_weights_stay_normalized_below_one(self, make_image, rng):
        """Test that component weights never sum above one."""
        model = BackgroundModel()
        for _ in range(20):
            model.update(make_image(rng.integers(0, 256, size=(10, 10))))

        assert np.all(model.weight.sum(axis=-1) <= 1.0 + 1e-9)
        assert np.all(model.variance >= model.settings.variance_floor)


class TestMixtureSettings:
    """Tests for mixture parameter validation."""

    def test_defaults(self):
        """Test the default mixture size and learning rate."""
        settings = MixtureSettings()

        assert settings.components == 3
        assert settings.learning_rate == pytest.approx(0.02)

    def test_learning_rate_must_be_below_one(self):
        """Test that a learning rate of 1 is rejected."""
        with pytest.raises(ValidationError):
            MixtureSettings(learning_rate=1.0)
