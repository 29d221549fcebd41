"""Tests for the visual TV detector."""

import numpy as np
import pytest
from pydantic import ValidationError

from core.errors import InsufficientDataError, ShapeError
from synth import SceneSpec, synth_blink, synth_frames
from visual import (
    CenterMode,
    DetectorConfig,
    ForegroundMask,
    IntersectionMode,
    RectCandidate,
    collect_evidence,
    detect_tv,
    foreground_centers,
    intersect,
)
from visual.detector import ShotEvidence


def shot(scene_class: str, seed: int, **kwargs):
    return synth_frames(SceneSpec(scene_class=scene_class, seed=seed, **kwargs))


def sorted_corners(corners: np.ndarray) -> np.ndarray:
    return corners[np.lexsort((corners[:, 1], corners[:, 0]))]


class TestForegroundCenters:
    """Tests for foreground_centers."""

    def test_component_centers(self):
        """Test that each large region yields its center of mass as (x, y)."""
        bits = np.zeros((20, 30), dtype=bool)
        bits[2:6, 3:7] = True
        bits[10:14, 20:26] = True

        centers = foreground_centers(ForegroundMask(bits=bits), min_pixels=4, mode=CenterMode.COMPONENT)

        np.testing.assert_allclose(centers, [[4.5, 3.5], [22.5, 11.5]])

    def test_small_regions_are_ignored(self):
        """Test that regions below min_pixels give no center."""
        bits = np.zeros((10, 10), dtype=bool)
        bits[1, 1] = True

        centers = foreground_centers(ForegroundMask(bits=bits), min_pixels=2, mode=CenterMode.COMPONENT)

        assert centers.shape == (0, 2)

    def test_contour_mode_uses_border_points(self):
        """Test that contour mode averages the outer border of a square."""
        bits = np.zeros((20, 20), dtype=bool)
        bits[4:10, 4:10] = True

        centers = foreground_centers(ForegroundMask(bits=bits), min_pixels=1, mode=CenterMode.CONTOUR)

        np.testing.assert_allclose(centers, [[6.5, 6.5]])


class TestIntersect:
    """Tests for combining centers with rectangle candidates."""

    def test_smallest_enclosing_candidate_wins(self):
        """Test that the smallest candidate containing every center is chosen."""
        big = RectCandidate.from_corners([(0, 0), (50, 0), (50, 50), (0, 50)])
        small = RectCandidate.from_corners([(10, 10), (30, 10), (30, 30), (10, 30)])
        evidence = ShotEvidence(centers=np.array([[15.0, 15.0], [25.0, 20.0]]), candidates=[big, small])

        verdict, region = intersect(evidence, IntersectionMode.CANDIDATE)

        assert verdict
        assert region.area == pytest.approx(400.0)

    def test_center_outside_every_candidate(self):
        """Test that one stray center defeats every candidate."""
        small = RectCandidate.from_corners([(10, 10), (30, 10), (30, 30), (10, 30)])
        evidence = ShotEvidence(centers=np.array([[15.0, 15.0], [45.0, 45.0]]), candidates=[small])

        assert intersect(evidence, IntersectionMode.CANDIDATE) == (False, None)

    def test_no_centers_is_negative(self):
        """Test that a shot without motion is never a TV."""
        small = RectCandidate.from_corners([(10, 10), (30, 10), (30, 30), (10, 30)])
        evidence = ShotEvidence(centers=np.empty((0, 2)), candidates=[small])

        assert intersect(evidence, IntersectionMode.BBOX) == (False, None)

    def test_bbox_mode_wraps_centers(self):
        """Test that bbox mode returns the bounding box of the centers."""
        evidence = ShotEvidence(centers=np.array([[5.0, 8.0], [15.0, 2.0], [9.0, 12.0]]), candidates=[])

        verdict, region = intersect(evidence, IntersectionMode.BBOX)

        assert verdict
        np.testing.assert_allclose(region.corners, [[5, 2], [15, 2], [15, 12], [5, 12]])


class TestDetectTv:
    """Tests for detect_tv on synthetic shots."""

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_live_screen_is_detected(self, seed):
        """Test that a screen with changing content is found."""
        verdict, region = detect_tv(shot("tv_screen", seed))

        assert verdict
        assert 0.05 * 160 * 120 <= region.area <= 0.70 * 160 * 120

    @pytest.mark.parametrize("seed", [1, 2])
    def test_picture_frame_is_rejected(self, seed):
        """Test that a screen-shaped static picture is not a TV."""
        verdict, region = detect_tv(shot("picture_frame", seed))

        assert not verdict
        assert region is None

    def test_empty_scene_is_rejected(self):
        """Test that a static textured scene is not a TV."""
        assert detect_tv(shot("empty", 4)) == (False, None)

    def test_blinking_square_is_detected(self):
        """Test that a flickering square on a flat wall is found with its outline."""
        verdict, region = detect_tv(synth_blink(frames=8))

        assert verdict
        assert region.contains((31.5, 31.5))
        assert 0.05 * 64 * 64 <= region.area <= 0.70 * 64 * 64

    def test_region_contains_every_center(self):
        """Test that the returned region encloses all recorded centers."""
        frames = shot("tv_screen", 5)
        evidence = collect_evidence(frames)

        verdict, region = detect_tv(frames)

        assert verdict
        assert all(region.contains(c) for c in evidence.centers)

    def test_bbox_mode_accepts_any_motion(self):
        """Test that bbox mode reports a moving blob, unlike candidate mode."""
        frames = shot("moving_blob", 3)

        verdict, _ = detect_tv(frames, DetectorConfig(intersection_mode=IntersectionMode.BBOX))

        assert verdict

    def test_candidate_mode_rejects_moving_blob(self):
        """Test that motion without an enclosing rectangle is not a TV."""
        assert detect_tv(shot("moving_blob", 3)) == (False, None)

    def test_shifted_shot_shifts_the_region(self):
        """Test that moving the whole scene by (dx, dy) moves the region by the same offset."""
        dx, dy = 5, 3

        verdict, region = detect_tv(synth_blink(frames=8))
        moved_verdict, moved = detect_tv(
            synth_blink(frames=8, region=(slice(16 + dy, 48 + dy), slice(16 + dx, 48 + dx)))
        )

        assert verdict and moved_verdict
        np.testing.assert_allclose(sorted_corners(moved.corners), sorted_corners(region.corners + [dx, dy]))

    def test_extra_frames_keep_a_detection(self):
        """Test that repeating frames already seen never turns a detection off."""
        frames = synth_blink(frames=8)

        for extra in (frames[-1:] * 3, frames[:5]):
            verdict, region = detect_tv(frames + extra)

            assert verdict
            assert region.contains((31.5, 31.5))

    def test_first_frame_contributes_no_centers(self):
        """Test that the cold-start mask is not used as evidence."""
        frames = shot("picture_frame", 1)

        evidence = collect_evidence(frames)

        assert evidence.centers.shape == (0, 2)

    def test_single_frame_raises(self):
        """Test that one frame is not enough for background subtraction."""
        with pytest.raises(InsufficientDataError):
            detect_tv(shot("tv_screen", 1, frames=1))

    def test_mixed_sizes_raise(self):
        """Test that frames of different dimensions are rejected."""
        frames = shot("tv_screen", 1, frames=2) + shot("tv_screen", 1, frames=1, width=80, height=60)

        with pytest.raises(ShapeError):
            detect_tv(frames)

    def test_band_must_be_ordered(self):
        """Test that an inverted area band is a validation error."""
        with pytest.raises(ValidationError):
            DetectorConfig(min_area_fraction=0.8, max_area_fraction=0.5)
