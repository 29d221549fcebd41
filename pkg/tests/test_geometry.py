"""Tests for polygon helpers and Ramer-Douglas-Peucker simplification."""

import numpy as np
import pytest

from core.errors import DegenerateContourError, InvalidConfigurationError
from visual import Contour, is_convex, point_in_convex, shoelace_area, simplify_rdp


def rectangle_perimeter(width: float, height: float, angle: float = 0.0, origin=(100.0, 100.0)) -> np.ndarray:
    """Boundary points of a rectangle spaced one unit apart, corners first on each side."""
    corners = np.array([(0.0, 0.0), (width, 0.0), (width, height), (0.0, height)])
    points = []
    for a, b in zip(corners, np.roll(corners, -1, axis=0)):
        steps = int(round(np.hypot(*(b - a))))
        for t in range(steps):
            points.append(a + (b - a) * t / steps)
    rotation = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    return np.asarray(points) @ rotation.T + origin, corners @ rotation.T + origin


class TestShoelace:
    """Tests for polygon area."""

    def test_unit_square(self):
        """Test that the unit square has area 1."""
        assert shoelace_area([(0, 0), (1, 0), (1, 1), (0, 1)]) == pytest.approx(1.0)

    def test_orientation_does_not_matter(self):
        """Test that clockwise and counter-clockwise triangles agree."""
        triangle = [(0, 0), (4, 0), (0, 3)]

        assert shoelace_area(triangle) == pytest.approx(6.0)
        assert shoelace_area(triangle[::-1]) == pytest.approx(6.0)

    def test_accepts_contours(self):
        """Test that a Contour is measured through its points."""
        contour = Contour(points=np.array([(0, 0), (10, 0), (10, 5), (0, 5)]))

        assert shoelace_area(contour) == pytest.approx(50.0)


class TestConvexity:
    """Tests for is_convex and point_in_convex."""

    def test_square_is_convex(self):
        """Test that a square is convex in either orientation."""
        square = [(0, 0), (2, 0), (2, 2), (0, 2)]

        assert is_convex(square)
        assert is_convex(square[::-1])

    def test_notched_polygon_is_not_convex(self):
        """Test that a polygon with a reflex vertex is rejected."""
        assert not is_convex([(0, 0), (4, 0), (4, 4), (2, 1), (0, 4)])

    def test_collinear_vertex_is_allowed(self):
        """Test that a straight-angle vertex keeps the polygon convex."""
        assert is_convex([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)])

    def test_boundary_counts_as_inside(self):
        """Test that edge and corner points are contained."""
        square = [(0, 0), (2, 0), (2, 2), (0, 2)]

        assert point_in_convex((1, 1), square)
        assert point_in_convex((2, 1), square)
        assert point_in_convex((0, 0), square)
        assert not point_in_convex((2.01, 1), square)
        assert not point_in_convex((-1, -1), square)


class TestSimplifyRdp:
    """Tests for simplify_rdp."""

    @pytest.mark.parametrize("angle", [0.0, np.pi / 6, 1.1])
    def test_noisy_rectangle_keeps_four_corners(self, rng, angle):
        """Test that a jittered rectangle outline reduces to its four corners."""
        points, corners = rectangle_perimeter(60.0, 40.0, angle)
        noisy = points + rng.uniform(-0.45, 0.45, size=points.shape)

        kept = simplify_rdp(noisy, epsilon=2.0)

        assert len(kept) == 4
        nearest = [int(np.argmin(np.hypot(*(corners - p).T))) for p in kept]
        assert sorted(nearest) == [0, 1, 2, 3]
        for p, k in zip(kept, nearest):
            assert np.hypot(*(p - corners[k])) <= 2.0

    def test_dropped_points_lie_within_epsilon(self, rng):
        """Test that every input point is within epsilon of the simplified outline."""
        angle = np.linspace(0, 2 * np.pi, 200, endpoint=False)
        blob = np.c_[50 + 30 * np.cos(angle), 50 + 20 * np.sin(angle)] + rng.uniform(-0.5, 0.5, (200, 2))
        epsilon = 1.5

        kept = simplify_rdp(blob, epsilon)

        closed = np.vstack([kept, kept[:1]])
        for p in blob:
            distances = []
            for a, b in zip(closed[:-1], closed[1:]):
                ab = b - a
                t = np.clip((p - a) @ ab / (ab @ ab), 0, 1)
                distances.append(np.hypot(*(p - (a + t * ab))))
            assert min(distances) <= epsilon + 1e-9

    def test_kept_points_keep_their_order(self, rng):
        """Test that retained points appear in their original order."""
        points, _ = rectangle_perimeter(30.0, 20.0)
        noisy = points + rng.uniform(-0.3, 0.3, size=points.shape)

        kept = simplify_rdp(noisy, 1.5)

        indices = [int(np.flatnonzero(np.all(noisy == p, axis=1))[0]) for p in kept]
        assert indices == sorted(indices)

    def test_idempotent(self, rng):
        """Test that simplifying a simplified outline changes nothing."""
        points, _ = rectangle_perimeter(50.0, 30.0, 0.4)
        once = simplify_rdp(points + rng.uniform(-0.45, 0.45, points.shape), 2.0)

        twice = simplify_rdp(once, 2.0)

        np.testing.assert_array_equal(twice, once)

    def test_open_line_keeps_endpoints(self):
        """Test that a straight open chain reduces to its endpoints."""
        line = np.c_[np.arange(10.0), np.zeros(10)]

        kept = simplify_rdp(line, 0.5, closed=False)

        np.testing.assert_array_equal(kept, [[0.0, 0.0], [9.0, 0.0]])

    def test_non_positive_epsilon_raises(self):
        """Test that epsilon must be positive."""
        with pytest.raises(InvalidConfigurationError):
            simplify_rdp([(0, 0), (1, 0), (1, 1)], 0.0)

    def test_too_few_points_raises(self):
        """Test that a closed contour needs three points."""
        with pytest.raises(DegenerateContourError):
            simplify_rdp([(0, 0), (1, 1)], 1.0)
