"""Planar polygon helpers and Ramer-Douglas-Peucker simplification.

Points are (x, y) rows of an (n, 2) array. Polygons are closed implicitly.
"""

from typing import List

import numpy as np
from scipy.spatial.distance import pdist

from core.errors import DegenerateContourError, InvalidConfigurationError


def _as_points(points) -> np.ndarray:
    return np.asarray(getattr(points, "points", points))


def _edge_cross(polygon: np.ndarray) -> np.ndarray:
    """z-component of edge_k x edge_{k+1} for every vertex of the closed polygon."""
    p = np.asarray(polygon, dtype=np.float64)
    edges = np.roll(p, -1, axis=0) - p
    following = np.roll(edges, -1, axis=0)
    return edges[:, 0] * following[:, 1] - edges[:, 1] * following[:, 0]


def signed_area(polygon) -> float:
    p = np.asarray(_as_points(polygon), dtype=np.float64)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def shoelace_area(polygon) -> float:
    """Absolute area enclosed by the polygon."""
    return abs(signed_area(polygon))


def is_convex(polygon) -> bool:
    """True when every turn has the same sense; collinear (zero) turns are allowed."""
    cross = _edge_cross(_as_points(polygon))
    return bool(np.all(cross >= 0) or np.all(cross <= 0))


def point_in_convex(point, polygon) -> bool:
    """Containment test for a convex polygon, boundary inclusive."""
    p = np.asarray(_as_points(polygon), dtype=np.float64)
    q = np.asarray(point, dtype=np.float64)
    edges = np.roll(p, -1, axis=0) - p
    to_point = q - p
    cross = edges[:, 0] * to_point[:, 1] - edges[:, 1] * to_point[:, 0]
    scale = max(1.0, float(np.abs(p).max()))
    eps = 1e-9 * scale * scale
    return bool(np.all(cross >= -eps) or np.all(cross <= eps))


def segment_distances(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Euclidean distance from each point to the segment a-b."""
    points = np.asarray(points, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    ab = np.asarray(b, dtype=np.float64) - a
    length2 = float(ab @ ab)
    if length2 == 0.0:
        return np.hypot(*(points - a).T)
    t = np.clip((points - a) @ ab / length2, 0.0, 1.0)
    nearest = a + t[:, None] * ab
    return np.hypot(*(points - nearest).T)


def _rdp_keep(points: np.ndarray, epsilon: float) -> List[int]:
    """Indices kept by RDP on an open chain, endpoints included, ascending."""
    keep = {0, len(points) - 1}
    stack = [(0, len(points) - 1)]
    while stack:
        start, end = stack.pop()
        if end - start < 2:
            continue
        inner = points[start + 1: end]
        distances = segment_distances(inner, points[start], points[end])
        k = int(np.argmax(distances))
        if distances[k] > epsilon:
            split = start + 1 + k
            keep.add(split)
            stack.append((start, split))
            stack.append((split, end))
    return sorted(keep)


def simplify_rdp(contour, epsilon: float, closed: bool = True) -> np.ndarray:
    """Ramer-Douglas-Peucker simplification.

    A closed contour is cut at its diameter pair (the first farthest pair in
    contour order) into two chains that are simplified separately. Kept
    vertices stay in their original order, so simplifying the output again
    with the same epsilon returns it unchanged.

    Args:
        contour: Contour or (n, 2) point array.
        epsilon: Maximum distance of any dropped point from the result.
        closed: Treat the points as a closed boundary.

    Returns:
        (k, 2) array of retained points.

    Raises:
        DegenerateContourError: Fewer than 3 points (closed) or 2 points (open).
        InvalidConfigurationError: epsilon is not positive.
    """
    if epsilon <= 0:
        raise InvalidConfigurationError(f"epsilon must be positive, got {epsilon}", stage="simplify_rdp")
    points = _as_points(contour)
    n = len(points)
    if n < (3 if closed else 2):
        raise DegenerateContourError(f"cannot simplify a contour of {n} points", stage="simplify_rdp")

    if not closed:
        return points[_rdp_keep(points.astype(np.float64), epsilon)]

    coords = points.astype(np.float64)
    # pdist enumerates pairs (i, j), i < j, in row-major order
    flat = int(np.argmax(pdist(coords)))
    row_starts = np.concatenate([[0], np.cumsum(np.arange(n - 1, 0, -1))])
    i = int(np.searchsorted(row_starts, flat, side="right")) - 1
    j = int(flat - row_starts[i]) + i + 1

    first = np.arange(i, j + 1)
    second = np.concatenate([np.arange(j, n), np.arange(0, i + 1)])
    kept = {int(first[k]) for k in _rdp_keep(coords[first], epsilon)}
    kept |= {int(second[k]) for k in _rdp_keep(coords[second], epsilon)}
    return points[sorted(kept)]
