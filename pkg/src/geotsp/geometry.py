"""Planar geometry kernel: orientation, segment crossing, angles, convex hull.

All predicates share a single tolerance on cross products so that the
propagators, the naive reference filter and the post-hoc tour checks
classify degenerate configurations identically.
"""

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "EPS",
    "AllCollinearError",
    "Point",
    "Orientation",
    "orient",
    "segments_cross",
    "ccw_angle",
    "convex_hull",
    "is_left_of",
]

# Tolerance on raw cross products. Coordinates at desk scale (unit box up
# to [0, 1000]^2) keep genuine non-degenerate cross products far above it.
EPS = 1e-9

TWO_PI = 2.0 * math.pi


class AllCollinearError(ValueError):
    """Every input point lies on one line; the hull polygon is degenerate."""


@dataclass(frozen=True)
class Point:
    """A point in the plane. Coordinates must be finite."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")


class Orientation(Enum):
    CLOCKWISE = -1
    COLLINEAR = 0
    COUNTERCLOCKWISE = 1


def _cross(p: Point, q: Point, r: Point) -> float:
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def orient(p: Point, q: Point, r: Point) -> Orientation:
    """Turn direction of the triple (p, q, r), y-axis up."""
    c = _cross(p, q, r)
    if c > EPS:
        return Orientation.COUNTERCLOCKWISE
    if c < -EPS:
        return Orientation.CLOCKWISE
    return Orientation.COLLINEAR


def _interiors_overlap_collinear(a: Point, b: Point, c: Point, d: Point) -> bool:
    # All four points on one line: test open-interval overlap along the
    # dominant axis of ab.
    if abs(b.x - a.x) >= abs(b.y - a.y):
        lo1, hi1 = min(a.x, b.x), max(a.x, b.x)
        lo2, hi2 = min(c.x, d.x), max(c.x, d.x)
    else:
        lo1, hi1 = min(a.y, b.y), max(a.y, b.y)
        lo2, hi2 = min(c.y, d.y), max(c.y, d.y)
    return max(lo1, lo2) < min(hi1, hi2)


def segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True iff segments ab and cd intersect at a point interior to both.

    Endpoint-only contact does not count; collinear segments whose open
    interiors overlap do.
    """
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    col = Orientation.COLLINEAR
    if o1 is not col and o2 is not col and o3 is not col and o4 is not col:
        return o1 is not o2 and o3 is not o4
    if o1 is col and o2 is col and o3 is col and o4 is col:
        return _interiors_overlap_collinear(a, b, c, d)
    # A single collinear endpoint means contact at an endpoint of one of
    # the segments, which is not an interior crossing.
    return False


def ccw_angle(pi: Point, pj: Point, pk: Point) -> float:
    """Counterclockwise angle at vertex pj from ray pj->pi to ray pj->pk, in [0, 2*pi)."""
    assert (pi.x, pi.y) != (pj.x, pj.y) and (pk.x, pk.y) != (pj.x, pj.y)
    a_in = math.atan2(pi.y - pj.y, pi.x - pj.x)
    a_out = math.atan2(pk.y - pj.y, pk.x - pj.x)
    return (a_out - a_in) % TWO_PI


def is_left_of(p: Point, a: Point, b: Point) -> bool:
    """True iff p lies strictly left of the directed line a->b."""
    return orient(a, b, p) is Orientation.COUNTERCLOCKWISE


def _strict_hull_ccw(order: list[int], points: list[Point]) -> list[int]:
    # Andrew monotone chain keeping strict turns only (no collinear vertices).
    def build(seq: list[int]) -> list[int]:
        chain: list[int] = []
        for idx in seq:
            while len(chain) >= 2 and _cross(points[chain[-2]], points[chain[-1]], points[idx]) <= EPS:
                chain.pop()
            chain.append(idx)
        return chain

    lower = build(order)
    upper = build(order[::-1])
    return lower[:-1] + upper[:-1]


def convex_hull(points: list[Point]) -> list[int]:
    """Indices of all boundary points of the convex hull, in clockwise order.

    The walk starts at the lexicographically smallest point and includes
    points lying on hull edges (collinear boundary points). Raises
    AllCollinearError when every point lies on one line.
    """
    n = len(points)
    if n == 0:
        raise ValueError("convex_hull needs at least one point")
    if n == 1:
        return [0]
    order = sorted(range(n), key=lambda k: (points[k].x, points[k].y))
    ccw = _strict_hull_ccw(order, points)
    if len(ccw) < 3:
        raise AllCollinearError("all points are collinear")

    # Reverse to clockwise, keeping the lexicographically smallest point first.
    cw = [ccw[0]] + ccw[1:][::-1]

    apex = set(cw)
    result: list[int] = []
    k = len(cw)
    for e in range(k):
        a = points[cw[e]]
        b = points[cw[(e + 1) % k]]
        result.append(cw[e])
        onto: list[tuple[float, int]] = []
        for idx in range(n):
            if idx in apex:
                continue
            p = points[idx]
            if orient(a, b, p) is not Orientation.COLLINEAR:
                continue
            # Parameter along the edge; apex points already excluded, so any
            # collinear point strictly between a and b sits on the boundary.
            if abs(b.x - a.x) >= abs(b.y - a.y):
                t = (p.x - a.x) / (b.x - a.x)
            else:
                t = (p.y - a.y) / (b.y - a.y)
            if 0.0 < t < 1.0:
                onto.append((t, idx))
        for _, idx in sorted(onto):
            result.append(idx)
    return result
