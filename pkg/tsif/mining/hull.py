"""Convex hulls of integer points with exact orientation tests."""
from __future__ import annotations

from functools import cmp_to_key
from typing import Iterable, Sequence

Point = tuple[int, int]


def cross(o: Point, a: Point, b: Point) -> int:
    """Twice the signed area of ``o, a, b``; positive for a counterclockwise turn."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _squared_distance(a: Point, b: Point) -> int:
    return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2


def graham_hull(points: Iterable[Point]) -> list[Point]:
    """Counterclockwise hull vertices starting from the lowest (then leftmost) point; collinear points are dropped.

    All-collinear inputs give the two end points and a single point gives itself.
    """
    unique = sorted({(int(x), int(y)) for x, y in points})
    if not unique:
        raise ValueError("The hull of an empty point set is undefined.")
    pivot = min(unique, key=lambda p: (p[1], p[0]))
    rest = [p for p in unique if p != pivot]

    def by_angle(a: Point, b: Point) -> int:
        turn = cross(pivot, a, b)
        if turn:
            return -1 if turn > 0 else 1
        return _squared_distance(pivot, a) - _squared_distance(pivot, b)

    rest.sort(key=cmp_to_key(by_angle))
    hull = [pivot]
    for point in rest:
        while len(hull) > 1 and cross(hull[-2], hull[-1], point) <= 0:
            hull.pop()
        hull.append(point)
    return hull


def point_in_polygon(point: Point, polygon: Sequence[Point]) -> bool:
    """Inside-or-on test against a counterclockwise convex polygon, a segment or a single point."""
    if len(polygon) == 1:
        return tuple(point) == tuple(polygon[0])
    if len(polygon) == 2:
        a, b = polygon
        return (
            cross(a, b, point) == 0
            and min(a[0], b[0]) <= point[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= point[1] <= max(a[1], b[1])
        )
    return all(cross(polygon[i], polygon[(i + 1) % len(polygon)], point) >= 0 for i in range(len(polygon)))


def lattice_points(polygon: Sequence[Point]) -> list[Point]:
    """Integer points inside or on the polygon, in sorted order."""
    xs = [p[0] for p in polygon]
    ys = [p[1] for p in polygon]
    return [
        (x, y)
        for x in range(min(xs), max(xs) + 1)
        for y in range(min(ys), max(ys) + 1)
        if point_in_polygon((x, y), polygon)
    ]
