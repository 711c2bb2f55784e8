"""Point enclosure for homothetic simple polygons via triangulation.

The reference polygon is triangulated once (ear clipping; the reference is
small, so the quadratic pass is irrelevant). Every polygon instance then
contributes one homothet triangle per piece, and each piece family gets its
own canonical triangle index. A query point lying on a shared triangulation
diagonal is found by both adjacent piece families, so results are
deduplicated per query before reporting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .geometry import (AffineMap, CanonicalTriangle, Point, ReferenceTriangle,
                       canonicalizing_map, cross, point_in_triangle)
from .index import MODE_CASCADED, EnclosureIndex, build_index


class PolygonError(ValueError):
    """Polygon fails validation (orientation, simplicity, vertex count)."""


def _on_segment(u: Point, v: Point, q: Point) -> bool:
    return (cross(u, v, q) == 0
            and min(u.x, v.x) <= q.x <= max(u.x, v.x)
            and min(u.y, v.y) <= q.y <= max(u.y, v.y))


def _segments_intersect(p1: Point, p2: Point, p3: Point, p4: Point) -> bool:
    """Closed intersection test for segments p1p2 and p3p4."""
    d1 = cross(p3, p4, p1)
    d2 = cross(p3, p4, p2)
    d3 = cross(p1, p2, p3)
    d4 = cross(p1, p2, p4)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and \
       ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    return ((d1 == 0 and _on_segment(p3, p4, p1))
            or (d2 == 0 and _on_segment(p3, p4, p2))
            or (d3 == 0 and _on_segment(p1, p2, p3))
            or (d4 == 0 and _on_segment(p1, p2, p4)))


@dataclass(frozen=True)
class ReferencePolygon:
    """Simple counterclockwise polygon with at least three vertices."""

    vertices: Tuple[Point, ...]

    def __init__(self, vertices: Iterable[Point]):
        object.__setattr__(self, "vertices", tuple(vertices))
        self._validate()

    def _validate(self) -> None:
        vs = self.vertices
        m = len(vs)
        if m < 3:
            raise PolygonError("polygon needs at least 3 vertices")
        if len(set(vs)) != m:
            raise PolygonError("polygon has repeated vertices")
        if self.area2 <= 0:
            raise PolygonError("polygon must be counterclockwise with positive area")
        edges = [(vs[i], vs[(i + 1) % m]) for i in range(m)]
        for i in range(m):
            a1, a2 = edges[i]
            if a1 == a2:
                raise PolygonError("polygon has a zero-length edge")
            for j in range(i + 1, m):
                if j == i or (j - i) % m in (1, m - 1):
                    continue  # adjacent edges share exactly their endpoint
                b1, b2 = edges[j]
                if _segments_intersect(a1, a2, b1, b2):
                    raise PolygonError(
                        f"polygon is self-intersecting (edges {i} and {j})"
                    )

    @property
    def area2(self) -> Fraction:
        vs = self.vertices
        return sum((vs[i].x * vs[(i + 1) % len(vs)].y - vs[(i + 1) % len(vs)].x * vs[i].y)
                   for i in range(len(vs)))

    def homothet_vertices(self, anchor: Point, scale: Fraction) -> List[Point]:
        v0 = self.vertices[0]
        return [anchor + (v - v0).scaled(scale) for v in self.vertices]


def triangulate_reference(p: ReferencePolygon) -> List[ReferenceTriangle]:
    """Ear-clipping triangulation into exactly ``len(vertices) - 2`` pieces.

    Pieces are counterclockwise, non-degenerate, tile the polygon, and have
    pairwise disjoint interiors. Flat (collinear) vertices are never clipped
    as ears; they end up on the edge of some piece.
    """
    vs = list(p.vertices)
    pieces: List[ReferenceTriangle] = []
    while len(vs) > 3:
        for i in range(len(vs)):
            prev, cur, nxt = vs[i - 1], vs[i], vs[(i + 1) % len(vs)]
            if cross(prev, cur, nxt) <= 0:
                continue
            if any(point_in_triangle(prev, cur, nxt, w)
                   for w in vs if w not in (prev, cur, nxt)):
                continue
            pieces.append(ReferenceTriangle(prev, cur, nxt))
            del vs[i]
            break
        else:
            raise PolygonError("no ear found; polygon is not simple")
    if cross(vs[0], vs[1], vs[2]) <= 0:
        raise PolygonError("degenerate final triangle; polygon is not simple")
    pieces.append(ReferenceTriangle(vs[0], vs[1], vs[2]))
    return pieces


def point_in_polygon(vertices: Sequence[Point], q: Point) -> bool:
    """Closed containment: boundary points count, interior by even-odd rule."""
    m = len(vertices)
    for i in range(m):
        if _on_segment(vertices[i], vertices[(i + 1) % m], q):
            return True
    inside = False
    for i in range(m):
        u, v = vertices[i], vertices[(i + 1) % m]
        if (u.y > q.y) != (v.y > q.y):
            x_cross = u.x + (q.y - u.y) * (v.x - u.x) / (v.y - u.y)
            if q.x < x_cross:
                inside = not inside
    return inside


class PolygonIndex:
    """One enclosure index per triangulation piece, answers by polygon id."""

    def __init__(self, reference: ReferencePolygon,
                 instances: Sequence[Tuple[int, Point, Fraction]]):
        self.reference = reference
        self.instances = [(int(pid), anchor, Fraction(scale)) for pid, anchor, scale in instances]
        ids = [pid for pid, _, _ in self.instances]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate polygon id")
        self.pieces = triangulate_reference(reference)
        base = reference.vertices[0]
        self.families: List[Tuple[AffineMap, EnclosureIndex]] = []
        for piece in self.pieces:
            to_canonical = canonicalizing_map(piece)
            offset = piece.v0 - base
            triangles = [
                CanonicalTriangle(pid, *_xy(to_canonical(anchor + offset.scaled(scale))), scale)
                for pid, anchor, scale in self.instances
            ]
            self.families.append((to_canonical, build_index(triangles)))

    def query(self, q: Point, mode: str = MODE_CASCADED) -> List[int]:
        """Ids of all polygon instances containing ``q``, ascending, no repeats."""
        seen = set()
        for to_canonical, index in self.families:
            ids, _ = index.query(to_canonical(q), mode)
            seen.update(ids)
        return sorted(seen)


def _xy(p: Point) -> Tuple[Fraction, Fraction]:
    return p.x, p.y


def build_polygon_index(p: ReferencePolygon,
                        instances: Sequence[Tuple[int, Point, Fraction]]) -> PolygonIndex:
    """Index homothets ``(poly_id, anchor, scale)`` of the reference polygon."""
    return PolygonIndex(p, instances)


def query_polygons(pi: PolygonIndex, q: Point, mode: str = MODE_CASCADED) -> List[int]:
    """Module-level alias for :meth:`PolygonIndex.query`."""
    return pi.query(q, mode)
