"""Exact planar primitives: points, triangle homothets, affine reduction.

Every coordinate is a `fractions.Fraction`; all predicates are exact, so
boundary cases (a query point on a vertex, edge, or hypotenuse) are decided
correctly with no epsilon conventions. Containment is closed everywhere:
boundary points count as inside.

A *canonical* triangle is the right-angled isosceles homothet with legs
parallel to the axes: anchor ``(a, b)`` at the right angle, leg length
``s``, i.e. the closed region ``x >= a, y >= b, (x-a)+(y-b) <= s``.
Arbitrary homothetic families reduce to canonical form through the affine
map that sends the family's reference triangle to ((0,0), (1,0), (0,1)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Tuple, Union

RationalLike = Union[Fraction, int, str]

#: Exact scalar type used for every coordinate in this package.
Rational = Fraction


class GeometryError(ValueError):
    """Base class for exact-geometry validation failures."""


class DegenerateReferenceError(GeometryError):
    """Reference triangle has zero area or is not counterclockwise."""


class NotHomotheticError(GeometryError):
    """Vertex triple is not a scaled translate of the reference triangle."""


class NonPositiveScaleError(GeometryError):
    """Vertex triple matches the reference only with scale <= 0."""


def _frac(value: RationalLike) -> Fraction:
    return value if type(value) is Fraction else Fraction(value)


@dataclass(frozen=True, slots=True)
class Point:
    x: Fraction
    y: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _frac(self.x))
        object.__setattr__(self, "y", _frac(self.y))

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def scaled(self, k: RationalLike) -> "Point":
        k = _frac(k)
        return Point(self.x * k, self.y * k)

    def __str__(self) -> str:
        return f"{self.x} {self.y}"


def cross(o: Point, a: Point, b: Point) -> Fraction:
    """Signed cross product (a-o) x (b-o); positive when o->a->b turns left."""
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


@dataclass(frozen=True, slots=True)
class ReferenceTriangle:
    """Non-degenerate counterclockwise triangle fixing a homothetic family.

    Homothets of the reference are described by an anchor point (the image
    of ``v0``) and a positive scale.
    """

    v0: Point
    v1: Point
    v2: Point

    def __post_init__(self) -> None:
        if cross(self.v0, self.v1, self.v2) <= 0:
            raise DegenerateReferenceError(
                f"reference triangle must be counterclockwise with positive "
                f"area: {self.v0}, {self.v1}, {self.v2}"
            )

    @property
    def vertices(self) -> Tuple[Point, Point, Point]:
        return (self.v0, self.v1, self.v2)

    def homothet_vertices(self, anchor: Point, scale: RationalLike) -> Tuple[Point, Point, Point]:
        """Vertices of the homothet ``anchor + scale * (v_i - v0)``."""
        scale = _frac(scale)
        return tuple(anchor + (v - self.v0).scaled(scale) for v in self.vertices)


#: The axis-parallel right-isosceles reference ((0,0), (1,0), (0,1)).
CANONICAL_REFERENCE = ReferenceTriangle(Point(0, 0), Point(1, 0), Point(0, 1))


@dataclass(frozen=True, slots=True)
class CanonicalTriangle:
    """Axis-parallel right-isosceles homothet with an instance-unique label.

    Denotes the closed region ``{(x, y): x >= a, y >= b, (x-a)+(y-b) <= s}``
    with vertices ``(a, b)``, ``(a+s, b)``, ``(a, b+s)``.
    """

    id: int
    a: Fraction
    b: Fraction
    s: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "b", _frac(self.b))
        object.__setattr__(self, "s", _frac(self.s))
        if self.s <= 0:
            raise GeometryError(f"triangle {self.id}: scale must be positive, got {self.s}")

    @property
    def x_interval(self) -> Tuple[Fraction, Fraction]:
        return (self.a, self.a + self.s)

    @property
    def y_interval(self) -> Tuple[Fraction, Fraction]:
        return (self.b, self.b + self.s)

    @property
    def vertices(self) -> Tuple[Point, Point, Point]:
        return (Point(self.a, self.b), Point(self.a + self.s, self.b), Point(self.a, self.b + self.s))

    def contains(self, q: Point) -> bool:
        return point_in_canonical(self, q)


def point_in_canonical(t: CanonicalTriangle, q: Point) -> bool:
    """Closed containment test against a canonical triangle."""
    return q.x >= t.a and q.y >= t.b and (q.x - t.a) + (q.y - t.b) <= t.s


def point_in_triangle(v0: Point, v1: Point, v2: Point, q: Point) -> bool:
    """Closed containment of ``q`` in the triangle ``v0 v1 v2``, any orientation.

    Three half-plane sign tests; exact, so points on edges and vertices are in.
    """
    d0 = cross(v0, v1, q)
    d1 = cross(v1, v2, q)
    d2 = cross(v2, v0, q)
    return (d0 >= 0 and d1 >= 0 and d2 >= 0) or (d0 <= 0 and d1 <= 0 and d2 <= 0)


@dataclass(frozen=True, slots=True)
class AffineMap:
    """Invertible affine map ``p -> M p + t`` over exact rationals."""

    m00: Fraction
    m01: Fraction
    m10: Fraction
    m11: Fraction
    tx: Fraction
    ty: Fraction

    def __post_init__(self) -> None:
        for name in ("m00", "m01", "m10", "m11", "tx", "ty"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        if self.det == 0:
            raise GeometryError("affine map must be invertible (nonzero determinant)")

    @property
    def det(self) -> Fraction:
        return self.m00 * self.m11 - self.m01 * self.m10

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(1, 0, 0, 1, 0, 0)

    def apply(self, p: Point) -> Point:
        return Point(self.m00 * p.x + self.m01 * p.y + self.tx,
                     self.m10 * p.x + self.m11 * p.y + self.ty)

    __call__ = apply

    def inverse(self) -> "AffineMap":
        d = self.det
        i00, i01 = self.m11 / d, -self.m01 / d
        i10, i11 = -self.m10 / d, self.m00 / d
        return AffineMap(i00, i01, i10, i11,
                         -(i00 * self.tx + i01 * self.ty),
                         -(i10 * self.tx + i11 * self.ty))


def apply_map(m: AffineMap, p: Point) -> Point:
    return m.apply(p)


def canonicalizing_map(r: ReferenceTriangle) -> AffineMap:
    """The affine map sending ``r`` to the canonical reference.

    Sends ``r.v0 -> (0,0)``, ``r.v1 -> (1,0)``, ``r.v2 -> (0,1)``, hence every
    positive homothet of ``r`` to a canonical triangle with the same scale.
    """
    e1 = r.v1 - r.v0
    e2 = r.v2 - r.v0
    d = e1.x * e2.y - e1.y * e2.x  # positive: r is counterclockwise
    m00, m01 = e2.y / d, -e2.x / d
    m10, m11 = -e1.y / d, e1.x / d
    return AffineMap(m00, m01, m10, m11,
                     -(m00 * r.v0.x + m01 * r.v0.y),
                     -(m10 * r.v0.x + m11 * r.v0.y))


def canonicalize_family(reference: ReferenceTriangle,
                        entries: Iterable[Tuple[int, Point, Fraction]],
                        ) -> Tuple[AffineMap, List[CanonicalTriangle]]:
    """Reduce ``(id, anchor, scale)`` homothets of ``reference`` to canonical form.

    Returns the canonicalizing map (apply it to query points before querying
    the index) and the canonical triangles, whose answers carry the same ids.
    """
    m = canonicalizing_map(reference)
    triangles = []
    for tid, anchor, scale in entries:
        image = m(anchor)
        triangles.append(CanonicalTriangle(tid, image.x, image.y, scale))
    return m, triangles


def validate_homothet(r: ReferenceTriangle, v0: Point, v1: Point, v2: Point) -> Tuple[Point, Fraction]:
    """Check that ``(v0, v1, v2)`` is a positive homothet of ``r``, in vertex order.

    Returns ``(anchor, scale)`` with ``v_i == anchor + scale * (r.v_i - r.v0)``.
    Vertex correspondence is order-consistent; rotated or reflected copies are
    rejected. Raises :class:`NotHomotheticError` on shape mismatch and
    :class:`NonPositiveScaleError` when the triple only matches with
    ``scale <= 0`` (a reflection through a point, or a single point).
    """
    f1 = r.v1 - r.v0
    f2 = r.v2 - r.v0
    e1 = v1 - v0
    e2 = v2 - v0
    scale = e1.x / f1.x if f1.x != 0 else e1.y / f1.y
    if (e1 != f1.scaled(scale)) or (e2 != f2.scaled(scale)):
        raise NotHomotheticError(
            f"vertices {v0}, {v1}, {v2} are not a homothet of the reference"
        )
    if scale <= 0:
        raise NonPositiveScaleError(f"homothet scale must be positive, got {scale}")
    return v0, scale
