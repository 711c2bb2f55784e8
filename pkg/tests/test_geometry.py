from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tristab.geometry import (
    CANONICAL_REFERENCE,
    AffineMap,
    CanonicalTriangle,
    DegenerateReferenceError,
    GeometryError,
    NonPositiveScaleError,
    NotHomotheticError,
    Point,
    ReferenceTriangle,
    apply_map,
    canonicalizing_map,
    cross,
    point_in_canonical,
    point_in_triangle,
    validate_homothet,
)

fractions = st.fractions(min_value=-100, max_value=100, max_denominator=16)
points = st.builds(Point, fractions, fractions)


def references():
    def make(v0, v1, v2):
        if cross(v0, v1, v2) <= 0:
            return None
        return ReferenceTriangle(v0, v1, v2)

    return st.builds(make, points, points, points).filter(lambda r: r is not None)


def test_point_in_canonical_examples():
    t = CanonicalTriangle(1, 0, 0, 4)
    assert point_in_canonical(t, Point(1, 1))
    assert point_in_canonical(t, Point(0, 4))  # apex of a closed region
    assert not point_in_canonical(t, Point(3, 2))


def test_point_in_canonical_boundary():
    t = CanonicalTriangle(7, 0, 0, 4)
    for v in t.vertices:
        assert t.contains(v)
    assert t.contains(Point(2, 2))            # hypotenuse midpoint
    assert t.contains(Point(2, 0))
    assert not t.contains(Point(Fraction(2), Fraction(2, 1) + Fraction(1, 10 ** 9)))
    assert not t.contains(Point(-Fraction(1, 10 ** 9), 0))


def test_canonicalizing_map_identity():
    assert canonicalizing_map(CANONICAL_REFERENCE) == AffineMap.identity()


def test_canonicalizing_map_uniform_scale():
    r = ReferenceTriangle(Point(0, 0), Point(2, 0), Point(0, 2))
    m = canonicalizing_map(r)
    assert m == AffineMap(Fraction(1, 2), 0, 0, Fraction(1, 2), 0, 0)


def test_canonicalizing_map_shear():
    r = ReferenceTriangle(Point(0, 0), Point(1, 0), Point(1, 1))
    m = canonicalizing_map(r)
    assert m == AffineMap(1, -1, 0, 1, 0, 0)  # (x, y) -> (x - y, y)


@given(references())
def test_canonicalizing_map_sends_reference_to_canonical(r):
    m = canonicalizing_map(r)
    assert m(r.v0) == Point(0, 0)
    assert m(r.v1) == Point(1, 0)
    assert m(r.v2) == Point(0, 1)


def test_apply_map_examples():
    assert apply_map(AffineMap.identity(), Point(3, 5)) == Point(3, 5)
    shear = AffineMap(1, -1, 0, 1, 0, 0)
    assert apply_map(shear, Point(4, 1)) == Point(3, 1)
    p = Point(Fraction(7, 3), -2)
    assert shear.inverse()(shear(p)) == p


@given(references(), points)
def test_map_inverse_round_trip(r, p):
    m = canonicalizing_map(r)
    assert m.inverse()(m(p)) == p
    assert m(m.inverse()(p)) == p


def test_validate_homothet_examples():
    r = CANONICAL_REFERENCE
    anchor, scale = validate_homothet(r, Point(2, 3), Point(5, 3), Point(2, 6))
    assert (anchor, scale) == (Point(2, 3), 3)

    with pytest.raises(NotHomotheticError):
        validate_homothet(r, Point(2, 3), Point(5, 3), Point(2, 7))

    with pytest.raises(NonPositiveScaleError):
        validate_homothet(r, Point(0, 0), Point(-1, 0), Point(0, -1))


def test_validate_homothet_point_collapse():
    with pytest.raises(NonPositiveScaleError):
        validate_homothet(CANONICAL_REFERENCE, Point(1, 1), Point(1, 1), Point(1, 1))


@given(references())
def test_validate_homothet_of_reference_itself(r):
    assert validate_homothet(r, r.v0, r.v1, r.v2) == (r.v0, 1)


@given(references(), points, st.fractions(min_value="1/8", max_value=8, max_denominator=8))
def test_validate_homothet_round_trip(r, anchor, scale):
    v0, v1, v2 = r.homothet_vertices(anchor, scale)
    assert validate_homothet(r, v0, v1, v2) == (anchor, scale)


@settings(max_examples=200)
@given(references(), points, st.fractions(min_value="1/8", max_value=8, max_denominator=8), points)
def test_transform_preserves_containment(r, anchor, scale, q):
    """Containment in canonical space equals the direct half-plane test."""
    v0, v1, v2 = r.homothet_vertices(anchor, scale)
    m = canonicalizing_map(r)
    canonical = CanonicalTriangle(1, m(anchor).x, m(anchor).y, scale)
    assert point_in_canonical(canonical, m(q)) == point_in_triangle(v0, v1, v2, q)


@given(fractions, fractions)
def test_rational_arithmetic_is_exact(a, b):
    assert (a + b) - b == a
    if b != 0:
        assert (a * b) / b == a


def test_degenerate_references_rejected():
    with pytest.raises(DegenerateReferenceError):
        ReferenceTriangle(Point(0, 0), Point(1, 1), Point(2, 2))
    with pytest.raises(DegenerateReferenceError):
        ReferenceTriangle(Point(0, 0), Point(0, 1), Point(1, 0))  # clockwise


def test_nonpositive_scale_triangle_rejected():
    with pytest.raises(GeometryError):
        CanonicalTriangle(1, 0, 0, 0)
    with pytest.raises(GeometryError):
        CanonicalTriangle(1, 0, 0, -2)


def test_point_in_triangle_any_orientation():
    assert point_in_triangle(Point(0, 0), Point(0, 4), Point(4, 0), Point(1, 1))
    assert point_in_triangle(Point(0, 0), Point(4, 0), Point(0, 4), Point(1, 1))
    assert not point_in_triangle(Point(0, 0), Point(4, 0), Point(0, 4), Point(3, 3))
