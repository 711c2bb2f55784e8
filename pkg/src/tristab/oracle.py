"""Brute-force ground truth and reproducible instance generation.

The sequential scan defines what a correct answer is; every index query
in the test suite is compared against it. Generated instances are a
pure function of ``(n, seed, profile)``, and their query sets always include
the adversarial boundary points (every triangle vertex, every edge midpoint,
and a point just outside each hypotenuse): boundary handling is where
enclosure structures typically break.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence

from .geometry import (CANONICAL_REFERENCE, CanonicalTriangle, Point,
                       ReferenceTriangle, cross, point_in_canonical)

PROFILES = ("uniform", "nested", "clustered", "duplicates")

#: Exact offset used to place probe points just outside a hypotenuse.
HYPOTENUSE_OFFSET = Fraction(1, 2 ** 20)

_DENOMINATORS = (1, 2, 3, 4, 5, 8)


@dataclass
class Instance:
    """A reproducible test instance; identical inputs regenerate it exactly."""

    reference: ReferenceTriangle
    triangles: List[CanonicalTriangle]
    queries: List[Point]
    seed: int


def oracle_query(triangles: Sequence[CanonicalTriangle], q: Point) -> List[int]:
    """Ids of all triangles containing ``q``, ascending, by sequential scan."""
    return sorted(t.id for t in triangles if point_in_canonical(t, q))


def oracle_query_many(triangles: Sequence[CanonicalTriangle],
                      points: Iterable[Point]) -> List[List[int]]:
    """Sequential-scan answers for many points.

    Same answers as :func:`oracle_query`; hoists the per-triangle corner sums
    out of the loop so large sweeps stay affordable. Still exact.
    """
    pre = sorted((t.a, t.b, t.a + t.b + t.s, t.id) for t in triangles)
    out = []
    for q in points:
        qx, qy = q.x, q.y
        qsum = qx + qy
        hits = [tid for a, b, u, tid in pre if qx >= a and qy >= b and qsum <= u]
        hits.sort()
        out.append(hits)
    return out


def _rat(rng: random.Random, lo: int, hi: int) -> Fraction:
    den = rng.choice(_DENOMINATORS)
    return Fraction(rng.randint(lo * den, hi * den), den)


def _rng(n: int, seed: int, profile: str, salt: str = "") -> random.Random:
    # string seeds hash stably (sha512), unlike object hash()
    return random.Random(f"tristab:{profile}:{n}:{seed}:{salt}")


def _gen_uniform(rng: random.Random, n: int, next_id) -> List[CanonicalTriangle]:
    return [CanonicalTriangle(next_id(), _rat(rng, -1000, 1000), _rat(rng, -1000, 1000),
                              _rat(rng, 1, 100)) for _ in range(n)]


def _gen_nested(rng: random.Random, n: int, next_id) -> List[CanonicalTriangle]:
    out: List[CanonicalTriangle] = []
    while len(out) < n:
        a = _rat(rng, -1000, 1000)
        b = _rat(rng, -1000, 1000)
        s = _rat(rng, 50, 200)
        chain = rng.randint(3, 10)
        for _ in range(min(chain, n - len(out))):
            out.append(CanonicalTriangle(next_id(), a, b, s))
            # shrink into the current triangle: keeps (da + db) + s' <= s
            da = s * Fraction(rng.randint(0, 8), 64)
            db = s * Fraction(rng.randint(0, 8), 64)
            s = (s - da - db) * Fraction(rng.randint(16, 56), 64)
            a, b = a + da, b + db
    return out


def _gen_clustered(rng: random.Random, n: int, next_id) -> List[CanonicalTriangle]:
    k = max(1, n // 50)
    centers = [(_rat(rng, -1000, 1000), _rat(rng, -1000, 1000)) for _ in range(k)]
    out = []
    for _ in range(n):
        cx, cy = centers[rng.randrange(k)]
        out.append(CanonicalTriangle(next_id(), cx + _rat(rng, -10, 10),
                                     cy + _rat(rng, -10, 10), _rat(rng, 1, 20)))
    return out


def _gen_duplicates(rng: random.Random, n: int, next_id) -> List[CanonicalTriangle]:
    base_count = max(1, n // 3)
    base = _gen_uniform(rng, base_count, next_id)
    out = list(base)
    while len(out) < n:
        proto = base[rng.randrange(base_count)]
        out.append(CanonicalTriangle(next_id(), proto.a, proto.b, proto.s))
    return out


_GENERATORS = {
    "uniform": _gen_uniform,
    "nested": _gen_nested,
    "clustered": _gen_clustered,
    "duplicates": _gen_duplicates,
}


def gen_triangles(n: int, seed: int, profile: str = "uniform") -> List[CanonicalTriangle]:
    """Deterministic pseudo-random canonical triangles, ids 1..n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if profile not in _GENERATORS:
        raise ValueError(f"unknown profile {profile!r}; choose from {PROFILES}")
    counter = iter(range(1, n + 1))
    return _GENERATORS[profile](_rng(n, seed, profile, "tris"), n, lambda: next(counter))


def adversarial_queries(triangles: Sequence[CanonicalTriangle]) -> List[Point]:
    """Boundary probes: vertices, edge midpoints, just-outside-hypotenuse points."""
    half = Fraction(1, 2)
    out = []
    for t in triangles:
        a, b, s = t.a, t.b, t.s
        hs = s * half
        out.extend((
            Point(a, b), Point(a + s, b), Point(a, b + s),
            Point(a + hs, b), Point(a, b + hs), Point(a + hs, b + hs),
            Point(a + hs + HYPOTENUSE_OFFSET, b + hs + HYPOTENUSE_OFFSET),
        ))
    return out


def gen_instance(n: int, seed: int, profile: str = "uniform") -> Instance:
    """Deterministic instance: triangles plus random and adversarial queries."""
    triangles = gen_triangles(n, seed, profile)
    queries: List[Point] = []
    if triangles:
        rng = _rng(n, seed, profile, "queries")
        xs = [v for t in triangles for v in t.x_interval]
        ys = [v for t in triangles for v in t.y_interval]
        lo_x, hi_x = min(xs) - 5, max(xs) + 5
        lo_y, hi_y = min(ys) - 5, max(ys) + 5
        for _ in range(64 + n // 4):
            queries.append(Point(lo_x + (hi_x - lo_x) * Fraction(rng.randint(0, 4096), 4096),
                                 lo_y + (hi_y - lo_y) * Fraction(rng.randint(0, 4096), 4096)))
        queries.extend(adversarial_queries(triangles))
    queries = list(dict.fromkeys(queries))
    return Instance(CANONICAL_REFERENCE, triangles, queries, seed)


def gen_reference(seed: int) -> ReferenceTriangle:
    """Random non-degenerate counterclockwise reference with no axis-parallel edge."""
    rng = random.Random(f"tristab:reference:{seed}")
    while True:
        pts = [Point(_rat(rng, -50, 50), _rat(rng, -50, 50)) for _ in range(3)]
        v0, v1, v2 = pts
        if cross(v0, v1, v2) <= 0:
            continue
        edges = (v1 - v0, v2 - v1, v0 - v2)
        if all(e.x != 0 and e.y != 0 for e in edges):
            return ReferenceTriangle(v0, v1, v2)
