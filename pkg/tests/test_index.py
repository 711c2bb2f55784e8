import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tristab.geometry import CanonicalTriangle, Point, point_in_canonical
from tristab.index import (
    MODE_BINARY,
    MODE_CASCADED,
    EnclosureIndex,
    IndexNode,
    QueryStats,
    Slab,
    build_index,
    node_query_rectangles,
    node_query_triangles,
    trim,
)
from tristab.intervals import IntervalStab
from tristab.oracle import gen_instance, gen_triangles, oracle_query

THREE = [CanonicalTriangle(1, 0, 0, 4), CanonicalTriangle(2, 2, 2, 4), CanonicalTriangle(3, 5, 0, 2)]


def slab(lo, hi, lo_open=False, hi_open=False, kind="union"):
    return Slab(Fraction(lo), Fraction(hi), lo_open, hi_open, kind)


# -- trim ---------------------------------------------------------------


def test_trim_interior_slab():
    t = CanonicalTriangle(1, 0, 0, 4)
    piece, rect = trim(t, slab(1, 3))
    assert piece.y_bot == 1
    assert rect is not None and (rect.y_lo, rect.y_hi) == (0, 1)


def test_trim_slab_touching_right_end():
    t = CanonicalTriangle(1, 0, 0, 4)
    piece, rect = trim(t, slab(2, 4))
    assert piece.y_bot == 0
    assert rect is None


def test_trim_point_slab_at_left_end():
    t = CanonicalTriangle(1, 0, 0, 4)
    piece, rect = trim(t, slab(0, 0, kind="point_atom"))
    assert piece.y_bot == 4  # degenerate leg-0 piece at the apex
    assert rect is not None and (rect.y_lo, rect.y_hi) == (0, 4)


def test_trim_rejects_uncontained_slab():
    t = CanonicalTriangle(1, 0, 0, 4)
    with pytest.raises(ValueError):
        trim(t, slab(3, 5))
    with pytest.raises(ValueError):
        trim(t, Slab(None, Fraction(2), False, False, "union"))


# -- build --------------------------------------------------------------


def test_empty_index():
    index = build_index([])
    for q in (Point(0, 0), Point(-5, 17), Point(Fraction(1, 3), Fraction(2, 7))):
        ids, _ = index.query(q)
        assert ids == []


def test_single_triangle_slabs_partition_x_interval():
    index = build_index([CanonicalTriangle(1, 0, 0, 1)])
    stored = [n.slab for n in index.all_nodes if n.keys]
    descriptions = {(s.lo, s.hi, s.lo_open, s.hi_open) for s in stored}
    assert descriptions == {
        (Fraction(0), Fraction(0), False, False),
        (Fraction(0), Fraction(1), True, True),
        (Fraction(1), Fraction(1), False, False),
    }


def test_fragment_bound_random():
    triangles = gen_triangles(256, seed=11)
    index = build_index(triangles)
    assert index.fragment_count <= 2 * 256 * index.height


def test_duplicate_ids_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        build_index([CanonicalTriangle(1, 0, 0, 1), CanonicalTriangle(1, 3, 3, 2)])


# -- node-level queries --------------------------------------------------


def four_entry_node():
    # all four triangles span x-interval [1, 3]; inside the open slab (1, 3)
    # their horizontal cut ordinates are b + s - 2 = b
    tris = [CanonicalTriangle(i + 1, 1, b, 2) for i, b in enumerate((0, 1, 2, 5))]
    index = build_index(tris)
    for node in index.path_nodes(Fraction(2)):
        if node.keys:
            s = node.slab
            assert (s.lo, s.hi) == (1, 3)
            assert [t.y_bot for t in node.trimmed_triangles] == [0, 1, 2, 5]
            return index, node
    raise AssertionError("expected a populated node on the path")


def test_node_query_triangles_mid():
    _, node = four_entry_node()
    ids, _ = node_query_triangles(node, Point(2, 2))
    assert sorted(ids) == [2, 3]  # y_bot in [1, 2]


def test_node_query_triangles_below_all():
    _, node = four_entry_node()
    ids, _ = node_query_triangles(node, Point(3, -1))
    assert ids == []


def test_node_query_triangles_boundary_abscissa():
    _, node = four_entry_node()
    ids, _ = node_query_triangles(node, Point(1, 5))
    assert ids == [4]  # y_bot in [3, 5]


def test_node_query_rectangles_examples():
    node = IndexNode(2, 2, 0, 1, idx=0, denom=1)
    node.stab = IntervalStab([(0, 2, 10), (1, 5, 11), (3, 4, 12)])
    assert sorted(node_query_rectangles(node, Fraction(1))[0]) == [10, 11]
    assert node_query_rectangles(node, Fraction(2))[0] == [11]
    assert node_query_rectangles(node, Fraction(-1))[0] == []


# -- full queries --------------------------------------------------------


@pytest.mark.parametrize("mode", [MODE_BINARY, MODE_CASCADED])
def test_query_examples(mode):
    index = build_index(THREE)
    assert index.query(Point(Fraction(5, 2), Fraction(5, 2)), mode)[0] == [2]
    assert index.query(Point(2, 2), mode)[0] == [1, 2]
    assert index.query(Point(10, 10), mode)[0] == []


def test_query_rejects_unknown_mode():
    index = build_index(THREE)
    with pytest.raises(ValueError):
        index.query(Point(0, 0), "fancy")


@pytest.mark.parametrize("profile", ["uniform", "nested", "clustered", "duplicates"])
def test_query_matches_oracle_small(profile):
    inst = gen_instance(80, seed=5, profile=profile)
    index = build_index(inst.triangles)
    for q in inst.queries[:400]:
        expected = oracle_query(inst.triangles, q)
        assert index.query(q, MODE_BINARY)[0] == expected
        assert index.query(q, MODE_CASCADED)[0] == expected


def test_degenerate_instances_are_legal():
    # all-identical geometry under distinct ids, plus full nesting
    same = [CanonicalTriangle(i, 1, 1, 3) for i in range(5)]
    nested = [CanonicalTriangle(10 + i, i, i, 12 - 2 * i) for i in range(5)]
    for tris in (same, nested, same + nested):
        index = build_index(tris)
        for q in (Point(1, 1), Point(2, 2), Point(4, 0), Point(Fraction(5, 2), Fraction(3, 2))):
            assert index.query(q)[0] == oracle_query(tris, q)


def test_stats_reported_le_examined():
    inst = gen_instance(60, seed=2)
    index = build_index(inst.triangles)
    for q in inst.queries[:100]:
        ids, stats = index.query(q)
        assert stats.reported == len(ids)
        assert stats.reported <= stats.candidates_examined
        assert stats.nodes_visited == len(index.path_nodes(q.x))


# -- structural invariants ------------------------------------------------


def test_every_stored_leg_equals_slab_width():
    triangles = gen_triangles(128, seed=23, profile="clustered")
    index = build_index(triangles)
    for node in index.all_nodes:
        if not node.keys:
            continue
        s = node.slab
        assert s.bounded
        for piece in node.trimmed_triangles:
            t = index.by_id[piece.owner_id]
            # triangle spans the slab, so the trimmed leg is the slab width
            assert t.a <= s.lo and s.hi <= t.a + t.s
            expected_piece, expected_rect = trim(t, s)
            assert piece.y_bot == expected_piece.y_bot
        rect_by_owner = {r.owner_id: r for r in node.trimmed_rectangles}
        for piece in node.trimmed_triangles:
            t = index.by_id[piece.owner_id]
            _, expected_rect = trim(t, s)
            got = rect_by_owner.get(piece.owner_id)
            assert got == expected_rect


def test_partition_stored_pieces():
    rng = random.Random(17)
    triangles = gen_triangles(48, seed=9)
    index = build_index(triangles)
    populated = [n for n in index.all_nodes if n.keys]
    for _ in range(2000):
        node = populated[rng.randrange(len(populated))]
        s = node.slab
        # a rational point with p_x inside the slab (degenerate slabs give p_x = lo)
        fx = Fraction(rng.randint(0, 64), 64)
        px = s.lo + (s.hi - s.lo) * fx
        if not s.contains(px):
            continue
        py = Fraction(rng.randint(-4200 * 8, 4200 * 8), 8)
        p = Point(px, py)
        width = s.width
        rects = {r.owner_id: r for r in node.trimmed_rectangles}
        for piece in node.trimmed_triangles:
            t = index.by_id[piece.owner_id]
            in_tri = py >= piece.y_bot and (px - s.lo) + (py - piece.y_bot) <= width
            rect = rects.get(piece.owner_id)
            in_rect = rect is not None and rect.y_lo <= py < rect.y_hi
            assert in_tri + in_rect == point_in_canonical(t, p)


def test_contiguity_of_qualifying_entries():
    triangles = gen_triangles(96, seed=31, profile="duplicates")
    index = build_index(triangles)
    rng = random.Random(5)
    for _ in range(200):
        q = Point(Fraction(rng.randint(-1100, 1100)), Fraction(rng.randint(-1100, 1100)))
        for node in index.path_nodes(q.x):
            if not node.keys:
                continue
            xr = node.slab.hi
            flags = [q.x + q.y - xr <= t.y_bot <= q.y for t in node.trimmed_triangles]
            qualifying = [i for i, f in enumerate(flags) if f]
            if qualifying:
                run = list(range(qualifying[0], qualifying[-1] + 1))
                assert qualifying == run
                below = [i for i, t in enumerate(node.trimmed_triangles) if t.y_bot <= q.y]
                assert qualifying[-1] == below[-1]


def test_no_id_reported_twice_on_a_path():
    inst = gen_instance(120, seed=13, profile="nested")
    index = build_index(inst.triangles)
    for q in inst.queries[:300]:
        ids, _ = index.query(q)
        assert len(ids) == len(set(ids))


def test_each_triangle_stored_at_most_once_per_path():
    triangles = gen_triangles(150, seed=19, profile="duplicates")
    index = build_index(triangles)
    rng = random.Random(8)
    for _ in range(300):
        q_x = Fraction(rng.randint(-1100 * 8, 1100 * 8), 8)
        stored = [tid for node in index.path_nodes(q_x) for tid in node.ids]
        assert len(stored) == len(set(stored))


# -- randomized oracle equivalence on adversarially small inputs -----------

_coord = st.fractions(min_value=-8, max_value=8, max_denominator=8)
_scale = st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=8)


@st.composite
def _instance_and_point(draw):
    count = draw(st.integers(0, 12))
    tris = [CanonicalTriangle(i + 1, draw(_coord), draw(_coord), draw(_scale))
            for i in range(count)]
    if tris and draw(st.booleans()):
        t = draw(st.sampled_from(tris))
        half = t.s / 2
        q = draw(st.sampled_from([*t.vertices,
                                  Point(t.a + half, t.b + half),
                                  Point(t.a + half, t.b),
                                  Point(t.a, t.b + half)]))
    else:
        q = Point(draw(_coord), draw(_coord))
    return tris, q


@settings(max_examples=200, deadline=None)
@given(_instance_and_point())
def test_query_equals_oracle_property(case):
    tris, q = case
    index = build_index(tris)
    expected = oracle_query(tris, q)
    assert index.query(q, MODE_BINARY)[0] == expected
    assert index.query(q, MODE_CASCADED)[0] == expected


def test_concurrent_queries_match_serial():
    inst = gen_instance(150, seed=21)
    index = build_index(inst.triangles)
    index.cascade()  # the lazy overlay build is the only deferred write
    queries = inst.queries[:200]
    expected = [index.query(q)[0] for q in queries]
    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(lambda q: index.query(q)[0], queries))
    assert results == expected
