import math
import random
from fractions import Fraction

from tristab.cascade import build_cascade, locate_path
from tristab.geometry import CanonicalTriangle, Point
from tristab.index import MODE_BINARY, MODE_CASCADED, QueryStats, build_index
from tristab.oracle import gen_instance, gen_triangles


def bisect_positions(index, q_x, q_y):
    """Independent per-node binary searches, the reference for cascading."""
    positions = []
    for node in index.path_nodes(q_x):
        lo, hi = 0, len(node.keys)
        keys = [t.y_bot for t in node.trimmed_triangles]
        while lo < hi:
            mid = (lo + hi) // 2
            if q_y < keys[mid]:
                hi = mid
            else:
                lo = mid + 1
        positions.append(lo)
    return positions


def test_empty_index_cascade():
    index = build_index([])
    cascade = build_cascade(index)
    assert all(not c.keys for c in cascade.nodes)
    positions, _ = locate_path(cascade, Fraction(3), Fraction(4))
    assert positions == [0]
    assert index.query(Point(3, 4), MODE_CASCADED)[0] == []


def test_leaf_augmented_lists_equal_native_lists():
    index = build_index(gen_triangles(64, seed=1))
    cascade = build_cascade(index)
    for node in index.all_nodes:
        cnode = cascade.nodes[node.idx]
        if node.is_leaf:
            assert cnode.keys == node.keys
            assert cnode.bridge_left is None and cnode.bridge_right is None
        else:
            native = [k for i, k in enumerate(cnode.keys)
                      if cnode.native_rank[i] > (cnode.native_rank[i - 1] if i else 0)]
            assert native == node.keys


def test_space_bound():
    for profile in ("uniform", "nested", "duplicates"):
        index = build_index(gen_triangles(256, seed=4, profile=profile))
        cascade = build_cascade(index)
        assert cascade.sum_augmented <= 2 * cascade.sum_native


def test_positions_match_binary_search():
    index = build_index(gen_triangles(256, seed=42))
    cascade = index.cascade()
    rng = random.Random(9)
    for _ in range(1000):
        q_x = Fraction(rng.randint(-1100 * 4, 1100 * 4), 4)
        q_y = Fraction(rng.randint(-1100 * 4, 1100 * 4), 4)
        positions, _ = cascade.locate(q_x, q_y)
        assert positions == bisect_positions(index, q_x, q_y)


def test_positions_match_on_stored_keys():
    # exercise ties: query ordinates equal to stored cut ordinates
    index = build_index(gen_triangles(200, seed=8, profile="duplicates"))
    cascade = index.cascade()
    keys = sorted({t.y_bot for n in index.all_nodes for t in n.trimmed_triangles})
    rng = random.Random(2)
    for q_y in rng.sample(keys, min(300, len(keys))):
        q_x = Fraction(rng.randint(-1100 * 2, 1100 * 2), 2)
        positions, _ = cascade.locate(q_x, q_y)
        assert positions == bisect_positions(index, q_x, q_y)


def test_extreme_keys():
    index = build_index(gen_triangles(64, seed=3))
    cascade = index.cascade()
    below, _ = cascade.locate(Fraction(0), Fraction(-10 ** 9))
    assert all(p == 0 for p in below)
    above, _ = cascade.locate(Fraction(0), Fraction(10 ** 9))
    assert above == [len(n.keys) for n in index.path_nodes(Fraction(0))]


def test_constant_work_per_node_after_root():
    index = build_index(gen_triangles(512, seed=77))
    cascade = index.cascade()
    root_m = len(cascade.nodes[index.root.idx].keys)
    atom_budget = math.ceil(math.log2(len(index._endpoints))) + 1
    root_budget = math.ceil(math.log2(root_m + 1)) + 1
    rng = random.Random(6)
    for _ in range(500):
        q_x = Fraction(rng.randint(-1100 * 8, 1100 * 8), 8)
        q_y = Fraction(rng.randint(-1100 * 8, 1100 * 8), 8)
        positions, stats = cascade.locate(q_x, q_y)
        assert stats.key_comparisons <= atom_budget + root_budget + 4 * (len(positions) - 1)


def test_mode_equality():
    for profile in ("uniform", "nested", "clustered", "duplicates"):
        inst = gen_instance(100, seed=12, profile=profile)
        index = build_index(inst.triangles)
        for q in inst.queries[:250]:
            binary_ids, _ = index.query(q, MODE_BINARY)
            cascaded_ids, _ = index.query(q, MODE_CASCADED)
            assert binary_ids == cascaded_ids
