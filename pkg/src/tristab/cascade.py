"""Fractional cascading over the per-node sorted trimmed-triangle lists.

Replaces the per-node binary searches along a query path with one binary
search at the root plus a constant number of comparisons per subsequent
node. Each tree node gets an augmented list: its own sorted keys (*native*
entries) merged with every 2nd element of each child's augmented list
(*promoted* entries). Per entry we precompute

- a bridge per child: the last position in the child's augmented list whose
  key is <= this entry's key, and
- a native rank: how many native entries sit at or before it, which converts
  an augmented-list position into a position in the node's own list in O(1).

Walking down, the predecessor position in a child's augmented list is
reached by following the bridge and advancing by at most a few steps: any
longer advance would imply a promoted key inside a gap between consecutive
augmented keys of the parent, which cannot exist at sampling factor 2. With
half of each child promoted, the total augmented size is at most twice the
total native size. On equal keys natives sort before promoted copies, so
predecessor positions translate exactly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING, List, Optional, Tuple

from .index import QueryStats, _scale_query

if TYPE_CHECKING:  # pragma: no cover
    from .index import EnclosureIndex, IndexNode


class CascadeNode:
    __slots__ = ("keys", "native_rank", "bridge_left", "bridge_right")

    def __init__(self, keys, native_rank, bridge_left, bridge_right):
        self.keys: List[int] = keys
        self.native_rank: List[int] = native_rank
        self.bridge_left: Optional[List[int]] = bridge_left
        self.bridge_right: Optional[List[int]] = bridge_right


def _merge(a: List[int], b: List[int]) -> List[int]:
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        if a[i] <= b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:] or b[j:])
    return out


def _bridges(merged: List[int], child_keys: List[int]) -> List[int]:
    """For each merged key, the last child position with key <= it (-1: none)."""
    out = []
    j = -1
    n = len(child_keys)
    for k in merged:
        while j + 1 < n and child_keys[j + 1] <= k:
            j += 1
        out.append(j)
    return out


class CascadeIndex:
    """Cascading overlay for one :class:`EnclosureIndex`; immutable."""

    def __init__(self, index: "EnclosureIndex"):
        self.index = index
        self.nodes: List[Optional[CascadeNode]] = [None] * len(index.all_nodes)
        self.sum_native = index.fragment_count
        self.sum_augmented = 0
        self._build(index.root)

    def _build(self, node: "IndexNode") -> None:
        if node.left is not None:
            self._build(node.left)
            self._build(node.right)
            promoted = _merge(self.nodes[node.left.idx].keys[1::2],
                              self.nodes[node.right.idx].keys[1::2])
        else:
            promoted = []

        native = node.keys
        merged: List[int] = []
        ranks: List[int] = []
        i = j = 0
        ni, nj = len(native), len(promoted)
        while i < ni and j < nj:
            if native[i] <= promoted[j]:  # ties: native first
                merged.append(native[i])
                i += 1
            else:
                merged.append(promoted[j])
                j += 1
            ranks.append(i)
        while i < ni:
            merged.append(native[i])
            i += 1
            ranks.append(i)
        while j < nj:
            merged.append(promoted[j])
            j += 1
            ranks.append(i)

        bl = _bridges(merged, self.nodes[node.left.idx].keys) if node.left is not None else None
        br = _bridges(merged, self.nodes[node.right.idx].keys) if node.right is not None else None
        self.nodes[node.idx] = CascadeNode(merged, ranks, bl, br)
        self.sum_augmented += len(merged)

    def positions_along_path(self, path: List["IndexNode"], qy, stats: QueryStats) -> List[int]:
        """Per-node positions of ``qy`` in each node's own key list.

        Position means the count of keys <= qy (a bisect_right result). One
        instrumented binary search happens at the root; every later node is
        reached through a bridge plus a bounded advance.
        """
        cnodes = self.nodes
        first = cnodes[path[0].idx]
        lo, hi = 0, len(first.keys)
        while lo < hi:
            mid = (lo + hi) // 2
            stats.key_comparisons += 1
            if qy < first.keys[mid]:
                hi = mid
            else:
                lo = mid + 1
        pred = lo - 1
        out = [first.native_rank[pred] if pred >= 0 else 0]

        prev_tree = path[0]
        prev = first
        for tnode in path[1:]:
            bridge = prev.bridge_left if tnode is prev_tree.left else prev.bridge_right
            j = bridge[pred] if pred >= 0 else -1
            cnode = cnodes[tnode.idx]
            ck = cnode.keys
            n = len(ck)
            while j + 1 < n:
                stats.key_comparisons += 1
                if ck[j + 1] <= qy:
                    j += 1
                else:
                    break
            pred = j
            out.append(cnode.native_rank[pred] if pred >= 0 else 0)
            prev_tree, prev = tnode, cnode
        return out

    def locate(self, q_x: Fraction, q_y: Fraction,
               stats: Optional[QueryStats] = None) -> Tuple[List[int], QueryStats]:
        """Positions of ``q_y`` in every list on the ``q_x`` search path."""
        if stats is None:
            stats = QueryStats()
        d = self.index._denom
        path = self.index._path_to_atom(self.index._atom_for(_scale_query(Fraction(q_x), d), stats))
        stats.nodes_visited += len(path)
        return self.positions_along_path(path, _scale_query(Fraction(q_y), d), stats), stats


def build_cascade(index: "EnclosureIndex") -> CascadeIndex:
    """Build the cascading overlay bottom-up over the built index."""
    return CascadeIndex(index)


def locate_path(cascade: CascadeIndex, q_x: Fraction, q_y: Fraction) -> Tuple[List[int], QueryStats]:
    """Module-level alias for :meth:`CascadeIndex.locate`."""
    return cascade.locate(q_x, q_y)
