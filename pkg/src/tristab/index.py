"""Output-sensitive point-enclosure index over canonical triangles.

Structure
---------
A segment tree is built over the distinct x-interval endpoints of the input
triangles. Its elementary slabs alternate between degenerate *point atoms*
``[x, x]`` and *open atoms* ``(x, x')``, so a query abscissa equal to a
triangle vertex lands on its own atom and boundary cases need no epsilon
conventions. Each triangle is assigned to every node whose slab its
x-interval covers while the parent slab is not covered (the canonical
decomposition), which puts it on O(log n) nodes, at most one per
root-to-leaf path.

Within one node's slab a stored triangle is cut into a right-isosceles
*trimmed triangle* whose horizontal side sits at ``y_bot = b + s - (x_r - a)``
and, below it, an optional *trimmed rectangle* spanning ``[b, y_bot)`` in y.
All trimmed triangles of a node are congruent (leg = slab width), so a node
only keeps the ``y_bot`` ordinates, sorted: the entries containing a query
point form one contiguous run, found by one position search plus an
output-sized scan. The rectangles go into a per-node interval-stabbing tree.
Rectangles are half-open on top because the line ``y = y_bot`` belongs to
the trimmed triangle; storing them closed would double-report that line.

A query walks the single root-to-leaf path whose atom contains ``q_x`` and
collects both structures at every node; the result equals brute force
exactly. The position searches are answered either per node (``binary``
mode) or through fractional cascading (``cascaded`` mode, see
:mod:`tristab.cascade`).

Exactness and speed
-------------------
All public coordinates are Fractions. Internally every stored ordinate is
mapped to an integer through one multiplication by the least common multiple
of all coordinate denominators; this is an order isomorphism, so comparisons
on the integer keys decide exactly the same predicates while sorting and
merging run at native speed. Query coordinates are scaled the same way (they
stay Fractions when their denominator does not divide the lcm; comparisons
remain exact either way).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .geometry import CanonicalTriangle, Point
from .intervals import IntervalStab

MODE_BINARY = "binary"
MODE_CASCADED = "cascaded"
MODES = (MODE_BINARY, MODE_CASCADED)

ScaledKey = Union[int, Fraction]


@dataclass
class QueryStats:
    """Operation counters for one query.

    ``key_comparisons`` counts the comparisons that locate the query in the
    tree and in the per-node sorted lists (descent, position search or
    cascade steps, and the output scan). ``rect_comparisons`` counts the
    comparisons spent inside the per-node interval-stabbing structures; they
    are kept separate because those structures are searched independently at
    every node on the path.
    """

    nodes_visited: int = 0
    key_comparisons: int = 0
    rect_comparisons: int = 0
    candidates_examined: int = 0
    reported: int = 0


@dataclass(frozen=True, slots=True)
class Slab:
    """Vertical slab owned by one tree node.

    ``lo``/``hi`` are the closure bounds (``None`` means unbounded); the
    open flags record whether each finite end is excluded. Elementary slabs
    are either single points or open intervals; internal nodes own the union
    of their children's slabs.
    """

    lo: Optional[Fraction]
    hi: Optional[Fraction]
    lo_open: bool
    hi_open: bool
    kind: str  # "point_atom" | "open_atom" | "union"

    def contains(self, x: Fraction) -> bool:
        if self.lo is not None and (x < self.lo or (self.lo_open and x == self.lo)):
            return False
        if self.hi is not None and (x > self.hi or (self.hi_open and x == self.hi)):
            return False
        return True

    @property
    def bounded(self) -> bool:
        return self.lo is not None and self.hi is not None

    @property
    def width(self) -> Fraction:
        if not self.bounded:
            raise ValueError("unbounded slab has no width")
        return self.hi - self.lo

    def __str__(self) -> str:
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"{'(' if self.lo_open or self.lo is None else '['}{lo}, {hi}{')' if self.hi_open or self.hi is None else ']'}"


@dataclass(frozen=True, slots=True)
class TrimmedTriangle:
    """Triangular piece of a stored triangle inside one slab.

    Only the ordinate of the horizontal side is kept: the leg equals the
    slab width for every entry of a node, so it lives on the node.
    """

    owner_id: int
    y_bot: Fraction


@dataclass(frozen=True, slots=True)
class TrimmedRectangle:
    """Rectangular piece below the trimmed triangle; spans [y_lo, y_hi) in y."""

    owner_id: int
    y_lo: Fraction
    y_hi: Fraction


class IndexNode:
    """One segment-tree node: slab, sorted trimmed-triangle list, rect tree."""

    __slots__ = ("atom_lo", "atom_hi", "x_lo", "x_hi", "left", "right",
                 "keys", "ids", "stab", "idx", "_denom", "_rects")

    def __init__(self, atom_lo: int, atom_hi: int,
                 x_lo: Optional[int], x_hi: Optional[int],
                 idx: int, denom: int):
        self.atom_lo = atom_lo
        self.atom_hi = atom_hi
        self.x_lo = x_lo            # scaled closure bounds; None = unbounded
        self.x_hi = x_hi
        self.left: Optional["IndexNode"] = None
        self.right: Optional["IndexNode"] = None
        self.keys: List[int] = []   # scaled y_bot, ascending (ties: id asc)
        self.ids: List[int] = []
        self.stab: Optional[IntervalStab] = None
        self.idx = idx
        self._denom = denom
        self._rects: List[Tuple[int, int, int]] = []  # staging during build

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def slab(self) -> Slab:
        if self.is_leaf:
            kind = "point_atom" if self.atom_lo % 2 else "open_atom"
        else:
            kind = "union"
        lo = None if self.x_lo is None else Fraction(self.x_lo, self._denom)
        hi = None if self.x_hi is None else Fraction(self.x_hi, self._denom)
        return Slab(lo, hi, self.atom_lo % 2 == 0, self.atom_hi % 2 == 0, kind)

    @property
    def trimmed_triangles(self) -> List[TrimmedTriangle]:
        d = self._denom
        return [TrimmedTriangle(i, Fraction(k, d)) for k, i in zip(self.keys, self.ids)]

    @property
    def trimmed_rectangles(self) -> List[TrimmedRectangle]:
        if self.stab is None:
            return []
        d = self._denom
        return [TrimmedRectangle(owner, Fraction(lo, d), Fraction(hi, d))
                for lo, hi, owner in self.stab.items()]

    def __repr__(self) -> str:
        return f"IndexNode(slab={self.slab}, entries={len(self.keys)})"


def trim(t: CanonicalTriangle, slab: Slab) -> Tuple[TrimmedTriangle, Optional[TrimmedRectangle]]:
    """Cut ``t`` to a bounded slab contained in its x-interval.

    Returns the trimmed triangle (horizontal side at
    ``y_bot = b + s - (x_r - a)``, leg = slab width) and the rectangle
    ``[y_lo, y_hi) = [b, y_bot)`` underneath it, or ``None`` when
    ``y_bot == b``. The two pieces are disjoint and their union is exactly
    the part of ``t`` over the slab's closure. A zero-width (point) slab
    yields the degenerate leg-0 piece at the hypotenuse with no special case.
    """
    if not slab.bounded:
        raise ValueError("trim requires a bounded slab")
    if not (t.a <= slab.lo and slab.hi <= t.a + t.s):
        raise ValueError(
            f"slab {slab} not contained in x-interval [{t.a}, {t.a + t.s}] of triangle {t.id}"
        )
    y_bot = t.b + t.s - (slab.hi - t.a)
    piece = TrimmedTriangle(t.id, y_bot)
    rect = TrimmedRectangle(t.id, t.b, y_bot) if y_bot > t.b else None
    return piece, rect


def _scaled_int(value: Fraction, denom: int) -> int:
    # exact: denom is a multiple of value.denominator
    return value.numerator * (denom // value.denominator)


def _scale_query(value: Fraction, denom: int) -> ScaledKey:
    scaled = value * denom
    return scaled.numerator if scaled.denominator == 1 else scaled


class EnclosureIndex:
    """Immutable enclosure index; see the module docstring for the layout.

    Build with :func:`build_index`. Queries are read-only and safe to run
    concurrently; each returns its own :class:`QueryStats`.
    """

    def __init__(self, triangles: Sequence[CanonicalTriangle]):
        self.triangles: Tuple[CanonicalTriangle, ...] = tuple(triangles)
        self.by_id = {}
        for t in self.triangles:
            if t.id in self.by_id:
                raise ValueError(f"duplicate triangle id {t.id}")
            self.by_id[t.id] = t

        denominators = {d for t in self.triangles
                        for d in (t.a.denominator, t.b.denominator, t.s.denominator)}
        denom = math.lcm(*denominators) if denominators else 1
        self._denom = denom

        scaled = [(_scaled_int(t.a, denom), _scaled_int(t.b, denom),
                   _scaled_int(t.s, denom), t.id) for t in self.triangles]
        self._endpoints: List[int] = sorted({v for a, _, s, _ in scaled for v in (a, a + s)})
        pos = {v: i for i, v in enumerate(self._endpoints)}

        atom_count = 2 * len(self._endpoints) + 1
        self.all_nodes: List[IndexNode] = []
        self.root = self._make(0, atom_count - 1)
        self.height = self._height(self.root)

        self.fragment_count = 0
        for a, b, s, tid in scaled:
            ia = 2 * pos[a] + 1
            ib = 2 * pos[a + s] + 1
            self._insert(self.root, ia, ib, a, b, s, tid)

        self.rect_count = 0
        for node in self.all_nodes:
            if node.keys:
                pairs = sorted(zip(node.keys, node.ids))
                node.keys = [k for k, _ in pairs]
                node.ids = [i for _, i in pairs]
            if node._rects:
                node.stab = IntervalStab(node._rects)
                self.rect_count += len(node._rects)
            node._rects = []

        self._cascade = None

    # -- construction -----------------------------------------------------

    def _make(self, alo: int, ahi: int) -> IndexNode:
        E = self._endpoints
        last = 2 * len(E)
        x_lo = None if alo == 0 else E[(alo - 1) // 2]
        x_hi = None if ahi == last else E[ahi // 2]
        node = IndexNode(alo, ahi, x_lo, x_hi, len(self.all_nodes), self._denom)
        self.all_nodes.append(node)
        if alo < ahi:
            mid = (alo + ahi) // 2
            node.left = self._make(alo, mid)
            node.right = self._make(mid + 1, ahi)
        return node

    def _height(self, node: Optional[IndexNode]) -> int:
        if node is None:
            return 0
        return 1 + max(self._height(node.left), self._height(node.right))

    def _insert(self, node: IndexNode, ia: int, ib: int,
                a: int, b: int, s: int, tid: int) -> None:
        if ia <= node.atom_lo and node.atom_hi <= ib:
            y_bot = b + s - (node.x_hi - a)
            node.keys.append(y_bot)
            node.ids.append(tid)
            if y_bot > b:
                node._rects.append((b, y_bot, tid))
            self.fragment_count += 1
            return
        if ia <= node.left.atom_hi:
            self._insert(node.left, ia, ib, a, b, s, tid)
        if ib >= node.right.atom_lo:
            self._insert(node.right, ia, ib, a, b, s, tid)

    # -- path machinery ----------------------------------------------------

    def _atom_for(self, qx: ScaledKey, stats: Optional[QueryStats] = None) -> int:
        """Index of the elementary slab containing the scaled abscissa."""
        E = self._endpoints
        lo, hi = 0, len(E)
        comparisons = 0
        while lo < hi:
            mid = (lo + hi) // 2
            comparisons += 1
            if E[mid] < qx:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(E):
            comparisons += 1
            if E[lo] == qx:
                if stats is not None:
                    stats.key_comparisons += comparisons
                return 2 * lo + 1
        if stats is not None:
            stats.key_comparisons += comparisons
        return 2 * lo

    def _path_to_atom(self, atom: int) -> List[IndexNode]:
        path = [self.root]
        node = self.root
        while not node.is_leaf:
            node = node.left if atom <= node.left.atom_hi else node.right
            path.append(node)
        return path

    def path_nodes(self, q_x: Fraction) -> List[IndexNode]:
        """Root-to-leaf path whose elementary slab contains ``q_x``."""
        return self._path_to_atom(self._atom_for(_scale_query(Fraction(q_x), self._denom)))

    # -- queries -----------------------------------------------------------

    def cascade(self):
        """The fractional-cascading overlay, built once and cached."""
        if self._cascade is None:
            from .cascade import build_cascade

            self._cascade = build_cascade(self)
        return self._cascade

    def query(self, q: Point, mode: str = MODE_CASCADED,
              stats: Optional[QueryStats] = None) -> Tuple[List[int], QueryStats]:
        """All triangle ids whose closed region contains ``q``, ascending."""
        if mode not in MODES:
            raise ValueError(f"unknown query mode {mode!r}")
        if stats is None:
            stats = QueryStats()
        qx = _scale_query(q.x, self._denom)
        qy = _scale_query(q.y, self._denom)
        path = self._path_to_atom(self._atom_for(qx, stats))

        if mode == MODE_CASCADED:
            positions = self.cascade().positions_along_path(path, qy, stats)
        else:
            positions = [self._bisect_keys(node.keys, qy, stats) for node in path]

        out: List[int] = []
        for node, pos in zip(path, positions):
            stats.nodes_visited += 1
            keys = node.keys
            if keys:
                threshold = qx + qy - node.x_hi
                ids = node.ids
                i = pos - 1
                while i >= 0:
                    stats.key_comparisons += 1
                    stats.candidates_examined += 1
                    if keys[i] >= threshold:
                        out.append(ids[i])
                        i -= 1
                    else:
                        break
            if node.stab is not None:
                out.extend(node.stab.query(qy, stats))
        stats.reported += len(out)
        out.sort()
        return out, stats

    @staticmethod
    def _bisect_keys(keys: List[int], qy: ScaledKey, stats: QueryStats) -> int:
        """Instrumented bisect_right: first position whose key exceeds qy."""
        lo, hi = 0, len(keys)
        while lo < hi:
            mid = (lo + hi) // 2
            stats.key_comparisons += 1
            if qy < keys[mid]:
                hi = mid
            else:
                lo = mid + 1
        return lo

    # -- inspection --------------------------------------------------------

    @property
    def sum_list_entries(self) -> int:
        return self.fragment_count

    def __len__(self) -> int:
        return len(self.triangles)


def build_index(triangles: Iterable[CanonicalTriangle]) -> EnclosureIndex:
    """Build the enclosure index; ids must be distinct, scales positive."""
    return EnclosureIndex(list(triangles))


def node_query_triangles(node: IndexNode, q: Point,
                         stats: Optional[QueryStats] = None) -> Tuple[List[int], QueryStats]:
    """Owners of the node's trimmed triangles containing ``q``.

    Exactly the entries with ``q_x + q_y - x_r <= y_bot <= q_y``: one
    position search for ``q_y`` then a leftward scan that stops at the first
    non-containing entry (the qualifying entries are one contiguous run).
    """
    if stats is None:
        stats = QueryStats()
    d = node._denom
    qx = _scale_query(q.x, d)
    qy = _scale_query(q.y, d)
    keys = node.keys
    pos = EnclosureIndex._bisect_keys(keys, qy, stats)
    out: List[int] = []
    if keys:
        threshold = qx + qy - node.x_hi
        i = pos - 1
        while i >= 0:
            stats.key_comparisons += 1
            stats.candidates_examined += 1
            if keys[i] >= threshold:
                out.append(node.ids[i])
                i -= 1
            else:
                break
    stats.reported += len(out)
    return out, stats


def node_query_rectangles(node: IndexNode, q_y: Fraction,
                          stats: Optional[QueryStats] = None) -> Tuple[List[int], QueryStats]:
    """Owners of the node's trimmed rectangles whose y-span contains ``q_y``."""
    if stats is None:
        stats = QueryStats()
    if node.stab is None:
        return [], stats
    out = node.stab.query(_scale_query(Fraction(q_y), node._denom), stats)
    stats.reported += len(out)
    return out, stats


def query(index: EnclosureIndex, q: Point, mode: str = MODE_CASCADED) -> Tuple[List[int], QueryStats]:
    """Module-level alias for :meth:`EnclosureIndex.query`."""
    return index.query(q, mode)
