"""Static interval tree answering stabbing queries over half-open intervals.

Stores intervals ``[lo, hi)`` (closed below, open above) over any exactly
comparable key type (ints, Fractions). A query reports every stored interval
containing the key, in time proportional to ``log m`` plus the output size:
each visited node either scans hits plus at most one miss, or reports its
whole center list.

Center-decomposition layout: each node keeps the intervals containing its
center value twice, sorted by left endpoint ascending and by right endpoint
descending, so a one-sided scan stops at the first non-hit.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Tuple


class _StabNode:
    __slots__ = ("center", "by_lo", "by_hi", "left", "right")

    def __init__(self, center, by_lo, by_hi, left, right):
        self.center = center
        self.by_lo = by_lo      # (lo, hi, owner), lo ascending
        self.by_hi = by_hi      # (hi, lo, owner), hi descending
        self.left = left
        self.right = right


def _build(intervals: List[Tuple]) -> Optional[_StabNode]:
    if not intervals:
        return None
    endpoints = sorted(v for lo, hi, _ in intervals for v in (lo, hi))
    # lower median: guarantees progress even when many intervals coincide
    center = endpoints[(len(endpoints) - 1) // 2]
    left, mid, right = [], [], []
    for iv in intervals:
        if iv[1] <= center:
            left.append(iv)
        elif iv[0] > center:
            right.append(iv)
        else:
            mid.append(iv)
    by_lo = sorted(mid)
    by_hi = sorted(((hi, lo, owner) for lo, hi, owner in mid), reverse=True)
    return _StabNode(center, by_lo, by_hi, _build(left), _build(right))


class IntervalStab:
    """Immutable stabbing-query structure over half-open intervals."""

    def __init__(self, intervals: Iterable[Tuple]):
        intervals = list(intervals)
        for lo, hi, owner in intervals:
            if not lo < hi:
                raise ValueError(f"empty interval [{lo}, {hi}) for owner {owner}")
        self._root = _build(intervals)
        self._count = len(intervals)

    def __len__(self) -> int:
        return self._count

    def items(self) -> List[Tuple]:
        """All stored (lo, hi, owner) triples, for verification."""
        out: List[Tuple] = []

        def walk(node):
            if node is None:
                return
            out.extend(node.by_lo)
            walk(node.left)
            walk(node.right)

        walk(self._root)
        return out

    def query(self, key, stats=None) -> List:
        """Owners of every interval with ``lo <= key < hi``.

        When ``stats`` is given, adds the trichotomy and scan comparisons to
        ``stats.rect_comparisons`` and scanned entries to
        ``stats.candidates_examined``.
        """
        out: List = []
        node = self._root
        comparisons = 0
        examined = 0
        while node is not None:
            comparisons += 1
            if key < node.center:
                for lo, _, owner in node.by_lo:
                    comparisons += 1
                    examined += 1
                    if lo <= key:
                        out.append(owner)
                    else:
                        break
                node = node.left
            elif key > node.center:
                for hi, _, owner in node.by_hi:
                    comparisons += 1
                    examined += 1
                    if hi > key:
                        out.append(owner)
                    else:
                        break
                node = node.right
            else:
                # key == center: every center interval contains it
                examined += len(node.by_lo)
                out.extend(owner for _, _, owner in node.by_lo)
                break
        if stats is not None:
            stats.rect_comparisons += comparisons
            stats.candidates_examined += examined
        return out

    def height(self) -> int:
        def h(node):
            return 0 if node is None else 1 + max(h(node.left), h(node.right))

        return h(self._root)


def stab_build(intervals: Iterable[Tuple]) -> IntervalStab:
    """Build a stabbing structure from ``(lo, hi, owner)`` triples."""
    return IntervalStab(intervals)
