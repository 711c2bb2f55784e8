"""Plain-text instance formats: triangle, polygon, and query files.

All numbers are exact rationals written as ``p/q`` or bare integers; floats
are rejected. ``#`` starts a comment, blank lines are skipped.

Triangle file::

    ref x0 y0 x1 y1 x2 y2        # the reference triangle, counterclockwise
    7 1/2 -3 5                   # id anchor_x anchor_y scale
    8 0 0 3 0 0 3                # id v0x v0y v1x v1y v2x v2y (validated)

Polygon file: same idea with a ``poly x0 y0 x1 y1 ...`` header and only the
``id anchor_x anchor_y scale`` instance form.

Query file: one ``qx qy`` pair per line.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .geometry import (GeometryError, Point, ReferenceTriangle,
                       validate_homothet)
from .polygons import PolygonError, ReferencePolygon

Entry = Tuple[int, Point, Fraction]

_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?\Z")
_INTEGER = re.compile(r"[+-]?\d+\Z")
_TOKEN = re.compile(r"\S+")


class ParseError(ValueError):
    """Input file rejected; carries source name, line and column."""

    def __init__(self, source: str, line: int, col: int, message: str):
        super().__init__(f"{source}:{line}:{col}: {message}")
        self.source = source
        self.line = line
        self.col = col


def _tokenize(text: str):
    """Yield (line_number, [(column, token), ...]) for significant lines."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        significant = raw.split("#", 1)[0]
        tokens = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(significant)]
        if tokens:
            yield lineno, tokens


def _rational(source: str, lineno: int, col: int, token: str) -> Fraction:
    if not _RATIONAL.match(token):
        raise ParseError(source, lineno, col, f"expected a rational like 3, -7 or 2/5, got {token!r}")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ParseError(source, lineno, col, f"zero denominator in {token!r}") from None


def _integer(source: str, lineno: int, col: int, token: str) -> int:
    if not _INTEGER.match(token):
        raise ParseError(source, lineno, col, f"expected an integer id, got {token!r}")
    return int(token)


def parse_triangle_text(text: str, source: str = "<triangles>") -> Tuple[ReferenceTriangle, List[Entry]]:
    reference = None
    entries: List[Entry] = []
    for lineno, tokens in _tokenize(text):
        col0, head = tokens[0]
        if reference is None:
            if head != "ref" or len(tokens) != 7:
                raise ParseError(source, lineno, col0,
                                 "first line must be 'ref x0 y0 x1 y1 x2 y2'")
            vals = [_rational(source, lineno, c, t) for c, t in tokens[1:]]
            try:
                reference = ReferenceTriangle(Point(vals[0], vals[1]),
                                              Point(vals[2], vals[3]),
                                              Point(vals[4], vals[5]))
            except GeometryError as exc:
                raise ParseError(source, lineno, col0, str(exc)) from None
            continue
        tid = _integer(source, lineno, col0, head)
        if len(tokens) == 4:
            anchor = Point(_rational(source, lineno, *tokens[1]),
                           _rational(source, lineno, *tokens[2]))
            scale = _rational(source, lineno, *tokens[3])
            if scale <= 0:
                raise ParseError(source, lineno, tokens[3][0],
                                 f"triangle {tid}: scale must be positive, got {scale}")
        elif len(tokens) == 7:
            vals = [_rational(source, lineno, c, t) for c, t in tokens[1:]]
            try:
                anchor, scale = validate_homothet(
                    reference,
                    Point(vals[0], vals[1]), Point(vals[2], vals[3]), Point(vals[4], vals[5]))
            except GeometryError as exc:
                raise ParseError(source, lineno, col0, f"triangle {tid}: {exc}") from None
        else:
            raise ParseError(source, lineno, col0,
                             "triangle line needs 4 tokens (id x y scale) or 7 (id + 3 vertices)")
        entries.append((tid, anchor, scale))
    if reference is None:
        raise ParseError(source, 1, 1, "missing 'ref' header line")
    return reference, entries


def parse_polygon_text(text: str, source: str = "<polygons>") -> Tuple[ReferencePolygon, List[Entry]]:
    reference = None
    entries: List[Entry] = []
    for lineno, tokens in _tokenize(text):
        col0, head = tokens[0]
        if reference is None:
            if head != "poly" or len(tokens) < 7 or len(tokens) % 2 == 0:
                raise ParseError(source, lineno, col0,
                                 "first line must be 'poly x0 y0 x1 y1 x2 y2 ...'")
            vals = [_rational(source, lineno, c, t) for c, t in tokens[1:]]
            try:
                reference = ReferencePolygon(
                    Point(vals[i], vals[i + 1]) for i in range(0, len(vals), 2))
            except PolygonError as exc:
                raise ParseError(source, lineno, col0, str(exc)) from None
            continue
        if len(tokens) != 4:
            raise ParseError(source, lineno, col0,
                             "polygon instance line needs 4 tokens: id x y scale")
        pid = _integer(source, lineno, col0, head)
        anchor = Point(_rational(source, lineno, *tokens[1]),
                       _rational(source, lineno, *tokens[2]))
        scale = _rational(source, lineno, *tokens[3])
        if scale <= 0:
            raise ParseError(source, lineno, tokens[3][0],
                             f"polygon {pid}: scale must be positive, got {scale}")
        entries.append((pid, anchor, scale))
    if reference is None:
        raise ParseError(source, 1, 1, "missing 'poly' header line")
    return reference, entries


def parse_query_text(text: str, source: str = "<queries>") -> List[Point]:
    points = []
    for lineno, tokens in _tokenize(text):
        if len(tokens) != 2:
            raise ParseError(source, lineno, tokens[0][0], "query line needs 2 tokens: qx qy")
        points.append(Point(_rational(source, lineno, *tokens[0]),
                            _rational(source, lineno, *tokens[1])))
    return points


def load_triangle_file(path) -> Tuple[ReferenceTriangle, List[Entry]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_triangle_text(fh.read(), str(path))


def load_polygon_file(path) -> Tuple[ReferencePolygon, List[Entry]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_polygon_text(fh.read(), str(path))


def load_query_file(path) -> List[Point]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_query_text(fh.read(), str(path))


def triangle_text(reference: ReferenceTriangle, entries: Iterable[Entry],
                  comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append("ref " + " ".join(str(v) for p in reference.vertices for v in (p.x, p.y)))
    for tid, anchor, scale in entries:
        lines.append(f"{tid} {anchor.x} {anchor.y} {scale}")
    return "\n".join(lines) + "\n"


def query_text(points: Iterable[Point], comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.extend(f"{p.x} {p.y}" for p in points)
    return "\n".join(lines) + "\n"


def write_triangle_file(path, reference, entries, comments=()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(triangle_text(reference, entries, comments))


def write_query_file(path, points, comments=()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(query_text(points, comments))
