"""Point-enclosure index for homothetic triangles and polygons.

Preprocess n translated-and-scaled copies of a reference triangle so that
all copies containing a query point are reported in time logarithmic in n
plus the output size. All arithmetic is exact (rational); answers equal
brute force exactly, including on boundaries.
"""

from .cascade import CascadeIndex, build_cascade, locate_path
from .geometry import (
    CANONICAL_REFERENCE,
    AffineMap,
    CanonicalTriangle,
    DegenerateReferenceError,
    GeometryError,
    NonPositiveScaleError,
    NotHomotheticError,
    Point,
    Rational,
    ReferenceTriangle,
    apply_map,
    canonicalizing_map,
    point_in_canonical,
    point_in_triangle,
    validate_homothet,
)
from .index import (
    MODE_BINARY,
    MODE_CASCADED,
    MODES,
    EnclosureIndex,
    QueryStats,
    Slab,
    TrimmedRectangle,
    TrimmedTriangle,
    build_index,
    node_query_rectangles,
    node_query_triangles,
    query,
    trim,
)
from .intervals import IntervalStab, stab_build
from .oracle import (
    PROFILES,
    Instance,
    adversarial_queries,
    gen_instance,
    gen_reference,
    gen_triangles,
    oracle_query,
    oracle_query_many,
)
from .polygons import (
    PolygonIndex,
    ReferencePolygon,
    build_polygon_index,
    point_in_polygon,
    query_polygons,
    triangulate_reference,
)

__version__ = "0.1.0"
