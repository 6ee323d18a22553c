"""Exact convex geometry: polygons in the torus chart, polytopes in (x, v, s)."""

from .planar import (
    Poly2,
    clip_halfplane,
    clip_many,
    contains_poly,
    convex_hull,
    locate,
    poly_area,
    poly_intersect,
    poly_subtract,
    pt,
    split_halfplane,
)
from .solid import (
    HalfSpace3,
    Polytope3,
    clip_halfspace3,
    clip_many3,
    contains3,
    from_halfspaces,
    hull3,
    intersect3,
    map_vertices,
    pt3,
    shear,
    slice_at_s,
    split3,
    subtract3,
    union_is_convex,
    volume3,
)

__all__ = [
    "Poly2",
    "clip_halfplane",
    "clip_many",
    "contains_poly",
    "convex_hull",
    "locate",
    "poly_area",
    "poly_intersect",
    "poly_subtract",
    "pt",
    "split_halfplane",
    "HalfSpace3",
    "Polytope3",
    "clip_halfspace3",
    "clip_many3",
    "contains3",
    "from_halfspaces",
    "hull3",
    "intersect3",
    "map_vertices",
    "pt3",
    "shear",
    "slice_at_s",
    "split3",
    "subtract3",
    "union_is_convex",
    "volume3",
]
