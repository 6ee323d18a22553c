"""Exact convex polytopes in (x, v, s) space.

A polytope keeps both descriptions: its vertices and its facet planes, with a
vertex/facet incidence table.  Clipping by a half-space updates all three, so
no vertex enumeration from scratch is ever needed.  Volumes are in v-units
(physical volume is sqrt(3) times the value).
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Optional, Sequence

from ..exactnum import Rat, format_rat, rat
from .planar import Poly2, convex_hull, poly_intersect

Point3 = tuple  # (x, v, s)

ZERO = rat(0)


def pt3(x, v, s) -> Point3:
    return (rat(x), rat(v), rat(s))


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def _cross(u, w):
    return (u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0])


def _dot(u, w):
    return u[0] * w[0] + u[1] * w[1] + u[2] * w[2]


def det3(u, w, z):
    return _dot(u, _cross(w, z))


class HalfSpace3(tuple):
    """``a*x + b*v + c*s <= d``, scaled so the first nonzero normal entry is +-1."""

    __slots__ = ()

    def __new__(cls, a, b, c, d):
        a, b, c, d = rat(a), rat(b), rat(c), rat(d)
        lead = a if a != 0 else (b if b != 0 else c)
        if lead == 0:
            raise ValueError("half-space with zero normal")
        k = abs(lead)
        if k != 1:
            a, b, c, d = a / k, b / k, c / k, d / k
        return tuple.__new__(cls, (a, b, c, d))

    @property
    def normal(self):
        return self[:3]

    @property
    def offset(self):
        return self[3]

    def flipped(self) -> "HalfSpace3":
        return HalfSpace3(-self[0], -self[1], -self[2], -self[3])

    def value(self, p) -> Rat:
        return self[0] * p[0] + self[1] * p[1] + self[2] * p[2] - self[3]


def _plane(a, b, c, d) -> HalfSpace3:
    return HalfSpace3(a, b, c, d)


class Polytope3:
    """Full-dimensional convex polytope, or a flagged flat one of volume zero."""

    __slots__ = ("verts", "planes", "inc", "flat", "_edges", "_key", "_bbox", "_vol")

    def __init__(self, verts, planes, inc, flat=False):
        self.verts = tuple(verts)
        self.planes = tuple(planes)
        self.inc = tuple(inc)
        self.flat = flat
        self._edges = None
        self._key = None
        self._bbox = None
        self._vol = None

    # construction -----------------------------------------------------------

    @classmethod
    def box(cls, lo: Point3, hi: Point3) -> "Polytope3":
        lo = pt3(*lo)
        hi = pt3(*hi)
        if any(lo[i] >= hi[i] for i in range(3)):
            raise ValueError("empty box")
        planes = []
        for axis in range(3):
            n = [0, 0, 0]
            n[axis] = 1
            planes.append(_plane(*n, hi[axis]))
            n[axis] = -1
            planes.append(_plane(*n, -lo[axis]))
        verts = []
        inc = []
        for i in (0, 1):
            for j in (0, 1):
                for k in (0, 1):
                    verts.append((hi[0] if i else lo[0], hi[1] if j else lo[1], hi[2] if k else lo[2]))
                    inc.append(frozenset((0 if i else 1, 2 if j else 3, 4 if k else 5)))
        return cls(verts, planes, inc)

    @classmethod
    def prism(cls, poly: Poly2, s0, s1) -> "Polytope3":
        """``poly`` times the parameter interval [s0, s1]."""
        s0, s1 = rat(s0), rat(s1)
        hs = [HalfSpace3(a, b, 0, c) for a, b, c in poly.halfplanes()]
        return from_halfspaces(hs + [HalfSpace3(0, 0, 1, s1), HalfSpace3(0, 0, -1, -s0)])

    # identity ---------------------------------------------------------------

    def key(self) -> tuple:
        """Canonical form: the lexicographically sorted vertex tuple."""
        if self._key is None:
            self._key = tuple(sorted(self.verts))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Polytope3) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        body = "; ".join(" ".join(format_rat(c) for c in p) for p in self.key())
        return f"Polytope3[{body}]"

    # queries ----------------------------------------------------------------

    def bbox(self):
        if self._bbox is None:
            vs = self.verts
            self._bbox = (
                tuple(min(p[i] for p in vs) for i in range(3)),
                tuple(max(p[i] for p in vs) for i in range(3)),
            )
        return self._bbox

    def s_range(self):
        lo, hi = self.bbox()
        return lo[2], hi[2]

    def edges(self) -> list:
        if self._edges is None:
            inc = self.inc
            n = len(inc)
            self._edges = [
                (i, j) for i in range(n) for j in range(i + 1, n) if len(inc[i] & inc[j]) >= 2
            ]
        return self._edges

    def facet_vertices(self, k: int) -> list:
        return [self.verts[i] for i, f in enumerate(self.inc) if k in f]

    def volume(self) -> Rat:
        if self._vol is None:
            self._vol = ZERO if self.flat else _volume(self)
        return self._vol

    def contains_point(self, p) -> int:
        """1 interior, 0 boundary, -1 outside."""
        best = 1
        for h in self.planes:
            d = h.value(p)
            if d > 0:
                return -1
            if d == 0:
                best = 0
        return best

    def __len__(self):
        return len(self.verts)


def _facet_order(verts: Sequence[Point3], normal) -> list:
    """Vertices of a planar convex facet in cyclic order."""
    ax = max(range(3), key=lambda i: abs(normal[i]))
    keep = [i for i in range(3) if i != ax]
    proj = {(p[keep[0]], p[keep[1]]): p for p in verts}
    return [proj[q] for q in convex_hull(proj.keys())]


def _volume(P: Polytope3) -> Rat:
    v0 = P.verts[0]
    total = ZERO
    for k, h in enumerate(P.planes):
        if k in P.inc[0]:
            continue
        face = _facet_order(P.facet_vertices(k), h)
        w0 = _sub(face[0], v0)
        for a, b in zip(face[1:], face[2:]):
            total += abs(det3(w0, _sub(a, v0), _sub(b, v0)))
    return total / 6


def volume3(P: Optional[Polytope3]) -> Rat:
    return ZERO if P is None else P.volume()


def _finish(verts, planes, inc) -> Optional[Polytope3]:
    """Drop planes that stopped being facets and reindex."""
    counts = {}
    for f in inc:
        for k in f:
            counts[k] = counts.get(k, 0) + 1
    live = []
    for k in range(len(planes)):
        if counts.get(k, 0) < 3:
            continue
        pts = [verts[i] for i, f in enumerate(inc) if k in f]
        if not _spans_plane(pts):
            continue
        live.append(k)
    if len(live) < 4:
        return None
    remap = {k: i for i, k in enumerate(live)}
    new_inc = [frozenset(remap[k] for k in f if k in remap) for f in inc]
    return Polytope3(verts, [planes[k] for k in live], new_inc)


def _spans_plane(pts) -> bool:
    p0 = pts[0]
    u = None
    for q in pts[1:]:
        d = _sub(q, p0)
        if d == (0, 0, 0):
            continue
        if u is None:
            u = d
            continue
        if _cross(u, d) != (0, 0, 0):
            return True
    return False


def clip_halfspace3(P: Optional[Polytope3], h: HalfSpace3) -> Optional[Polytope3]:
    """``P`` intersected with ``h``; ``None`` when the result has zero volume."""
    if P is None:
        return None
    if not isinstance(h, HalfSpace3):
        h = HalfSpace3(*h)
    if P.flat:
        raise ValueError("cannot clip a flat polytope")
    vals = [h[0] * p[0] + h[1] * p[1] + h[2] * p[2] - h[3] for p in P.verts]
    has_neg = has_pos = False
    for d in vals:
        if d < 0:
            has_neg = True
        elif d > 0:
            has_pos = True
    if not has_pos:
        return P
    if not has_neg:
        return None
    new_k = len(P.planes)
    planes = list(P.planes) + [h]
    verts = []
    inc = []
    for p, d, f in zip(P.verts, vals, P.inc):
        if d < 0:
            verts.append(p)
            inc.append(f)
        elif d == 0:
            verts.append(p)
            inc.append(f | {new_k})
    for i, j in P.edges():
        di, dj = vals[i], vals[j]
        if (di < 0 < dj) or (dj < 0 < di):
            t = di / (di - dj)
            a, b = P.verts[i], P.verts[j]
            verts.append((a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t))
            inc.append((P.inc[i] & P.inc[j]) | {new_k})
    return _finish(verts, planes, inc)


def split3(P: Polytope3, h: HalfSpace3):
    """(P within h, P within the closed complement of h)."""
    return clip_halfspace3(P, h), clip_halfspace3(P, h.flipped())


def clip_many3(P: Optional[Polytope3], hs: Iterable) -> Optional[Polytope3]:
    for h in hs:
        if P is None:
            return None
        P = clip_halfspace3(P, h)
    return P


def from_halfspaces(hs: Iterable, bound=4) -> Optional[Polytope3]:
    """Bounded intersection of half-spaces, clipped from a large box."""
    B = Polytope3.box((-bound, -bound, -bound), (bound, bound, bound))
    return clip_many3(B, hs)


def bbox_disjoint3(P: Polytope3, Q: Polytope3) -> bool:
    (a0, a1), (b0, b1) = P.bbox(), Q.bbox()
    for i in range(3):
        if a1[i] <= b0[i] or b1[i] <= a0[i]:
            return True
    return False


def intersect3(P: Polytope3, Q: Polytope3) -> Optional[Polytope3]:
    if bbox_disjoint3(P, Q):
        return None
    return clip_many3(P, Q.planes)


def subtract3(P: Polytope3, Q: Polytope3) -> list:
    """``P`` minus ``Q`` as interior-disjoint convex pieces."""
    if intersect3(P, Q) is None:
        return [P]
    out = []
    rest: Optional[Polytope3] = P
    for h in Q.planes:
        if rest is None:
            break
        outside = clip_halfspace3(rest, h.flipped())
        if outside is not None:
            out.append(outside)
        rest = clip_halfspace3(rest, h)
    return out


def contains3(outer: Polytope3, inner: Polytope3) -> bool:
    """Closed containment."""
    return all(h.value(p) <= 0 for p in inner.verts for h in outer.planes)


def shear(P: Polytope3, A, B, C, D) -> Polytope3:
    """Image under (x, v, s) -> (x + A + B*s/2, v + C + D*s/2, s)."""
    bx, dx = rat(B) / 2, rat(D) / 2
    verts = [(x + A + bx * s, v + C + dx * s, s) for x, v, s in P.verts]
    planes = [
        HalfSpace3(a, b, c - a * bx - b * dx, d + a * A + b * C) for a, b, c, d in P.planes
    ]
    Q = Polytope3(verts, planes, P.inc)
    Q._edges = P._edges
    return Q


def map_vertices(P: Polytope3, f) -> Polytope3:
    """Image of ``P`` under a map that sends polytopes to polytopes vertex-wise
    (affine, or projective without a pole on ``P``)."""
    return hull3([f(p) for p in P.verts])


def slice_at_s(P: Polytope3, s0) -> Optional[Poly2]:
    """Cross-section {(x, v) : (x, v, s0) in P}; ``None`` if it has no area."""
    s0 = rat(s0)
    lo, hi = P.s_range()
    if s0 < lo or s0 > hi:
        return None
    pts = [(p[0], p[1]) for p in P.verts if p[2] == s0]
    for i, j in P.edges():
        a, b = P.verts[i], P.verts[j]
        if (a[2] < s0 < b[2]) or (b[2] < s0 < a[2]):
            t = (s0 - a[2]) / (b[2] - a[2])
            pts.append((a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t))
    return Poly2.hull(pts)


def hull3(points: Iterable[Point3]) -> Polytope3:
    """Exact convex hull by facet enumeration over point triples.

    Coplanar input gives a flat polytope (``flat=True``, volume 0).
    """
    pts = sorted(set(pt3(*p) for p in points))
    if len(pts) < 4:
        raise ValueError("hull3 needs at least 4 distinct points")
    planes: dict = {}
    n = len(pts)
    for i, j, k in combinations(range(n), 3):
        nrm = _cross(_sub(pts[j], pts[i]), _sub(pts[k], pts[i]))
        if nrm == (0, 0, 0):
            continue
        d = _dot(nrm, pts[i])
        pos = neg = False
        for p in pts:
            e = _dot(nrm, p) - d
            if e > 0:
                pos = True
            elif e < 0:
                neg = True
            if pos and neg:
                break
        if pos and neg:
            continue
        if not pos and not neg:
            return _flat(pts)
        h = HalfSpace3(*nrm, d) if not pos else HalfSpace3(-nrm[0], -nrm[1], -nrm[2], -d)
        planes[h] = None
    plist = list(planes)
    verts = []
    inc = []
    for p in pts:
        f = frozenset(k for k, h in enumerate(plist) if h.value(p) == 0)
        if _rank([plist[k].normal for k in f]) == 3:
            verts.append(p)
            inc.append(f)
    return Polytope3(verts, plist, inc)


def _rank(vectors) -> int:
    vs = [v for v in vectors if v != (0, 0, 0)]
    if not vs:
        return 0
    u = vs[0]
    w = None
    for v in vs[1:]:
        c = _cross(u, v)
        if c != (0, 0, 0):
            w = v
            nrm = c
            break
    if w is None:
        return 1
    for v in vs:
        if _dot(nrm, v) != 0:
            return 3
    return 2


def _flat(pts) -> Polytope3:
    return Polytope3(pts, (), [frozenset()] * len(pts), flat=True)


def union_is_convex(parts: Sequence[Polytope3]) -> Optional[Polytope3]:
    """Hull of ``parts`` if their union is convex (volumes add up), else ``None``."""
    if len(parts) == 1:
        return parts[0]
    H = hull3([p for P in parts for p in P.verts])
    if H.volume() == sum(P.volume() for P in parts):
        return H
    return None


def facets_touch(P: Polytope3, Q: Polytope3) -> bool:
    """True when P and Q share a piece of boundary of positive area."""
    if not _bbox_touch(P, Q):
        return False
    qplanes = {h: k for k, h in enumerate(Q.planes)}
    for k, h in enumerate(P.planes):
        kq = qplanes.get(h.flipped())
        if kq is None:
            continue
        fp = P.facet_vertices(k)
        fq = Q.facet_vertices(kq)
        ax = max(range(3), key=lambda i: abs(h[i]))
        keep = [i for i in range(3) if i != ax]
        a = Poly2.hull([(p[keep[0]], p[keep[1]]) for p in fp])
        b = Poly2.hull([(p[keep[0]], p[keep[1]]) for p in fq])
        if a is None or b is None:
            continue
        if poly_intersect(a, b) is not None:
            return True
    return False


def _bbox_touch(P, Q) -> bool:
    (a0, a1), (b0, b1) = P.bbox(), Q.bbox()
    return all(a1[i] >= b0[i] and b1[i] >= a0[i] for i in range(3))
