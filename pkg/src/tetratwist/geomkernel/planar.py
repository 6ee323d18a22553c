"""Exact convex polygons in the (x, v) chart.

Physical points are (x, v*sqrt(3)); every area returned here is in v-units,
so the physical area is sqrt(3) times the value.  Zero-area results are
reported as ``None`` (cells are open sets, boundaries carry no dynamics).
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from ..exactnum import Rat, format_rat, rat

Point2 = tuple  # (x, v), both Rat

ZERO = rat(0)


def pt(x, v) -> Point2:
    return (rat(x), rat(v))


def cross(o: Point2, a: Point2, b: Point2):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _strip_collinear(verts: list) -> list:
    """Drop repeated and collinear vertices from a ccw cycle."""
    out = []
    for p in verts:
        if out and out[-1] == p:
            continue
        out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    changed = True
    while changed and len(out) >= 3:
        changed = False
        n = len(out)
        for i in range(n):
            if cross(out[i - 1], out[i], out[(i + 1) % n]) == 0:
                del out[i]
                changed = True
                break
    return out


def _rotate_min(verts: list) -> tuple:
    i = min(range(len(verts)), key=verts.__getitem__)
    return tuple(verts[i:] + verts[:i])


class Poly2:
    """Strictly convex polygon, vertices counter-clockwise, least vertex first."""

    __slots__ = ("verts", "_hash")

    def __init__(self, verts: Sequence[Point2], _canonical: bool = False):
        if not _canonical:
            vs = _strip_collinear([pt(*p) for p in verts])
            if len(vs) < 3:
                raise ValueError("polygon needs at least 3 non-collinear vertices")
            if _signed_area2(vs) < 0:
                vs.reverse()
            verts = _rotate_min(vs)
            _check_convex(verts)
        self.verts = tuple(verts)
        self._hash = None

    @classmethod
    def hull(cls, points: Iterable[Point2]) -> Optional["Poly2"]:
        """Convex hull of ``points``; ``None`` if it has zero area."""
        vs = convex_hull(points)
        if len(vs) < 3:
            return None
        return cls(_rotate_min(vs), _canonical=True)

    def __eq__(self, other):
        return isinstance(other, Poly2) and self.verts == other.verts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.verts)
        return self._hash

    def __len__(self):
        return len(self.verts)

    def __repr__(self):
        body = ", ".join(f"({format_rat(x)}, {format_rat(v)})" for x, v in self.verts)
        return f"Poly2[{body}]"

    def area(self) -> Rat:
        return poly_area(self)

    def translate(self, dx, dv) -> "Poly2":
        return Poly2(tuple((x + dx, v + dv) for x, v in self.verts), _canonical=True)

    def halfplanes(self) -> list:
        """Edge constraints ``(a, b, c)`` meaning ``a*x + b*v <= c`` on the polygon."""
        out = []
        vs = self.verts
        n = len(vs)
        for i in range(n):
            p, q = vs[i], vs[(i + 1) % n]
            a = q[1] - p[1]
            b = p[0] - q[0]
            out.append((a, b, a * p[0] + b * p[1]))
        return out

    def bbox(self):
        xs = [p[0] for p in self.verts]
        vs = [p[1] for p in self.verts]
        return min(xs), min(vs), max(xs), max(vs)

    def centroid(self) -> Point2:
        """Area centroid (exact)."""
        vs = self.verts
        n = len(vs)
        a2 = ZERO
        cx = ZERO
        cv = ZERO
        for i in range(n):
            p, q = vs[i], vs[(i + 1) % n]
            w = p[0] * q[1] - q[0] * p[1]
            a2 += w
            cx += (p[0] + q[0]) * w
            cv += (p[1] + q[1]) * w
        return (cx / (3 * a2), cv / (3 * a2))

    def vertex_mean(self) -> Point2:
        n = len(self.verts)
        return (sum(p[0] for p in self.verts) / n, sum(p[1] for p in self.verts) / n)


def _signed_area2(vs):
    n = len(vs)
    return sum(vs[i][0] * vs[(i + 1) % n][1] - vs[(i + 1) % n][0] * vs[i][1] for i in range(n))


def _check_convex(vs):
    n = len(vs)
    for i in range(n):
        if cross(vs[i - 1], vs[i], vs[(i + 1) % n]) <= 0:
            raise ValueError("vertex list is not strictly convex")


def convex_hull(points: Iterable[Point2]) -> list:
    """Andrew's monotone chain; ccw, strictly convex, no repeated points."""
    pts = sorted(set(pt(*p) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def poly_area(p: Poly2) -> Rat:
    if not isinstance(p, Poly2):
        vs = [pt(*q) for q in p]
        if len(vs) < 3:
            raise ValueError("area of a degenerate polygon")
        return abs(_signed_area2(vs)) / 2
    return _signed_area2(p.verts) / 2


def clip_halfplane(p: Poly2, a, b, c) -> Optional[Poly2]:
    """``p`` intersected with ``{a*x + b*v <= c}``; ``None`` if the result has no area."""
    if a == 0 and b == 0:
        raise ValueError("halfplane with zero normal")
    vs = p.verts
    vals = [a * x + b * v - c for x, v in vs]
    if all(d <= 0 for d in vals):
        return p
    if all(d >= 0 for d in vals):
        return None
    out = []
    n = len(vs)
    for i in range(n):
        j = (i + 1) % n
        di, dj = vals[i], vals[j]
        if di <= 0:
            out.append(vs[i])
        if (di < 0 < dj) or (dj < 0 < di):
            t = di / (di - dj)
            pi, pj = vs[i], vs[j]
            out.append((pi[0] + (pj[0] - pi[0]) * t, pi[1] + (pj[1] - pi[1]) * t))
    out = _strip_collinear(out)
    if len(out) < 3:
        return None
    return Poly2(_rotate_min(out), _canonical=True)


def split_halfplane(p: Poly2, a, b, c):
    """Return (part with a*x+b*v <= c, part with a*x+b*v >= c)."""
    return clip_halfplane(p, a, b, c), clip_halfplane(p, -a, -b, -c)


def clip_many(p: Optional[Poly2], halfplanes) -> Optional[Poly2]:
    for a, b, c in halfplanes:
        if p is None:
            return None
        p = clip_halfplane(p, a, b, c)
    return p


def bbox_disjoint(p: Poly2, q: Poly2) -> bool:
    a = p.bbox()
    b = q.bbox()
    return a[2] <= b[0] or b[2] <= a[0] or a[3] <= b[1] or b[3] <= a[1]


def poly_intersect(p: Poly2, q: Poly2) -> Optional[Poly2]:
    if bbox_disjoint(p, q):
        return None
    return clip_many(p, q.halfplanes())


def poly_subtract(p: Poly2, q: Poly2) -> list:
    """``p`` minus ``q`` as a list of interior-disjoint convex pieces."""
    if poly_intersect(p, q) is None:
        return [p]
    out = []
    rest: Optional[Poly2] = p
    for a, b, c in q.halfplanes():
        if rest is None:
            break
        outside = clip_halfplane(rest, -a, -b, -c)
        if outside is not None:
            out.append(outside)
        rest = clip_halfplane(rest, a, b, c)
    return out


def locate(p: Poly2, point: Point2) -> int:
    """1 if ``point`` is interior, 0 on the boundary, -1 outside."""
    vs = p.verts
    n = len(vs)
    best = 1
    for i in range(n):
        c = cross(vs[i], vs[(i + 1) % n], point)
        if c < 0:
            return -1
        if c == 0:
            best = 0
    return best


def contains_poly(outer: Poly2, inner: Poly2) -> bool:
    """Closed containment of convex polygons."""
    return all(locate(outer, q) >= 0 for q in inner.verts)
