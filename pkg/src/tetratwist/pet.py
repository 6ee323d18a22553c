"""Polytope exchange engine for the tetrahedral PET family.

Two representations live here:

* :class:`SymbolicPET` -- cells are polytopes in (x, v, s) over a parameter
  interval, each carrying an integer :class:`TransVec`; valid for every s in
  the interval at once.
* :class:`ConcretePET` -- the map at one rational s: convex polygons with
  rational translations.  It is built directly in the plane, independently of
  the symbolic path, so slices of the former can be checked against it.

Composition convention: ``compose(g, h)`` is "h after g".
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from .exactnum import Rat, format_rat, rat, rat_floor
from .geomkernel import (
    HalfSpace3,
    Poly2,
    Polytope3,
    clip_many,
    clip_many3,
    intersect3,
    locate,
    poly_area,
    poly_intersect,
    poly_subtract,
    shear,
    slice_at_s,
    union_is_convex,
)
from .geomkernel.solid import facets_touch
from .torus import CHART, CHART_AREA, CHART_HALFPLANES, WRAPS, chart_prism, lattice_vector, reduce_mod

log = logging.getLogger(__name__)

ZERO = rat(0)
HALF = rat(1, 2)

DEFAULT_MAX_STEPS = 1 << 16
DEFAULT_NMAX = 1 << 16
WRAP_LABELS = False


class PETError(Exception):
    pass


class BoundaryHit(PETError):
    """A point landed on a cell boundary, where the map is undefined."""


class ReturnBoundExceeded(PETError):
    def __init__(self, max_steps):
        super().__init__(f"some piece did not return within {max_steps} steps")
        self.max_steps = max_steps


class NotPeriodicWithin(PETError):
    def __init__(self, n_max):
        super().__init__(f"point is not periodic with period <= {n_max}")
        self.n_max = n_max


class TransVec(NamedTuple):
    """Translation (A + B*s/2, C + D*s/2) in v-coordinates."""

    A: int
    B: int
    C: int
    D: int

    def __add__(self, other):
        return TransVec(self.A + other.A, self.B + other.B, self.C + other.C, self.D + other.D)

    def __neg__(self):
        return TransVec(-self.A, -self.B, -self.C, -self.D)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, k: int) -> "TransVec":
        return TransVec(k * self.A, k * self.B, k * self.C, k * self.D)

    def at(self, s) -> tuple:
        s = rat(s)
        return (self.A + self.B * s / 2, self.C + self.D * s / 2)

    def __str__(self):
        return f"({self.A}{self.B:+d}s/2, {self.C}{self.D:+d}s/2)"


ZERO_TV = TransVec(0, 0, 0, 0)

# s * omega_i for unit s, in TransVec units
OMEGA = (TransVec(0, 2, 0, 0), TransVec(0, -1, 0, 1), TransVec(0, -1, 0, -1))


def _lattice_tv(a: int, b: int) -> TransVec:
    dx, dv = lattice_vector(a, b)
    return TransVec(int(dx), 0, int(dv), 0)


# strips of the chart on which base map i translates by sigma * s * omega_i;
# halfplanes (a, b, c) mean a*x + b*v <= c
STRIPS = (
    (([(0, -1, 0)], 1), ([(0, 1, 0)], -1)),
    (([(1, 1, 0)], 1), ([(-1, -1, 0)], -1)),
    (
        ([(1, -1, 0), (-1, 1, 1)], 1),
        ([(1, -1, -1)], -1),
        ([(1, -1, 1), (-1, 1, 0)], -1),
        ([(-1, 1, -1)], 1),
    ),
)


def sigma(i: int, p) -> int:
    """Sign of the base map ``i`` at ``p``; raises BoundaryHit on strip seams."""
    x, v = rat(p[0]), rat(p[1])
    if i == 0:
        w, period, split = v, 1, HALF
    elif i == 1:
        w, period, split = x + v, 2, rat(1)
        w = w + 1  # x+v in (-1, 0) is the +1 strip
    elif i == 2:
        w, period, split = v - x, 2, rat(1)
    else:
        raise ValueError(f"no base map {i}")
    w = w - period * rat_floor(w / period)
    if w == 0 or w == split:
        raise BoundaryHit(f"{p} lies on a seam of base map {i}")
    return 1 if w < split else -1


def base_map_point(i: int, s, p) -> tuple:
    """Pointwise formula p + sigma*s*omega_i mod the lattice."""
    p = reduce_mod(p)
    sg = sigma(i, p)
    dx, dv = OMEGA[i].scaled(sg).at(s)
    return reduce_mod((p[0] + dx, p[1] + dv))


def tetra_point(s, p) -> tuple:
    for i in range(3):
        p = base_map_point(i, s, p)
    return p


# --------------------------------------------------------------------------
# concrete maps at one parameter


class Piece(NamedTuple):
    poly: Poly2
    shift: tuple  # (dx, dv)
    time: int = 1
    label: Optional[str] = None

    def image(self) -> Poly2:
        return self.poly.translate(*self.shift)


@dataclass
class ConcretePET:
    """Piecewise translation of the torus chart (or of a region) at parameter ``s``."""

    pieces: list
    s: Rat
    region_area: Rat = CHART_AREA

    def __len__(self):
        return len(self.pieces)

    def images(self) -> list:
        return [pc.image() for pc in self.pieces]

    def total_area(self) -> Rat:
        return sum((poly_area(pc.poly) for pc in self.pieces), ZERO)

    def locate(self, p) -> Piece:
        boundary = False
        for pc in self.pieces:
            bb = pc.poly.bbox()
            if p[0] < bb[0] or p[0] > bb[2] or p[1] < bb[1] or p[1] > bb[3]:
                continue
            r = locate(pc.poly, p)
            if r == 1:
                return pc
            if r == 0:
                boundary = True
        if boundary:
            raise BoundaryHit(f"{p} lies on a partition boundary")
        raise PETError(f"{p} is outside the domain")

    def apply(self, p) -> tuple:
        pc = self.locate(p)
        return (p[0] + pc.shift[0], p[1] + pc.shift[1])

    def __call__(self, p):
        return self.apply(p)


def base_map_concrete(i: int, s) -> ConcretePET:
    s = rat(s)
    pieces = []
    for k, (hps, sg) in enumerate(STRIPS[i]):
        strip = clip_many(CHART, hps)
        if strip is None:
            continue
        dx, dv = OMEGA[i].scaled(sg).at(s)
        for a, b in WRAPS:
            lx, lv = lattice_vector(a, b)
            tx, tv = dx + lx, dv + lv
            cell = clip_many(strip, [(p, q, c - p * tx - q * tv) for p, q, c in CHART_HALFPLANES])
            if cell is not None:
                pieces.append(Piece(cell, (tx, tv), 1, (k,)))
    return ConcretePET(pieces, s)


def _join(a, b):
    if a is None or b is None:
        return a if b is None else b
    return tuple(a) + tuple(b)


def compose_concrete(g: ConcretePET, h: ConcretePET) -> ConcretePET:
    """h after g, refined: cells are g-cells intersected with preimages of h-cells."""
    out = []
    for pg in g.pieces:
        img = pg.image()
        for ph in h.pieces:
            q = poly_intersect(img, ph.poly)
            if q is None:
                continue
            out.append(
                Piece(
                    q.translate(-pg.shift[0], -pg.shift[1]),
                    (pg.shift[0] + ph.shift[0], pg.shift[1] + ph.shift[1]),
                    pg.time,
                    _join(pg.label, ph.label),
                )
            )
    return ConcretePET(out, g.s, g.region_area)


def concrete_tetra(s, merge: bool = True) -> ConcretePET:
    """The tetrahedral PET at ``s`` built entirely in the plane."""
    s = rat(s)
    f = compose_concrete(compose_concrete(base_map_concrete(0, s), base_map_concrete(1, s)), base_map_concrete(2, s))
    return merge_concrete(f) if merge else f


# --------------------------------------------------------------------------
# merging adjacent pieces that carry the same data


def _norm_line(a, b, c):
    k = abs(a) if a != 0 else abs(b)
    return (a / k, b / k, c / k)


def _edges_touch(P: Poly2, Q: Poly2) -> bool:
    """Closures share a segment of positive length."""
    qe = {}
    vs = Q.verts
    for i, (a, b, c) in enumerate(Q.halfplanes()):
        qe[_norm_line(a, b, c)] = (vs[i], vs[(i + 1) % len(vs)])
    pv = P.verts
    for i, (a, b, c) in enumerate(P.halfplanes()):
        key = _norm_line(-a, -b, -c)
        seg = qe.get(key)
        if seg is None:
            continue
        p0, p1 = pv[i], pv[(i + 1) % len(pv)]
        # project onto the dominant axis of the shared line
        ax = 0 if abs(b) >= abs(a) else 1
        lo1, hi1 = sorted((p0[ax], p1[ax]))
        lo2, hi2 = sorted((seg[0][ax], seg[1][ax]))
        if min(hi1, hi2) > max(lo1, lo2):
            return True
    return False


def _merge_groups(items: list, key, touch, try_union) -> list:
    """Merge items with equal ``key`` whose union is convex and that touch."""
    groups: dict = {}
    for it in items:
        groups.setdefault(key(it), []).append(it)
    out = []
    for k in groups:
        members = groups[k]
        changed = True
        while changed and len(members) > 1:
            changed = False
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    if not touch(members[i], members[j]):
                        continue
                    u = try_union(members[i], members[j])
                    if u is not None:
                        members[i] = u
                        del members[j]
                        changed = True
                        break
                if changed:
                    break
        out.extend(members)
    return out


def merge_concrete(f: ConcretePET, by_time: bool = True) -> ConcretePET:
    def key(pc: Piece):
        return (pc.shift, pc.time if by_time else 0, pc.label)

    def try_union(a: Piece, b: Piece):
        H = Poly2.hull(a.poly.verts + b.poly.verts)
        if H is not None and poly_area(H) == poly_area(a.poly) + poly_area(b.poly):
            return Piece(H, a.shift, a.time, a.label)
        return None

    pieces = _merge_groups(list(f.pieces), key, lambda a, b: _edges_touch(a.poly, b.poly), try_union)
    pieces.sort(key=lambda pc: (pc.poly.verts, pc.shift))
    return ConcretePET(pieces, f.s, f.region_area)


# --------------------------------------------------------------------------
# first return


def _subtract_all(P: Poly2, holes: Sequence[Poly2]) -> list:
    rest = [P]
    for H in holes:
        nxt = []
        for R in rest:
            nxt.extend(poly_subtract(R, H))
        rest = nxt
        if not rest:
            break
    return rest


def first_return(
    pet: ConcretePET,
    region,
    max_steps: int = DEFAULT_MAX_STEPS,
    merge: bool = True,
    per_piece: bool = False,
) -> ConcretePET:
    """First-return map of ``pet`` on ``region`` (a list of polygons or a dict label -> polygon).

    Each returned piece carries its accumulated translation and return time,
    and is labelled (start label, cells visited, landing label).  With
    ``per_piece`` every labelled polygon gets its own first return.
    """
    if isinstance(region, dict):
        labelled = list(region.items())
    else:
        labelled = [(str(k), P) for k, P in enumerate(region)]
    region_polys = [P for _, P in labelled]
    area = sum((poly_area(P) for P in region_polys), ZERO)
    if area == 0:
        raise ValueError("region has no area")
    done = []
    # (label, current image, accumulated shift, cells visited)
    work = [(lab, P, (ZERO, ZERO), ()) for lab, P in labelled]
    while work:
        lab, cur, tot, path = work.pop()
        if len(path) >= max_steps:
            raise ReturnBoundExceeded(max_steps)
        targets = [(lab, dict(labelled)[lab])] if per_piece else labelled
        for ci, pc in enumerate(pet.pieces):
            sub = poly_intersect(cur, pc.poly)
            if sub is None:
                continue
            img = sub.translate(*pc.shift)
            ntot = (tot[0] + pc.shift[0], tot[1] + pc.shift[1])
            npath = path + (ci,)
            hit = []
            for tl, R in targets:
                part = poly_intersect(img, R)
                if part is not None:
                    hit.append(R)
                    done.append(Piece(part.translate(-ntot[0], -ntot[1]), ntot, len(npath), (lab, npath, tl)))
            rest = _subtract_all(img, hit) if hit else [img]
            for r in rest:
                work.append((lab, r, ntot, npath))
    out = ConcretePET(done, pet.s, area)
    return merge_concrete(out) if merge else out


# --------------------------------------------------------------------------
# periodic tiles


@dataclass
class Tile:
    period: int
    poly: Poly2
    shift: tuple = (ZERO, ZERO)  # translation of f restricted to the tile


def _orbit_cells(pet: ConcretePET, p, n_max: int):
    cells = []
    q = p
    for k in range(1, n_max + 1):
        pc = pet.locate(q)
        cells.append(pc)
        q = (q[0] + pc.shift[0], q[1] + pc.shift[1])
        if q == p:
            return cells
    raise NotPeriodicWithin(n_max)


def periodic_tile(pet: ConcretePET, p, n_max: int = DEFAULT_NMAX) -> tuple:
    """(period, tile) for the periodic point ``p``.

    Follows p's itinerary: P_0 is p's cell and P_{k+1} = f(P_k) cut by the
    cell of f^{k+1}(p); after one period the set is back around p.
    """
    p = (rat(p[0]), rat(p[1]))
    cells = _orbit_cells(pet, p, n_max)
    P = cells[0].poly
    for k, pc in enumerate(cells):
        P = P.translate(*pc.shift)
        nxt = cells[(k + 1) % len(cells)]
        P = poly_intersect(P, nxt.poly)
        if P is None:
            raise PETError("itinerary collapsed; exact arithmetic invariant broken")
    return len(cells), P


def tile_orbit(pet: ConcretePET, p, n_max: int = DEFAULT_NMAX) -> list:
    """The tile through ``p`` and its forward images, one per orbit point."""
    p = (rat(p[0]), rat(p[1]))
    cells = _orbit_cells(pet, p, n_max)
    n, T = periodic_tile(pet, p, n_max)
    out = []
    cur = T
    for pc in cells:
        out.append(Tile(n, cur, pc.shift))
        cur = cur.translate(*pc.shift)
    return out


def _seed_points(P: Poly2):
    c = P.centroid()
    yield c
    for w in (3, 5, 7):
        for v in P.verts:
            yield ((c[0] * (w - 1) + v[0]) / w, (c[1] * (w - 1) + v[1]) / w)


@dataclass
class Tiling:
    s: Rat
    tiles: list = field(default_factory=list)
    uncovered: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    complete: bool = False

    def covered_area(self) -> Rat:
        return sum((poly_area(t.poly) for t in self.tiles), ZERO)

    def coverage(self) -> Rat:
        return self.covered_area() / CHART_AREA

    def periods(self) -> dict:
        out: dict = {}
        for t in self.tiles:
            out[t.period] = out.get(t.period, 0) + 1
        return out


def periodic_tiling(
    pet: ConcretePET,
    budget: int = 20000,
    n_max: int = DEFAULT_NMAX,
    region: Optional[list] = None,
) -> Tiling:
    """Greedy cover of the chart by periodic tiles.

    Repeatedly seeds at an interior point of the first uncovered convex hole,
    adds the seed's whole tile orbit, and subtracts it from the holes.  Stops
    when nothing is left or ``budget`` tiles have been placed.
    """
    result = Tiling(pet.s)
    holes = list(region) if region is not None else [CHART]
    while holes:
        if len(result.tiles) >= budget:
            break
        hole = holes[0]
        orbit = None
        for seed in _seed_points(hole):
            try:
                orbit = tile_orbit(pet, seed, n_max)
                break
            except BoundaryHit:
                continue
            except NotPeriodicWithin:
                orbit = None
                break
        if orbit is None:
            result.skipped.append(holes.pop(0))
            continue
        result.tiles.extend(orbit)
        for t in orbit:
            nxt = []
            for h in holes:
                nxt.extend(poly_subtract(h, t.poly))
            holes = nxt
    result.uncovered = holes + result.skipped
    result.complete = not result.uncovered
    return result


# --------------------------------------------------------------------------
# symbolic maps over a parameter interval


class Cell(NamedTuple):
    body: Polytope3
    vec: TransVec
    label: Optional[tuple] = None  # strip itinerary through the base maps


@dataclass
class SymbolicPET:
    cells: list
    interval: tuple  # (lo, hi)

    def __len__(self):
        return len(self.cells)

    def at(self, s) -> ConcretePET:
        return instantiate(self, s)

    def vecs(self) -> set:
        return {c.vec for c in self.cells}

    def volume(self) -> Rat:
        return sum((c.body.volume() for c in self.cells), ZERO)


def _interval(I) -> tuple:
    lo, hi = rat(I[0]), rat(I[1])
    if not (0 <= lo < hi <= 1):
        raise ValueError(f"bad parameter interval [{lo}, {hi}]")
    return lo, hi


def base_map(i: int, I) -> SymbolicPET:
    """Base map ``i`` over the interval I as s-dependent cells."""
    lo, hi = _interval(I)
    box = chart_prism(lo, hi)
    cells = []
    for k, (hps, sg) in enumerate(STRIPS[i]):
        strip = clip_many3(box, [HalfSpace3(a, b, 0, c) for a, b, c in hps])
        if strip is None:
            continue
        om = OMEGA[i].scaled(sg)
        for a, b in WRAPS:
            tv = om + _lattice_tv(a, b)
            lx, lv = lattice_vector(a, b)
            # chart constraint on the image p + tv(s)
            hs = [
                HalfSpace3(p, q, p * rat(tv.B, 2) + q * rat(tv.D, 2), c - p * tv.A - q * tv.C)
                for p, q, c in CHART_HALFPLANES
            ]
            cell = clip_many3(strip, hs)
            if cell is not None:
                cells.append(Cell(cell, tv, (k, a, b) if WRAP_LABELS else (k,)))
    return SymbolicPET(cells, (lo, hi))


def identity_pet(I) -> SymbolicPET:
    lo, hi = _interval(I)
    return SymbolicPET([Cell(chart_prism(lo, hi), ZERO_TV, ())], (lo, hi))


def compose(g: SymbolicPET, h: SymbolicPET) -> SymbolicPET:
    """h after g over a common interval."""
    if g.interval != h.interval:
        raise ValueError("compose needs a common interval")
    out = []
    for cg in g.cells:
        img = shear(cg.body, *cg.vec)
        for ch in h.cells:
            q = intersect3(img, ch.body)
            if q is None:
                continue
            out.append(Cell(shear(q, *(-cg.vec)), cg.vec + ch.vec, _join(cg.label, ch.label)))
    return SymbolicPET(out, g.interval)


def merge_cells(pet: SymbolicPET) -> SymbolicPET:
    """Fuse face-adjacent cells with equal translation data into maximal convex cells."""

    def try_union(a: Cell, b: Cell):
        u = union_is_convex([a.body, b.body])
        return None if u is None else Cell(u, a.vec, a.label)

    cells = _merge_groups(list(pet.cells), lambda c: (c.vec, c.label), lambda a, b: facets_touch(a.body, b.body), try_union)
    cells.sort(key=lambda c: (c.body.key(), c.vec))
    return SymbolicPET(cells, pet.interval)


def tetra_pet(I, merge: bool = True) -> SymbolicPET:
    lo, hi = _interval(I)
    f = compose(compose(base_map(0, (lo, hi)), base_map(1, (lo, hi))), base_map(2, (lo, hi)))
    return merge_cells(f) if merge else f


def instantiate(pet: SymbolicPET, s) -> ConcretePET:
    s = rat(s)
    lo, hi = pet.interval
    if not (lo <= s <= hi):
        raise ValueError(f"s={s} outside [{lo}, {hi}]")
    pieces = []
    for c in pet.cells:
        P = slice_at_s(c.body, s)
        if P is not None:
            pieces.append(Piece(P, c.vec.at(s), 1, c.label))
    return ConcretePET(pieces, s)


# --------------------------------------------------------------------------
# exact checks on concrete maps


def pieces_disjoint(polys: Sequence[Poly2]) -> bool:
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            if poly_intersect(polys[i], polys[j]) is not None:
                return False
    return True


def is_pet(f: ConcretePET) -> bool:
    """Domains and images are interior-disjoint and both fill the region."""
    doms = [pc.poly for pc in f.pieces]
    imgs = f.images()
    area = f.total_area()
    return (
        area == f.region_area
        and sum((poly_area(P) for P in imgs), ZERO) == area
        and pieces_disjoint(doms)
        and pieces_disjoint(imgs)
    )


def common_refinement(f: ConcretePET, g: ConcretePET) -> list:
    """Pairs (polygon, shift_f, shift_g) over the overlaps of the two domains."""
    out = []
    for a in f.pieces:
        for b in g.pieces:
            q = poly_intersect(a.poly, b.poly)
            if q is not None:
                out.append((q, a.shift, b.shift))
    return out


def same_map(f: ConcretePET, g: ConcretePET) -> list:
    """Mismatching overlaps; empty when f == g as maps (domains must cover each other)."""
    bad = []
    ref = common_refinement(f, g)
    for q, sf, sg in ref:
        if sf != sg:
            bad.append((q, sf, sg))
    covered = sum((poly_area(q) for q, _, _ in ref), ZERO)
    if covered != f.total_area() or covered != g.total_area():
        bad.append(("domain mismatch", f.total_area(), g.total_area(), covered))
    return bad


def describe_shift(shift) -> str:
    return f"({format_rat(shift[0])}, {format_rat(shift[1])})"
