"""The fiber bundle over parameter space: maximal domains of F and of its first returns.

A point of the bundle is (x, v, s).  F(x, v, s) = (f_s(x, v), s) is a
piecewise shear, so every object here is a convex polytope with rational
vertices and every map between them is exact.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .exactnum import Rat, format_rat, rat, rat_floor
from .geomkernel import HalfSpace3, Poly2, Polytope3, clip_halfplane, clip_many3, intersect3, map_vertices, shear, subtract3, union_is_convex
from .geomkernel.solid import facets_touch
from .pet import (
    PETError,
    ReturnBoundExceeded,
    SymbolicPET,
    TransVec,
    ZERO_TV,
    _merge_groups,
    tetra_pet,
)
from .torus import HALF, Y_pieces3, build_Y

log = logging.getLogger(__name__)

DEFAULT_RETURN_CAP = 1 << 14


class NonRationalEndpoint(ValueError):
    pass


@dataclass(frozen=True)
class MaxDomain:
    body: Polytope3
    space: str  # "X", "Y" or "Z"
    transvec: TransVec
    return_time: int = 1
    piece: Optional[str] = None  # which of the six pieces it lives in
    itinerary: tuple = ()

    def key(self):
        return self.body.key()

    def s_range(self):
        return self.body.s_range()

    def volume(self) -> Rat:
        return self.body.volume()


def _as_interval(I) -> tuple:
    try:
        lo, hi = rat(I[0]), rat(I[1])
    except TypeError as exc:
        raise NonRationalEndpoint(str(exc)) from None
    if not lo < hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    return lo, hi


def bundle_F(I) -> SymbolicPET:
    """F over I: the tetrahedral PET with cells labelled by their base-map itinerary."""
    return tetra_pet(_as_interval(I), merge=True)


def x_domains(I) -> list:
    F = bundle_F(I)
    return [MaxDomain(c.body, "X", c.vec, 1, None, c.label) for c in F.cells]


def first_return3(
    F: SymbolicPET,
    region: dict,
    space: str,
    max_steps: int = DEFAULT_RETURN_CAP,
    per_piece: bool = True,
) -> list:
    """Maximal domains of first returns of F on ``region`` (label -> Polytope3).

    With ``per_piece`` each labelled piece S gets its own first return F|_S;
    otherwise the return is to the union.  Pieces are pushed through the
    cells of F until they land.  Two pieces belong to the same domain when
    they start in the same region piece, visit the same cells of F and land
    in the same piece; such pieces are fused afterwards.
    """
    cells = F.cells
    done = []
    work = [(lab, P, ZERO_TV, ()) for lab, P in region.items()]
    while work:
        lab, cur, tot, path = work.pop()
        if len(path) >= max_steps:
            raise ReturnBoundExceeded(max_steps)
        for ci, c in enumerate(cells):
            sub = intersect3(cur, c.body)
            if sub is None:
                continue
            img = shear(sub, *c.vec)
            ntot = tot + c.vec
            npath = path + (ci,)
            hit = []
            targets = [(lab, region[lab])] if per_piece else region.items()
            for tl, R in targets:
                part = intersect3(img, R)
                if part is not None:
                    hit.append(R)
                    done.append(MaxDomain(shear(part, *(-ntot)), space, ntot, len(npath), lab, npath + (tl,)))
            rest = [img]
            for R in hit:
                rest = [q for r in rest for q in subtract3(r, R)]
            for r in rest:
                work.append((lab, r, ntot, npath))
    return merge_domains(done)


def merge_domains(domains: list) -> list:
    def try_union(a: MaxDomain, b: MaxDomain):
        u = union_is_convex([a.body, b.body])
        if u is None:
            return None
        return MaxDomain(u, a.space, a.transvec, a.return_time, a.piece, a.itinerary)

    out = _merge_groups(
        domains,
        lambda d: (d.piece, d.itinerary),
        lambda a, b: facets_touch(a.body, b.body),
        try_union,
    )
    out.sort(key=lambda d: (d.piece or "", d.body.key()))
    return out


def y_domains(I, max_steps: int = DEFAULT_RETURN_CAP) -> list:
    lo, hi = _as_interval(I)
    return first_return3(bundle_F((lo, hi)), Y_pieces3(lo, hi), "Y", max_steps)


# --------------------------------------------------------------------------
# the similarity phi_s and the Z pieces


def renorm_t(s) -> Rat:
    s = rat(s)
    u = s / (1 - 2 * s)
    return u - rat_floor(u)


def _hex_anchor(s):
    s = rat(s)
    return (-(1 + s) / 2, (1 - s) / 2)


def phi_branch(label: str, s, p, t=None) -> tuple:
    """phi_s on the branch sending the Z-piece ``label`` onto the Y_t-piece ``label``."""
    s = rat(s)
    if not (0 < s < HALF):
        raise ValueError("phi_s needs 0 < s < 1/2")
    c = 1 / (1 - 2 * s)
    t = renorm_t(s) if t is None else rat(t)
    x, v = p[0], p[1]
    if label == "A1":
        return (c * (x + 1) - 1, c * v)
    if label == "iA1":
        return (c * (x - 1) + 1, c * v)
    if label in ("A3", "iA3"):
        return (c * x, c * v)
    Ps, Pt = _hex_anchor(s), _hex_anchor(t)
    if label == "H":
        return (c * (x - Ps[0]) + Pt[0], c * (v - Ps[1]) + Pt[1])
    if label == "iH":
        return (c * (x + Ps[0]) - Pt[0], c * (v + Ps[1]) - Pt[1])
    raise ValueError(f"unknown piece {label!r}")


def phi_branch_inverse(label: str, s, q, t=None) -> tuple:
    s = rat(s)
    c = 1 / (1 - 2 * s)
    t = renorm_t(s) if t is None else rat(t)
    x, v = q[0], q[1]
    if label == "A1":
        return ((x + 1) / c - 1, v / c)
    if label == "iA1":
        return ((x - 1) / c + 1, v / c)
    if label in ("A3", "iA3"):
        return (x / c, v / c)
    Ps, Pt = _hex_anchor(s), _hex_anchor(t)
    if label == "H":
        return ((x - Pt[0]) / c + Ps[0], (v - Pt[1]) / c + Ps[1])
    if label == "iH":
        return ((x + Pt[0]) / c - Ps[0], (v + Pt[1]) / c - Ps[1])
    raise ValueError(f"unknown piece {label!r}")


# floor(s/(1-2s)) = 2 exactly on this interval, where phi is projective
PHI_DOMAIN = (rat(12, 29), rat(5, 12))


def _u_of_s(s):
    return s / (1 - 2 * s)


def phi_bundle(label: str, p) -> tuple:
    """phi(x, v, s) = (phi_s(x, v), s/(1-2s) - 2) on one branch."""
    s = rat(p[2])
    lo, hi = PHI_DOMAIN
    if not (lo <= s <= hi):
        raise ValueError(f"phi is only defined for s in [{format_rat(lo)}, {format_rat(hi)}]")
    t = _u_of_s(s) - 2
    x, v = phi_branch(label, s, p, t)
    return (x, v, t)


def phi_bundle_inverse(label: str, q) -> tuple:
    t = rat(q[2])
    u = t + 2
    s = u / (1 + 2 * u)
    x, v = phi_branch_inverse(label, s, q, t)
    return (x, v, s)


def phi_bundle_poly(label: str, P: Polytope3) -> Polytope3:
    return map_vertices(P, lambda p: phi_bundle(label, p))


def phi_bundle_inverse_poly(label: str, P: Polytope3) -> Polytope3:
    return map_vertices(P, lambda q: phi_bundle_inverse(label, q))


def Z_pieces3(lo, hi) -> dict:
    """The six Z pieces over [lo, hi], as preimages of the Y pieces over [R(lo), R(hi)]."""
    lo, hi = rat(lo), rat(hi)
    tl, th = _u_of_s(lo) - 2, _u_of_s(hi) - 2
    Y = Y_pieces3(tl, th)
    return {lab: phi_bundle_inverse_poly(lab, P) for lab, P in Y.items()}


def z_domains(I, max_steps: int = DEFAULT_RETURN_CAP) -> list:
    lo, hi = _as_interval(I)
    return first_return3(bundle_F((lo, hi)), Z_pieces3(lo, hi), "Z", max_steps)


def phi_sim(s):
    """phi_s as a callable ``(label, p) -> p'`` with ``.inverse`` and ``.poly``."""
    s = rat(s)
    if not (0 < s < HALF):
        raise ValueError("phi_s needs 0 < s < 1/2")
    t = renorm_t(s)

    class _Phi:
        scale = 1 / (1 - 2 * s)
        source = s
        target = t

        def __call__(self, label, p):
            return phi_branch(label, s, p, t)

        def inverse(self, label, q):
            return phi_branch_inverse(label, s, q, t)

        def poly(self, label, P: Poly2) -> Poly2:
            return Poly2([self(label, p) for p in P.verts])

        def inverse_poly(self, label, P: Poly2) -> Poly2:
            return Poly2([self.inverse(label, q) for q in P.verts])

    return _Phi()


def Z_pieces(s) -> dict:
    """The planar Z_s = phi_s^{-1}(Y_t), piece by piece."""
    phi = phi_sim(s)
    return {lab: phi.inverse_poly(lab, P) for lab, P in build_Y(phi.target).items()}


def maximal_domains(space: str, I, max_steps: int = DEFAULT_RETURN_CAP) -> list:
    """Maximal domains of F (space X) or of its per-piece first returns (Y, Z) over I."""
    space = space.upper()
    if space not in ("X", "Y", "Z"):
        raise ValueError(f"unknown space {space!r}")
    lo, hi = _as_interval(I)
    return list(_domains_cached(space, lo, hi, max_steps))


@lru_cache(maxsize=32)
def _domains_cached(space, lo, hi, max_steps) -> tuple:
    if space == "X":
        return tuple(x_domains((lo, hi)))
    if space == "Y":
        return tuple(y_domains((lo, hi), max_steps))
    return tuple(z_domains((lo, hi), max_steps))


# --------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class DomainClass:
    kind: str  # Permanent | Resident | NewlyAppeared | Other
    at: Optional[Rat] = None

    def __str__(self):
        return self.kind if self.at is None else f"{self.kind}({format_rat(self.at)})"


def top_vertices(d, at=None) -> int:
    body = d.body if isinstance(d, MaxDomain) else d
    top = body.s_range()[1] if at is None else at
    return sum(1 for p in body.verts if p[2] == top)


def classify_domain(d: MaxDomain, I, resident_top=None) -> DomainClass:
    """Classify against the big interval I = (lo, hi).

    Permanent: touches both s = lo and s = hi.  Resident: touches s = lo and
    s = resident_top and stays below it.  NewlyAppeared(s*): fewer than three
    vertices on its top plane s*.
    """
    lo, hi = rat(I[0]), rat(I[1])
    smin, smax = d.s_range()
    if smin == lo and smax == hi:
        return DomainClass("Permanent")
    if resident_top is not None and smin == lo and smax == rat(resident_top):
        return DomainClass("Resident")
    if top_vertices(d) < 3:
        return DomainClass("NewlyAppeared", smax)
    return DomainClass("Other")


def chop(d: MaxDomain, J) -> MaxDomain:
    lo, hi = rat(J[0]), rat(J[1])
    body = clip_many3(d.body, [HalfSpace3(0, 0, -1, -lo), HalfSpace3(0, 0, 1, hi)])
    if body is None:
        raise ValueError("chop leaves nothing")
    return MaxDomain(body, d.space, d.transvec, d.return_time, d.piece, d.itinerary)


# Extended intervals standing in for the accumulation end of the families;
# the returns pile up at 2/5 (resp. 12/29), so the resident test uses the
# next endpoint t_{2,5} (resp. s_{2,5}) instead.
RESIDENT_RANGE = {"Y": (rat(11, 27), rat(5, 12)), "Z": (rat(65, 157), rat(29, 70))}


@dataclass
class Classified:
    primary: list
    chopped: list  # non-primary, chopped from a non-resident parent
    newly: list  # chopped from a parent newly appeared at ``newly_at``
    parents: dict  # id(domain) -> parent over the resident range

    @property
    def nonprimary(self) -> list:
        return self.chopped + self.newly

    def counts(self) -> tuple:
        return (len(self.primary) + len(self.chopped) + len(self.newly), len(self.primary), len(self.chopped), len(self.newly))


def classify_domains(space: str, J, domains=None, newly_at=None, parents=None) -> Classified:
    """Split the domains over J into primary / chopped / newly-appeared.

    A domain over J is primary when its parent (the domain over the resident
    range with the same itinerary that chops down to it) touches both ends of
    that range.
    """
    space = space.upper()
    K = RESIDENT_RANGE[space]
    lo, hi = _as_interval(J)
    if not (K[0] <= lo and hi <= K[1]):
        raise ValueError("J must lie inside the resident range")
    if domains is None:
        domains = maximal_domains(space, (lo, hi))
    if parents is None:
        parents = maximal_domains(space, K)
    by_key = {}
    for p in parents:
        by_key.setdefault((p.piece, p.itinerary), []).append(p)
    out = Classified([], [], [], {})
    for d in domains:
        parent = None
        for p in by_key.get((d.piece, d.itinerary), []):
            try:
                if chop(p, (lo, hi)).key() == d.key():
                    parent = p
                    break
            except ValueError:
                continue
        if parent is None:
            raise PETError(f"no parent over the resident range for a {space} domain")
        out.parents[id(d)] = parent
        smin, smax = parent.s_range()
        if (smin, smax) == K:
            out.primary.append(d)
        elif newly_at is not None and smax == rat(newly_at) and top_vertices(parent) < 3:
            out.newly.append(d)
        else:
            out.chopped.append(d)
    return out


# --------------------------------------------------------------------------
# the half swap on [1/2, 1)

SWAP_UP = (HALF, -HALF)  # applied on v >= 0


def phi_half_point(p) -> tuple:
    x, v = p[0], p[1]
    if v >= 0:
        return (x + HALF, v - HALF)
    return (x - HALF, v + HALF)


def phi_half(s=None):
    """The piecewise translation swapping the upper and lower halves of the torus."""
    if s is not None and not (HALF <= rat(s) < 1):
        raise ValueError("the half swap is used for s in [1/2, 1)")
    return phi_half_point


def phi_half3(p) -> tuple:
    x, v = phi_half_point(p)
    return (x, v, 1 - rat(p[2]))


def _halves3():
    return (HalfSpace3(0, -1, 0, 0), (HALF, -HALF)), (HalfSpace3(0, 1, 0, 0), (-HALF, HALF))


def phi_half_poly3(P: Polytope3) -> list:
    """Image of a polytope under the 3D half swap, one convex piece per half."""
    out = []
    for h, (dx, dv) in _halves3():
        part = clip_many3(P, [h])
        if part is not None:
            out.append(map_vertices(part, lambda p, dx=dx, dv=dv: (p[0] + dx, p[1] + dv, 1 - p[2])))
    return out


def phi_half_poly2(P: Poly2) -> list:
    out = []
    for (a, b, c), (dx, dv) in (((0, -1, 0), (HALF, -HALF)), ((0, 1, 0), (-HALF, HALF))):
        part = clip_halfplane(P, a, b, c)
        if part is not None:
            out.append(part.translate(dx, dv))
    return out
