"""Exact re-runs of the renormalization proof obligations and certificate audits.

Every check returns a :class:`CheckReport`; a failing check always carries
witnesses (ids, polytopes, volumes) so that a failure can be inspected.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .bundle import (
    HALF,
    MaxDomain,
    Z_pieces,
    classify_domains,
    phi_bundle,
    phi_bundle_inverse_poly,
    phi_bundle_poly,
    phi_half_poly2,
    phi_half_poly3,
    phi_sim,
    x_domains,
)
from .exactnum import Rat, format_rat, parse_rat, rat
from .geomkernel import HalfSpace3, Poly2, Polytope3, clip_halfspace3, contains3, contains_poly, hull3, intersect3, poly_area, poly_intersect, shear
from .pet import ConcretePET, Piece, PETError, concrete_tetra, first_return, periodic_tiling, same_map
from .torus import build_Y

log = logging.getLogger(__name__)


# --------------------------------------------------------------------------
# reports


@dataclass
class Check:
    name: str
    ok: bool
    witnesses: list = field(default_factory=list)
    detail: str = ""


@dataclass
class CheckReport:
    title: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, witnesses=None, detail: str = "") -> Check:
        witnesses = list(witnesses or []) if not ok else []
        if not ok and not witnesses:
            witnesses = [detail or name]
        c = Check(name, bool(ok), witnesses, detail)
        self.checks.append(c)
        return c

    def extend(self, other: "CheckReport", prefix: Optional[str] = None) -> "CheckReport":
        prefix = other.title if prefix is None else prefix
        for c in other.checks:
            name = f"{prefix}: {c.name}" if prefix else c.name
            self.checks.append(Check(name, c.ok, c.witnesses, c.detail))
        return self

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def lines(self, max_witnesses: int = 3) -> list:
        out = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            tail = f" ({c.detail})" if c.detail else ""
            out.append(f"  [{'pass' if c.ok else 'FAIL'}] {c.name}{tail}")
            if not c.ok:
                for w in c.witnesses[:max_witnesses]:
                    out.append(f"      witness: {w}")
                if len(c.witnesses) > max_witnesses:
                    out.append(f"      ... {len(c.witnesses) - max_witnesses} more")
        return out

    def __str__(self):
        return "\n".join(self.lines())


def _fmt_pt(p) -> str:
    return "(" + ", ".join(format_rat(c) for c in p) + ")"


# --------------------------------------------------------------------------
# the four generic checks


def _key(P) -> tuple:
    return P.key() if isinstance(P, Polytope3) else P.body.key()


def check_correspondence(M2: list, N2: list, phi=None, name: str = "correspondence") -> CheckReport:
    """A perfect matching P_i = phi(Q_j) by exact vertex-set equality.

    ``phi(Q)`` maps a domain of N2 to a polytope (default: the bundle map on
    the domain's own piece).  Returns the matching in ``report.matching``.
    """
    if phi is None:
        phi = lambda d: phi_bundle_poly(d.piece, d.body)  # noqa: E731
    rep = CheckReport(name)
    rep.matching = []
    if len(M2) != len(N2):
        rep.add("equal sizes", False, [f"{len(M2)} vs {len(N2)}"])
    index = {}
    for i, P in enumerate(M2):
        index.setdefault((getattr(P, "piece", None), _key(P)), []).append(i)
    used = set()
    missing = []
    for j, Q in enumerate(N2):
        try:
            img = phi(Q)
        except (ValueError, ZeroDivisionError) as exc:
            missing.append(f"N2[{j}]: phi undefined ({exc})")
            continue
        cands = [i for i in index.get((getattr(Q, "piece", None), img.key()), []) if i not in used]
        if not cands:
            missing.append(f"N2[{j}] piece={getattr(Q, 'piece', None)} image {[_fmt_pt(v) for v in img.key()]} has no partner")
            continue
        used.add(cands[0])
        rep.matching.append((cands[0], j))
    unmatched = [f"M2[{i}] unmatched" for i in range(len(M2)) if i not in used]
    rep.add("every Q_j has a partner P_i = phi(Q_j)", not missing, missing, f"{len(rep.matching)} matched")
    rep.add("every P_i is hit", not unmatched, unmatched)
    return rep


def check_inclusion(pairs: list, name: str = "inclusion") -> CheckReport:
    """``pairs`` of (id, inner, outer): every vertex of inner lies in outer."""
    rep = CheckReport(name)
    bad = [pid for pid, inner, outer in pairs if not contains3(outer, inner)]
    rep.add(f"{len(pairs)} inclusions", not bad, bad)
    return rep


def check_inclusion_one(inner: Polytope3, outer: Polytope3) -> bool:
    return contains3(outer, inner)


def check_disjoint(polys: list, ids: Optional[list] = None, name: str = "disjoint interiors") -> CheckReport:
    rep = CheckReport(name)
    ids = ids or list(range(len(polys)))
    bad = []
    for a in range(len(polys)):
        for b in range(a + 1, len(polys)):
            q = intersect3(polys[a], polys[b])
            if q is not None and not q.flat and q.volume() > 0:
                bad.append(f"{ids[a]} & {ids[b]} overlap with volume {format_rat(q.volume())}")
    rep.add(f"{len(polys)} polytopes pairwise interior-disjoint", not bad, bad)
    return rep


def _vol(P) -> Rat:
    P = P.body if isinstance(P, MaxDomain) else P
    return P.volume()


def check_volume(lhs: list, rhs: list, name: str = "volume sums") -> CheckReport:
    rep = CheckReport(name)
    a = sum((_vol(P) for P in lhs), rat(0))
    b = sum((_vol(P) for P in rhs), rat(0))
    rep.add("sum vol(lhs) == sum vol(rhs)", a == b, [f"{format_rat(a)} != {format_rat(b)}"], f"{format_rat(a)} = {format_rat(b)}" if a == b else "")
    return rep


# --------------------------------------------------------------------------
# intervals for the two batteries

BATTERIES = {
    # name: (Z interval, Y interval, newly-appeared top in Z, in Y)
    "A23": ((rat(41, 99), rat(29, 70)), (rat(7, 17), rat(5, 12)), None, None),
    "A24": ((rat(53, 128), rat(41, 99)), (rat(9, 22), rat(7, 17)), rat(41, 99), rat(7, 17)),
}


def _battery_name(interval) -> str:
    if isinstance(interval, str):
        key = interval.upper().replace("_", "").replace("{", "").replace("}", "").replace(",", "")
        if key in BATTERIES:
            return key
        raise ValueError(f"unknown battery {interval!r}")
    lo, hi = rat(interval[0]), rat(interval[1])
    for k, (zi, _, _, _) in BATTERIES.items():
        if (lo, hi) == zi:
            return k
    raise ValueError(f"no battery for [{lo}, {hi}]")


def _F(d: MaxDomain) -> Polytope3:
    return shear(d.body, *d.transvec)


def _phi_inv_F(d: MaxDomain) -> Polytope3:
    # the return lands in the piece it started from, so the same branch applies
    return phi_bundle_inverse_poly(d.piece, _F(d))


def verify_lemma51(interval="A23", data=None) -> CheckReport:
    """Step 1 (non-primary domains) and Step 2 (primary domains) of the conjugacy proof.

    ``data`` may supply precomputed ``(Yc, Zc)`` classifications, e.g. for a
    negative control with mismatched inputs.
    """
    name = _battery_name(interval)
    zI, yI, z_newly, y_newly = BATTERIES[name]
    if data is None:
        Yc = classify_domains("Y", yI, newly_at=y_newly)
        Zc = classify_domains("Z", zI, newly_at=z_newly)
    else:
        Yc, Zc = data
    rep = CheckReport(f"verify_lemma51({name})")
    rep.add(
        "domain counts",
        True,
        detail=f"Y {Yc.counts()[0]} = {len(Yc.primary)} primary + {len(Yc.chopped)} chopped + {len(Yc.newly)} newly; "
        f"Z {Zc.counts()[0]} = {len(Zc.primary)} + {len(Zc.chopped)} + {len(Zc.newly)}",
    )

    # Step 1: M_2 <-> N_2
    M2, N2 = Yc.nonprimary, Zc.nonprimary
    corr = check_correspondence(M2, N2, name="step 1.1 correspondence")
    rep.extend(corr)
    if name == "A24":
        rep.extend(check_correspondence(Yc.newly, Zc.newly, name="newly-appeared correspondence"))
    P_ij, Qs, incl = [], [], []
    for i, j in corr.matching:
        Pij = _phi_inv_F(M2[i])
        P_ij.append(Pij)
        Qs.append(N2[j])
        incl.append((f"P_{i}/Q_{j}", Pij, _F(N2[j])))
    rep.extend(check_inclusion(incl, "step 1.2 inclusion"))
    rep.extend(check_disjoint(P_ij, name="step 1.3 disjoint"))
    rep.extend(check_volume(P_ij, N2, "step 1.4 volume"))

    # Step 2: residents
    P1, N1 = Yc.primary, Zc.primary
    images = [phi_bundle_poly(Q.piece, Q.body) for Q in N1]
    cover, orphans = [], []
    for i, P in enumerate(P1):
        j = next((j for j, Q in enumerate(N1) if Q.piece == P.piece and contains3(images[j], P.body)), None)
        if j is None:
            orphans.append(f"primary Y domain {i} ({P.piece}) lies in no phi(Q_j)")
        else:
            cover.append((i, j))
    rep.add("step 2.1 each P_i lies in some phi(Q_j)", not orphans, orphans, f"{len(cover)} of {len(P1)}")
    Pp, incl2 = [], []
    for i, j in cover:
        Ppi = _phi_inv_F(P1[i])
        Pp.append(Ppi)
        incl2.append((f"P'_{i}/Q_{j}", Ppi, _F(N1[j])))
    rep.extend(check_inclusion(incl2, "step 2.2 inclusion"))
    rep.extend(check_disjoint(Pp, name="step 2.3 disjoint"))
    rep.extend(check_volume(Pp, N1, "step 2.4 volume"))
    return rep


# --------------------------------------------------------------------------
# [1/2, 1): the half swap


def _phi3_pieces(P: Polytope3) -> list:
    return phi_half_poly3(P)


def verify_half_interval() -> CheckReport:
    """Refine the 24 domains over [0,1/2] against the swapped 22 domains over [1/2,1]."""
    rep = CheckReport("verify_half_interval")
    Pd = x_domains((HALF, rat(1)))
    Qd = x_domains((rat(0), HALF))
    rep.add("|P| = 22", len(Pd) == 22, [len(Pd)], str(len(Pd)))
    rep.add("|Q| = 24", len(Qd) == 24, [len(Qd)], str(len(Qd)))

    # phi is an involution on points
    probe = [(rat(a, 7), rat(b, 11), rat(c, 13)) for a in (-3, 1, 2) for b in (-5, -1, 2, 4) for c in (1, 6, 11)]
    probe = [p for p in probe if -1 <= p[0] + p[1] <= 1 and p[1] != 0]
    inv_bad = [p for p in probe if _phi3_twice(p) != p]
    rep.add("phi o phi = id", not inv_bad, inv_bad)

    # Q': Q_i kept when phi(Q_i) sits inside one P_j, otherwise split into the pieces phi(P_j) ∩ Q_i
    Qp = []
    for i, Q in enumerate(Qd):
        pieces = []
        for j, P in enumerate(Pd):
            for Pimg in _phi3_pieces(P.body):
                part = intersect3(Pimg, Q.body)
                if part is not None:
                    pieces.append((j, part))
        if len(pieces) == 1:
            Qp.append((i, pieces[0][0], Q.body))
        else:
            Qp.extend((i, j, part) for j, part in pieces)
    rep.add("|Q'| = 26", len(Qp) == 26, [len(Qp)], str(len(Qp)))

    # property 1: phi(Q'_k) inside some P_i; property 2: phi(F(Q'_k)) inside F(P_i)
    bad1, bad2, FQ = [], [], []
    for k, (i, j, body) in enumerate(Qp):
        Q, P = Qd[i], Pd[j]
        if not all(contains3(P.body, part) for part in _phi3_pieces(body)):
            bad1.append(f"Q'_{k}")
        img = shear(body, *Q.transvec)
        FQ.append(img)
        FP = shear(P.body, *P.transvec)
        if not all(contains3(FP, part) for part in _phi3_pieces(img)):
            bad2.append(f"Q'_{k}")
    rep.add("phi(Q'_k) lies in P_i", not bad1, bad1)
    rep.add("phi(F(Q'_k)) lies in F(P_i)", not bad2, bad2)
    rep.extend(check_disjoint(FQ, [f"F(Q'_{k})" for k in range(len(FQ))]))
    rep.extend(check_volume(FQ, [P.body for P in Pd], "sum vol F(Q') = sum vol P"))
    return rep


def _phi3_twice(p):
    from .bundle import phi_half3

    return phi_half3(phi_half3(p))


# --------------------------------------------------------------------------
# planar conjugacy checks


def _region_area(region: dict) -> Rat:
    return sum((poly_area(P) for P in region.values()), rat(0))


THEOREM21_RANGE = (rat(53, 128), rat(29, 70))


def verify_theorem21_at(s, max_steps: int = 1 << 14, require_hypothesis: bool = True) -> CheckReport:
    """First return on Z_s against the conjugated first return on Y_t, t = R(s).

    With ``require_hypothesis`` the report also fails when s lies outside the
    range where the theorem is claimed; the conjugacy itself is checked either way.
    """
    s = rat(s)
    rep = CheckReport(f"verify_theorem21_at({format_rat(s)})")
    if require_hypothesis:
        lo, hi = THEOREM21_RANGE
        rep.add(
            f"hypothesis s in [{format_rat(lo)}, {format_rat(hi)}]",
            lo <= s <= hi,
            [f"s = {format_rat(s)} is outside"],
        )
    try:
        phi = phi_sim(s)
        t = phi.target
        Z = Z_pieces(s)
        Y = build_Y(t)
        fz = first_return(concrete_tetra(s), Z, max_steps, per_piece=True)
        fy = first_return(concrete_tetra(t), Y, max_steps, per_piece=True)
    except (ValueError, PETError, ZeroDivisionError) as exc:
        rep.add("both first returns computable", False, [repr(exc)])
        return rep
    c = phi.scale
    bad = []
    covered = rat(0)
    for pz in fz.pieces:
        lab = pz.label[0]
        img = phi.poly(lab, pz.poly)
        want = (c * pz.shift[0], c * pz.shift[1])
        for py in fy.pieces:
            if py.label[0] != lab:
                continue
            q = poly_intersect(img, py.poly)
            if q is None:
                continue
            covered += poly_area(q)
            if py.shift != want:
                bad.append(f"{lab}: c*T_Z = {_fmt_pt(want)} but T_Y = {_fmt_pt(py.shift)}")
    rep.add("phi_s o f_s|Z = f_t|Y o phi_s on every overlap", not bad, bad, f"t = {format_rat(t)}")
    ya = _region_area(Y)
    rep.add("overlaps cover Y_t", covered == ya, [f"{format_rat(covered)} != {format_rat(ya)}"])
    return rep


def conjugate_by_half_swap(f: ConcretePET) -> ConcretePET:
    """phi o f o phi^{-1} as a piecewise translation."""
    out = []
    for pc in f.pieces:
        for dom in phi_half_poly2(pc.poly):
            # dom is phi(part); pull back, push forward, swap again
            back = _swap_back(dom)
            img = back.translate(*pc.shift)
            for part in phi_half_poly2(img):
                pre = _swap_back(part).translate(-pc.shift[0], -pc.shift[1])
                d2 = _swap_forward_piece(pre)
                shift = (part.verts[0][0] - d2.verts[0][0], part.verts[0][1] - d2.verts[0][1])
                out.append(Piece(d2, shift, pc.time, pc.label))
    return ConcretePET(out, 1 - f.s, f.region_area)


def _swap_back(P: Poly2) -> Poly2:
    # the swap is its own inverse away from v = 0
    parts = phi_half_poly2(P)
    if len(parts) != 1:
        raise ValueError("polygon straddles the swap line")
    return parts[0]


def _swap_forward_piece(P: Poly2) -> Poly2:
    return _swap_back(P)


def verify_theorem22_at(s) -> CheckReport:
    s = rat(s)
    rep = CheckReport(f"verify_theorem22_at({format_rat(s)})")
    if not (HALF <= s < 1):
        rep.add("s in [1/2, 1)", False, [format_rat(s)])
        return rep
    g = conjugate_by_half_swap(concrete_tetra(s))
    bad = same_map(g, concrete_tetra(1 - s))
    rep.add("phi o f_s o phi = f_{1-s}", not bad, [str(b) for b in bad[:5]], f"{len(g.pieces)} pieces")
    return rep


def compare_tilings_half_swap(s, budget: int = 20000) -> CheckReport:
    """Tiles of f_s pushed through the swap land in tiles of f_{1-s} with the same period."""
    s = rat(s)
    rep = CheckReport(f"tilings at {format_rat(s)} and {format_rat(1 - s)}")
    A = periodic_tiling(concrete_tetra(s), budget=budget)
    B = periodic_tiling(concrete_tetra(1 - s), budget=budget)
    rep.add("both tilings complete", A.complete and B.complete, [f"coverage {A.coverage()} / {B.coverage()}"])
    bad = []
    for tile in A.tiles:
        for part in phi_half_poly2(tile.poly):
            if not any(tb.period == tile.period and contains_poly(tb.poly, part) for tb in B.tiles):
                bad.append(f"period {tile.period} tile {tile.poly!r}")
    rep.add("swapped tiles sit inside tiles of equal period", not bad, bad, f"{len(A.tiles)} vs {len(B.tiles)} tiles")
    pa, pb = A.periods(), B.periods()
    rep.add("same tile count per period", pa == pb, [f"{pa} vs {pb}"])
    return rep


# --------------------------------------------------------------------------
# certificates


class CertificateError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(msg + where)
        self.line, self.col = line, col


@dataclass
class CertEntry:
    id: str
    iota: bool
    verts: list  # parsed vertices
    raw: list = field(default_factory=list)  # unparseable vertex lines, verbatim
    flags: list = field(default_factory=list)
    comments: list = field(default_factory=list)

    @property
    def usable(self) -> bool:
        return not self.flags and not self.raw


@dataclass
class Certificate:
    space: str
    interval: tuple
    entries: list
    header: list = field(default_factory=list)  # comment lines after the header
    text: Optional[str] = None  # original text, for a byte-identical round trip

    def by_id(self) -> dict:
        return {e.id: e for e in self.entries}

    def flagged(self) -> list:
        return [e.id for e in self.entries if not e.usable]


_VERT_RE = re.compile(r"^x=(\S+) v=(\S+) s=(\S+)$")
_ID_RE = re.compile(r"^id=(\S+) iota=([01])$")
_HEAD_RE = re.compile(r"^space=([XYZ]) interval=(\S+):(\S+)$")


def parse_certificate(text: str) -> Certificate:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise CertificateError("empty certificate", 1, 1)
    m = _HEAD_RE.match(lines[0].strip())
    if not m:
        raise CertificateError("bad header", 1, 1)
    try:
        interval = (parse_rat(m.group(2)), parse_rat(m.group(3)))
    except ValueError as exc:
        raise CertificateError(str(exc), 1, lines[0].find("interval=") + 1) from None
    cert = Certificate(m.group(1), interval, [], text=text)
    cur = None
    for no, line in enumerate(lines[1:], start=2):
        line = line.rstrip()
        if not line:
            continue
        if line.startswith("#"):
            (cur.comments if cur else cert.header).append(line)
            continue
        mi = _ID_RE.match(line)
        if mi:
            cur = CertEntry(mi.group(1), mi.group(2) == "1", [])
            cert.entries.append(cur)
            continue
        if cur is None:
            raise CertificateError("vertex before any id line", no, 1)
        if line.startswith("flag="):
            cur.flags.append(line[5:])
        elif line.startswith("raw "):
            cur.raw.append(line[4:])
        else:
            mv = _VERT_RE.match(line)
            if not mv:
                raise CertificateError(f"cannot parse {line!r}", no, 1)
            try:
                cur.verts.append(tuple(parse_rat(g) for g in mv.groups()))
            except ValueError:
                bad = next(g for g in mv.groups() if not _parses(g))
                raise CertificateError(f"bad rational {bad!r}", no, line.find(bad) + 1) from None
    if not cert.entries:
        raise CertificateError("certificate has no entries", len(lines), 1)
    return cert


def _parses(g) -> bool:
    try:
        parse_rat(g)
        return True
    except ValueError:
        return False


def format_certificate(cert: Certificate) -> str:
    lo, hi = cert.interval
    out = [f"space={cert.space} interval={format_rat(lo)}:{format_rat(hi)}"]
    out.extend(cert.header)
    for e in cert.entries:
        out.append("")
        out.append(f"id={e.id} iota={1 if e.iota else 0}")
        out.extend(e.comments)
        for x, v, s in e.verts:
            out.append(f"x={format_rat(x)} v={format_rat(v)} s={format_rat(s)}")
        out.extend(f"raw {r}" for r in e.raw)
        out.extend(f"flag={f}" for f in e.flags)
    return "\n".join(out) + "\n"


def load_certificate(path) -> Certificate:
    return parse_certificate(Path(path).read_text())


def save_certificate(cert: Certificate, path) -> None:
    text = cert.text if cert.text is not None else format_certificate(cert)
    Path(path).write_text(text)


CERT_FILES = {
    "y_nonprimary": "y_nonprimary_a23.cert",
    "z_nonprimary": "z_nonprimary_a23.cert",
    "y_newly": "y_newly_t23.cert",
    "z_newly": "z_newly_s23.cert",
}


def packaged_certificate(name: str) -> Certificate:
    fname = CERT_FILES.get(name, name)
    return parse_certificate(resources.files("tetratwist").joinpath("data", fname).read_text())


def domains_to_certificate(space: str, interval, domains: list, prefix: str = "D") -> Certificate:
    entries = [CertEntry(f"{prefix}_{k}", False, list(d.body.key()), comments=[f"# piece={d.piece} time={d.return_time}"]) for k, d in enumerate(domains)]
    return Certificate(space, (rat(interval[0]), rat(interval[1])), entries)


# Recomputation disagrees with a few listed vertices.  Corrections are kept
# next to the originals: (file, id) -> [(listed vertex, corrected vertex)].
CORRECTIONS = {
    ("z_nonprimary", "Q_6"): [((rat(2, 35), rat(1, 140), rat(29, 70)), (rat(2, 35), rat(1, 70), rat(29, 70)))],
    ("z_nonprimary", "Q_7"): [((rat(-197), rat(13, 198), rat(41, 99)), (rat(-197, 198), rat(13, 198), rat(41, 99)))],
    ("z_newly", "Q_1"): [((rat(-1), rat(17, 256), rat(53, 128)), (rat(-255, 256), rat(17, 256), rat(53, 128)))],
    ("z_newly", "Q_4"): [((rat(4, 99), rat(1, 13), rat(41, 99)), (rat(4, 99), rat(1, 33), rat(41, 99)))],
}


def audit_certificate(cert: Certificate) -> dict:
    """Flags derivable from the listed data alone, without recomputation.

    Returns id -> list of reasons (including the flags stored in the file).
    """
    lo, hi = cert.interval
    out = {}
    for e in cert.entries:
        reasons = list(e.flags) + [f"unparsed vertex {r}" for r in e.raw]
        outside = sorted({p[2] for p in e.verts if not (lo <= p[2] <= hi)})
        if outside:
            reasons.append("s outside the listed interval: " + ", ".join(format_rat(s) for s in outside))
        if len(e.verts) < 4:
            reasons.append("fewer than four vertices")
        out[e.id] = reasons
    return out


def audit_phi_pairing(ycert: Certificate, zcert: Certificate) -> dict:
    """Z entries whose listed vertices are not sent by phi onto a listed Y entry (or its iota image).

    Uses the listed data and the formula for phi only.
    """
    targets = set()
    for e in ycert.entries:
        targets.add(frozenset(e.verts))
        if e.iota:
            targets.add(frozenset((-x, -v, s) for x, v, s in e.verts))
    out = {}
    for e in zcert.entries:
        if not e.verts:
            continue
        hit = False
        for lab in ("A1", "A3", "H", "iA1", "iA3", "iH"):
            try:
                img = frozenset(phi_bundle(lab, p) for p in e.verts)
            except (ValueError, ZeroDivisionError):
                break
            if img in targets:
                hit = True
                break
        if not hit:
            out[e.id] = "no phi-partner among the listed Y entries"
    return out


def entry_polytopes(e: CertEntry, lo=None) -> list:
    """The listed polytope and its iota image, optionally chopped at s >= lo."""
    if len(e.verts) < 4:
        return []
    vs = [e.verts] + ([[(-x, -v, s) for x, v, s in e.verts]] if e.iota else [])
    out = []
    for V in vs:
        try:
            P = hull3(V)
        except ValueError:
            continue
        if P.flat:
            out.append(None)
            continue
        if lo is not None:
            P = clip_halfspace3(P, HalfSpace3(0, 0, -1, -rat(lo)))
        out.append(P)
    return out


def apply_corrections(cert: Certificate, name: str) -> Certificate:
    entries = []
    for e in cert.entries:
        fixes = CORRECTIONS.get((name, e.id))
        if fixes:
            table = dict(fixes)
            e = CertEntry(e.id, e.iota, [table.get(p, p) for p in e.verts], list(e.raw), [], e.comments + ["# corrected"])
        entries.append(e)
    return Certificate(cert.space, cert.interval, entries, list(cert.header))


@dataclass
class CertMatch:
    matched: list
    mismatched: list
    flagged: list
    unmatched_domains: list

    @property
    def ok(self) -> bool:
        """All entries that parse cleanly match, and only flagged ones do not."""
        return not self.mismatched


def match_certificate(cert: Certificate, domains: list, lo=None, flags: Optional[dict] = None) -> CertMatch:
    """Compare listed polytopes (chopped at s >= lo) with recomputed domains by canonical key."""
    flags = flags if flags is not None else audit_certificate(cert)
    keys = {}
    for k, d in enumerate(domains):
        keys[d.body.key()] = k
    matched, mismatched, flagged = [], [], []
    hit = set()
    for e in cert.entries:
        polys = entry_polytopes(e, lo)
        names = [e.id, f"iota({e.id})"][: max(1, len(polys))]
        for nm, P in zip(names, polys or [None]):
            k = keys.get(P.key()) if P is not None else None
            if k is not None:
                matched.append(nm)
                hit.add(k)
            elif flags.get(e.id):
                flagged.append((nm, flags[e.id]))
            else:
                mismatched.append(nm)
    unmatched = [k for k in range(len(domains)) if k not in hit]
    return CertMatch(matched, mismatched, flagged, unmatched)


# --------------------------------------------------------------------------
# slice oracle


def planar_partition(space: str, s, max_steps: int = 1 << 14) -> list:
    """(polygon, shift) pairs of the planar map whose s-slices the bundle domains should give."""
    s = rat(s)
    f = concrete_tetra(s)
    space = space.upper()
    if space == "X":
        g = f
    elif space == "Y":
        g = first_return(f, build_Y(s), max_steps, per_piece=True)
    elif space == "Z":
        g = first_return(f, Z_pieces(s), max_steps, per_piece=True)
    else:
        raise ValueError(f"unknown space {space!r}")
    return [(pc.poly, tuple(pc.shift)) for pc in g.pieces]


def slice_domains(domains: list, s) -> list:
    from .geomkernel import slice_at_s

    out = []
    for d in domains:
        P = slice_at_s(d.body, s)
        if P is not None:
            out.append((P, tuple(d.transvec.at(s))))
    return out


def check_slice_oracle(space: str, domains: list, params) -> CheckReport:
    """Slices of the 3D domains equal the directly computed planar partition."""
    rep = CheckReport(f"slice oracle ({space})")
    for s in params:
        s = rat(s)
        a = sorted(slice_domains(domains, s), key=lambda t: (t[0].verts, t[1]))
        b = sorted(planar_partition(space, s), key=lambda t: (t[0].verts, t[1]))
        sa = {(P.verts, sh) for P, sh in a}
        sb = {(P.verts, sh) for P, sh in b}
        wit = []
        if sa != sb:
            wit.append(f"{len(sa - sb)} slice pieces not in the planar map, {len(sb - sa)} planar pieces not sliced")
        rep.add(f"s = {format_rat(s)}", sa == sb and len(a) == len(b), wit, f"{len(a)} pieces")
    return rep
