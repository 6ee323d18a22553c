"""Acceptance criteria 1-9.

Each criterion is one or more ``test_criterion_<n>`` tests; the terminal
summary prints one PASS/FAIL line per criterion.  Two Y-count checks are
marked as strict expected failures: the recomputed counts (162/136 and
164/136) differ from the published ones (176/150 and 178/150) by exactly 14,
see the decisions ledger.  They are kept visible as FAIL lines.
"""

import random

import pytest

from conftest import random_chart_point, random_rational
from tetratwist import renorm, verify
from tetratwist.bundle import classify_domains, maximal_domains
from tetratwist.exactnum import Surd, rat
from tetratwist.geomkernel import poly_area
from tetratwist.pet import BoundaryHit, concrete_tetra, periodic_tiling, pieces_disjoint, tetra_point
from tetratwist.render import RenderSpec, render_partition, render_tiling
from tetratwist.torus import reduce_mod

HALF = rat(1, 2)
Y23 = (rat(7, 17), rat(5, 12))
Z23 = (rat(41, 99), rat(29, 70))
Y24 = (rat(9, 22), rat(7, 17))
Z24 = (rat(53, 128), rat(41, 99))


@pytest.fixture(scope="module")
def classes():
    return {
        "Y23": classify_domains("Y", Y23),
        "Z23": classify_domains("Z", Z23),
        "Y24": classify_domains("Y", Y24, newly_at=rat(7, 17)),
        "Z24": classify_domains("Z", Z24, newly_at=rat(41, 99)),
    }


def _z_flags(zname, yname):
    zc = verify.packaged_certificate(zname)
    flags = verify.audit_certificate(zc)
    for k, why in verify.audit_phi_pairing(verify.packaged_certificate(yname), zc).items():
        flags.setdefault(k, []).append(why)
    return zc, flags


def _vertex_form_ok(domains, ends):
    for d in domains:
        for x, v, s in d.body.verts:
            if s not in ends:
                return False
            q = s.denominator
            a, b = x * 2 * q, v * 2 * q
            if a.denominator != 1 or b.denominator != 1:
                return False
    return True


# ---------------------------------------------------------------- criterion 1


def test_criterion_1a_x_domains():
    doms = maximal_domains("X", (HALF, 1))
    print(f"X[1/2,1]: {len(doms)} domains")
    assert len(doms) == 22
    assert _vertex_form_ok(doms, {HALF, rat(1)})


@pytest.mark.xfail(strict=True, reason="recomputed Y(bar A23) = 162 / 136, published 176 / 150 (+14)")
def test_criterion_1b_y_counts(classes):
    total, primary, chopped, newly = classes["Y23"].counts()
    print(f"Y(bar A23): {total} domains, {primary} primary, {chopped + newly} non-primary")
    assert (total, primary) == (176, 150)


def test_criterion_1b_y_nonprimary_list(classes):
    c = classes["Y23"]
    assert len(c.nonprimary) == 26
    m = verify.match_certificate(verify.packaged_certificate("y_nonprimary"), c.nonprimary, lo=Y23[0])
    print(f"P-list: {len(m.matched)} matched, {len(m.flagged)} flagged, {len(m.mismatched)} mismatched")
    assert m.ok and len(m.matched) + len(m.flagged) == 26 and not m.unmatched_domains


def test_criterion_1c_z_counts_and_list(classes):
    c = classes["Z23"]
    assert c.counts() == (162, 136, 26, 0)
    zc, flags = _z_flags("z_nonprimary", "y_nonprimary")
    m = verify.match_certificate(zc, c.nonprimary, lo=Z23[0], flags=flags)
    print(f"Q-list: {len(m.matched)} matched, {len(m.flagged)} flagged: {[n for n, _ in m.flagged]}")
    assert m.ok and len(m.matched) + len(m.flagged) == 26
    # every domain the flagged entries fail to reach is still a domain we computed
    assert len(m.unmatched_domains) == len(m.flagged)


@pytest.mark.xfail(strict=True, reason="recomputed Y(bar A24) = 164 / 136, published 178 / 150 (+14)")
def test_criterion_1d_y_counts(classes):
    total, primary, _, _ = classes["Y24"].counts()
    print(f"Y(bar A24): {total} domains, {primary} primary")
    assert (total, primary) == (178, 150)


def test_criterion_1d_z_counts(classes):
    total, primary, chopped, newly = classes["Z24"].counts()
    print(f"Z(A24): {primary} primary + {chopped + newly} non-primary ({chopped} chopped, {newly} newly)")
    assert (primary, chopped + newly, chopped, newly) == (136, 28, 12, 16)


def test_criterion_1d_newly_lists(classes):
    y = verify.match_certificate(verify.packaged_certificate("y_newly"), classes["Y24"].newly, lo=Y24[0])
    zc, flags = _z_flags("z_newly", "y_newly")
    z = verify.match_certificate(zc, classes["Z24"].newly, lo=Z24[0], flags=flags)
    print(f"newly Y: {len(y.matched)} matched; newly Z: {len(z.matched)} matched, {len(z.flagged)} flagged")
    assert len(classes["Y24"].newly) == len(classes["Z24"].newly) == 16
    assert y.ok and len(y.matched) == 16
    # the Z list carries one entry without its iota marker, so it lists 15 polytopes
    listed = sum(1 + bool(e.iota) for e in zc.entries)
    assert z.ok and len(z.matched) + len(z.flagged) == listed


# ---------------------------------------------------------------- criterion 2


@pytest.mark.parametrize("name", ["A23", "A24"])
def test_criterion_2_conjugacy_batteries(name):
    rep = verify.verify_lemma51(name)
    print(rep)
    assert rep.passed


def test_criterion_2_half_interval():
    rep = verify.verify_half_interval()
    print(rep)
    assert rep.passed
    sizes = {c.name: c.detail for c in rep.checks}
    assert sizes["|P| = 22"] == "22" and sizes["|Q| = 24"] == "24" and sizes["|Q'| = 26"] == "26"


# ---------------------------------------------------------------- criterion 3


@pytest.mark.parametrize("s", ["41/99", "2071/5000", "29/70"])
def test_criterion_3_first_return_conjugacy(s):
    assert verify.verify_theorem21_at(rat(s)).passed


@pytest.mark.parametrize("s", ["4/5", "3/5", "9/14"])
def test_criterion_3_half_swap_conjugacy(s):
    assert verify.verify_theorem22_at(rat(s)).passed


def test_criterion_3_negative_control():
    rep = verify.verify_theorem21_at(rat(1, 3))
    print(rep)
    assert not rep.passed


# ---------------------------------------------------------------- criterion 4


def test_criterion_4_coding_and_expansions():
    assert [tuple(c) for c in renorm.coding_sequence(rat(5, 23))] == [(2, 0, 1), (2, 1, 1), (0, 1, -1), (2, 1, 1)]
    assert str(renorm.split_expansion(rat(5, 23))) == "(0;2,0,2,1,0,1,-2,-1)"
    assert str(renorm.split_expansion(rat(45, 178))) == "(0;2,0,0,1,-2,-21,-2)"
    assert renorm.signed_cf(renorm.split_expansion(rat(45, 178)).terms) == (2, 1, -2, -21, -2)


def _all_fractions(qmax):
    from math import gcd

    for q in range(2, qmax + 1):
        for p in range(1, q):
            if gcd(p, q) == 1:
                yield rat(p, q)


def test_criterion_4_roundtrip():
    for s in _all_fractions(200):
        assert renorm.eval_coding(renorm.coding_sequence(s)) == s


def test_criterion_4_denominators_drop():
    for s in _all_fractions(200):
        qs = renorm.lemma31_denominators(s)
        assert qs[-1] in (1, 2)
        for k in range(len(qs) - 2):
            assert qs[k + 2] <= qs[k] - 2, (s, qs)


# ---------------------------------------------------------------- criterion 5


@pytest.mark.parametrize("n", range(1, 9))
def test_criterion_5_fixed_points(n):
    s = renorm.fixed_point(n)
    assert isinstance(s, Surd) and renorm.R(s) == s


def test_criterion_5_sqrt2():
    s = renorm.fixed_point(2)
    assert s == Surd.sqrt(2) - 1
    assert rat(53, 128) <= s <= rat(29, 70)


# ---------------------------------------------------------------- criterion 6


def test_criterion_6_approximation_bound():
    s = renorm.sqrt2_minus_1()
    exp = renorm.split_expansion(s, max_terms=20)
    convs = renorm.convergents(exp)[1:]
    assert len(convs) == 20
    for p, q in convs:
        err = s - rat(p, q)
        bound = rat(6, q * q)
        # exact sign tests in Q(sqrt 2), cross-checked with rational enclosures
        assert (bound - err).sign() >= 0 and (bound + err).sign() >= 0
        lo, hi = err.bounds(80)
        assert -bound <= lo and hi <= bound


# ---------------------------------------------------------------- criterion 7


def test_criterion_7_pet_properties():
    rng = random.Random(12345)
    params = set()
    while len(params) < 50:
        params.add(random_rational(rng, 500))
    for s in sorted(params):
        f = concrete_tetra(s)
        assert f.total_area() == 2
        imgs = f.images()
        assert sum((poly_area(P) for P in imgs), rat(0)) == 2
        assert pieces_disjoint(imgs)
        checked = 0
        for _ in range(1000):
            p = random_chart_point(rng)
            try:
                want = tetra_point(s, p)
                got = reduce_mod(f(p))
            except BoundaryHit:
                continue
            assert got == want, (s, p)
            checked += 1
        assert checked >= 990


# ---------------------------------------------------------------- criterion 8

FIGURE_PARAMS = ["5/13", "4/13", "68/157", "4/5", "1/5"]


def _svg_pair(s):
    f = concrete_tetra(s)
    T = periodic_tiling(f)
    assert T.complete
    return render_partition(f), render_tiling(T)


@pytest.mark.slow
@pytest.mark.parametrize("s", FIGURE_PARAMS)
def test_criterion_8_figures_deterministic(s, tmp_path):
    s = rat(s)
    a = _svg_pair(s)
    b = _svg_pair(s)
    assert a == b
    (tmp_path / "partition.svg").write_text(a[0])
    (tmp_path / "tiling.svg").write_text(a[1])


@pytest.mark.slow
def test_criterion_8_convergent_render():
    exp = renorm.split_expansion(renorm.sqrt2_minus_1(), max_terms=5)
    p, q = renorm.convergents(exp)[-1]
    s = rat(p, q)
    spec = RenderSpec(label=f"s = {p}/{q}", approximate=True)
    runs = [render_tiling(periodic_tiling(concrete_tetra(s)), spec) for _ in range(2)]
    assert runs[0] == runs[1] and "(approximate)" in runs[0]


def test_criterion_8_half_swap_tilings():
    rep = verify.compare_tilings_half_swap(rat(4, 5))
    print(rep)
    assert rep.passed


# ---------------------------------------------------------------- criterion 9

SLICE_LISTS = [
    ("X", (HALF, rat(1))),
    ("X", (rat(0), HALF)),
    ("Y", Y23),
    ("Z", Z23),
    ("Y", Y24),
    ("Z", Z24),
]


@pytest.mark.parametrize("space,interval", SLICE_LISTS, ids=lambda v: str(v) if isinstance(v, str) else None)
def test_criterion_9_slice_oracle(space, interval):
    rng = random.Random(hash((space, str(interval))) & 0xFFFF)
    lo, hi = interval
    params = [random_rational(rng, 3000, lo, hi) for _ in range(5)]
    doms = maximal_domains(space, interval)
    rep = verify.check_slice_oracle(space, doms, params)
    print(rep)
    assert rep.passed
