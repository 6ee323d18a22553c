from hypothesis import given, settings
from hypothesis import strategies as st

from tetratwist.exactnum import rat
from tetratwist.geomkernel import (
    HalfSpace3,
    Poly2,
    Polytope3,
    clip_halfplane,
    contains3,
    contains_poly,
    hull3,
    intersect3,
    locate,
    poly_area,
    poly_intersect,
    poly_subtract,
    shear,
    slice_at_s,
    subtract3,
    union_is_convex,
)

UNIT = Poly2([(rat(0), rat(0)), (rat(1), rat(0)), (rat(1), rat(1)), (rat(0), rat(1))])
coord = st.fractions(min_value=-2, max_value=2, max_denominator=12).map(lambda f: rat(f.numerator, f.denominator))


def test_area_and_canonical_form():
    P = Poly2([(rat(1), rat(1)), (rat(0), rat(1)), (rat(0), rat(0)), (rat(1), rat(0))])
    assert P == UNIT and hash(P) == hash(UNIT)
    assert poly_area(UNIT) == 1


def test_collinear_vertices_dropped():
    P = Poly2([(rat(0), rat(0)), (rat(1, 2), rat(0)), (rat(1), rat(0)), (rat(1), rat(1)), (rat(0), rat(1))])
    assert len(P) == 4


def test_clip_and_locate():
    half = clip_halfplane(UNIT, 1, 0, rat(1, 2))  # x <= 1/2
    assert poly_area(half) == rat(1, 2)
    assert locate(UNIT, (rat(1, 2), rat(1, 2))) == 1
    assert locate(UNIT, (rat(1), rat(1, 2))) == 0
    assert locate(UNIT, (rat(2), rat(1, 2))) == -1
    assert clip_halfplane(UNIT, 1, 0, -1) is None


@settings(max_examples=60)
@given(coord, coord)
def test_subtract_partitions_area(dx, dv):
    Q = UNIT.translate(dx, dv)
    inter = poly_intersect(UNIT, Q)
    rest = poly_subtract(UNIT, Q)
    total = sum((poly_area(P) for P in rest), rat(0)) + (poly_area(inter) if inter else 0)
    assert total == 1
    for P in rest:
        assert contains_poly(UNIT, P)
        if inter is not None:
            i2 = poly_intersect(P, inter)
            assert i2 is None


def test_touching_polygons_do_not_intersect():
    assert poly_intersect(UNIT, UNIT.translate(1, 0)) is None


def cube():
    return Polytope3.box((rat(0), rat(0), rat(0)), (rat(1), rat(1), rat(1)))


def test_box_volume_and_hull():
    C = cube()
    assert C.volume() == 1
    H = hull3(list(C.verts) + [(rat(1, 2), rat(1, 2), rat(1, 2))])
    assert H == C
    T = hull3([(rat(0), rat(0), rat(0)), (rat(1), rat(0), rat(0)), (rat(0), rat(1), rat(0)), (rat(0), rat(0), rat(1))])
    assert T.volume() == rat(1, 6)


@settings(max_examples=40)
@given(coord, coord, coord)
def test_subtract3_partitions_volume(a, b, c):
    C = cube()
    D = shear(C, a, 0, b, 0)
    D = hull3([(x, v, s + c) for x, v, s in D.verts])
    inter = intersect3(C, D)
    rest = subtract3(C, D)
    vol = sum((P.volume() for P in rest), rat(0)) + (inter.volume() if inter else 0)
    assert vol == 1
    for P in rest:
        assert contains3(C, P)


def test_shear_is_s_dependent_translation():
    C = cube()
    S = shear(C, 1, 2, 0, 0)  # x -> x + 1 + s
    assert S.volume() == 1
    P = slice_at_s(S, rat(1, 2))
    assert P == UNIT.translate(rat(3, 2), 0)


def test_union_is_convex():
    C = cube()
    right = hull3([(x + 1, v, s) for x, v, s in C.verts])
    U = union_is_convex([C, right])
    assert U is not None and U.volume() == 2
    up = hull3([(x + 1, v + 1, s) for x, v, s in C.verts])
    assert union_is_convex([C, up]) is None


def test_halfspace_clip_volume():
    from tetratwist.geomkernel import clip_halfspace3

    P = clip_halfspace3(cube(), HalfSpace3(1, 1, 1, 1))  # x+v+s <= 1
    assert P.volume() == rat(1, 6)
