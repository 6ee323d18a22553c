from hypothesis import given
from hypothesis import strategies as st

from tetratwist.exactnum import rat
from tetratwist.geomkernel import locate, poly_area, poly_intersect
from tetratwist.torus import (
    CHART,
    CHART_AREA,
    TRIANGLES,
    Y_LABELS,
    Y_pieces3,
    build_hexagon,
    build_Y,
    hexagon_area,
    iota,
    project_pi,
    reduce_mod,
)

q = st.fractions(min_value=-6, max_value=6, max_denominator=50).map(lambda f: rat(f.numerator, f.denominator))


def test_chart_area():
    assert poly_area(CHART) == CHART_AREA == 2


def test_triangles_tile_chart():
    tris = TRIANGLES.all()
    assert sum((poly_area(T) for T in tris), rat(0)) == 2
    for i, A in enumerate(tris):
        for B in tris[i + 1 :]:
            assert poly_intersect(A, B) is None


@given(q, q)
def test_reduce_mod_lands_in_chart(x, v):
    p = reduce_mod((x, v))
    assert locate(CHART, p) >= 0
    assert -rat(1, 2) < p[1] <= rat(1, 2)
    # difference is a lattice vector a*(2,0) + b*(1,-1)
    dx, dv = p[0] - x, p[1] - v
    b = -dv
    assert b.denominator == 1 and ((dx - b) / 2).denominator == 1
    assert reduce_mod(p) == p


def test_iota_and_projection():
    p = (rat(1, 3), rat(-1, 5))
    assert iota(iota(p)) == p
    assert project_pi(p) == project_pi(iota(p))


def test_hexagon():
    H = build_hexagon(rat(1, 4))
    assert len(H) == 6
    # collapses to the triangle A2 at s = 0
    assert build_hexagon(0) == TRIANGLES.A2
    assert hexagon_area(0) == rat(1, 4)
    assert hexagon_area(rat(1, 4)) == rat(11, 32)


def test_Y_pieces_disjoint_and_3d_slices_agree():
    from tetratwist.geomkernel import slice_at_s

    s = rat(5, 12)
    Y = build_Y(s)
    assert tuple(Y) == Y_LABELS
    P3 = Y_pieces3(rat(7, 17), rat(5, 12))
    for lab in Y_LABELS:
        assert slice_at_s(P3[lab], s) == Y[lab]
