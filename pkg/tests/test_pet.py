import random

import pytest

from conftest import random_chart_point, random_rational
from tetratwist.exactnum import rat
from tetratwist.geomkernel import poly_area
from tetratwist.pet import (
    BoundaryHit,
    ConcretePET,
    PETError,
    base_map_concrete,
    concrete_tetra,
    first_return,
    is_pet,
    periodic_tile,
    periodic_tiling,
    pieces_disjoint,
    same_map,
    tetra_pet,
    tetra_point,
)
from tetratwist.torus import build_Y, reduce_mod


def test_base_maps_are_pets():
    for i in range(3):
        assert is_pet(base_map_concrete(i, rat(2, 7)))


def test_tetra_is_pet_at_fixed_values():
    for s in ["1/3", "5/13", "41/99", "4/5"]:
        assert is_pet(concrete_tetra(rat(s)))


def test_pointwise_agreement(rng):
    s = rat(5, 13)
    f = concrete_tetra(s)
    hits = 0
    for _ in range(300):
        p = random_chart_point(rng)
        try:
            want = tetra_point(s, p)
            got = reduce_mod(f(p))
        except BoundaryHit:
            continue
        assert got == want
        hits += 1
    assert hits > 250


def test_symbolic_slices_match_concrete():
    I = (rat(7, 17), rat(5, 12))
    F = tetra_pet(I)
    for s in [rat(2, 5) + rat(1, 100), rat(41, 99), rat(3, 7)]:
        if not (I[0] <= s <= I[1]):
            continue
        assert not same_map(F.at(s), concrete_tetra(s))
    assert F.volume() == 2 * (I[1] - I[0])


def test_first_return_preserves_area():
    s = rat(5, 12)
    Y = build_Y(s)
    g = first_return(concrete_tetra(s), Y, per_piece=True)
    assert is_pet(g)
    assert g.total_area() == sum((poly_area(P) for P in Y.values()), rat(0))


def test_periodic_tile_contains_seed():
    f = concrete_tetra(rat(1, 5))
    n, T = periodic_tile(f, (rat(1, 101), rat(1, 103)))
    assert n >= 1 and poly_area(T) > 0


def test_tiling_small_parameter_complete():
    T = periodic_tiling(concrete_tetra(rat(1, 5)))
    assert T.complete and T.coverage() == 1
    assert pieces_disjoint([t.poly for t in T.tiles])


def test_locate_errors():
    f = concrete_tetra(rat(1, 3))
    with pytest.raises(PETError):
        f((rat(5), rat(0)))


def test_random_parameters_area_and_disjointness():
    rng = random.Random(7)
    for _ in range(5):
        s = random_rational(rng, 60)
        f = concrete_tetra(s)
        assert isinstance(f, ConcretePET) and is_pet(f)
