from tetratwist.exactnum import rat
from tetratwist.pet import concrete_tetra, periodic_tiling
from tetratwist.render import RenderSpec, color_for, polygon_json, render_partition, render_tiling


def test_partition_svg_is_deterministic():
    f = concrete_tetra(rat(5, 13))
    a = render_partition(f)
    b = render_partition(concrete_tetra(rat(5, 13)))
    assert a == b
    assert a.startswith("<svg") and a.count("<polygon") == 2 * len(f.pieces)


def test_tiling_svg_and_approximate_label():
    T = periodic_tiling(concrete_tetra(rat(1, 5)))
    svg = render_tiling(T, RenderSpec(label="near", approximate=True))
    assert "(approximate)" in svg
    assert svg.count("<polygon") == len(T.tiles)


def test_colours_are_stable_hex():
    assert color_for(3) == color_for(3)
    assert len(color_for("x")) == 7 and color_for("x").startswith("#")


def test_polygon_json_exact():
    f = concrete_tetra(rat(1, 3))
    js = polygon_json(f.pieces[0].poly.verts)
    assert all(isinstance(c, str) for pt in js for c in pt)
