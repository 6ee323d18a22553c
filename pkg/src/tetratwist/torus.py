"""The fixed stage: the torus chart, lattice, the eight triangles, H_s and Y_s.

Coordinates are v-coordinates (x, v) with physical y = v*sqrt(3).  The chart
is the parallelogram with corners +-(-3/2, 1/2), +-(1/2, 1/2), i.e.
``-1/2 <= v <= 1/2`` and ``-1 <= x + v <= 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .exactnum import Rat, rat, rat_floor
from .geomkernel import HalfSpace3, Poly2, Polytope3, from_halfspaces, poly_area, poly_intersect

HALF = rat(1, 2)

# lattice generators in v-coordinates: (2, 0) and (1, -sqrt 3) -> (1, -1)
LATTICE = ((2, 0), (1, -1))

CHART_HALFPLANES = (
    (rat(0), rat(1), HALF),
    (rat(0), rat(-1), HALF),
    (rat(1), rat(1), rat(1)),
    (rat(-1), rat(-1), rat(1)),
)

CHART = Poly2([(-HALF, -HALF), (rat(3, 2), -HALF), (HALF, HALF), (rat(-3, 2), HALF)])

CHART_AREA = rat(2)


def lattice_vector(a: int, b: int) -> tuple:
    """a*(2, 0) + b*(1, -1)."""
    return (rat(2 * a + b), rat(-b))


# every translate needed to bring a shifted chart piece back into the chart
WRAPS = tuple((a, b) for a in (-1, 0, 1) for b in (-1, 0, 1))


def reduce_mod(p) -> tuple:
    """Representative of ``p`` mod the lattice, in the chart.

    Boundary convention: ``-1/2 < v <= 1/2`` and ``-1 <= x + v < 1``.
    """
    x, v = rat(p[0]), rat(p[1])
    k = -rat_floor(HALF - v)  # ceil(v - 1/2)
    x, v = x + k, v - k
    m = rat_floor((x + v + 1) / 2)
    return (x - 2 * m, v)


def iota(p) -> tuple:
    return (-p[0], -p[1])


def iota_poly(P: Poly2) -> Poly2:
    return Poly2([iota(p) for p in P.verts])


def project_pi(p) -> tuple:
    """Double cover projection: the test y >= sqrt(3) x reads v >= x."""
    x, v = rat(p[0]), rat(p[1])
    if v >= x:
        return (x, v)
    return (-x, -v)


@dataclass(frozen=True)
class TriangleSet:
    A0: Poly2
    A1: Poly2
    A2: Poly2
    A3: Poly2
    iA0: Poly2
    iA1: Poly2
    iA2: Poly2
    iA3: Poly2

    def named(self) -> dict:
        return {k: getattr(self, k) for k in ("A0", "A1", "A2", "A3", "iA0", "iA1", "iA2", "iA3")}

    def all(self) -> list:
        return list(self.named().values())


def build_triangles() -> TriangleSet:
    a1, a2, a3 = (rat(-1), rat(0)), (-HALF, HALF), (rat(0), rat(0))
    A0 = Poly2([a1, a2, a3])
    A1 = Poly2([a1, a2, (rat(-3, 2), HALF)])
    A2 = Poly2([a2, a3, (HALF, HALF)])
    A3 = Poly2([a1, a3, (-HALF, -HALF)])
    return TriangleSet(A0, A1, A2, A3, *(iota_poly(P) for P in (A0, A1, A2, A3)))


TRIANGLES = build_triangles()


def varsigma(s, p) -> tuple:
    """Reflection about the line x = -s/2."""
    return (-rat(s) - p[0], p[1])


def hexagon_vertices(s) -> list:
    s = rat(s)
    V0 = (rat(0), rat(0))
    V1 = ((1 - s) / 2, (1 - s) / 2)
    V2 = (HALF - s, HALF)
    return [V0, V1, V2, varsigma(s, V2), varsigma(s, V1), varsigma(s, V0)]


def build_hexagon(s) -> Poly2:
    """The semi-regular hexagon H_s; at s = 0 it collapses onto the triangle A2."""
    s = rat(s)
    if not (0 <= s < HALF):
        raise ValueError(f"H_s needs 0 <= s < 1/2, got {s}")
    return Poly2(hexagon_vertices(s))


def hexagon_halfspaces3() -> list:
    """H_s as half-spaces in (x, v, s); valid for 0 <= s < 1/2."""
    return [
        HalfSpace3(1, -1, 0, 0),  # x - v <= 0
        HalfSpace3(1, 1, 1, 1),  # x + v <= 1 - s
        HalfSpace3(0, 1, 0, HALF),
        HalfSpace3(-1, 1, 0, 1),  # v - x <= 1
        HalfSpace3(-1, -1, -1, 0),  # x + v >= -s
        HalfSpace3(0, -1, 0, 0),
    ]


Y_LABELS = ("A1", "A3", "H", "iA1", "iA3", "iH")


def build_Y(s) -> dict:
    """Y_s = A1 u A3 u H_s and their iota-images, keyed by label."""
    T = TRIANGLES
    H = build_hexagon(s)
    pieces = {"A1": T.A1, "A3": T.A3, "H": H, "iA1": T.iA1, "iA3": T.iA3, "iH": iota_poly(H)}
    _check_disjoint(pieces)
    return pieces


def _check_disjoint(pieces: dict) -> None:
    items = list(pieces.items())
    for i, (a, P) in enumerate(items):
        for b, Q in items[i + 1 :]:
            if poly_intersect(P, Q) is not None:
                raise RuntimeError(f"pieces {a} and {b} overlap")


def hexagon_area(s) -> Rat:
    return poly_area(build_hexagon(s))


def chart_halfspaces3() -> list:
    return [HalfSpace3(a, b, 0, c) for a, b, c in CHART_HALFPLANES]


def _iota_halfspace(h: HalfSpace3) -> HalfSpace3:
    return HalfSpace3(-h[0], -h[1], h[2], h[3])


def Y_pieces3(lo, hi) -> dict:
    """The six polytopes of the Y-bundle over [lo, hi] (lo < hi < 1/2)."""
    lo, hi = rat(lo), rat(hi)
    if not (0 <= lo < hi < HALF):
        raise ValueError("Y-bundle needs 0 <= lo < hi < 1/2")
    T = TRIANGLES
    hexa = from_halfspaces(hexagon_halfspaces3() + [HalfSpace3(0, 0, 1, hi), HalfSpace3(0, 0, -1, -lo)])
    ihexa = from_halfspaces(
        [_iota_halfspace(h) for h in hexagon_halfspaces3()]
        + [HalfSpace3(0, 0, 1, hi), HalfSpace3(0, 0, -1, -lo)]
    )
    return {
        "A1": Polytope3.prism(T.A1, lo, hi),
        "A3": Polytope3.prism(T.A3, lo, hi),
        "H": hexa,
        "iA1": Polytope3.prism(T.iA1, lo, hi),
        "iA3": Polytope3.prism(T.iA3, lo, hi),
        "iH": ihexa,
    }


def chart_prism(lo, hi) -> Polytope3:
    return Polytope3.prism(CHART, lo, hi)


def iota3(p) -> tuple:
    return (-p[0], -p[1], p[2])


def which_piece(pieces: dict, p) -> Optional[str]:
    from .geomkernel import locate

    for name, P in pieces.items():
        if locate(P, p) == 1:
            return name
    return None
