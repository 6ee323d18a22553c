"""SVG output for partitions and tilings.

Geometry stays exact until here; v is turned into y = v*sqrt(3) only when
writing coordinates, rounded to 12 significant digits.
"""

from __future__ import annotations

import colorsys
import hashlib
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .exactnum import format_rat

SQRT3 = math.sqrt(3)


@dataclass(frozen=True)
class RenderSpec:
    width: int = 800
    color_mode: str = "by-piece"  # or "by-period"
    label: str = ""
    approximate: bool = False


def _num(x: float) -> str:
    return format(float(x), ".12g")


def color_for(key) -> str:
    """Deterministic colour from any key (period or piece index)."""
    h = int(hashlib.sha256(str(key).encode()).hexdigest()[:8], 16)
    r, g, b = colorsys.hls_to_rgb((h % 360) / 360, 0.55 + (h >> 9) % 20 / 100, 0.45 + (h >> 17) % 30 / 100)
    return "#%02x%02x%02x" % (round(r * 255), round(g * 255), round(b * 255))


def _poly_points(verts, ox: float, scale: float, y0: float) -> str:
    pts = []
    for x, v in verts:
        px = ox + (float(x) + 1.5) * scale
        py = y0 - float(v) * SQRT3 * scale
        pts.append(f"{_num(px)},{_num(py)}")
    return " ".join(pts)


def _centroid(verts) -> tuple:
    n = len(verts)
    return (sum(float(p[0]) for p in verts) / n, sum(float(p[1]) for p in verts) / n)


def svg_panels(panels: Sequence[list], spec: RenderSpec, numbers: bool = False) -> str:
    """``panels`` is a list of panels, each a list of (verts, colour key, text)."""
    k = len(panels)
    panel_w = spec.width / k
    scale = panel_w / 3.2
    height = scale * SQRT3 * 1.1 + 30
    y0 = 20 + scale * SQRT3 * 0.55
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(spec.width)}" height="{_num(height)}" '
        f'viewBox="0 0 {_num(spec.width)} {_num(height)}">'
    ]
    title = spec.label + (" (approximate)" if spec.approximate else "")
    if title:
        out.append(f'<text x="8" y="14" font-family="sans-serif" font-size="12">{title}</text>')
    for i, items in enumerate(panels):
        ox = i * panel_w + 0.05 * scale
        out.append(f'<g id="panel{i}">')
        for verts, ckey, text in items:
            out.append(
                f'<polygon points="{_poly_points(verts, ox, scale, y0)}" fill="{color_for(ckey)}" '
                f'stroke="#222" stroke-width="0.3"/>'
            )
            if numbers and text is not None:
                cx, cv = _centroid(verts)
                px = ox + (cx + 1.5) * scale
                py = y0 - cv * SQRT3 * scale
                out.append(
                    f'<text x="{_num(px)}" y="{_num(py)}" font-family="sans-serif" font-size="7" '
                    f'text-anchor="middle">{text}</text>'
                )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_partition(pet, spec: Optional[RenderSpec] = None) -> str:
    """Domains on the left, images on the right, with matching numbers."""
    spec = spec or RenderSpec(label=f"s = {format_rat(pet.s)}")
    left = [(pc.poly.verts, k, str(k)) for k, pc in enumerate(pet.pieces)]
    right = [(pc.image().verts, k, str(k)) for k, pc in enumerate(pet.pieces)]
    return svg_panels([left, right], spec, numbers=True)


def render_tiling(tiling, spec: Optional[RenderSpec] = None) -> str:
    spec = spec or RenderSpec(color_mode="by-period", label=f"s = {format_rat(tiling.s)}")
    items = [(t.poly.verts, t.period, None) for t in tiling.tiles]
    items += [(h.verts, "uncovered", None) for h in tiling.uncovered]
    return svg_panels([items], spec)


def polygon_json(verts) -> list:
    return [[format_rat(x), format_rat(v)] for x, v in verts]
