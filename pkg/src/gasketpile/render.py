"""Deterministic rendering of configurations as PPM rasters or SVG.

Vertices are drawn as filled discs at their planar positions
(a + b/2, b*sqrt(3)/2); chip counts map to colors: 0 light gray, 1 green,
2 red, 3 blue, 4 or more black.  Output bytes depend only on the input
configuration and the render options.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .sandpile import Configuration

PALETTE = {
    0: (200, 200, 200),
    1: (0, 170, 0),
    2: (220, 50, 50),
    3: (60, 90, 220),
}
OVERFULL_COLOR = (0, 0, 0)
BACKGROUND = (255, 255, 255)


def color_for(chips: int) -> tuple[int, int, int]:
    return PALETTE.get(chips, OVERFULL_COLOR)


@dataclass(frozen=True)
class RenderSpec:
    fmt: str = "ppm"  # "ppm" or "svg"
    scale: int = 12  # pixels per unit edge
    margin: int = 8
    radius_frac: float = 0.33  # disc radius as a fraction of scale


def _positions(conf: Configuration, spec: RenderSpec):
    half_sqrt3 = math.sqrt(3) / 2
    pts = []
    for a, b in conf.graph.coords:
        x = (a + b / 2) * spec.scale + spec.margin
        y = b * half_sqrt3 * spec.scale
        pts.append((x, y))
    return pts


def render(conf: Configuration, spec: RenderSpec = RenderSpec()) -> bytes:
    if spec.fmt == "ppm":
        return render_ppm(conf, spec)
    if spec.fmt == "svg":
        return render_svg(conf, spec)
    raise ValueError("format must be 'ppm' or 'svg'")


def render_ppm(conf: Configuration, spec: RenderSpec = RenderSpec()) -> bytes:
    side = 1 << conf.graph.level
    width = math.ceil(side * spec.scale) + 2 * spec.margin + 1
    height = math.ceil(side * spec.scale * math.sqrt(3) / 2) + 2 * spec.margin + 1
    rows = bytearray(BACKGROUND * width * height)
    radius = max(1.0, spec.scale * spec.radius_frac)
    r_int = math.ceil(radius)
    r2 = radius * radius
    for (x, y), chips in zip(_positions(conf, spec), conf.chips):
        color = bytes(color_for(chips))
        # Flip vertically: image row 0 is the top of the triangle.
        py = height - 1 - (round(y) + spec.margin)
        px = round(x)
        for dy in range(-r_int, r_int + 1):
            iy = py + dy
            if not 0 <= iy < height:
                continue
            for dx in range(-r_int, r_int + 1):
                if dx * dx + dy * dy > r2:
                    continue
                ix = px + dx
                if 0 <= ix < width:
                    off = 3 * (iy * width + ix)
                    rows[off : off + 3] = color
    header = f"P6\n{width} {height}\n255\n".encode()
    return header + bytes(rows)


def render_svg(conf: Configuration, spec: RenderSpec = RenderSpec()) -> bytes:
    side = 1 << conf.graph.level
    width = side * spec.scale + 2 * spec.margin
    height = math.ceil(side * spec.scale * math.sqrt(3) / 2) + 2 * spec.margin
    radius = max(1.0, spec.scale * spec.radius_frac)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    for (x, y), chips in zip(_positions(conf, spec), conf.chips):
        r, g, b = color_for(chips)
        cy = height - spec.margin - y
        lines.append(
            f'<circle cx="{x:.2f}" cy="{cy:.2f}" r="{radius:.2f}" fill="rgb({r},{g},{b})"/>'
        )
    lines.append("</svg>\n")
    return "\n".join(lines).encode()
