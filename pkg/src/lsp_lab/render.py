"""SVG rendering of polygon solutions.

Draws every pairwise vertex connection; diagonals of unit length are
shown in red (on top), all others in black.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .model import PolygonConfig

__all__ = ["RenderOptions", "render_svg"]

_BLACK = "#000000"
_RED = "#d62728"


@dataclass(frozen=True)
class RenderOptions:
    canvas_px: int = 800
    unit_scale_px: float = 700.0
    unit_tolerance: float = 1e-6

    def __post_init__(self):
        if self.canvas_px <= 0 or self.unit_scale_px <= 0:
            raise ValueError("canvas and scale must be positive")
        if self.unit_tolerance <= 0:
            raise ValueError("unit_tolerance must be positive")


def cartesian_vertices(config: PolygonConfig) -> list[tuple[float, float]]:
    """Vertex coordinates with the fixed vertex at the origin."""
    return [
        (r * math.cos(t), r * math.sin(t))
        for r, t in zip(config.r, config.theta)
    ]


def render_svg(
    config: PolygonConfig,
    opts: RenderOptions | None = None,
    objective: float | None = None,
) -> str:
    """Render one polygon as an SVG 1.1 document string.

    Segment colors are decided from the true coordinates, never from
    the rounded pixel positions.  Red segments are emitted after the
    black ones so they stay visible.
    """
    opts = opts or RenderOptions()
    verts = cartesian_vertices(config)
    n = config.n

    xs = [v[0] for v in verts]
    ys = [v[1] for v in verts]
    cx = (min(xs) + max(xs)) / 2.0
    cy = (min(ys) + max(ys)) / 2.0
    half = opts.canvas_px / 2.0

    def to_px(x: float, y: float) -> tuple[float, float]:
        # SVG y grows downward; flip so the polygon appears upright
        return (
            half + (x - cx) * opts.unit_scale_px,
            half - (y - cy) * opts.unit_scale_px,
        )

    black_lines = []
    red_lines = []
    for i in range(n):
        for j in range(i + 1, n):
            xi, yi = verts[i]
            xj, yj = verts[j]
            length = math.hypot(xj - xi, yj - yi)
            x1, y1 = to_px(xi, yi)
            x2, y2 = to_px(xj, yj)
            is_red = abs(length - 1.0) <= opts.unit_tolerance
            line = (
                f'  <line x1="{x1:.3f}" y1="{y1:.3f}" '
                f'x2="{x2:.3f}" y2="{y2:.3f}" '
                f'stroke="{_RED if is_red else _BLACK}" '
                f'stroke-width="{3 if is_red else 1}"/>'
            )
            (red_lines if is_red else black_lines).append(line)

    meta = f"n={n}"
    if objective is not None:
        meta += f" objective={objective:.10f}"

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{opts.canvas_px}" height="{opts.canvas_px}" '
        f'viewBox="0 0 {opts.canvas_px} {opts.canvas_px}">',
        f"  <title>{escape(meta)}</title>",
        *black_lines,
        *red_lines,
        f'  <text x="10" y="{opts.canvas_px - 10}" '
        f'font-family="monospace" font-size="16">{escape(meta)}</text>',
        "</svg>",
        "",
    ]
    return "\n".join(parts)
