"""Standalone SVG rendering of a planar trace."""
from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .ahlwb import IterateTrace
from .errors import InputError, UnsupportedPlotError
from .geometry import Polyhedron

WIDTH = 640
MARK = 5.0
COLORS = {"A": "#d62728", "B": "#1f4fd6"}


def clip_polygon(poly: list[tuple[float, float]], c, d) -> list[tuple[float, float]]:
    """Sutherland-Hodgman clip of a convex polygon against c.x <= d."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp = c[0] * p[0] + c[1] * p[1] - d
        fq = c[0] * q[0] + c[1] * q[1] - d
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def bounding_box(trace: IterateTrace, inflate: float = 0.2) -> tuple[float, float, float, float]:
    pts = np.vstack([trace.a_array(), trace.b_array()]) if trace.b_points else trace.a_array()
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = np.maximum(hi - lo, 1.0)
    lo, hi = lo - inflate * span, hi + inflate * span
    return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])


def plot_trace(trace: IterateTrace, A: Polyhedron, B: Polyhedron, path: str | Path) -> Path:
    """Write an SVG with both polyhedra and the iterates.

    a-iterates are circles, b-iterates are squares; opacity grows linearly
    with the sweep index so recent points are darker.
    """
    if trace.dim != 2 or A.dim != 2 or B.dim != 2:
        raise UnsupportedPlotError(f"can only plot planar traces, got dimension {trace.dim}")
    x0, y0, x1, y1 = bounding_box(trace)
    scale = WIDTH / (x1 - x0)
    height = (y1 - y0) * scale

    def px(p):
        return (p[0] - x0) * scale, (y1 - p[1]) * scale

    box = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height:.1f}" '
        f'viewBox="0 0 {WIDTH} {height:.1f}">',
        f'<polygon class="frame" points="{_pts(box, px)}" fill="white" '
        f'stroke="#aaa" stroke-dasharray="4 3"/>',
    ]
    for name, poly in (("A", A), ("B", B)):
        region = box
        for h in poly:
            if not h.trivial:
                region = clip_polygon(region, h.normal, h.offset)
        if len(region) >= 3:
            parts.append(f'<polygon class="set-{name}" points="{_pts(region, px)}" '
                         f'fill="{COLORS[name]}" fill-opacity="0.2" stroke="none"/>')

    last = max(trace.num_sweeps, 1)
    for idx, p in trace.a_points:
        cx, cy = px(p)
        extra = ' stroke="#333" stroke-width="1.5"' if idx == 0 else ""
        parts.append(f'<circle class="a-iterate" cx="{cx:.2f}" cy="{cy:.2f}" r="{MARK}" '
                     f'fill="{COLORS["A"]}" fill-opacity="{idx / last:.3f}"{extra}/>')
    for idx, p in trace.b_points:
        cx, cy = px(p)
        parts.append(f'<rect class="b-iterate" x="{cx - MARK:.2f}" y="{cy - MARK:.2f}" '
                     f'width="{2 * MARK}" height="{2 * MARK}" fill="{COLORS["B"]}" '
                     f'fill-opacity="{idx / last:.3f}"/>')
    ax, ay = px(trace.a_points[0][1])
    parts.append(f'<text x="{ax + 8:.2f}" y="{ay + 4:.2f}" font-family="sans-serif" '
                 f'font-size="14">{escape("a₀")}</text>')
    parts.append("</svg>")

    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(parts) + "\n", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc
    return path


def _pts(poly, px) -> str:
    return " ".join("{:.2f},{:.2f}".format(*px(p)) for p in poly)
