"""Static SVG pictures of the horoball packing in the upper half-plane."""

from __future__ import annotations

from fractions import Fraction

from ..moebius import INF
from ..parabolic import enumerate_points

__all__ = ["render_ford"]

_WIDTH = 800


def _fmt(x: float) -> str:
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_ford(P, Q, viewport=None, width: int = _WIDTH) -> str:
    """SVG of the circles of diameter ``1/D^2`` tangent at each point with ``D <= Q``.

    ``viewport`` is ``(x_min, x_max)`` or ``(x_min, x_max, y_max)``; it defaults to
    the finite vertex hull and a height of 1.2.  The horoball at infinity is the
    half-plane above ``Im z = 1``.  Output depends only on the inputs.
    """
    if Q <= 0:
        raise ValueError("Q must be positive")
    if viewport is None:
        lo, hi = P.finite_vertex_hull()
        viewport = (float(P.precision.mpf(lo)), float(P.precision.mpf(hi)))
    x0, x1 = float(viewport[0]), float(viewport[1])
    y1 = float(viewport[2]) if len(viewport) > 2 else 1.2
    if not x1 > x0 or y1 <= 0:
        raise ValueError("empty viewport")
    scale = width / (x1 - x0)
    height = max(1, round(y1 * scale))

    def sx(x):
        return (x - x0) * scale

    def sy(y):
        return height - y * scale

    window = (P.precision.mpf(x0), P.precision.mpf(x1)) if not P.exact else _exact_window(x0, x1)
    enum = enumerate_points(P, Q, window)
    circles = []
    for e in enum.points:
        if e.point is INF:
            continue
        p = float(P.precision.mpf(e.point))
        r = 0.5 / float(P.precision.mpf(e.D)) ** 2
        circles.append((p, r))
    circles.sort()

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>{P.name}: horoballs with D &lt;= {Q}</title>',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="0" y1="{_fmt(sy(0))}" x2="{width}" y2="{_fmt(sy(0))}" '
        'stroke="black" stroke-width="1"/>',
        f'<rect class="cusp" x="0" y="0" width="{width}" height="{_fmt(max(0.0, sy(1)))}" '
        'fill="#dde6f3" stroke="#335" stroke-width="0.5"/>',
    ]
    for p, r in circles:
        out.append(f'<circle cx="{_fmt(sx(p))}" cy="{_fmt(sy(r))}" r="{_fmt(r * scale)}" '
                   'fill="none" stroke="#335" stroke-width="0.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _exact_window(x0, x1):
    return (Fraction(x0).limit_denominator(1 << 20), Fraction(x1).limit_denominator(1 << 20))
