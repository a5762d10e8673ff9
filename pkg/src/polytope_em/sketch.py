"""Static SVG pictures of planar decompositions.

Coordinates are rounded floats and only meant for looking at; nothing here
feeds back into a computation.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .decomposition import wall_hyperplanes
from .polytope import Polytope

SIZE = 480
PAD = 1.5


def _view(P: Polytope, eps):
    lo, hi = P.bounding_box()
    pts = [lo, hi] + ([eps] if eps is not None else [])
    xs = [float(p[0]) for p in pts]
    ys = [float(p[1]) for p in pts]
    x0, x1 = min(xs) - PAD, max(xs) + PAD
    y0, y1 = min(ys) - PAD, max(ys) + PAD
    span = max(x1 - x0, y1 - y0)
    return x0, y0, span


def _clip_line(c, c0, box):
    """Segment of c.x + c0 = 0 inside the square box (x0, y0, span)."""
    x0, y0, s = box
    a, b, k = float(c[0]), float(c[1]), float(c0)
    pts = []
    for x in (x0, x0 + s):
        if b:
            y = -(a * x + k) / b
            if y0 <= y <= y0 + s:
                pts.append((x, y))
    for y in (y0, y0 + s):
        if a:
            x = -(b * y + k) / a
            if x0 <= x <= x0 + s:
                pts.append((x, y))
    return pts[:2] if len(pts) >= 2 else None


def render_svg(P: Polytope, eps, terms) -> str:
    box = _view(P, eps)
    x0, y0, span = box
    scale = SIZE / span

    def tx(p):
        return (float(p[0]) - x0) * scale, (y0 + span - float(p[1])) * scale

    def line(a, b, attrs):
        (ax, ay), (bx, by) = tx(a), tx(b)
        return f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" {attrs}/>'

    def circle(p, attrs):
        x, y = tx(p)
        return f'<circle cx="{x:.2f}" cy="{y:.2f}" {attrs}/>'

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        "<!-- floating point rendering; exact data lives in the JSON reports -->",
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    for c, c0 in wall_hyperplanes(P):
        seg = _clip_line(c, c0, box)
        if seg:
            out.append(line(seg[0], seg[1], 'class="wall" stroke="#bbb" stroke-dasharray="4 3"'))
    # polygon in cyclic order around the centroid
    cx = sum(v[0] for v in P.vertices) / len(P.vertices)
    cy = sum(v[1] for v in P.vertices) / len(P.vertices)
    ring = sorted(P.vertices, key=lambda v: math.atan2(float(v[1] - cy), float(v[0] - cx)))
    out.append(f'<polygon points="{" ".join("%.2f,%.2f" % tx(v) for v in ring)}" fill="#dde8f7" stroke="#246" stroke-width="2"/>')
    for t in terms:
        F = t.face
        verts = [P.vertices[k] for k in F.vertices]
        apex = tuple(sum(v[i] for v in verts) / len(verts) for i in range(2))
        colour = "#c33" if t.sign < 0 else "#393"
        opacity = "1" if t.phi else "0.25"
        out.append(f'<g class="cone" data-face="{sorted(F.facets)}" data-sign="{t.sign}" data-phi="{t.phi}" '
                   f'opacity="{opacity}">')
        out.append(circle(apex, f'r="3" fill="{colour}"'))
        for _, g in t.cone.generators:
            norm = max(abs(float(g[0])), abs(float(g[1])), 1e-9)
            tip = (float(apex[0]) + 0.6 * float(g[0]) / norm, float(apex[1]) + 0.6 * float(g[1]) / norm)
            out.append(line(apex, tip, f'stroke="{colour}" stroke-width="1.5"'))
        if t.cone.beta is not None and F.facets:
            out.append(circle(t.cone.beta, 'r="2" fill="none" stroke="#555"'))
        out.append("</g>")
    if eps is not None:
        ex, ey = tx(eps)
        out.append(circle(eps, 'class="epsilon" r="4" fill="black"'))
        out.append(f'<text x="{ex + 6:.2f}" y="{ey - 6:.2f}" font-size="12">'
                   f'eps = ({", ".join(str(Fraction(c)) for c in eps)})</text>')
    out.append(f"<!-- cones: {len(terms)} -->")
    out.append("</svg>")
    return "\n".join(out) + "\n"
