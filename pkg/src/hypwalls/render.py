"""SVG pictures of vertical slices through a domain.

The slice ``Im z = c`` is drawn with ``Re z`` across and the height ``r`` up;
the slice ``Re z = c`` uses ``Im z`` across.  One unit is 100 px and the
origin sits in the middle of the canvas.
"""

import math

import numpy as np
import shapely

from .walls import Sphere

SCALE = 100.0


def _fmt(x):
    return f"{x:.3f}"


def _slice_sections(walls, axis, c):
    """Cross-sections as ``("arc", centre, radius, dw)`` or ``("line", position, None, dw)``."""
    out = []
    for dw in walls:
        w = dw.wall
        if isinstance(w, Sphere):
            off = (w.center.imag if axis == "im" else w.center.real) - c
            rad2 = w.radius ** 2 - off ** 2
            if rad2 <= 0:
                continue
            centre = w.center.real if axis == "im" else w.center.imag
            out.append(("arc", centre, math.sqrt(rad2), dw))
        else:
            n = w.normal
            along, across = (n.real, n.imag) if axis == "im" else (n.imag, n.real)
            if abs(along) <= 1e-12:
                continue
            out.append(("line", -(w.offset + across * c) / along, None, dw))
    return out


def _polygon_interval(poly, axis, c, extent):
    shape = shapely.Polygon([(v.real, v.imag) for v in poly.vertices])
    ends = [(-extent, c), (extent, c)] if axis == "im" else [(c, -extent), (c, extent)]
    piece = shape.intersection(shapely.LineString(ends))
    if piece.is_empty:
        return None
    x0, y0, x1, y1 = piece.bounds
    return (x0, x1) if axis == "im" else (y0, y1)


def _shade_columns(dom, sections, axis, c, extent, top):
    xs = np.linspace(-extent, extent, 801)
    lows = []
    for x in xs:
        z = complex(x, c) if axis == "im" else complex(c, x)
        if dom.f_infty is not None and not dom.f_infty.contains(z):
            lows.append(None)
            continue
        low, ok = 0.0, True
        for kind, pos, rad, dw in sections:
            if kind == "line":
                if dw.keep_value(z, 1.0) < -1e-12:
                    ok = False
                    break
            elif dw.sign > 0:
                low = max(low, math.sqrt(max(rad ** 2 - (x - pos) ** 2, 0.0)))
        lows.append(low if ok and low < top else None)
    runs, cur = [], []
    for x, low in zip(xs, lows):
        if low is None:
            if cur:
                runs.append(cur)
            cur = []
        else:
            cur.append((float(x), low))
    if cur:
        runs.append(cur)
    return runs


def render_slice(dom, axis="im", value=0.0, walls=None, extent=None, title=None):
    """Return the SVG text for the slice ``Im z = value`` (``axis='im'``) or ``Re z = value``.

    ``walls`` selects the walls drawn (for instance the faces); shading always
    uses every wall of the domain.
    """
    if axis not in ("im", "re"):
        raise ValueError("axis must be 'im' or 're'")
    walls = dom.walls if walls is None else list(walls)
    sections = _slice_sections(walls, axis, value)
    if extent is None:
        reach = [abs(p) + (r or 0.0) for _, p, r, _ in sections] or [1.0]
        if dom.f_infty is not None:
            reach += [abs(v.real if axis == "im" else v.imag) for v in dom.f_infty.vertices]
        extent = min(max(1.5, 1.2 * max(reach)), 6.0)
    top = extent
    size = 2 * extent * SCALE
    half = size / 2

    def px(x, r):
        return _fmt(half + x * SCALE), _fmt(half - r * SCALE)

    label = "Im z" if axis == "im" else "Re z"
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- hypwalls slice {label} = {_fmt(value)}; 100 px per unit; origin at the canvas centre; "
        f"horizontal axis {'Re z' if axis == 'im' else 'Im z'}, vertical axis r (up); walls: {len(walls)} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(size)}" height="{_fmt(size)}" '
        f'viewBox="0 0 {_fmt(size)} {_fmt(size)}">',
    ]
    if title:
        lines.append(f"<title>{title}</title>")
    x0, y0 = px(-extent, 0)
    x1, _ = px(extent, 0)
    lines.append(f'<line class="boundary" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black" stroke-width="1"/>')
    for run in _shade_columns(dom, _slice_sections(dom.walls, axis, value), axis, value, extent, top):
        pts = [px(x, low) for x, low in run]
        pts += [px(run[-1][0], top), px(run[0][0], top)]
        path = " ".join(f"{a},{b}" for a, b in pts)
        lines.append(f'<polygon class="domain" points="{path}" fill="#cfe3f7" stroke="none"/>')
    if dom.f_infty is not None:
        span = _polygon_interval(dom.f_infty, axis, value, extent)
        if span is not None:
            for x in span:
                a, b = px(x, 0)
                _, t = px(x, top)
                lines.append(f'<line class="f-infty" x1="{a}" y1="{b}" x2="{a}" y2="{t}" stroke="gray" stroke-dasharray="4 3"/>')
    for kind, pos, rad, dw in sections:
        if kind == "arc":
            a, b = px(pos - rad, 0)
            e, f = px(pos + rad, 0)
            rr = _fmt(rad * SCALE)
            lines.append(f'<path class="wall" d="M {a} {b} A {rr} {rr} 0 0 1 {e} {f}" fill="none" stroke="#1f4e79" stroke-width="1.5"/>')
        else:
            a, b = px(pos, 0)
            _, t = px(pos, top)
            lines.append(f'<line class="wall" x1="{a}" y1="{b}" x2="{a}" y2="{t}" stroke="#1f4e79" stroke-width="1.5"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_slice(dom, path, axis="im", value=0.0, **kw):
    text = render_slice(dom, axis, value, **kw)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path
