"""Standalone SVG 1.1 drawings: unit-ball outlines and line charts."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .geometry import NormSpec, unit_points

OUTLINE_POINTS = 720
SIZE = 480
MARGIN = 56


def _num(v: float) -> str:
    return f"{v:.6g}"


def _doc(width: int, height: int, body: list[str], title: str) -> str:
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    return "\n".join(head + body + ["</svg>", ""])


def _arrow_marker(color: str, ident: str) -> str:
    return (
        f'<defs><marker id="{ident}" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" '
        f'orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="{color}"/></marker></defs>'
    )


def unit_ball_svg(spec: NormSpec, title: str, witness=None) -> str:
    """Unit sphere outline, optionally with a witness pair drawn as arrows.

    ``witness`` is ``(x, y)`` with each a 2-vector, or ``None``.
    """
    _, pts = unit_points(spec, 2 * math.pi * np.arange(OUTLINE_POINTS) / OUTLINE_POINTS)
    vecs = [np.asarray(v, dtype=float) for v in (witness or ())]
    extent = max([float(np.max(np.abs(pts)))] + [float(np.max(np.abs(v))) for v in vecs]) * 1.15
    half = (SIZE - 2 * MARGIN) / 2
    cx = cy = SIZE / 2

    def px(v):
        return cx + v[0] / extent * half, cy - v[1] / extent * half

    body = [
        f'<line x1="{MARGIN}" y1="{_num(cy)}" x2="{SIZE - MARGIN}" y2="{_num(cy)}" stroke="#bbb" stroke-width="1"/>',
        f'<line x1="{_num(cx)}" y1="{MARGIN}" x2="{_num(cx)}" y2="{SIZE - MARGIN}" stroke="#bbb" stroke-width="1"/>',
    ]
    path = " ".join(f"{_num(a)},{_num(b)}" for a, b in map(px, pts))
    body.append(f'<polygon points="{path}" fill="#eef3fb" stroke="#1f4e9c" stroke-width="2"/>')
    for tick in (-1.0, 1.0):
        tx, _ = px((tick, 0.0))
        _, ty = px((0.0, tick))
        body.append(f'<text x="{_num(tx)}" y="{_num(cy + 16)}" font-size="11" text-anchor="middle">{tick:g}</text>')
        body.append(f'<text x="{_num(cx - 8)}" y="{_num(ty + 4)}" font-size="11" text-anchor="end">{tick:g}</text>')
    colors = ("#c0392b", "#27ae60")
    for name, v, color in zip(("x", "y"), vecs, colors):
        ident = f"arrow-{name}"
        body.append(_arrow_marker(color, ident))
        ex, ey = px(v)
        body.append(
            f'<line x1="{_num(cx)}" y1="{_num(cy)}" x2="{_num(ex)}" y2="{_num(ey)}" stroke="{color}" '
            f'stroke-width="2" marker-end="url(#{ident})"/>'
        )
        label = f"{name} = ({v[0]:.4g}, {v[1]:.4g})"
        body.append(f'<text x="{_num(ex + 6)}" y="{_num(ey - 6)}" font-size="12" fill="{color}">{escape(label)}</text>')
    body.append(f'<text x="{SIZE / 2}" y="24" font-size="15" text-anchor="middle">{escape(title)}</text>')
    return _doc(SIZE, SIZE, body, title)


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + 1e-9 * step:
        out.append(round(t / step) * step)
        t += step
    return out


def line_chart_svg(xs, ys, title: str, xlabel: str, ylabel: str) -> str:
    """Polyline chart with axes and tick labels; non-finite points are skipped."""
    pts = [(float(a), float(b)) for a, b in zip(xs, ys) if math.isfinite(a) and math.isfinite(b)]
    width, height = 640, 420
    left, right, top, bottom = 72, 24, 40, 56
    if not pts:
        pts = [(0.0, 0.0)]
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def px(x, y):
        return (
            left + (x - x0) / (x1 - x0) * (width - left - right),
            height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom),
        )

    body = []
    ax0, ay0 = px(x0, y0)
    ax1, ay1 = px(x1, y1)
    body.append(f'<line x1="{_num(ax0)}" y1="{_num(ay0)}" x2="{_num(ax1)}" y2="{_num(ay0)}" stroke="black"/>')
    body.append(f'<line x1="{_num(ax0)}" y1="{_num(ay0)}" x2="{_num(ax0)}" y2="{_num(ay1)}" stroke="black"/>')
    for t in _ticks(x0, x1):
        tx, _ = px(t, y0)
        body.append(f'<line x1="{_num(tx)}" y1="{_num(ay0)}" x2="{_num(tx)}" y2="{_num(ay0 + 5)}" stroke="black"/>')
        body.append(f'<text x="{_num(tx)}" y="{_num(ay0 + 18)}" font-size="11" text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(y0, y1):
        _, ty = px(x0, t)
        body.append(f'<line x1="{_num(ax0 - 5)}" y1="{_num(ty)}" x2="{_num(ax0)}" y2="{_num(ty)}" stroke="black"/>')
        body.append(f'<text x="{_num(ax0 - 8)}" y="{_num(ty + 4)}" font-size="11" text-anchor="end">{t:.4g}</text>')
    line = " ".join(f"{_num(a)},{_num(b)}" for a, b in (px(*p) for p in pts))
    body.append(f'<polyline points="{line}" fill="none" stroke="#1f4e9c" stroke-width="2"/>')
    for a, b in (px(*p) for p in pts):
        body.append(f'<circle cx="{_num(a)}" cy="{_num(b)}" r="2.5" fill="#1f4e9c"/>')
    body.append(f'<text x="{width / 2}" y="24" font-size="15" text-anchor="middle">{escape(title)}</text>')
    body.append(
        f'<text x="{_num((ax0 + ax1) / 2)}" y="{height - 14}" font-size="12" text-anchor="middle">{escape(xlabel)}</text>'
    )
    body.append(
        f'<text x="16" y="{_num((ay0 + ay1) / 2)}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 16 {_num((ay0 + ay1) / 2)})">{escape(ylabel)}</text>'
    )
    return _doc(width, height, body, title)
