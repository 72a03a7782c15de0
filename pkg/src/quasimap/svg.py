"""Minimal native SVG line plots (no plotting dependency, deterministic bytes)."""

from __future__ import annotations

import math

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 64, 16, 28, 44
_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def svg_plot(curves, title: str = "", xlabel: str = "", ylabel: str = "", logy: bool = False) -> str:
    """Render labelled (x, y) polylines; returns the SVG document as a string.

    ``curves`` is a list of (label, xs, ys).  Log-scale y drops nonpositive
    points.
    """
    pts = []
    for _, xs, ys in curves:
        for x, y in zip(xs, ys):
            if logy and y <= 0:
                continue
            pts.append((float(x), math.log10(y) if logy else float(y)))
    if not pts:
        pts = [(0.0, 0.0), (1.0, 1.0)]
    xs_all = [p[0] for p in pts]
    ys_all = [p[1] for p in pts]
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def px(x: float) -> float:
        return _ML + (x - x0) / (x1 - x0) * (_W - _ML - _MR)

    def py(y: float) -> float:
        return _H - _MB - (y - y0) / (y1 - y0) * (_H - _MT - _MB)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" height="{_H - _MT - _MB}" fill="none" stroke="#888"/>',
    ]
    if title:
        out.append(f'<text x="{_W / 2}" y="18" text-anchor="middle" font-size="14">{title}</text>')
    ylab = ("log10 " if logy else "") + ylabel
    out.append(
        f'<text x="{_W / 2}" y="{_H - 10}" text-anchor="middle" font-size="12">{xlabel}</text>'
    )
    out.append(
        f'<text x="14" y="{_H / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 14 {_H / 2})">{ylab}</text>'
    )
    for frac in (0.0, 0.5, 1.0):
        xv = x0 + frac * (x1 - x0)
        yv = y0 + frac * (y1 - y0)
        out.append(
            f'<text x="{px(xv):.1f}" y="{_H - _MB + 16}" text-anchor="middle" font-size="10">{_fmt(xv)}</text>'
        )
        out.append(
            f'<text x="{_ML - 6}" y="{py(yv):.1f}" text-anchor="end" font-size="10">{_fmt(yv)}</text>'
        )
    for i, (label, xs, ys) in enumerate(curves):
        color = _COLORS[i % len(_COLORS)]
        path = []
        for x, y in zip(xs, ys):
            if logy:
                if y <= 0:
                    continue
                y = math.log10(y)
            path.append(f"{px(float(x)):.2f},{py(float(y)):.2f}")
        if path:
            out.append(
                f'<polyline points="{" ".join(path)}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )
        if label:
            out.append(
                f'<text x="{_W - _MR - 6}" y="{_MT + 16 + 14 * i}" text-anchor="end" font-size="11" fill="{color}">{label}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
