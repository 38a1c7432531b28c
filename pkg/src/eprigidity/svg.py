"""Dependency-free SVG emitters with byte-stable output.

Coordinates are printed with a fixed format so that identical data gives
identical files.
"""

import math
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["heatmap_svg", "line_plot_svg", "histogram_svg", "scatter_svg"]

WIDTH, HEIGHT = 640, 440
LEFT, RIGHT, TOP, BOTTOM = 80, 20, 40, 60
PALETTE = ["#c0392b", "#2c6fbb", "#27ae60", "#8e44ad"]


def _f(v):
    return f"{v:.3f}".rstrip("0").rstrip(".")


def _doc(width, height, body, metadata=None):
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
    ]
    if metadata is not None:
        head.append(f"<metadata>{escape(metadata)}</metadata>")
    return "\n".join(head + body + ["</svg>"]) + "\n"


def heatmap_svg(gray, cell=16, metadata=None):
    """Grid of gray cells; ``gray`` in [0, 1] with 1 drawn black."""
    gray = np.asarray(gray, dtype=float)
    rows, cols = gray.shape
    body = []
    for i in range(rows):
        for j in range(cols):
            level = int(round(255 * (1.0 - gray[i, j])))
            body.append(
                f'<rect x="{j * cell}" y="{i * cell}" width="{cell}" height="{cell}" '
                f'fill="rgb({level},{level},{level})"/>'
            )
    return _doc(cols * cell, rows * cell, body, metadata)


class _Axis:
    def __init__(self, values, log, lo_px, hi_px):
        v = np.asarray(values, dtype=float)
        v = v[np.isfinite(v) & (v > 0)] if log else v[np.isfinite(v)]
        self.log = log
        t = np.log10(v) if log else v
        lo, hi = (float(t.min()), float(t.max())) if t.size else (0.0, 1.0)
        if log:
            lo, hi = math.floor(lo), math.ceil(hi)
        if hi == lo:
            lo, hi = lo - 0.5, hi + 0.5
        self.lo, self.hi, self.lo_px, self.hi_px = lo, hi, lo_px, hi_px

    def __call__(self, v):
        t = math.log10(v) if self.log else v
        return self.lo_px + (t - self.lo) / (self.hi - self.lo) * (self.hi_px - self.lo_px)

    def ticks(self):
        if self.log:
            step = max(1, int(math.ceil((self.hi - self.lo) / 8)))
            return [(10.0**k, f"1e{k}") for k in range(int(self.lo), int(self.hi) + 1, step)]
        vals = np.linspace(self.lo, self.hi, 5)
        return [(float(v), f"{v:.3g}") for v in vals]


def _frame(xa, ya, xlabel, ylabel, title):
    body = [
        f'<rect x="{LEFT}" y="{TOP}" width="{WIDTH - LEFT - RIGHT}" height="{HEIGHT - TOP - BOTTOM}" '
        'fill="none" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="{TOP - 15}" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 15}" text-anchor="middle" font-size="13">{escape(xlabel)}</text>',
        f'<text x="18" y="{HEIGHT / 2}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {HEIGHT / 2})">{escape(ylabel)}</text>',
    ]
    for v, label in xa.ticks():
        x = _f(xa(v))
        body.append(f'<line x1="{x}" y1="{HEIGHT - BOTTOM}" x2="{x}" y2="{HEIGHT - BOTTOM + 5}" stroke="black"/>')
        body.append(f'<text x="{x}" y="{HEIGHT - BOTTOM + 20}" text-anchor="middle" font-size="11">{label}</text>')
    for v, label in ya.ticks():
        y = _f(ya(v))
        body.append(f'<line x1="{LEFT - 5}" y1="{y}" x2="{LEFT}" y2="{y}" stroke="black"/>')
        body.append(f'<text x="{LEFT - 8}" y="{y}" text-anchor="end" font-size="11">{label}</text>')
    return body


def line_plot_svg(x, series, xlabel="", ylabel="", title="", logx=True, logy=True, dashed=(), metadata=None):
    """Several curves ``series = {name: y}`` sharing the abscissa ``x``."""
    x = np.asarray(x, dtype=float)
    xa = _Axis(x, logx, LEFT, WIDTH - RIGHT)
    ya = _Axis(np.concatenate([np.asarray(y, dtype=float) for y in series.values()]), logy, HEIGHT - BOTTOM, TOP)
    body = _frame(xa, ya, xlabel, ylabel, title)
    for k, (name, y) in enumerate(series.items()):
        pts = [
            f"{_f(xa(a))},{_f(ya(b))}"
            for a, b in zip(x, np.asarray(y, dtype=float))
            if np.isfinite(b) and (b > 0 or not logy) and (a > 0 or not logx)
        ]
        color = PALETTE[k % len(PALETTE)]
        dash = ' stroke-dasharray="6,4"' if name in dashed else ""
        body.append(f'<polyline fill="none" stroke="{color}" stroke-width="2"{dash} points="{" ".join(pts)}"/>')
        body.append(
            f'<text x="{WIDTH - RIGHT - 10}" y="{TOP + 18 + 16 * k}" text-anchor="end" font-size="12" '
            f'fill="{color}">{escape(name)}</text>'
        )
    return _doc(WIDTH, HEIGHT, body, metadata)


def histogram_svg(edges, density, xlabel="", ylabel="density", title="", metadata=None):
    """Step histogram on log-log axes; empty bins are left out."""
    edges = np.asarray(edges, dtype=float)
    density = np.asarray(density, dtype=float)
    xa = _Axis(edges, True, LEFT, WIDTH - RIGHT)
    ya = _Axis(density, True, HEIGHT - BOTTOM, TOP)
    body = _frame(xa, ya, xlabel, ylabel, title)
    base = HEIGHT - BOTTOM
    for lo, hi, d in zip(edges[:-1], edges[1:], density):
        if d > 0:
            x0, x1, y = xa(lo), xa(hi), ya(d)
            body.append(
                f'<rect x="{_f(x0)}" y="{_f(y)}" width="{_f(x1 - x0)}" height="{_f(base - y)}" '
                'fill="#2c6fbb" stroke="black" stroke-width="0.5"/>'
            )
    return _doc(WIDTH, HEIGHT, body, metadata)


def scatter_svg(points, xlabel="Re E", ylabel="Im E", title="", metadata=None):
    pts = np.asarray(points, dtype=complex)
    xa = _Axis(pts.real, False, LEFT, WIDTH - RIGHT)
    ya = _Axis(pts.imag, False, HEIGHT - BOTTOM, TOP)
    body = _frame(xa, ya, xlabel, ylabel, title)
    for z in pts:
        body.append(f'<circle cx="{_f(xa(z.real))}" cy="{_f(ya(z.imag))}" r="3" fill="#c0392b"/>')
    return _doc(WIDTH, HEIGHT, body, metadata)
