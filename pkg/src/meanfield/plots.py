"""Minimal standalone SVG charts (line plot and histogram), no dependencies."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 150, 40, 50


def _esc(text: str) -> str:
    return (str(text).replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _fmt(v: float) -> str:
    return f"{v:.4g}"


def _frame(title, x_label, y_label, x_lo, x_hi, y_lo, y_hi):
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{_esc(title)}</text>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>',
        f'<text x="{LEFT + pw / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">{_esc(x_label)}</text>',
        f'<text x="16" y="{TOP + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {TOP + ph / 2:.1f})">{_esc(y_label)}</text>',
    ]
    for i in range(5):
        fx = i / 4
        x = LEFT + fx * pw
        y = TOP + ph - fx * ph
        out.append(f'<text x="{x:.1f}" y="{TOP + ph + 16}" text-anchor="middle">'
                   f'{_fmt(x_lo + fx * (x_hi - x_lo))}</text>')
        out.append(f'<text x="{LEFT - 6}" y="{y + 4:.1f}" text-anchor="end">'
                   f'{_fmt(y_lo + fx * (y_hi - y_lo))}</text>')
        out.append(f'<line x1="{LEFT}" x2="{LEFT + pw}" y1="{y:.1f}" y2="{y:.1f}" stroke="#eee"/>')

    def sx(v):
        return LEFT + (v - x_lo) / (x_hi - x_lo) * pw

    def sy(v):
        return TOP + ph - (v - y_lo) / (y_hi - y_lo) * ph

    return out, sx, sy


def _span(values):
    lo, hi = min(values), max(values)
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def line_chart_svg(series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
                   title: str = "", x_label: str = "", y_label: str = "") -> str:
    """``series`` is a list of ``(name, xs, ys)``."""
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    if not xs_all:
        raise ValueError("nothing to plot")
    (x_lo, x_hi), (y_lo, y_hi) = _span(xs_all), _span(ys_all)
    out, sx, sy = _frame(title, x_label, y_label, x_lo, x_hi, y_lo, y_hi)
    for k, (name, xs, ys) in enumerate(series):
        color = COLORS[k % len(COLORS)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = TOP + 14 + 16 * k
        out.append(f'<line x1="{WIDTH - RIGHT + 10}" x2="{WIDTH - RIGHT + 30}" y1="{ly}" '
                   f'y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{WIDTH - RIGHT + 36}" y="{ly + 4}">{_esc(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def histogram_svg(edges: Sequence[float], counts: Sequence[int], title: str = "",
                  x_label: str = "", y_label: str = "count") -> str:
    edges = [float(e) for e in edges]
    counts = [int(c) for c in counts]
    out, sx, sy = _frame(title, x_label, y_label, *_span(edges), 0.0, max(max(counts), 1))
    for lo, hi, c in zip(edges[:-1], edges[1:], counts):
        x0, x1 = sx(lo), sx(hi) if hi > lo else sx(lo) + 4
        out.append(f'<rect x="{x0:.2f}" y="{sy(c):.2f}" width="{max(x1 - x0, 1.0):.2f}" '
                   f'height="{sy(0) - sy(c):.2f}" fill="{COLORS[0]}" stroke="white" stroke-width="0.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, text: str) -> None:
    Path(path).write_text(text)
