"""Static SVG rendering of empirical frequencies and PMF estimates.

Hand-written SVG keeps the output dependency-free and byte-deterministic:
empirical frequencies are gray bars, each estimate a colored polyline, the
optional ground truth an amber overlay.  With log_y, values at or below zero
are clamped to a floor derived from the smallest positive plotted value.
"""

import math
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 960, 540
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 72, 24, 34, 48

# Estimates cycle through these in argument order.
SERIES_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")
TRUTH_COLOR = "#f0a500"
BAR_COLOR = "#b8b8b8"


def render(series, bars=None, truth=None, log_y=False, title=None) -> str:
    """SVG document for named estimate vectors on one shared support.

    series: list of (label, values); bars/truth: optional vectors of the
    same length.
    """
    if not series and bars is None and truth is None:
        raise ValueError("nothing to plot")
    length = len(series[0][1]) if series else len(bars if bars is not None else truth)
    n_points = int(length)

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    everything = [np.asarray(v, dtype=np.float64) for _, v in series]
    if bars is not None:
        everything.append(np.asarray(bars, dtype=np.float64))
    if truth is not None:
        everything.append(np.asarray(truth, dtype=np.float64))
    top = max((float(v.max()) for v in everything if v.size), default=1.0)
    if top <= 0.0:
        top = 1.0

    if log_y:
        positive = [float(v[v > 0].min()) for v in everything if np.any(v > 0)]
        floor = min(positive) / 2.0 if positive else 1e-12
        y_lo, y_hi = math.log10(floor), math.log10(top * 1.05)
    else:
        floor = 0.0
        y_lo, y_hi = 0.0, top * 1.05

    def x_px(i):
        frac = i / (n_points - 1) if n_points > 1 else 0.5
        return MARGIN_LEFT + frac * plot_w

    def y_px(value):
        v = math.log10(max(value, floor)) if log_y else value
        frac = (v - y_lo) / (y_hi - y_lo) if y_hi > y_lo else 0.0
        return MARGIN_TOP + (1.0 - frac) * plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
    ]
    if title:
        out.append(
            f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{escape(title)}</text>'
        )

    out.extend(_axes(x_px, y_px, n_points, y_lo, y_hi, log_y))

    if bars is not None:
        out.append(_bars(np.asarray(bars, dtype=np.float64), x_px, y_px))
    if truth is not None:
        out.append(_polyline(np.asarray(truth, dtype=np.float64), x_px, y_px,
                             TRUTH_COLOR, width=1.4))
    for i, (_, values) in enumerate(series):
        color = SERIES_COLORS[i % len(SERIES_COLORS)]
        out.append(_polyline(np.asarray(values, dtype=np.float64), x_px, y_px,
                             color, width=1.2))

    out.extend(_legend(series, truth is not None, bars is not None))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _bars(values, x_px, y_px):
    base = y_px(0.0 if values.min() >= 0 else float(values.min()))
    parts = []
    for i in np.nonzero(values)[0]:
        x = x_px(int(i))
        parts.append(f"M{x:.2f} {base:.2f}L{x:.2f} {y_px(float(values[i])):.2f}")
    return f'<path d="{"".join(parts)}" stroke="{BAR_COLOR}" stroke-width="1" fill="none"/>'


def _polyline(values, x_px, y_px, color, width):
    pts = " ".join(f"{x_px(i):.2f},{y_px(float(v)):.2f}" for i, v in enumerate(values))
    return (f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"/>')


def _axes(x_px, y_px, n_points, y_lo, y_hi, log_y):
    x0, x1 = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    y0, y1 = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM
    parts = [
        f'<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="#333333"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="#333333"/>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        idx = round(frac * (n_points - 1))
        x = x_px(idx)
        parts.append(f'<line x1="{x:.2f}" y1="{y1}" x2="{x:.2f}" y2="{y1 + 5}" stroke="#333333"/>')
        parts.append(
            f'<text x="{x:.2f}" y="{y1 + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{idx}</text>'
        )
        v = y_lo + frac * (y_hi - y_lo)
        label = f"1e{v:.1f}" if log_y else f"{v:.3g}"
        y = y0 + (1.0 - frac) * (y1 - y0)
        parts.append(f'<line x1="{x0 - 5}" y1="{y:.2f}" x2="{x0}" y2="{y:.2f}" stroke="#333333"/>')
        parts.append(
            f'<text x="{x0 - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )
    return parts


def _legend(series, has_truth, has_bars):
    entries = []
    if has_bars:
        entries.append(("empirical", BAR_COLOR))
    if has_truth:
        entries.append(("truth", TRUTH_COLOR))
    for i, (label, _) in enumerate(series):
        entries.append((label, SERIES_COLORS[i % len(SERIES_COLORS)]))
    parts = []
    y = MARGIN_TOP + 6
    for label, color in entries:
        x = WIDTH - MARGIN_RIGHT - 170
        parts.append(f'<rect x="{x}" y="{y - 9}" width="12" height="12" fill="{color}"/>')
        parts.append(
            f'<text x="{x + 18}" y="{y + 2}" font-family="sans-serif" '
            f'font-size="12">{escape(str(label))}</text>'
        )
        y += 18
    return parts
