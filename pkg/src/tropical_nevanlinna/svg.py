"""Minimal deterministic SVG line charts.

Coordinates are written with a fixed number of decimals so identical data
gives byte-identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]


@dataclass
class Series:
    x: Sequence[float]
    y: Sequence[float]
    label: str = ""
    color: str | None = None
    dashed: bool = False


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10)), key=lambda s: abs(s - raw))
    start = math.ceil(lo / step) * step
    ticks = np.arange(start, hi + step * 1e-9, step)
    return [0.0 if abs(t) < step * 1e-9 else float(t) for t in ticks]


def _fmt_tick(v: float) -> str:
    return f"{v:.4g}"


def line_chart(
    series: Sequence[Series],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    log_y: bool = False,
    width: int = 720,
    height: int = 420,
) -> str:
    """Render ``series`` as an SVG document; ``log_y`` plots ``log10 y`` for ``y > 0`` only."""
    left, right, top, bottom = 70, 20, 40, 50
    pw, ph = width - left - right, height - top - bottom
    prepared = []
    for s in series:
        x = np.asarray(s.x, dtype=float)
        y = np.asarray(s.y, dtype=float)
        keep = np.isfinite(x) & np.isfinite(y)
        if log_y:
            keep &= y > 0
            y = np.where(keep, np.log10(np.where(keep, y, 1.0)), np.nan)
        prepared.append((s, x[keep], y[keep]))
    xs = np.concatenate([p[1] for p in prepared]) if prepared else np.array([0.0, 1.0])
    ys = np.concatenate([p[2] for p in prepared]) if prepared else np.array([0.0, 1.0])
    if xs.size == 0:
        xs, ys = np.array([0.0, 1.0]), np.array([0.0, 1.0])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def px(v):
        return left + (v - x0) / (x1 - x0) * pw

    def py(v):
        return top + (y1 - v) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>',
    ]
    for t in _nice_ticks(x0, x1):
        X = px(t)
        out.append(f'<line x1="{X:.2f}" y1="{top}" x2="{X:.2f}" y2="{top + ph}" stroke="#eee"/>')
        out.append(f'<text x="{X:.2f}" y="{top + ph + 16}" font-size="11" text-anchor="middle">{_fmt_tick(t)}</text>')
    for t in _nice_ticks(y0, y1):
        Y = py(t)
        label = f"1e{_fmt_tick(t)}" if log_y else _fmt_tick(t)
        out.append(f'<line x1="{left}" y1="{Y:.2f}" x2="{left + pw}" y2="{Y:.2f}" stroke="#eee"/>')
        out.append(f'<text x="{left - 6}" y="{Y + 4:.2f}" font-size="11" text-anchor="end">{label}</text>')
    if y0 < 0 < y1 and not log_y:
        out.append(f'<line x1="{left}" y1="{py(0):.2f}" x2="{left + pw}" y2="{py(0):.2f}" stroke="#999"/>')
    for i, (s, x, y) in enumerate(prepared):
        if x.size == 0:
            continue
        color = s.color or PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>')
    labelled = [(i, s) for i, (s, _, _) in enumerate(prepared) if s.label]
    for k, (i, s) in enumerate(labelled):
        color = s.color or PALETTE[i % len(PALETTE)]
        y = top + 14 + 16 * k
        out.append(f'<line x1="{left + 10}" y1="{y - 4}" x2="{left + 30}" y2="{y - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + 36}" y="{y}" font-size="12">{escape(s.label)}</text>')
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="22" font-size="15" text-anchor="middle">{escape(title)}</text>')
    if xlabel:
        out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 10}" font-size="12" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        yl = escape(("log10 " if log_y else "") + ylabel)
        out.append(f'<text x="16" y="{top + ph / 2:.1f}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {top + ph / 2:.1f})">{yl}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def function_samples(f, lo: float, hi: float, points: int = 2001) -> tuple[np.ndarray, np.ndarray]:
    """Uniform samples plus every breakpoint, so the polyline is exact for PL ``f``."""
    from .pl_core import event_arrays

    x = np.linspace(lo, hi, points)
    kinks, _, _ = event_arrays(f, lo, hi)
    x = np.unique(np.concatenate((x, kinks)))
    return x, f(x)
