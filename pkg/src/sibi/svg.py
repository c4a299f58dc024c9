"""Minimal self-contained SVG line plots (axes, ticks, labels, polylines)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape, quoteattr

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    """Round-numbered ticks covering [lo, hi]."""
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("tick range must be finite")
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.6g}"


@dataclass
class Series:
    x: np.ndarray
    y: np.ndarray
    label: str = ""
    color: str | None = None
    width: float = 1.2


@dataclass
class Plot:
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    width: int = 640
    height: int = 420
    series: list = field(default_factory=list)
    vlines: list = field(default_factory=list)  # (x, label)

    def add(self, x, y, label: str = "", color: str | None = None, width: float = 1.2) -> "Plot":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise ValueError("series x and y must be 1-D arrays of equal length")
        self.series.append(Series(x, y, label, color, width))
        return self

    def mark(self, x: float, label: str = "") -> "Plot":
        self.vlines.append((float(x), label))
        return self

    def _limits(self):
        xs = np.concatenate([s.x for s in self.series]) if self.series else np.array([0.0, 1.0])
        ys = np.concatenate([s.y for s in self.series]) if self.series else np.array([0.0, 1.0])
        xs, ys = xs[np.isfinite(xs)], ys[np.isfinite(ys)]
        x0, x1 = (xs.min(), xs.max()) if len(xs) else (0.0, 1.0)
        y0, y1 = (ys.min(), ys.max()) if len(ys) else (0.0, 1.0)
        if x1 == x0:
            x0, x1 = x0 - 0.5, x1 + 0.5
        if y1 == y0:
            y0, y1 = y0 - 0.5, y1 + 0.5
        pad = 0.04 * (y1 - y0)
        return float(x0), float(x1), float(y0 - pad), float(y1 + pad)

    def render(self) -> str:
        W, H = self.width, self.height
        left, right, top, bottom = 72, 16, 34, 52
        pw, ph = W - left - right, H - top - bottom
        x0, x1, y0, y1 = self._limits()

        def px(x):
            return left + (x - x0) / (x1 - x0) * pw

        def py(y):
            return top + (y1 - y) / (y1 - y0) * ph

        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" '
            'font-family="sans-serif" font-size="11">',
            f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
            f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        ]
        for t in nice_ticks(x0, x1):
            X = px(t)
            out.append(f'<line x1="{X:.2f}" y1="{top + ph}" x2="{X:.2f}" y2="{top + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{X:.2f}" y="{top + ph + 18}" text-anchor="middle">{escape(_fmt(t))}</text>')
        for t in nice_ticks(y0, y1):
            Y = py(t)
            out.append(f'<line x1="{left - 5}" y1="{Y:.2f}" x2="{left}" y2="{Y:.2f}" stroke="black"/>')
            out.append(f'<text x="{left - 8}" y="{Y + 4:.2f}" text-anchor="end">{escape(_fmt(t))}</text>')
        if self.title:
            out.append(f'<text x="{W / 2:.1f}" y="20" text-anchor="middle" font-size="13">{escape(self.title)}</text>')
        if self.xlabel:
            out.append(f'<text x="{left + pw / 2:.1f}" y="{H - 12}" text-anchor="middle">{escape(self.xlabel)}</text>')
        if self.ylabel:
            out.append(
                f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" '
                f'transform="rotate(-90 16 {top + ph / 2:.1f})">{escape(self.ylabel)}</text>'
            )
        out.append(f'<clipPath id="plot-area"><rect x="{left}" y="{top}" width="{pw}" height="{ph}"/></clipPath>')
        out.append('<g clip-path="url(#plot-area)">')
        for x, label in self.vlines:
            X = px(x)
            out.append(
                f'<line x1="{X:.2f}" y1="{top}" x2="{X:.2f}" y2="{top + ph}" stroke="#999" stroke-dasharray="4 3"/>'
            )
            if label:
                out.append(f'<text x="{X + 3:.2f}" y="{top + 12}" fill="#555">{escape(label)}</text>')
        for k, s in enumerate(self.series):
            color = s.color or PALETTE[k % len(PALETTE)]
            ok = np.isfinite(s.x) & np.isfinite(s.y)
            pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(s.x[ok], s.y[ok]))
            title = f"<title>{escape(s.label)}</title>" if s.label else ""
            out.append(
                f'<polyline fill="none" stroke={quoteattr(color)} stroke-width="{s.width}" points="{pts}">{title}</polyline>'
            )
        out.append("</g>")
        labelled = [(k, s) for k, s in enumerate(self.series) if s.label]
        if 0 < len(labelled) <= 12:
            for row, (k, s) in enumerate(labelled):
                color = s.color or PALETTE[k % len(PALETTE)]
                Y = top + 14 + 14 * row
                X = left + pw - 110
                out.append(f'<line x1="{X}" y1="{Y - 4}" x2="{X + 18}" y2="{Y - 4}" stroke={quoteattr(color)} stroke-width="2"/>')
                out.append(f'<text x="{X + 22}" y="{Y}">{escape(s.label)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"
