"""Minimal self-contained SVG line plots (axes, ticks, polylines, legend)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=20, top=40, bottom=55)


@dataclass
class Series:
    label: str
    x: list[float]
    y: list[float]
    markers: bool = True


@dataclass
class LinePlot:
    title: str
    xlabel: str
    ylabel: str
    series: list[Series] = field(default_factory=list)
    vlines: list[tuple[float, str]] = field(default_factory=list)

    def add(self, label: str, x, y, markers: bool = True) -> "LinePlot":
        self.series.append(Series(label, [float(v) for v in x], [float(v) for v in y], markers))
        return self

    def _limits(self):
        xs = [v for s in self.series for v in s.x] + [v for v, _ in self.vlines]
        ys = [v for s in self.series for v in s.y if math.isfinite(v)]
        if not xs or not ys:
            return (0.0, 1.0), (0.0, 1.0)
        return _pad(min(xs), max(xs), 0.02), _pad(min(ys), max(ys), 0.08)

    def to_svg(self) -> str:
        (x0, x1), (y0, y1) = self._limits()
        pw = WIDTH - MARGIN["left"] - MARGIN["right"]
        ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]
        sx = lambda v: MARGIN["left"] + (v - x0) / (x1 - x0) * pw
        sy = lambda v: MARGIN["top"] + (y1 - v) / (y1 - y0) * ph
        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
               f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
               f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
               f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(self.title)}</text>']
        for v in _ticks(x0, x1):
            x = sx(v)
            out.append(f'<line x1="{x:.2f}" y1="{MARGIN["top"]}" x2="{x:.2f}" y2="{MARGIN["top"] + ph}" stroke="#e5e5e5"/>')
            out.append(f'<text x="{x:.2f}" y="{MARGIN["top"] + ph + 16}" text-anchor="middle">{_fmt(v)}</text>')
        for v in _ticks(y0, y1):
            y = sy(v)
            out.append(f'<line x1="{MARGIN["left"]}" y1="{y:.2f}" x2="{MARGIN["left"] + pw}" y2="{y:.2f}" stroke="#e5e5e5"/>')
            out.append(f'<text x="{MARGIN["left"] - 6}" y="{y + 4:.2f}" text-anchor="end">{_fmt(v)}</text>')
        out.append(f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
        out.append(f'<text x="{MARGIN["left"] + pw / 2:.1f}" y="{HEIGHT - 14}" text-anchor="middle">{escape(self.xlabel)}</text>')
        out.append(f'<text transform="translate(18 {MARGIN["top"] + ph / 2:.1f}) rotate(-90)" text-anchor="middle">{escape(self.ylabel)}</text>')
        for v, label in self.vlines:
            x = sx(v)
            out.append(f'<line x1="{x:.2f}" y1="{MARGIN["top"]}" x2="{x:.2f}" y2="{MARGIN["top"] + ph}" stroke="gray" stroke-dasharray="4 3"/>')
            out.append(f'<text x="{x + 3:.2f}" y="{MARGIN["top"] + 12}" fill="gray">{escape(label)}</text>')
        for k, s in enumerate(self.series):
            color = COLORS[k % len(COLORS)]
            pts = [(sx(a), sy(b)) for a, b in zip(s.x, s.y) if math.isfinite(b)]
            if pts:
                path = " ".join(f"{a:.2f},{b:.2f}" for a, b in pts)
                out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.6"/>')
                if s.markers:
                    out.extend(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="2.6" fill="{color}"/>' for a, b in pts)
            ly = MARGIN["top"] + 14 + 16 * k
            lx = MARGIN["left"] + pw - 180
            out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
            out.append(f'<text x="{lx + 28}" y="{ly}">{escape(s.label)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.to_svg())


def _pad(lo: float, hi: float, frac: float) -> tuple[float, float]:
    if hi == lo:
        return lo - 1.0, hi + 1.0
    d = (hi - lo) * frac
    return lo - d, hi + d


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 2.5, 5, 10)), key=lambda s: abs(s - raw))
    start = math.ceil(lo / step) * step
    return [float(v) for v in np.arange(start, hi + 1e-9 * step, step)]


def _fmt(v: float) -> str:
    return f"{v:.4g}" if abs(v) >= 1e-12 else "0"
