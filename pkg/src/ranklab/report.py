"""Dependency-free SVG line plots.

Output is a pure function of the input numbers: coordinates are printed
with a fixed number of decimals and nothing time- or environment-dependent
is embedded, so the same series always produce byte-identical files.
"""
from __future__ import annotations

from datetime import date
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .errors import DomainError
from .rank import NormalizedPanel, normalize, relative_prices

WIDTH, HEIGHT = 800, 450
MARGIN = dict(left=70, right=160, top=40, bottom=50)
PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _fmt(v):
    return f"{v:.2f}"


def _nice_ticks(lo, hi, n=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = np.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-12 * abs(hi):
        ticks.append(0.0 if abs(t) < step * 1e-9 else float(t))
        t += step
    return ticks


def line_plot_svg(
    x: Sequence[date] | Sequence[float],
    series: Mapping[str, Sequence[float]],
    title: str = "",
    ylabel: str = "",
    legend: bool = True,
) -> str:
    """Render one polyline per entry of ``series`` against ``x``."""
    if not series:
        raise DomainError("nothing to plot")
    n = len(x)
    if n == 0:
        raise DomainError("cannot plot an empty series")
    ys = {name: np.asarray(v, dtype=float) for name, v in series.items()}
    for name, v in ys.items():
        if v.shape != (n,):
            raise DomainError(f"series {name!r} has {v.size} points, expected {n}")
    finite = np.concatenate([v[np.isfinite(v)] for v in ys.values()])
    if finite.size == 0:
        raise DomainError("no finite values to plot")
    lo, hi = float(finite.min()), float(finite.max())
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    lo, hi = lo - pad, hi + pad

    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(i):
        return MARGIN["left"] + (pw * i / (n - 1) if n > 1 else pw / 2)

    def sy(v):
        return MARGIN["top"] + ph * (hi - v) / (hi - lo)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>')
    x0, x1 = MARGIN["left"], MARGIN["left"] + pw
    y0, y1 = MARGIN["top"], MARGIN["top"] + ph
    out.append(f'<rect x="{x0}" y="{y0}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for t in _nice_ticks(lo, hi):
        yy = _fmt(sy(t))
        out.append(f'<line x1="{x0}" y1="{yy}" x2="{x1}" y2="{yy}" stroke="#dddddd"/>')
        out.append(f'<text x="{x0 - 6}" y="{yy}" text-anchor="end" dominant-baseline="middle">{t:g}</text>')
    for i in sorted({0, (n - 1) // 2, n - 1}):
        label = x[i].isoformat() if isinstance(x[i], date) else f"{x[i]:g}"
        out.append(f'<text x="{_fmt(sx(i))}" y="{y1 + 18}" text-anchor="middle">{escape(label)}</text>')
    if ylabel:
        cy = (y0 + y1) / 2
        out.append(
            f'<text x="18" y="{cy:.1f}" text-anchor="middle" transform="rotate(-90 18 {cy:.1f})">{escape(ylabel)}</text>'
        )
    for j, (name, v) in enumerate(ys.items()):
        color = PALETTE[j % len(PALETTE)]
        pts = " ".join(f"{_fmt(sx(i))},{_fmt(sy(val))}" for i, val in enumerate(v) if np.isfinite(val))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"><title>{escape(name)}</title></polyline>')
    if legend:
        out.append('<g class="legend">')
        for j, name in enumerate(ys):
            color = PALETTE[j % len(PALETTE)]
            ly = y0 + 10 + 18 * j
            out.append(f'<line x1="{x1 + 12}" y1="{ly}" x2="{x1 + 32}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
            out.append(f'<text x="{x1 + 38}" y="{ly}" dominant-baseline="middle">{escape(name)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cumulative_lmh_svg(dates, cum_lmh, title="Low-minus-high cumulative log excess return") -> str:
    return line_plot_svg(dates, {"LMH": cum_lmh}, title, "log relative value")


def legs_svg(dates, low_logret, high_logret, title="Low- and high-ranked portfolios") -> str:
    return line_plot_svg(
        dates,
        {"low (L)": np.cumsum(low_logret), "high (H)": np.cumsum(high_logret)},
        title,
        "log value",
    )


def relative_price_svg(panel, ranked: bool = False) -> str:
    """Log relative prices ``log theta`` per commodity, or per rank when ``ranked``."""
    norm = panel if isinstance(panel, NormalizedPanel) else normalize(panel)
    theta = relative_prices(norm).theta
    logt = np.log(theta)
    if ranked:
        logt = -np.sort(-logt, axis=1)
        series = {f"rank {k + 1}": logt[:, k] for k in range(logt.shape[1])}
        title = "Ranked log relative prices"
    else:
        series = {name: logt[:, i] for i, name in enumerate(norm.commodities)}
        title = "Log relative prices"
    return line_plot_svg(norm.dates, series, title, "log relative price", legend=len(series) <= 20)
