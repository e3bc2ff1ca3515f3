"""CSV and SVG output for simulated series.

The SVG is assembled by hand so output bytes depend only on the inputs.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from .engine import SimSeries

SERIES_COLUMNS = ("step", "timestamp", "price_original", "price_transformed", "demand", "resource")
SERIES_NAMES = ("price", "demand", "resource")
COLORS = {"price": "#444444", "demand": "#d62728", "resource": "#1f77b4"}


def fmt_num(x: Optional[float]) -> str:
    """Shortest decimal form within 6 significant digits; '' for missing."""
    if x is None:
        return ""
    return f"{x:.6g}"


def series_csv_text(series: SimSeries) -> str:
    if len(series) == 0:
        raise ValueError("series is empty")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SERIES_COLUMNS)
    for s in series.states:
        writer.writerow(
            [
                s.step,
                s.timestamp.isoformat() if s.timestamp is not None else "",
                fmt_num(s.price_original),
                fmt_num(s.p),
                fmt_num(s.demand),
                fmt_num(s.resource),
            ]
        )
    return buf.getvalue()


def write_series_csv(series: SimSeries, path) -> int:
    """Write one row per state; returns the number of data rows."""
    Path(path).write_text(series_csv_text(series), encoding="utf-8")
    return len(series)


def report_json_text(report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=False) + "\n"


@dataclass(frozen=True)
class ChartSpec:
    width: int = 900
    height: int = 560
    series: Sequence[str] = SERIES_NAMES
    title: str = "Demand and resource simulation"

    def __post_init__(self):
        if self.width < 100 or self.height < 100:
            raise ValueError("chart must be at least 100x100 pixels")
        unknown = [s for s in self.series if s not in SERIES_NAMES]
        if unknown or not self.series:
            raise ValueError(f"series must be a non-empty subset of {SERIES_NAMES}, got {list(self.series)}")


def _price_points(series: SimSeries) -> tuple[str, list[tuple[int, float]]]:
    driven = [s for s in series.states if s.p is not None]
    if driven and all(s.price_original is not None for s in driven):
        return "spot price (USD)", [(s.step, s.price_original) for s in driven]
    return "transformed price", [(s.step, s.p) for s in driven]


def svg_document(series: SimSeries, spec: ChartSpec = ChartSpec()) -> str:
    if len(series) < 2:
        raise ValueError("need at least two states to draw a chart")
    w, h = spec.width, spec.height
    left, right, top, bottom, gap = 70, 130, 40, 40, 30

    panels = []
    if "price" in spec.series:
        label, pts = _price_points(series)
        panels.append([("price", label, pts)])
    lower = [
        (name, name, [(s.step, getattr(s, name)) for s in series.states])
        for name in ("demand", "resource")
        if name in spec.series
    ]
    if lower:
        panels.append(lower)

    x_min, x_max = series.states[0].step, series.states[-1].step
    plot_w = w - left - right
    panel_h = (h - top - bottom - gap * (len(panels) - 1)) / len(panels)

    def sx(x: float) -> float:
        return left + (x - x_min) / (x_max - x_min) * plot_w

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>',
        f'<text x="{w / 2:.2f}" y="{top / 2 + 6:.2f}" text-anchor="middle" font-family="sans-serif" font-size="15">{escape(spec.title)}</text>',
    ]
    legend_y = top + 14
    for i, panel in enumerate(panels):
        y0 = top + i * (panel_h + gap)
        y1 = y0 + panel_h
        values = [v for _, _, pts in panel for _, v in pts]
        lo, hi = min(values), max(values)

        def sy(v: float, lo=lo, hi=hi, y0=y0, y1=y1) -> float:
            if hi == lo:
                return (y0 + y1) / 2
            return y1 - (v - lo) / (hi - lo) * (y1 - y0)

        out.append(
            f'<rect x="{left}" y="{y0:.2f}" width="{plot_w}" height="{panel_h:.2f}" '
            'fill="none" stroke="#000000" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{left - 6}" y="{y0 + 4:.2f}" text-anchor="end" font-family="sans-serif" font-size="11">{fmt_num(hi)}</text>'
        )
        out.append(
            f'<text x="{left - 6}" y="{y1 + 4:.2f}" text-anchor="end" font-family="sans-serif" font-size="11">{fmt_num(lo)}</text>'
        )
        for name, label, pts in panel:
            color = COLORS[name]
            coords = " ".join(f"{sx(x):.2f},{sy(v):.2f}" for x, v in pts)
            out.append(
                f'<polyline id="series-{name}" fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>'
            )
            lx = left + plot_w + 14
            out.append(
                f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 20}" y2="{legend_y}" stroke="{color}" stroke-width="2"/>'
            )
            out.append(
                f'<text x="{lx + 26}" y="{legend_y + 4}" font-family="sans-serif" font-size="12">{escape(label)}</text>'
            )
            legend_y += 20

    x_axis_y = h - bottom
    out.append(
        f'<text x="{left}" y="{x_axis_y + 16}" text-anchor="middle" font-family="sans-serif" font-size="11">{x_min}</text>'
    )
    out.append(
        f'<text x="{left + plot_w}" y="{x_axis_y + 16}" text-anchor="middle" font-family="sans-serif" font-size="11">{x_max}</text>'
    )
    out.append(
        f'<text x="{left + plot_w / 2:.2f}" y="{x_axis_y + 30}" text-anchor="middle" font-family="sans-serif" font-size="12">step</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(series: SimSeries, spec: ChartSpec, path) -> None:
    Path(path).write_text(svg_document(series, spec), encoding="utf-8")
