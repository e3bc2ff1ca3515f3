"""Interpretive quantities derived from a simulated series."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .engine import SimParams, SimSeries
from .rates import RateParams, birth_rates

UNBOUNDED = "unbounded"
DEFAULT_DROP_THRESHOLD = 0.5
DEFAULT_SPLIT_PRICE = 0.5


@dataclass(frozen=True)
class FixedPointPrediction:
    p: float
    demand_star: float
    # None means the resource grows without bound at this price
    resource_star: Optional[float]

    @property
    def bounded(self) -> bool:
        return self.resource_star is not None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "demand_star": self.demand_star,
            "resource_star": UNBOUNDED if self.resource_star is None else self.resource_star,
        }


@dataclass(frozen=True)
class DropEvent:
    step: int
    relative_drop: float
    resource_before: float
    resource_after: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class SegmentStats:
    price_split: float
    high_count: int
    low_count: int
    high_mean_demand: Optional[float]
    high_mean_resource: Optional[float]
    low_mean_demand: Optional[float]
    low_mean_resource: Optional[float]

    def to_dict(self) -> dict:
        return {
            "price_split": self.price_split,
            "high": {
                "count": self.high_count,
                "mean_demand": self.high_mean_demand,
                "mean_resource": self.high_mean_resource,
            },
            "low": {
                "count": self.low_count,
                "mean_demand": self.low_mean_demand,
                "mean_resource": self.low_mean_resource,
            },
        }


@dataclass(frozen=True)
class AnalysisReport:
    fixed_points: tuple[FixedPointPrediction, ...]
    critical_price: float
    drops: tuple[DropEvent, ...]
    segment_stats: SegmentStats

    def to_dict(self) -> dict:
        return {
            "fixed_points": [fp.to_dict() for fp in self.fixed_points],
            "critical_price": self.critical_price,
            "drops": [d.to_dict() for d in self.drops],
            "segment_stats": self.segment_stats.to_dict(),
        }


def critical_price(rates: RateParams = RateParams()) -> float:
    """Price where demand and resource birth rates are equal.

    Solving ``(1 - p**a)**(1/b) = 1/2`` gives ``(1 - 2**-b) ** (1/a)``;
    above it the released resource outpaces new demand.
    """
    return (1.0 - 2.0 ** (-rates.b)) ** (1.0 / rates.a)


def fixed_point(p: float, params: SimParams = SimParams()) -> FixedPointPrediction:
    f, g = birth_rates(p, params.rates)
    # dt cancels: D* = f*dt / (alpha*dt)
    demand_star = f / params.alpha
    resource_star = g / params.beta if g < f else None
    return FixedPointPrediction(p, demand_star, resource_star)


def relative_drop(before: float, after: float) -> float:
    if before <= 0:
        return 0.0
    return 1.0 - after / before


def detect_drops(
    series: SimSeries, threshold: float = DEFAULT_DROP_THRESHOLD
) -> list[DropEvent]:
    """Steps where resource fell by at least ``threshold`` of its prior value."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"drop threshold must lie in (0, 1), got {threshold!r}")
    if len(series) < 2:
        raise ValueError("need at least two states to detect drops")
    events = []
    res = series.resource
    for i in range(1, len(res)):
        rel = relative_drop(res[i - 1], res[i])
        if rel >= threshold:
            events.append(DropEvent(series.states[i].step, rel, res[i - 1], res[i]))
    return events


def max_relative_drop(series: SimSeries) -> float:
    res = series.resource
    return max([0.0] + [relative_drop(x, y) for x, y in zip(res, res[1:])])


def _mean(values: list[float]) -> Optional[float]:
    return math.fsum(values) / len(values) if values else None


def segment_stats(series: SimSeries, price_split: float = DEFAULT_SPLIT_PRICE) -> SegmentStats:
    """Mean demand/resource over states driven by high vs. low prices.

    The seed state has no driving price and belongs to neither segment.
    """
    if not 0.0 < price_split < 1.0:
        raise ValueError(f"split price must lie in (0, 1), got {price_split!r}")
    high = [s for s in series.states if s.p is not None and s.p >= price_split]
    low = [s for s in series.states if s.p is not None and s.p < price_split]
    return SegmentStats(
        price_split,
        len(high),
        len(low),
        _mean([s.demand for s in high]),
        _mean([s.resource for s in high]),
        _mean([s.demand for s in low]),
        _mean([s.resource for s in low]),
    )


def analyze(
    series: SimSeries,
    drop_threshold: float = DEFAULT_DROP_THRESHOLD,
    price_split: float = DEFAULT_SPLIT_PRICE,
) -> AnalysisReport:
    distinct = sorted({s.p for s in series.states if s.p is not None})
    return AnalysisReport(
        fixed_points=tuple(fixed_point(p, series.params) for p in distinct),
        critical_price=critical_price(series.params.rates),
        drops=tuple(detect_drops(series, drop_threshold)),
        segment_stats=segment_stats(series, price_split),
    )


def format_report(report: AnalysisReport) -> str:
    """Plain-text summary of a report."""
    seg = report.segment_stats

    def fmt(x):
        return "n/a" if x is None else f"{x:.6g}"

    lines = [
        f"critical price p_c = {report.critical_price:.6g}",
        f"distinct prices: {len(report.fixed_points)}",
    ]
    for fp in report.fixed_points:
        lines.append(
            f"  p={fp.p:.6g}  D*={fp.demand_star:.6g}  R*={fmt(fp.resource_star) if fp.bounded else UNBOUNDED}"
        )
    lines.append(
        f"high-price segment (p >= {seg.price_split:g}, {seg.high_count} steps): "
        f"mean D={fmt(seg.high_mean_demand)} mean R={fmt(seg.high_mean_resource)}"
    )
    lines.append(
        f"low-price segment (p < {seg.price_split:g}, {seg.low_count} steps): "
        f"mean D={fmt(seg.low_mean_demand)} mean R={fmt(seg.low_mean_resource)}"
    )
    lines.append(f"sharp resource drops: {len(report.drops)}")
    for ev in report.drops[:10]:
        lines.append(
            f"  step {ev.step}: {ev.resource_before:.6g} -> {ev.resource_after:.6g} "
            f"({ev.relative_drop:.1%})"
        )
    if len(report.drops) > 10:
        lines.append(f"  ... {len(report.drops) - 10} more")
    return "\n".join(lines) + "\n"
