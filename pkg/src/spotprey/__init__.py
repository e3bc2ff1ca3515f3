"""Predator-prey reconstruction of cloud spot-market demand and resource."""

from .analysis import (
    AnalysisReport,
    DropEvent,
    FixedPointPrediction,
    SegmentStats,
    analyze,
    critical_price,
    detect_drops,
    fixed_point,
    segment_stats,
)
from .engine import SimParams, SimSeries, SimState, replay_paper_pipeline, simulate, step
from .estimator import PredatorPreySimulator, SpotPriceNormalizer
from .pricing import transform_price, transform_trace
from .rates import RateParams, demand_birth_rate, dump_rate_curves, resource_birth_rate
from .report import ChartSpec, render_svg, write_series_csv
from .trace_io import (
    EmptyFilterError,
    FlatTraceError,
    PriceRecord,
    Trace,
    TraceParseError,
    TraceStats,
    Verdict,
    check_oscillation,
    filter_trace,
    parse_trace,
    trace_stats,
)

__version__ = "0.1.0"
