"""Normalisation of original spot prices against the on-demand price."""

from __future__ import annotations

import math

from .trace_io import Trace


def _check_positive(value: float, name: str) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return value


def transform_price(price_original: float, fixed_price: float) -> float:
    """Spot price as a fraction of the fixed price, clamped to at most 1.

    Prices at or above the on-demand price all map to exactly ``1.0``;
    how far above they were is deliberately discarded.
    """
    po = _check_positive(price_original, "spot price")
    fixed = _check_positive(fixed_price, "fixed price")
    return min(po / fixed, 1.0)


def transform_trace(trace: Trace, fixed_price: float) -> list[float]:
    _check_positive(fixed_price, "fixed price")
    out = []
    for i, record in enumerate(trace.records):
        try:
            out.append(transform_price(record.price_original, fixed_price))
        except ValueError as exc:
            raise ValueError(f"record {i}: {exc}") from None
    return out
