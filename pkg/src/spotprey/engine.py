"""Discrete-time predator-prey recurrence for spot demand (D) and resource (R).

One step of length ``dt`` at transformed price ``p``::

    D' = D + f(p)*dt - alpha*D*dt
    R' = R + g(p)*dt - min(alpha*D*dt, beta*R*dt)

The ``min`` term uses the demand from *before* the step. Each record of a
price trace advances the system by one step regardless of the wall-clock
gap between records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional, Sequence

from .pricing import transform_trace
from .rates import RateParams, birth_rates
from .trace_io import DEFAULT_FLAT_THRESHOLD, Trace, filter_trace, require_oscillation


@dataclass(frozen=True)
class SimParams:
    rates: RateParams = field(default_factory=RateParams)
    alpha: float = 0.8
    beta: float = 0.8
    dt: float = 1.0
    d0: float = 5.0
    r0: float = 5.0

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        for name in ("alpha", "beta"):
            rate = getattr(self, name)
            if not (0.0 < rate * self.dt < 1.0):
                raise ValueError(
                    f"{name}*dt must lie strictly between 0 and 1, got {rate!r}*{self.dt!r}"
                )
        for name in ("d0", "r0"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v!r}")

    @classmethod
    def from_flat(cls, k=5.0, a=3.0, b=3.0, alpha=0.8, beta=0.8, dt=1.0, d0=5.0, r0=5.0):
        return cls(RateParams(k, a, b), alpha, beta, dt, d0, r0)

    def as_flat_dict(self) -> dict:
        return {
            "k": self.rates.k,
            "a": self.rates.a,
            "b": self.rates.b,
            "alpha": self.alpha,
            "beta": self.beta,
            "dt": self.dt,
            "d0": self.d0,
            "r0": self.r0,
        }


@dataclass(frozen=True)
class SimState:
    step: int
    demand: float
    resource: float
    # the remaining fields are None for the seed state (step 0)
    p: Optional[float] = None
    timestamp: Optional[datetime] = None
    price_original: Optional[float] = None


@dataclass(frozen=True)
class SimSeries:
    params: SimParams
    states: tuple[SimState, ...]

    def __len__(self) -> int:
        return len(self.states)

    @property
    def demand(self) -> list[float]:
        return [s.demand for s in self.states]

    @property
    def resource(self) -> list[float]:
        return [s.resource for s in self.states]

    @property
    def prices(self) -> list[Optional[float]]:
        return [s.p for s in self.states]

    @property
    def final(self) -> SimState:
        return self.states[-1]


def step(d: float, r: float, p: float, params: SimParams) -> tuple[float, float]:
    f, g = birth_rates(p, params.rates)
    dt = params.dt
    consumed = min(params.alpha * d * dt, params.beta * r * dt)
    return d + f * dt - params.alpha * d * dt, r + g * dt - consumed


def simulate(
    prices: Sequence[float],
    params: SimParams = SimParams(),
    timestamps: Optional[Sequence[Optional[datetime]]] = None,
    originals: Optional[Sequence[Optional[float]]] = None,
) -> SimSeries:
    """Run the recurrence forward over ``prices``.

    The returned series has ``len(prices) + 1`` states; ``states[j]`` is the
    result of applying ``prices[j-1]`` to ``states[j-1]``.
    """
    n = len(prices)
    if n == 0:
        raise ValueError("price sequence is empty")
    for name, extra in (("timestamps", timestamps), ("originals", originals)):
        if extra is not None and len(extra) != n:
            raise ValueError(f"{name} has length {len(extra)}, expected {n}")

    d, r = params.d0, params.r0
    states = [SimState(0, d, r)]
    for j, p in enumerate(prices):
        d, r = step(d, r, float(p), params)
        states.append(
            SimState(
                j + 1,
                d,
                r,
                p=float(p),
                timestamp=timestamps[j] if timestamps is not None else None,
                price_original=originals[j] if originals is not None else None,
            )
        )
    return SimSeries(params, tuple(states))


def replay_paper_pipeline(
    trace: Trace,
    fixed_price: float,
    params: SimParams = SimParams(),
    *,
    instance_type: Optional[str] = None,
    os: Optional[str] = None,
    zone: Optional[str] = None,
    strict: bool = False,
    flat_threshold: float = DEFAULT_FLAT_THRESHOLD,
) -> SimSeries:
    """Filter, oscillation-check, normalise and simulate a trace in one call."""
    trace = filter_trace(trace, instance_type=instance_type, os=os, zone=zone)
    require_oscillation(trace, flat_threshold, strict)
    prices = transform_trace(trace, fixed_price)
    return simulate(prices, params, trace.timestamps, trace.prices)
