"""Demand and resource birth-rate curves.

    f(p) = k * (1 - p**a) ** (1/b)          (new demand per unit time)
    g(p) = k * (1 - (1 - p**a) ** (1/b))    (resource released per unit time)

Both are defined on the transformed price ``p`` in ``[0, 1]`` and sum to
``k`` everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RateParams:
    k: float = 5.0
    a: float = 3.0
    b: float = 3.0

    def __post_init__(self):
        for name, lo in (("k", 0.0), ("a", 1.0), ("b", 1.0)):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > lo):
                raise ValueError(f"{name} must be > {lo:g}, got {v!r}")


def _check_p(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"transformed price must lie in [0, 1], got {p!r}")
    return p


def _root(p: float, params: RateParams) -> float:
    # (1 - p^a)^(1/b), exact at both ends so that log(0) never happens
    if p == 0.0:
        return 1.0
    if p == 1.0:
        return 0.0
    return math.exp(math.log1p(-(p**params.a)) / params.b)


def demand_birth_rate(p: float, params: RateParams = RateParams()) -> float:
    return params.k * _root(_check_p(p), params)


def resource_birth_rate(p: float, params: RateParams = RateParams()) -> float:
    return params.k * (1.0 - _root(_check_p(p), params))


def birth_rates(p: float, params: RateParams = RateParams()) -> tuple[float, float]:
    """``(f(p), g(p))`` with a single root evaluation."""
    root = _root(_check_p(p), params)
    return params.k * root, params.k * (1.0 - root)


def dump_rate_curves(params: RateParams = RateParams(), samples: int = 101) -> np.ndarray:
    """Tabulate both curves on a uniform grid over ``[0, 1]``.

    Returns an array of shape ``(samples, 3)`` with columns ``p, f(p), g(p)``.
    """
    if int(samples) != samples or samples < 2:
        raise ValueError(f"samples must be an integer >= 2, got {samples!r}")
    grid = np.linspace(0.0, 1.0, int(samples))
    table = np.empty((grid.size, 3))
    for i, p in enumerate(grid):
        table[i] = (p, *birth_rates(float(p), params))
    return table
