"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary (see ``conftest.pytest_terminal_summary``). Run standalone with
``python -m pytest tests/test_acceptance.py -v``.
"""

import contextlib
import math
import random
import time

import numpy as np
import pytest

from spotprey.analysis import critical_price, detect_drops, fixed_point, segment_stats
from spotprey.cli import main
from spotprey.engine import SimParams, simulate, step
from spotprey.pricing import transform_price
from spotprey.rates import RateParams, birth_rates, demand_birth_rate, resource_birth_rate
from tests.conftest import TABLE1_FIXED, TABLE1_PRICES, TABLE1_ROUNDED, csv_text
from tests.oracles import bisect_equal_rates, step_ref

RESULTS: list[str] = []
PARAMS = SimParams()

# frozen from tests.oracles (40-digit mpmath)
D_STAR_HALF = 5.977909946163716
R_STAR_HALF = 0.27209005383628404
STEP_0279 = (5.963538695963333, 1.0364613040366667)


@contextlib.contextmanager
def criterion(number: int, title: str, budget_s: float):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget_s, f"took {elapsed:.3f}s, budget {budget_s}s"
    except BaseException as exc:
        RESULTS.append(f"FAIL  AC{number}  {title}: {exc}")
        raise
    RESULTS.append(f"PASS  AC{number}  {title} ({elapsed:.3f}s)")


def test_ac1_table1_transform():
    with criterion(1, "Table 1 price transform", 1.0):
        out = [transform_price(p, TABLE1_FIXED) for p in TABLE1_PRICES]
        assert [round(p, 3) for p in out[:4]] == TABLE1_ROUNDED[:4]
        assert out[4] == 1.0 and out[5] == 1.0


def test_ac2_rate_boundaries():
    with criterion(2, "rate boundaries exact, f+g=k on 10001 points", 1.0):
        rp = RateParams()
        assert demand_birth_rate(0.0, rp) == 5.0
        assert demand_birth_rate(1.0, rp) == 0.0
        assert resource_birth_rate(0.0, rp) == 0.0
        assert resource_birth_rate(1.0, rp) == 5.0
        worst = max(abs(sum(birth_rates(i / 10_000, rp)) - 5.0) for i in range(10_001))
        assert worst <= 1e-12, worst


def test_ac3_one_step_oracle():
    with criterion(3, "one-step oracle and hand-derived triples", 1.0):
        rng = random.Random(3)
        for _ in range(1000):
            d, r, p = rng.uniform(1e-3, 50), rng.uniform(1e-3, 50), rng.random()
            got, want = step(d, r, p, PARAMS), step_ref(d, r, p)
            assert abs(got[0] - want[0]) <= 1e-12 and abs(got[1] - want[1]) <= 1e-12
        for p, expected in ((1.0, (1.0, 6.0)), (0.0, (6.0, 1.0)), (0.279, STEP_0279)):
            got = step(5.0, 5.0, p, PARAMS)
            assert abs(got[0] - expected[0]) <= 1e-5 and abs(got[1] - expected[1]) <= 1e-5


def test_ac4_fixed_point_convergence():
    with criterion(4, "convergence to closed-form fixed point at p=0.5", 1.0):
        series = simulate([0.5] * 200, PARAMS)
        fp = fixed_point(0.5, PARAMS)
        final = series.final
        assert abs(final.demand - D_STAR_HALF) <= 1e-6
        assert abs(final.resource - R_STAR_HALF) <= 1e-6
        assert abs(final.demand - fp.demand_star) <= 1e-6
        assert abs(final.resource - fp.resource_star) <= 1e-6
        d_star = fp.demand_star
        for t, d in enumerate(series.demand[:51]):
            closed = d_star + (1 - PARAMS.alpha) ** t * (PARAMS.d0 - d_star)
            assert abs(d - closed) <= 1e-9 * abs(closed)


def test_ac5_regime_dichotomy():
    with criterion(5, "resource diverges at p=1, collapses at p=0; critical price", 1.0):
        high = simulate([1.0] * 25, PARAMS).resource
        assert all(y > x for x, y in zip(high, high[1:]))
        assert high[-1] > 100
        low = simulate([0.0] * 40, PARAMS).resource
        assert low[-1] < 1e-3
        pc = critical_price(PARAMS.rates)
        assert abs(pc - 0.875 ** (1 / 3)) <= 1e-10
        assert abs(pc - bisect_equal_rates(3, 3)) <= 1e-10


def _regime_trace(low_len=60, high_len=30, cycles=5):
    low = transform_price(0.043, TABLE1_FIXED)  # ~0.279
    high = transform_price(0.5, TABLE1_FIXED)  # clamps to 1
    return ([low] * low_len + [high] * high_len) * cycles


def test_ac6_qualitative_findings():
    with criterion(6, "four qualitative findings on a regime-switching trace", 1.0):
        prices = _regime_trace()
        series = simulate(prices, PARAMS)
        seg = segment_stats(series, 0.5)
        # (a) demand stays low while the service is expensive
        assert seg.high_mean_demand < seg.low_mean_demand
        # (b) spare resource stays low while the service is cheap
        assert seg.low_mean_resource < seg.high_mean_resource
        # (c) a sharp drop follows every high->low switch, inside the low segment it opens
        drop_steps = [e.step for e in detect_drops(series, 0.5)]
        is_low = [p < 0.5 for p in prices]
        starts = [j for j in range(1, len(prices)) if is_low[j] and not is_low[j - 1]]
        assert starts
        for j in starts:
            end = next((i for i in range(j, len(prices)) if not is_low[i]), len(prices))
            # state index i + 1 is driven by prices[i]
            assert any(j + 1 <= s <= end for s in drop_steps), f"no drop after switch at {j}"
        # (d) release during expensive stretches is gradual
        k_dt = PARAMS.rates.k * PARAMS.dt
        res = series.resource
        for i, p in enumerate(prices):
            if not is_low[i]:
                assert res[i + 1] - res[i] <= k_dt


def test_ac7_positivity_and_bound():
    with criterion(7, "positivity and demand bound over 1e5 random steps", 5.0):
        rng = np.random.default_rng(7)
        series = simulate(rng.uniform(0.0, 1.0, 100_000).tolist(), PARAMS)
        bound = max(PARAMS.d0, PARAMS.rates.k / PARAMS.alpha)
        assert bound == 6.25
        assert all(s.demand > 0 and s.resource > 0 and s.demand <= bound for s in series.states)


def test_ac8_pipeline_determinism_and_exit_codes(tmp_path):
    with criterion(8, "byte-identical outputs, strict flat exit 5, usage exit 2", 1.0):
        trace = tmp_path / "trace.csv"
        trace.write_text(csv_text(_regime_trace(6, 3, 4)))
        outputs = []
        for run in ("a", "b"):
            files = [tmp_path / f"{run}.csv", tmp_path / f"{run}.svg", tmp_path / f"{run}.json"]
            rc = main(["simulate", "--trace", str(trace), "--fixed-price", "0.154",
                       "--out-csv", str(files[0]), "--out-svg", str(files[1]),
                       "--out-report", str(files[2])])
            assert rc == 0
            outputs.append([f.read_bytes() for f in files])
        assert outputs[0] == outputs[1]

        flat = tmp_path / "flat.csv"
        flat.write_text(csv_text([0.05] * 30))
        targets = [tmp_path / "flat_out.csv", tmp_path / "flat_out.svg", tmp_path / "flat_out.json"]
        rc = main(["simulate", "--trace", str(flat), "--fixed-price", "0.154", "--strict",
                   "--out-csv", str(targets[0]), "--out-svg", str(targets[1]),
                   "--out-report", str(targets[2])])
        assert rc == 5
        assert not any(t.exists() for t in targets)

        assert main(["simulate", "--trace", str(trace)]) == 2
