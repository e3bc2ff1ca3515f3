"""Loading, filtering and sanity checks for spot-price history traces.

Two on-disk layouts are accepted:

* CSV with a header row ``timestamp,price[,instance_type,os,zone]``.
* The tab-separated output of ``ec2-describe-spot-price-history``::

      SPOTINSTANCEPRICE<TAB>price<TAB>timestamp<TAB>instance_type<TAB>product<TAB>zone

Records are always returned in ascending timestamp order; the AWS tool
emits newest-first.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import re
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

logger = logging.getLogger(__name__)

EC2_TAG = "SPOTINSTANCEPRICE"
CSV_COLUMNS = ("timestamp", "price", "instance_type", "os", "zone")
FORMATS = ("auto", "csv", "ec2-tsv")
DEFAULT_FLAT_THRESHOLD = 0.05

# basic-format offsets (-0800) are what older AWS tooling printed
_BASIC_OFFSET = re.compile(r"([+-])(\d{2})(\d{2})$")


class TraceError(ValueError):
    """Base class for trace problems."""


class TraceParseError(TraceError):
    """The file could not be read or contains malformed rows."""


class EmptyFilterError(TraceError):
    """A label filter matched no records."""


class FlatTraceError(TraceError):
    """The trace oscillates too rarely to drive the model (strict mode)."""


@dataclass(frozen=True)
class PriceRecord:
    timestamp: datetime
    price_original: float
    instance_type: str = ""
    os: str = ""
    zone: str = ""

    def __post_init__(self):
        if self.timestamp.tzinfo is None:
            raise ValueError("timestamp must carry a UTC offset")
        if not (math.isfinite(self.price_original) and self.price_original > 0):
            raise ValueError(f"price must be positive, got {self.price_original!r}")


@dataclass(frozen=True)
class Trace:
    records: tuple[PriceRecord, ...]
    source_path: str = ""

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[PriceRecord]:
        return iter(self.records)

    @property
    def prices(self) -> list[float]:
        return [r.price_original for r in self.records]

    @property
    def timestamps(self) -> list[datetime]:
        return [r.timestamp for r in self.records]


@dataclass(frozen=True)
class TraceStats:
    count: int
    min_price: float
    max_price: float
    distinct_prices: int
    change_ratio: float

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "min_price": self.min_price,
            "max_price": self.max_price,
            "distinct_prices": self.distinct_prices,
            "change_ratio": self.change_ratio,
        }


class Verdict(str, Enum):
    OK = "ok"
    WARNING = "warning"
    REJECTION = "rejection"


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 instant; a UTC offset (or ``Z``) is mandatory."""
    s = text.strip()
    if s.endswith(("Z", "z")):
        s = s[:-1] + "+00:00"
    s = _BASIC_OFFSET.sub(r"\1\2:\3", s) if "T" in s else s
    try:
        ts = datetime.fromisoformat(s)
    except ValueError:
        raise ValueError(f"malformed timestamp {text!r}") from None
    if ts.tzinfo is None:
        raise ValueError(f"timestamp {text!r} has no UTC offset")
    return ts


def parse_price(text: str) -> float:
    try:
        price = float(text)
    except ValueError:
        raise ValueError(f"non-numeric price {text!r}") from None
    if not (math.isfinite(price) and price > 0):
        raise ValueError(f"non-positive price {text!r}")
    return price


def detect_format(text: str) -> str:
    for line in text.splitlines():
        if line.strip():
            return "ec2-tsv" if line.lstrip().startswith(EC2_TAG) else "csv"
    return "csv"


def _ec2_rows(text: str) -> Iterator[tuple[int, dict]]:
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        cols = line.rstrip("\r\n").split("\t")
        if cols[0].strip() != EC2_TAG or len(cols) != 6:
            yield lineno, {"error": f"expected 6 tab-separated columns starting with {EC2_TAG}"}
            continue
        _, price, ts, itype, product, zone = (c.strip() for c in cols)
        yield lineno, {
            "timestamp": ts,
            "price": price,
            "instance_type": itype,
            "os": product,
            "zone": zone,
        }


def _csv_rows(text: str) -> Iterator[tuple[int, dict]]:
    reader = csv.reader(io.StringIO(text))
    header: Optional[list[str]] = None
    for row in reader:
        lineno = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if header is None:
            header = [c.strip().lower() for c in row]
            if header[:2] != ["timestamp", "price"] or any(
                c not in CSV_COLUMNS for c in header
            ):
                raise TraceParseError(
                    f"line {lineno}: CSV header must be timestamp,price[,instance_type,os,zone]"
                )
            continue
        if len(row) != len(header):
            yield lineno, {"error": f"expected {len(header)} columns, got {len(row)}"}
            continue
        yield lineno, {name: value.strip() for name, value in zip(header, row)}


def parse_trace_text(
    text: str, fmt: str = "auto", *, lenient: bool = False, source_path: str = ""
) -> Trace:
    if fmt not in FORMATS:
        raise ValueError(f"unknown trace format {fmt!r}; expected one of {FORMATS}")
    if fmt == "auto":
        fmt = detect_format(text)
    rows = _ec2_rows(text) if fmt == "ec2-tsv" else _csv_rows(text)

    records = []
    for lineno, row in rows:
        try:
            if "error" in row:
                raise ValueError(row["error"])
            records.append(
                PriceRecord(
                    timestamp=parse_timestamp(row["timestamp"]),
                    price_original=parse_price(row["price"]),
                    instance_type=row.get("instance_type", ""),
                    os=row.get("os", ""),
                    zone=row.get("zone", ""),
                )
            )
        except ValueError as exc:
            where = f"{source_path or '<trace>'}:{lineno}"
            if not lenient:
                raise TraceParseError(f"{where}: {exc}") from None
            logger.warning("%s: skipping row: %s", where, exc)

    if not records:
        raise TraceParseError(f"{source_path or '<trace>'}: zero parseable rows")
    # sorted() is stable, so equal timestamps keep file order
    records.sort(key=lambda r: r.timestamp)
    return Trace(tuple(records), source_path)


def parse_trace(path, fmt: str = "auto", *, lenient: bool = False) -> Trace:
    """Read a trace file in ``csv``, ``ec2-tsv`` or ``auto``-detected format.

    Rows with a bad price or timestamp are fatal unless ``lenient`` is set,
    in which case they are skipped with a warning naming the line.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise TraceParseError(f"cannot read {path}: {exc}") from None
    return parse_trace_text(text, fmt, lenient=lenient, source_path=str(path))


def format_trace_csv(trace: Trace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in trace:
        writer.writerow(
            [r.timestamp.isoformat(), repr(r.price_original), r.instance_type, r.os, r.zone]
        )
    return buf.getvalue()


def write_trace_csv(trace: Trace, path) -> int:
    Path(path).write_text(format_trace_csv(trace), encoding="utf-8")
    return len(trace)


def filter_trace(
    trace: Trace,
    instance_type: Optional[str] = None,
    os: Optional[str] = None,
    zone: Optional[str] = None,
) -> Trace:
    wanted = {
        name: value
        for name, value in (("instance_type", instance_type), ("os", os), ("zone", zone))
        if value is not None
    }
    if not wanted:
        return trace
    kept = tuple(
        r for r in trace if all(getattr(r, name) == value for name, value in wanted.items())
    )
    if not kept:
        desc = ", ".join(f"{k}={v}" for k, v in wanted.items())
        raise EmptyFilterError(f"no records match {desc}")
    return Trace(kept, trace.source_path)


def trace_stats(trace: Trace | Sequence[float]) -> TraceStats:
    prices = trace.prices if isinstance(trace, Trace) else list(trace)
    if not prices:
        raise ValueError("trace is empty")
    n = len(prices)
    changes = sum(1 for x, y in zip(prices, prices[1:]) if x != y)
    return TraceStats(
        count=n,
        min_price=min(prices),
        max_price=max(prices),
        distinct_prices=len(set(prices)),
        change_ratio=changes / (n - 1) if n > 1 else 0.0,
    )


def check_oscillation(
    stats: TraceStats, threshold: float = DEFAULT_FLAT_THRESHOLD, strict: bool = False
) -> Verdict:
    if stats.change_ratio < threshold:
        return Verdict.REJECTION if strict else Verdict.WARNING
    return Verdict.OK


def require_oscillation(
    trace: Trace, threshold: float = DEFAULT_FLAT_THRESHOLD, strict: bool = False
) -> Verdict:
    """Like :func:`check_oscillation` but raises :class:`FlatTraceError` on rejection."""
    stats = trace_stats(trace)
    verdict = check_oscillation(stats, threshold, strict)
    if verdict is Verdict.REJECTION:
        raise FlatTraceError(
            f"price changes on {stats.change_ratio:.3f} of steps, below {threshold}; "
            "flat traces cannot drive demand/resource interaction"
        )
    if verdict is Verdict.WARNING:
        logger.warning(
            "trace is nearly flat (change ratio %.3f < %s); results may be meaningless",
            stats.change_ratio,
            threshold,
        )
    return verdict


def records_from_prices(
    prices: Iterable[float], start: Optional[datetime] = None, **labels: str
) -> Trace:
    """Build an hourly-spaced trace from bare prices (handy for synthetic runs)."""
    start = start or datetime(2015, 3, 12, tzinfo=timezone.utc)
    recs = tuple(
        PriceRecord(start + timedelta(hours=i), float(p), **labels)
        for i, p in enumerate(prices)
    )
    if not recs:
        raise ValueError("no prices given")
    return Trace(recs, "<synthetic>")
