"""Timing harness laid out like the published runtime table (limits x engines)."""

from __future__ import annotations

import csv
import io
import json
import os
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .sieve_core import TABLE_ORDER, PrimeStream, get_engine, track_bytes

__all__ = [
    "DEFAULT_LIMITS",
    "DEFAULT_MEMORY_BUDGET",
    "MEMORY_BUDGET_ENV",
    "BenchConfig",
    "BenchRecord",
    "memory_budget_from_env",
    "parse_bytes",
    "time_engine",
    "run_suite",
    "render_text",
    "render_csv",
    "render_jsonl",
    "CSV_HEADER",
]

DEFAULT_LIMITS = tuple(10**k for k in range(3, 9))
DEFAULT_MEMORY_BUDGET = 4 * 2**30
MEMORY_BUDGET_ENV = "WHEELSIEVE_MEMORY_BUDGET"
SINKS = ("count", "xor-fold")
CSV_HEADER = ["limit", "algorithm", "median_us", "min_us", "max_us", "checksum", "repeats"]

_UNITS = {"": 1, "K": 2**10, "M": 2**20, "G": 2**30, "T": 2**40}


def parse_bytes(text: str) -> int:
    """Parse ``4294967296``, ``512M`` or ``4GiB`` style sizes."""
    s = text.strip().upper().removesuffix("IB").removesuffix("B")
    unit = s[-1] if s and s[-1] in _UNITS else ""
    number = s[: len(s) - len(unit)]
    try:
        value = int(float(number) * _UNITS[unit])
    except ValueError:
        raise ValueError(f"bad memory size {text!r}") from None
    if value <= 0:
        raise ValueError(f"memory size must be positive, got {text!r}")
    return value


def memory_budget_from_env() -> int:
    raw = os.environ.get(MEMORY_BUDGET_ENV)
    return parse_bytes(raw) if raw else DEFAULT_MEMORY_BUDGET


@dataclass(frozen=True)
class BenchConfig:
    limits: tuple[int, ...] = DEFAULT_LIMITS
    algorithms: tuple[str, ...] = TABLE_ORDER
    repeats: int = 5
    warmups: int = 2
    sink: str = "count"
    memory_budget: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "limits", tuple(self.limits))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if not self.limits:
            raise ValueError("at least one limit is required")
        if any(b <= a for a, b in zip(self.limits, self.limits[1:])):
            raise ValueError("limits must be strictly increasing")
        if any(n < 0 for n in self.limits):
            raise ValueError("limits must be non-negative")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        for name in self.algorithms:
            get_engine(name)
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if self.warmups < 0:
            raise ValueError("warmups must be >= 0")
        if self.sink not in SINKS:
            raise ValueError(f"sink must be one of {SINKS}")


@dataclass
class BenchRecord:
    algorithm: str
    limit_N: int
    runtime_us_median: Optional[float]
    runtime_us_min: Optional[int]
    runtime_us_max: Optional[int]
    checksum: Optional[int]
    repeats: int
    skipped: Optional[str] = field(default=None)

    @property
    def is_skipped(self) -> bool:
        return self.skipped is not None


def _sink(stream: PrimeStream, mode: str) -> int:
    if mode == "count":
        return stream.count()
    acc = 0
    for chunk in stream.chunks():
        acc ^= int(np.bitwise_xor.reduce(chunk))
    return acc


def time_engine(
    algo: str,
    N: int,
    repeats: int = 5,
    warmups: int = 2,
    sink: str = "count",
    memory_budget: Optional[int] = None,
) -> BenchRecord:
    """Time ``repeats`` end-to-end runs (allocate, sieve, sink) after ``warmups`` discarded ones.

    A cell whose track would not fit the memory budget, or whose allocation
    fails, comes back skipped instead of raising.
    """
    engine = get_engine(algo)
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    budget = memory_budget_from_env() if memory_budget is None else memory_budget
    need = track_bytes(algo, N)
    if need > budget:
        return BenchRecord(algo, N, None, None, None, None, repeats,
                           skipped=f"track needs {need} bytes, budget {budget}")
    samples = []
    checksum = None
    try:
        for _ in range(warmups):
            _sink(engine(N), sink)
        for _ in range(repeats):
            t0 = time.perf_counter_ns()
            checksum = _sink(engine(N), sink)
            samples.append((time.perf_counter_ns() - t0) // 1000)
    except MemoryError as exc:
        return BenchRecord(algo, N, None, None, None, None, repeats,
                           skipped=f"allocation failed: {exc}")
    return BenchRecord(
        algorithm=algo,
        limit_N=N,
        runtime_us_median=statistics.median(samples),
        runtime_us_min=min(samples),
        runtime_us_max=max(samples),
        checksum=checksum,
        repeats=repeats,
    )


def run_suite(config: BenchConfig) -> list[BenchRecord]:
    """One record per (limit, algorithm), limits outer, run strictly one at a time."""
    return [
        time_engine(algo, N, config.repeats, config.warmups, config.sink, config.memory_budget)
        for N in config.limits
        for algo in config.algorithms
    ]


# ---------------------------------------------------------------------------
# rendering


def _limit_label(N: int) -> str:
    if N >= 1000:
        k = len(str(N)) - 1
        lead, rest = divmod(N, 10**k)
        if rest == 0:
            return f"10^{k}" if lead == 1 else f"{lead}*10^{k}"
    return str(N)


def _fmt_us(v) -> str:
    return str(int(v)) if float(v).is_integer() else f"{v:.1f}"


def render_text(records: Sequence[BenchRecord]) -> str:
    """Aligned table, one row per limit, engines in the published column order."""
    algos = [a for a in TABLE_ORDER if any(r.algorithm == a for r in records)]
    algos += [a for a in dict.fromkeys(r.algorithm for r in records) if a not in algos]
    limits = list(dict.fromkeys(r.limit_N for r in records))
    cell = {(r.limit_N, r.algorithm): r for r in records}
    rows = [["N"] + [a.upper() for a in algos]]
    for N in limits:
        row = [_limit_label(N)]
        for a in algos:
            r = cell.get((N, a))
            row.append("" if r is None else "....." if r.is_skipped else _fmt_us(r.runtime_us_median))
        rows.append(row)
    widths = [max(len(row[c]) for row in rows) for c in range(len(rows[0]))]
    lines = [" | ".join(v.rjust(w) for v, w in zip(row, widths)) for row in rows]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render_csv(records: Sequence[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([
            r.limit_N, r.algorithm,
            "" if r.runtime_us_median is None else _fmt_us(r.runtime_us_median),
            "" if r.runtime_us_min is None else r.runtime_us_min,
            "" if r.runtime_us_max is None else r.runtime_us_max,
            "" if r.checksum is None else r.checksum,
            r.repeats,
        ])
    return buf.getvalue()


def render_jsonl(records: Sequence[BenchRecord]) -> str:
    return "".join(json.dumps(asdict(r)) + "\n" for r in records)
