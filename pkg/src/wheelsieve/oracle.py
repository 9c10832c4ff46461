"""Independent ground truth and executable checks of the index identities.

Nothing in here is used by the engines. Trial division is the reference for
primality; the stride identity and the Sundaram/D1SOE equivalence are checked
by direct enumeration.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import index_math as im
from .sieve_core import ENGINES, TABLE_ORDER, d1soe, dsos

__all__ = [
    "ORACLE_CAP",
    "LimitTooLargeError",
    "VerificationReport",
    "is_prime_trial",
    "oracle_primes",
    "verify_f1_identity",
    "verify_sundaram_equivalence",
    "cross_check",
]

ORACLE_CAP = 10**7
SUNDARAM_CAP = 10**5

_F1_CHUNK = 1 << 21


class LimitTooLargeError(ValueError):
    """Requested limit is above what the trial-division oracle accepts."""


@dataclass
class VerificationReport:
    identity_name: str
    checked_range: tuple[int, int]
    failures: list = field(default_factory=list)
    elapsed: float = 0.0
    detail: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.passed

    def summary(self, max_failures: int = 5) -> str:
        lo, hi = self.checked_range
        status = "PASS" if self.passed else "FAIL"
        line = f"{status} {self.identity_name} [{lo}, {hi}] ({self.elapsed:.2f}s)"
        if self.detail:
            line += f" {self.detail}"
        if self.failures:
            shown = ", ".join(map(str, self.failures[:max_failures]))
            more = len(self.failures) - max_failures
            line += f" counterexamples: {shown}" + (f" (+{more} more)" if more > 0 else "")
        return line


def is_prime_trial(v: int) -> bool:
    if v < 2:
        return False
    if v % 2 == 0:
        return v == 2
    for d in range(3, math.isqrt(v) + 1, 2):
        if v % d == 0:
            return False
    return True


def oracle_primes(N: int) -> list[int]:
    """Ascending primes <= N by trial division against the primes found so far."""
    if N > ORACLE_CAP:
        raise LimitTooLargeError(f"oracle is capped at {ORACLE_CAP}, got {N}")
    if N < 2:
        return []
    primes = [2]
    odd = []
    for v in range(3, N + 1, 2):
        r = math.isqrt(v)
        for d in odd:
            if d > r:
                odd.append(v)
                break
            if v % d == 0:
                break
        else:
            odd.append(v)
    primes.extend(odd)
    return primes


def _ceil_div3_signed(a: np.ndarray) -> np.ndarray:
    # rounds toward +inf for negative numerators too: ceil(-1/3) == 0
    return -((-a) // 3)


def verify_f1_identity(lo: int, hi: int) -> VerificationReport:
    """Check ``2p == ceil((7p-2)/3) - ceil((p-2)/3)`` for every integer p in [lo, hi]."""
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    t0 = time.perf_counter()
    failures: list[int] = []
    if 7 * hi < im.INT64_MAX and lo > -(im.INT64_MAX // 8):
        for start in range(lo, hi + 1, _F1_CHUNK):
            p = np.arange(start, min(start + _F1_CHUNK, hi + 1), dtype=np.int64)
            gap = _ceil_div3_signed(7 * p - 2) - _ceil_div3_signed(p - 2)
            bad = np.flatnonzero(gap != 2 * p)
            failures.extend(int(x) for x in p[bad])
    else:
        for p in range(lo, hi + 1):
            if -((2 - 7 * p) // 3) + ((2 - p) // 3) != 2 * p:
                failures.append(p)
    return VerificationReport(
        "f1 = 2p", (lo, hi), failures, time.perf_counter() - t0,
        detail=f"{hi - lo + 1} integers",
    )


def _sundaram_values(l: int) -> set[int]:
    ys = set()
    i = 1
    while 2 * i * i + 2 * i <= l:
        j = i
        y = i + j + 2 * i * j
        while y <= l:
            ys.add(y)
            j += 1
            y = i + j + 2 * i * j
        i += 1
    return ys


def verify_sundaram_equivalence(N: int) -> VerificationReport:
    """Enumerate {i + j + 2ij : 1 <= i <= j} and compare it with D1SOE's strikes.

    Checks, at limit N:

    * the brute-force set equals the orders struck by D1SOE's loops when every
      order (not only prime ones) up to the root bound strikes;
    * the normal D1SOE track leaves exactly the complement;
    * the DSOS track is bit-identical to the D1SOE track;
    * 2 plus the surviving values gives the oracle's primes.

    Failures are ``(check, order)`` pairs.
    """
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    if N > SUNDARAM_CAP:
        raise LimitTooLargeError(f"Sundaram check is capped at {SUNDARAM_CAP}, got {N}")
    t0 = time.perf_counter()
    l = im.odd_limit_index(N)
    failures: list[tuple[str, int]] = []

    ys = _sundaram_values(l)
    every_order = d1soe(N, skip_composite_orders=False).track
    struck = set(every_order.composite_orders().tolist())
    failures += [("enumerated-not-struck", y) for y in sorted(ys - struck)]
    failures += [("struck-not-enumerated", y) for y in sorted(struck - ys)]

    d1 = d1soe(N).track
    survivors = set(range(1, l + 1)) - set(d1.composite_orders().tolist())
    expected = set(range(1, l + 1)) - ys
    failures += [("survivor-mismatch", n) for n in sorted(survivors ^ expected)]

    ds = dsos(N).track
    if ds != d1:
        diff = np.flatnonzero(
            np.unpackbits(ds.bits, bitorder="little") != np.unpackbits(d1.bits, bitorder="little")
        )
        failures += [("dsos-track-differs", int(n)) for n in diff]

    primes = [2] + sorted(2 * n + 1 for n in expected)
    if primes != oracle_primes(N):
        failures.append(("oracle-mismatch", N))

    return VerificationReport(
        "sundaram = d1soe", (1, l), failures, time.perf_counter() - t0,
        detail=f"N={N} |Y|={len(ys)} survivors={len(expected)}",
    )


def _first_divergence(got: np.ndarray, ref: np.ndarray) -> Optional[int]:
    n = min(got.size, ref.size)
    diff = np.flatnonzero(got[:n] != ref[:n])
    if diff.size:
        i = diff[0]
        return int(min(got[i], ref[i]))
    if got.size != ref.size:
        return int(got[n]) if got.size > n else int(ref[n])
    return None


def cross_check(
    N: int,
    algorithms: Iterable[str] = TABLE_ORDER,
    oracle_max: int = ORACLE_CAP,
) -> VerificationReport:
    """Run the engines at N and report each one's first divergent value.

    The reference is the oracle when ``N <= oracle_max``; otherwise the first
    engine listed, so the check degrades to pairwise agreement.
    """
    t0 = time.perf_counter()
    algorithms = list(algorithms)
    results = {name: ENGINES[name](N).to_array() for name in algorithms}
    if N <= min(oracle_max, ORACLE_CAP):
        ref_name = "oracle"
        ref = np.array(oracle_primes(N), dtype=np.int64)
    else:
        ref_name = algorithms[0]
        ref = results[ref_name]
    failures = []
    for name in algorithms:
        v = _first_divergence(results[name], ref)
        if v is not None:
            failures.append((name, v))
    counts = ",".join(f"{name}={results[name].size}" for name in algorithms)
    return VerificationReport(
        "engines = " + ref_name, (0, N), failures, time.perf_counter() - t0,
        detail=f"counts {counts}",
    )
