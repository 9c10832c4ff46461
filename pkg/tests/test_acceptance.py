"""Exit criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line; the lines are repeated in
the terminal summary (see conftest.py). Run alone with::

    pytest tests/test_acceptance.py -s
"""

import random
import time

import numpy as np
import pytest
from hypothesis import given, settings

from index_properties import PROPERTIES
from wheelsieve import count, d1soe, d2soe, dsos
from wheelsieve.bench import BenchConfig, run_suite
from wheelsieve.oracle import oracle_primes, verify_f1_identity, verify_sundaram_equivalence
from wheelsieve.sieve_core import ENGINES, TABLE_ORDER

ACCEPTANCE_LINES = []

PI = {10**3: 168, 10**4: 1229, 10**5: 9592, 10**6: 78498, 10**7: 664579}

PERF_LIMIT = 10**8
PERF_MARGIN = 0.8
PROPERTY_EXAMPLES = 10_000


def report(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def oracle_1e6():
    return np.array(oracle_primes(10**6), dtype=np.int64)


@pytest.fixture(scope="module")
def default_suite():
    """The default bench ladder 10^3..10^8, all engines, 5 repeats after 2 warmups."""
    config = BenchConfig(repeats=5, warmups=2)
    assert config.limits[-1] == PERF_LIMIT
    return run_suite(config)


def test_oracle_equivalence(oracle_1e6):
    t0 = time.perf_counter()
    rng = random.Random(20210614)
    limits = list(range(0, 2001)) + [10**3, 10**4, 10**5, 10**6]
    limits += [rng.randint(0, 10**6) for _ in range(200)]
    bad = []
    for N in limits:
        ref = oracle_1e6[: np.searchsorted(oracle_1e6, N, side="right")]
        for algo in TABLE_ORDER:
            if not np.array_equal(ENGINES[algo](N).to_array(), ref):
                bad.append((algo, N))
    report("oracle equivalence", not bad,
           f"{len(limits)} limits x 4 engines, mismatches={bad[:5]} ({time.perf_counter() - t0:.1f}s)")


def test_prime_counts():
    got = {}
    bad = []
    for N, expected in PI.items():
        counts = {algo: count(ENGINES[algo](N)) for algo in TABLE_ORDER}
        got[N] = counts
        if N <= 10**5 and len(oracle_primes(N)) != expected:
            bad.append(("oracle", N))
        if set(counts.values()) != {expected}:
            bad.append((N, counts))
    report("prime counts", not bad,
           ", ".join(f"pi(10^{len(str(N)) - 1})={got[N]['d2soe']}" for N in PI) + (f" mismatches={bad}" if bad else ""))


def test_f1_identity():
    r = verify_f1_identity(1, 10**7)
    report("f1 = 2p identity", r.passed and r.checked_range == (1, 10**7),
           f"p in [1, 10^7], failures={len(r.failures)} ({r.elapsed:.2f}s)")


def test_sundaram_equivalence():
    t0 = time.perf_counter()
    failed = [N for N in list(range(2, 501)) + [10**3, 10**4, 10**5]
              if not verify_sundaram_equivalence(N).passed]
    differing = [N for N in range(0, 10**5 + 1) if dsos(N).track != d1soe(N).track]
    report("Sundaram equivalence", not failed and not differing,
           f"equivalence failures={failed[:5]}, track mismatches for N<=10^5: {differing[:5]} "
           f"({time.perf_counter() - t0:.1f}s)")


def test_errata_regressions():
    a = 23 in list(d2soe(23))
    b = 101 in list(d2soe(200))
    c = d2soe(10**5).track == d2soe(10**5, first_class_start="g-f3").track
    report("errata regressions", a and b and c,
           f"(a) 23 in d2soe(23)={a}; (b) 101 in d2soe(200)={b}; (c) g+f2 vs g-f3 tracks equal at 10^5={c}")


def test_performance_ordering(default_suite):
    med = {r.algorithm: r.runtime_us_median for r in default_suite if r.limit_N == PERF_LIMIT}
    reps = {r.repeats for r in default_suite if r.limit_N == PERF_LIMIT}
    ok = (
        min(reps) >= 5
        and med["d1soe"] < PERF_MARGIN * med["soe"]
        and med["d2soe"] < PERF_MARGIN * med["soe"]
        and med["d2soe"] < med["d1soe"]
    )
    report("performance ordering", ok,
           "N=10^8 medians (us) " + ", ".join(f"{a}={med[a]:.0f}" for a in TABLE_ORDER)
           + f"; soe/d1soe={med['soe'] / med['d1soe']:.2f}, soe/d2soe={med['soe'] / med['d2soe']:.2f}")


def test_bench_checksums(default_suite):
    rows = {}
    for r in default_suite:
        rows.setdefault(r.limit_N, set()).add(r.checksum)
    bad = {N: sums for N, sums in rows.items() if len(sums) != 1 or None in sums}
    report("bench checksum integrity", not bad and len(default_suite) == 24,
           f"{len(rows)} rows x 4 engines, checksums {[next(iter(s)) for s in rows.values()]}")


def test_index_math_properties():
    t0 = time.perf_counter()
    failed = []
    for name, (body, strategies) in PROPERTIES.items():
        test = settings(max_examples=PROPERTY_EXAMPLES, deadline=None, database=None)(given(*strategies)(body))
        try:
            test()
        except Exception as exc:  # noqa: BLE001 - collected into the report line
            failed.append(f"{name}: {exc!r}"[:200])
    report("index-math properties", not failed,
           f"{len(PROPERTIES)} properties x {PROPERTY_EXAMPLES} examples, failed={failed} "
           f"({time.perf_counter() - t0:.1f}s)")
