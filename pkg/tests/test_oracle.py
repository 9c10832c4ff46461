import numpy as np
import pytest

from wheelsieve import sieve_core
from wheelsieve.oracle import (
    ORACLE_CAP,
    LimitTooLargeError,
    VerificationReport,
    cross_check,
    is_prime_trial,
    oracle_primes,
    verify_f1_identity,
    verify_sundaram_equivalence,
)

# first 25 primes, written out
PRIMES_TO_100 = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]


@pytest.mark.parametrize("v, expected", [(0, False), (1, False), (2, True), (4, False),
                                         (101, True), (121, False), (7919, True)])
def test_is_prime_trial(v, expected):
    assert is_prime_trial(v) is expected


def test_oracle_examples():
    assert oracle_primes(10) == [2, 3, 5, 7]
    assert oracle_primes(0) == []
    assert oracle_primes(100) == PRIMES_TO_100
    assert len(oracle_primes(10**3)) == 168


def test_oracle_cap():
    with pytest.raises(LimitTooLargeError):
        oracle_primes(ORACLE_CAP + 1)


def test_oracle_self_consistency():
    primes = oracle_primes(10**5)
    members = set(primes)
    assert all(is_prime_trial(v) == (v in members) for v in range(10**5 + 1))
    counts = [len(oracle_primes(n)) for n in range(0, 3000, 7)]
    assert counts == sorted(counts)


def test_f1_identity_examples():
    assert verify_f1_identity(1, 1).passed
    assert verify_f1_identity(5, 5).passed
    # hand value at p = 1 with a signed ceiling: ceil(5/3) - ceil(-1/3) = 2 - 0
    assert -((2 - 7) // 3) + ((2 - 1) // 3) == 2


def test_f1_identity_desk_range():
    report = verify_f1_identity(1, 10**7)
    assert report.passed and report.failures == []
    assert report.checked_range == (1, 10**7)


def test_f1_identity_big_integer_path():
    lo = 2**62
    assert verify_f1_identity(lo, lo + 1000).passed
    assert verify_f1_identity(-50, 50).passed


def test_f1_identity_bad_range():
    with pytest.raises(ValueError):
        verify_f1_identity(10, 1)


def _brute_y(l):
    return {i + j + 2 * i * j for i in range(1, l + 1) for j in range(i, l + 1) if i + j + 2 * i * j <= l}


def test_sundaram_examples():
    report = verify_sundaram_equivalence(100)
    assert report.passed
    y = _brute_y(49)
    assert len(y) == 25
    assert 49 - len(y) + 1 == len(PRIMES_TO_100)
    assert _brute_y(4) == {4}
    assert verify_sundaram_equivalence(9).passed
    r2 = verify_sundaram_equivalence(2)
    assert r2.passed and r2.checked_range == (1, 0)


def test_sundaram_sweep():
    for N in list(range(2, 501)) + [10**3, 10**4, 10**5]:
        assert verify_sundaram_equivalence(N).passed, N


def test_sundaram_limits():
    with pytest.raises(ValueError):
        verify_sundaram_equivalence(1)
    with pytest.raises(LimitTooLargeError):
        verify_sundaram_equivalence(10**5 + 1)


@pytest.mark.parametrize("N, n", [(5, 3), (10**4, 1229), (10**6, 78498)])
def test_cross_check(N, n):
    report = cross_check(N)
    assert report.passed
    assert f"soe={n}" in report.detail and f"d2soe={n}" in report.detail


def test_cross_check_without_oracle():
    report = cross_check(10**5, oracle_max=10**3)
    assert report.passed and report.identity_name == "engines = soe"


def _drop_prime(engine, victim):
    def broken(N):
        stream = engine(N)
        if victim <= N:
            track = stream.track
            order = int(np.flatnonzero(track.values(np.arange(track.size)) == victim)[0])
            sieve_core._set_bit(track.bits, order)
        return stream
    return broken


def test_cross_check_reports_first_divergence(monkeypatch):
    monkeypatch.setitem(sieve_core.ENGINES, "d1soe", _drop_prime(sieve_core.d1soe, 97))
    report = cross_check(1000)
    assert not report.passed
    assert report.failures == [("d1soe", 97)]
    assert "FAIL" in report.summary()


def test_report_truthiness():
    ok = VerificationReport("x", (1, 2))
    bad = VerificationReport("x", (1, 2), failures=[3])
    assert ok and not bad
    assert ok.summary().startswith("PASS") and "counterexamples: 3" in bad.summary()
