import numpy as np
import pytest

from wheelsieve.oracle import oracle_primes


@pytest.fixture(scope="session")
def primes_1e6():
    """Trial-division primes up to 10**6 as an int64 array."""
    return np.array(oracle_primes(10**6), dtype=np.int64)


@pytest.fixture(scope="session")
def prime_set_1e5():
    return set(oracle_primes(10**5))


@pytest.fixture(scope="session")
def smallest_factor_1e6():
    """Smallest prime factor of every v <= 10**6 (0 and 1 map to themselves)."""
    n = 10**6
    spf = np.arange(n + 1, dtype=np.int64)
    for d in range(2, 1001):
        if spf[d] == d:
            block = spf[d * d :: d]
            mask = block == np.arange(d * d, n + 1, d)
            block[mask] = d
    return spf


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
