"""Index-math property bodies and their input strategies.

Shared by the unit tests (small example budget) and the acceptance suite
(10**4 examples per property).
"""

from hypothesis import strategies as st

from wheelsieve.index_math import (
    isqrt,
    mod6_first_elim_index,
    mod6_index_to_value,
    mod6_strides,
    odd_first_elim_index,
    odd_index_to_value,
    odd_root_bound,
    value_to_mod6_index,
    value_to_odd_index,
)

coprime6 = st.integers(min_value=0, max_value=10**12).map(lambda k: 6 * k + 5) | st.integers(
    min_value=1, max_value=10**12
).map(lambda k: 6 * k + 1)


def odd_roundtrip(n):
    assert value_to_odd_index(odd_index_to_value(n)) == n


def mod6_roundtrip(n1):
    v = mod6_index_to_value(n1)
    assert v % 2 and v % 3
    assert value_to_mod6_index(v) == n1


def start_index_is_square(z):
    assert odd_index_to_value(odd_first_elim_index(z)) == (2 * z + 1) ** 2
    p = mod6_index_to_value(z)
    assert mod6_index_to_value(mod6_first_elim_index(z)) == p * p


def strides_telescope(p):
    f1, f2, f3 = mod6_strides(p)
    assert f1 == 2 * p == f2 + f3
    assert min(f1, f2, f3) >= 0


def stride_meaning(k, pk):
    p = 6 * pk + 5 if pk % 2 else 6 * pk + 1
    c = 6 * k + 1
    f1, f2, f3 = mod6_strides(p)

    def order(m):
        return value_to_mod6_index(m * p)

    assert order(c + 6) - order(c) == f1
    assert order(c + 4) - order(c) == f2
    assert order(c + 6) - order(c + 4) == f3


def isqrt_exact(x):
    r = isqrt(x)
    assert r * r <= x < (r + 1) ** 2


def odd_root_bound_exact(q):
    # floor(sqrt(2q+1)/2 - 1/2) stated without floats
    k = odd_root_bound(q)
    assert (2 * k + 1) ** 2 <= 2 * q + 1 < (2 * k + 3) ** 2


PROPERTIES = {
    "odd roundtrip": (odd_roundtrip, (st.integers(min_value=0, max_value=2**61),)),
    "mod6 roundtrip": (mod6_roundtrip, (st.integers(min_value=1, max_value=2**61),)),
    # p*p stays below 2**63 for orders up to ~1e9
    "start index = order of p^2": (start_index_is_square, (st.integers(min_value=1, max_value=10**9),)),
    "f1 = 2p = f2 + f3": (strides_telescope, (coprime6,)),
    "stride meaning": (stride_meaning, (st.integers(min_value=0, max_value=10**9),
                                        st.integers(min_value=1, max_value=10**4))),
    "isqrt exactness": (isqrt_exact, (st.integers(min_value=0, max_value=2**64 - 1),)),
    "odd root bound exactness": (odd_root_bound_exact, (st.integers(min_value=0, max_value=2**62 - 1),)),
}
