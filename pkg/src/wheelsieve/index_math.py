"""Exact order/stride/bound arithmetic for the odd and mod-6 candidate tracks.

Two wheels are used throughout the package:

* the odd track, where order ``n`` stands for the value ``2n + 1``;
* the mod-6 track, where order ``n1 >= 1`` stands for the ``n1``-th integer
  greater than 3 that is coprime to 6 (5, 7, 11, 13, 17, ...).

Every formula is written once, as a small integer function that runs as plain
Python on big integers and is inlined by numba into the sieve kernels. The
public functions below validate their arguments, evaluate the formula exactly
and reject results that do not fit in a signed 64-bit word.

All divisions are floor/ceiling divisions on non-negative integers and all
square roots are exact integer square roots; no floating point is involved in
any bound.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from numba.extending import overload, register_jitable

__all__ = [
    "INT64_MAX",
    "DomainError",
    "SequenceClass",
    "ClassicRuleParams",
    "OddTrackParams",
    "Mod6TrackParams",
    "isqrt",
    "odd_index_to_value",
    "value_to_odd_index",
    "mod6_index_to_value",
    "value_to_mod6_index",
    "odd_limit_index",
    "odd_first_elim_index",
    "odd_stride",
    "odd_root_bound",
    "mod6_limit_index",
    "mod6_first_elim_index",
    "mod6_strides",
    "mod6_root_bound",
    "classify_square_sequence",
    "prose_sequence_test",
]

INT64_MAX = 2**63 - 1

# largest r with r*r <= INT64_MAX
_ISQRT_INT64_MAX = 3037000499


class DomainError(ValueError):
    """An argument lies outside the domain of an index formula."""


class SequenceClass(enum.Enum):
    """Which per-prime progression a multiple ``c * p`` of a prime belongs to.

    FIRST holds the multipliers ``c = 6k + 1`` (p, 7p, 13p, ...), SECOND the
    multipliers ``c = 6k + 5`` (5p, 11p, 17p, ...).
    """

    FIRST = 1
    SECOND = 2


# ---------------------------------------------------------------------------
# raw formulas: plain Python on big ints, inlined into the numba kernels


@register_jitable
def _ceil_div(a, b):
    # non-negative a only
    return (a + b - 1) // b


def _isqrt(x):
    return math.isqrt(x)


@overload(_isqrt)
def _isqrt_int64(x):
    def impl(x):
        if x <= 0:
            return 0
        r = int(math.sqrt(x))
        if r > _ISQRT_INT64_MAX:
            r = _ISQRT_INT64_MAX
        while r * r > x:
            r -= 1
        while r < _ISQRT_INT64_MAX and (r + 1) * (r + 1) <= x:
            r += 1
        return r

    return impl


@register_jitable
def _odd_value(n):
    return 2 * n + 1


@register_jitable
def _odd_order(v):
    return (v - 1) // 2


@register_jitable
def _mod6_value(n1):
    return 2 * ((3 * n1 + 1) // 2) + 1


@register_jitable
def _mod6_order(v):
    return _ceil_div(v - 2, 3)


@register_jitable
def _odd_limit(limit):
    return (limit - 1) // 2


@register_jitable
def _odd_start(z):
    return 2 * (z * z + z)


@register_jitable
def _odd_step(z):
    return 2 * z + 1


@register_jitable
def _odd_root(q):
    return (_isqrt(2 * q + 1) - 1) // 2


@register_jitable
def _mod6_limit(limit):
    return _ceil_div(limit - 2, 3)


@register_jitable
def _mod6_start(b):
    z = (3 * b + 1) // 2
    return _ceil_div(4 * (z * z + z) - 1, 3)


@register_jitable
def _mod6_strides(p):
    # (7p - 2) = (p - 2) + 6p, so the first and last ceilings differ by
    # exactly 2p; f1 = f2 + f3 because p -> 5p -> 7p telescopes.
    base = _ceil_div(p - 2, 3)
    at5 = _ceil_div(5 * p - 2, 3)
    at7 = _ceil_div(7 * p - 2, 3)
    return at7 - base, at5 - base, at7 - at5


@register_jitable
def _mod6_root(e):
    r = _isqrt(2 * ((3 * e + 1) // 2) + 1)
    h = _ceil_div(r - 2, 3)
    return h if h >= 1 else 1


@register_jitable
def _square_in_second(p):
    # p*p = p * p: the multiplier is p itself, so p's class mod 6 decides
    return p % 6 == 5


# ---------------------------------------------------------------------------
# validation helpers


def _check_int(x, name: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        try:
            import numpy as np

            if isinstance(x, np.integer):
                return int(x)
        except ImportError:  # pragma: no cover
            pass
        raise TypeError(f"{name} must be an integer, got {type(x).__name__}")
    return x


def _fits(value: int, what: str) -> int:
    if value > INT64_MAX:
        raise OverflowError(f"{what} = {value} does not fit in 64 bits")
    return value


def _coprime_to_6(p: int, name: str = "p") -> int:
    p = _check_int(p, name)
    if p < 5:
        raise DomainError(f"{name} must be >= 5, got {p}")
    if p % 2 == 0 or p % 3 == 0:
        raise DomainError(f"{name} = {p} is not coprime to 6")
    return p


# ---------------------------------------------------------------------------
# public operations


def isqrt(x: int) -> int:
    """Largest ``r`` with ``r * r <= x``."""
    x = _check_int(x, "x")
    if x < 0:
        raise DomainError(f"isqrt of negative number {x}")
    return math.isqrt(x)


def odd_index_to_value(n: int) -> int:
    """Odd-track order ``n`` to its value ``2n + 1``."""
    n = _check_int(n, "n")
    if n < 0:
        raise DomainError(f"odd-track order must be >= 0, got {n}")
    return _fits(_odd_value(n), "2n+1")


def value_to_odd_index(v: int) -> int:
    v = _check_int(v, "v")
    if v < 1 or v % 2 == 0:
        raise DomainError(f"{v} is not a positive odd value")
    return _odd_order(v)


def mod6_index_to_value(n1: int) -> int:
    """Mod-6 order ``n1`` to ``2 * floor((3 n1 + 1) / 2) + 1``.

    Orders 1, 2, 3, 4, ... give 5, 7, 11, 13, ...
    """
    n1 = _check_int(n1, "n1")
    if n1 < 1:
        raise DomainError(f"mod-6 order must be >= 1, got {n1}")
    return _fits(_mod6_value(n1), "mod-6 value")


def value_to_mod6_index(v: int) -> int:
    v = _coprime_to_6(v, "v")
    return _mod6_order(v)


def odd_limit_index(limit: int) -> int:
    """Largest odd-track order whose value does not exceed ``limit``."""
    limit = _check_int(limit, "limit")
    if limit < 1:
        raise DomainError(f"limit must be >= 1 for the odd track, got {limit}")
    return _odd_limit(limit)


def odd_first_elim_index(z: int) -> int:
    """Odd-track order of ``(2z + 1)**2``, where elimination for that prime starts."""
    z = _check_int(z, "z")
    if z < 1:
        raise DomainError(f"prime order must be >= 1, got {z}")
    return _fits(_odd_start(z), "2(z^2+z)")


def odd_stride(z: int) -> int:
    """Order gap between successive odd multiples of the prime at order ``z``.

    This is the prime itself.
    """
    z = _check_int(z, "z")
    if z < 1:
        raise DomainError(f"prime order must be >= 1, got {z}")
    return _fits(_odd_step(z), "2z+1")


def odd_root_bound(q: int) -> int:
    """Largest prime order that needs sieving when the last order is ``q``.

    ``floor((isqrt(2q + 1) - 1) / 2)``; the engines loop ``z`` over ``[1, k]``.
    """
    q = _check_int(q, "q")
    if q < 0:
        raise DomainError(f"limit order must be >= 0, got {q}")
    _fits(2 * q + 1, "2q+1")
    return _odd_root(q)


def mod6_limit_index(limit: int) -> int:
    """``ceil((limit - 2) / 3)``.

    The value at this order can exceed ``limit`` by up to 2 (limit 100 gives
    order 33, value 101), so consumers filter emitted values against the limit.
    """
    limit = _check_int(limit, "limit")
    if limit < 5:
        raise DomainError(f"limit must be >= 5 for the mod-6 track, got {limit}")
    return _mod6_limit(limit)


def mod6_first_elim_index(b: int) -> int:
    """Mod-6 order of ``p**2`` for the prime ``p`` at order ``b``."""
    b = _check_int(b, "b")
    if b < 1:
        raise DomainError(f"prime order must be >= 1, got {b}")
    return _fits(_mod6_start(b), "mod-6 start order")


def mod6_strides(p: int) -> tuple[int, int, int]:
    """Order gaps ``(f1, f2, f3)`` for the multiples of ``p`` on the mod-6 track.

    f1 spans ``p -> 7p`` (one step inside a progression), f2 spans
    ``p -> 5p`` and f3 spans ``5p -> 7p``. Always ``f1 == 2p == f2 + f3``.
    """
    p = _coprime_to_6(p)
    _fits(7 * p, "7p")
    return _mod6_strides(p)


def mod6_root_bound(e: int) -> int:
    """Largest prime order to sieve on the mod-6 track whose last order is ``e``.

    Clamped below at 1. The bound can overshoot by one position; the extra
    prime's start order then lies past ``e`` and marks nothing.
    """
    e = _check_int(e, "e")
    if e < 1:
        raise DomainError(f"limit order must be >= 1, got {e}")
    _fits(3 * e + 2, "3e+1")
    return _mod6_root(e)


def classify_square_sequence(p: int) -> SequenceClass:
    """Progression that ``p**2`` falls in, decided by ``p mod 6``.

    Note that testing whether ``(g + 1) / 3`` is an integer (see
    :func:`prose_sequence_test`) gets this wrong for p = 11.
    """
    p = _coprime_to_6(p)
    return SequenceClass.SECOND if _square_in_second(p) else SequenceClass.FIRST


def prose_sequence_test(g: int) -> SequenceClass:
    """Classify an order by divisibility of ``g + 1`` by 3.

    Kept only to document its failure: for p = 11 (g = 40) it answers FIRST
    although 121 = 11 * 11 lies in the SECOND progression. Engines never use it.
    """
    g = _check_int(g, "g")
    if g < 0:
        raise DomainError(f"order must be >= 0, got {g}")
    return SequenceClass.SECOND if (g + 1) % 3 == 0 else SequenceClass.FIRST


# ---------------------------------------------------------------------------
# parameter records


@dataclass(frozen=True)
class ClassicRuleParams:
    """Plain-sieve quantities for one prime ``prime_R`` at limit ``limit_N``."""

    limit_N: int
    first_multiple_Nf: Optional[int] = None
    prime_R: Optional[int] = None
    last_prime_bound_Rl: Optional[int] = None
    candidate_value_p: Optional[int] = None
    odd_order_n: Optional[int] = None

    def __post_init__(self):
        if self.limit_N < 0:
            raise DomainError("limit_N must be >= 0")
        if self.first_multiple_Nf is not None:
            if self.prime_R is None or self.first_multiple_Nf != self.prime_R**2:
                raise DomainError("first_multiple_Nf must equal prime_R squared")
        if self.last_prime_bound_Rl is not None:
            if self.last_prime_bound_Rl != math.isqrt(self.limit_N):
                raise DomainError("last_prime_bound_Rl must equal isqrt(limit_N)")
        if self.candidate_value_p is not None:
            if self.odd_order_n is None or self.candidate_value_p != 2 * self.odd_order_n + 1:
                raise DomainError("candidate_value_p must equal 2 * odd_order_n + 1")

    @classmethod
    def derive(cls, limit_N: int, prime_R: int) -> "ClassicRuleParams":
        n = value_to_odd_index(prime_R) if prime_R % 2 else None
        return cls(
            limit_N=limit_N,
            first_multiple_Nf=prime_R * prime_R,
            prime_R=prime_R,
            last_prime_bound_Rl=isqrt(limit_N),
            candidate_value_p=prime_R if n is not None else None,
            odd_order_n=n,
        )


@dataclass(frozen=True)
class OddTrackParams:
    """Odd-track quantities for the prime at order ``prime_order_z``.

    The Sundaram fields describe the same elimination: ``sundaram_i`` is the
    prime order, ``sundaram_u = 2i + 1`` its stride and
    ``sundaram_y = i + j + 2ij`` the order eliminated at step ``j``.
    """

    limit_order_nm: int
    start_order_m: int
    prime_order_z: int
    stride_d: int
    root_order_k: int
    limit_order_q: int
    sundaram_i: int
    sundaram_j: int
    sundaram_y: int
    sundaram_u: int
    sundaram_l: int
    sundaram_kprime: int
    sundaram_qprime: int

    def __post_init__(self):
        z = self.prime_order_z
        if self.start_order_m != 2 * (z * z + z):
            raise DomainError("start_order_m must equal 2(z^2 + z)")
        if self.stride_d != 2 * z + 1:
            raise DomainError("stride_d must equal 2z + 1")
        i, j = self.sundaram_i, self.sundaram_j
        if not 1 <= i <= j:
            raise DomainError("Sundaram indices need 1 <= i <= j")
        if self.sundaram_y != i + j + 2 * i * j:
            raise DomainError("sundaram_y must equal i + j + 2ij")
        if self.sundaram_u != 2 * i + 1:
            raise DomainError("sundaram_u must equal 2i + 1")

    @classmethod
    def derive(cls, limit_N: int, z: int, j: Optional[int] = None) -> "OddTrackParams":
        nm = odd_limit_index(limit_N)
        k = odd_root_bound(nm)
        j = z if j is None else j
        return cls(
            limit_order_nm=nm,
            start_order_m=odd_first_elim_index(z),
            prime_order_z=z,
            stride_d=odd_stride(z),
            root_order_k=k,
            limit_order_q=nm,
            sundaram_i=z,
            sundaram_j=j,
            sundaram_y=z + j + 2 * z * j,
            sundaram_u=2 * z + 1,
            sundaram_l=nm,
            sundaram_kprime=k,
            sundaram_qprime=nm,
        )


@dataclass(frozen=True)
class Mod6TrackParams:
    """Mod-6 quantities for the prime at order ``prime_order_b``.

    ``sequence_x`` is ``(g + 1) / 3`` or ``(g - 1) / 3``, whichever is an
    integer; it is None when ``g`` is a multiple of 3 (p = 17 gives g = 96),
    which the ``3x -+ 1`` representation cannot express.
    """

    index_n1: int
    limit_order_n1m: int
    start_order_g: int
    prime_order_b: int
    root_order_h: int
    limit_order_e: int
    stride_f1: int
    stride_f2: int
    stride_f3: int
    sequence_x: Optional[int]

    def __post_init__(self):
        ints = (
            self.index_n1, self.limit_order_n1m, self.start_order_g,
            self.prime_order_b, self.root_order_h, self.limit_order_e,
            self.stride_f1, self.stride_f2, self.stride_f3,
        )
        if any(v < 0 for v in ints):
            raise DomainError("mod-6 parameters must be non-negative")
        if self.stride_f1 != self.stride_f2 + self.stride_f3:
            raise DomainError("stride_f1 must equal stride_f2 + stride_f3")
        p = _mod6_value(self.prime_order_b)
        if self.stride_f1 != 2 * p:
            raise DomainError("stride_f1 must equal twice the prime")

    @property
    def prime(self) -> int:
        return mod6_index_to_value(self.prime_order_b)

    @classmethod
    def derive(cls, limit_N: int, b: int) -> "Mod6TrackParams":
        n1m = mod6_limit_index(limit_N)
        p = mod6_index_to_value(b)
        g = mod6_first_elim_index(b)
        f1, f2, f3 = mod6_strides(p)
        if (g + 1) % 3 == 0:
            x = (g + 1) // 3
        elif (g - 1) % 3 == 0:
            x = (g - 1) // 3
        else:
            x = None
        return cls(
            index_n1=b,
            limit_order_n1m=n1m,
            start_order_g=g,
            prime_order_b=b,
            root_order_h=mod6_root_bound(n1m),
            limit_order_e=n1m,
            stride_f1=f1,
            stride_f2=f2,
            stride_f3=f3,
            sequence_x=x,
        )
