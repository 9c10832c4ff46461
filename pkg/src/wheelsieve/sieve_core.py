"""The four sieve engines and the bit-packed candidate tracks they share.

Each engine returns a :class:`PrimeStream` over its finished track. Allocation,
bit access, progression marking and emission are common to all engines, so
the engines differ only in how they walk the track.

Bit ``i`` of a track lives in byte ``i >> 3`` at position ``i & 7``; a set bit
means the candidate at order ``i`` is composite.
"""

from __future__ import annotations

import enum
from typing import Callable, Iterator

import numba
import numpy as np

from . import index_math as im
from .index_math import DomainError

__all__ = [
    "ResourceError",
    "Wheel",
    "CandidateTrack",
    "PrimeStream",
    "soe",
    "d1soe",
    "dsos",
    "d2soe",
    "count",
    "ENGINES",
    "TABLE_ORDER",
    "get_engine",
    "track_bytes",
    "MAX_LIMIT",
]

MAX_LIMIT = 2**62 - 1

# orders decoded per emission chunk
CHUNK_ORDERS = 1 << 20

kernel = numba.njit(cache=True, nogil=True)


class ResourceError(MemoryError):
    """A track could not be allocated."""


class Wheel(enum.Enum):
    PLAIN = "plain"  # every integer; order == value
    ODD = "odd"  # order n -> 2n + 1
    MOD6 = "mod6"  # order n1 -> n1-th integer > 3 coprime to 6


_WHEEL_PRIMES = {Wheel.PLAIN: (), Wheel.ODD: (2,), Wheel.MOD6: (2, 3)}
_FIRST_ORDER = {Wheel.PLAIN: 2, Wheel.ODD: 1, Wheel.MOD6: 1}
_WHEEL_CODE = {Wheel.PLAIN: 0, Wheel.ODD: 1, Wheel.MOD6: 2}

_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


# ---------------------------------------------------------------------------
# bit access


@kernel
def _set_bit(bits, i):
    bits[i >> 3] |= np.uint8(1 << (i & 7))


@kernel
def _test_bit(bits, i):
    return (bits[i >> 3] >> (i & 7)) & 1


@kernel
def _mark_progression(bits, start, step, stop):
    i = start
    while i <= stop:
        _set_bit(bits, i)
        i += step


@kernel
def _count_set(bits, lo, hi):
    c = 0
    i = lo
    while i <= hi and (i & 7) != 0:
        c += _test_bit(bits, i)
        i += 1
    while i + 7 <= hi:
        c += _POPCOUNT[bits[i >> 3]]
        i += 8
    while i <= hi:
        c += _test_bit(bits, i)
        i += 1
    return c


@kernel
def _order_values(orders, wheel_code):
    out = np.empty(orders.size, dtype=np.int64)
    for t in range(orders.size):
        n = orders[t]
        if wheel_code == 1:
            out[t] = im._odd_value(n)
        elif wheel_code == 2:
            out[t] = im._mod6_value(n)
        else:
            out[t] = n
    return out


# ---------------------------------------------------------------------------
# elimination kernels


@kernel
def _soe_kernel(bits, limit):
    for r in range(2, im._isqrt(limit) + 1):
        if _test_bit(bits, r):
            continue
        _mark_progression(bits, r * r, r, limit)


@kernel
def _d1soe_kernel(bits, nm, skip_composite_orders):
    k = im._odd_root(nm)
    for z in range(1, k + 1):
        if skip_composite_orders and _test_bit(bits, z):
            continue
        _mark_progression(bits, im._odd_start(z), im._odd_step(z), nm)


@kernel
def _dsos_kernel(bits, l):
    k = im._odd_root(l)
    for i in range(1, k + 1):
        if _test_bit(bits, i):
            continue
        j = i
        y = i + j + 2 * i * j
        while y <= l:
            _set_bit(bits, y)
            j += 1
            y = i + j + 2 * i * j


@kernel
def _d2soe_kernel(bits, n1m, first_class_minus_f3):
    h = im._mod6_root(n1m)
    for b in range(1, h + 1):
        if _test_bit(bits, b):
            continue
        p = im._mod6_value(b)
        g = im._mod6_start(b)
        f1, f2, f3 = im._mod6_strides(p)
        # progression holding p*p
        _mark_progression(bits, g, f1, n1m)
        # companion progression
        if im._square_in_second(p):
            _mark_progression(bits, g + f3, f1, n1m)
        elif first_class_minus_f3:
            _mark_progression(bits, g - f3, f1, n1m)
        else:
            _mark_progression(bits, g + f2, f1, n1m)


# ---------------------------------------------------------------------------
# tracks and streams


def _track_size(wheel: Wheel, limit: int) -> int:
    """Number of orders (last order + 1) a track for ``limit`` needs."""
    if wheel is Wheel.PLAIN:
        return limit + 1
    if wheel is Wheel.ODD:
        return im.odd_limit_index(limit) + 1 if limit >= 1 else 0
    return im.mod6_limit_index(limit) + 1 if limit >= 5 else 0


class CandidateTrack:
    """Composite flags for one wheel, packed eight orders per byte."""

    def __init__(self, wheel: Wheel, limit_N: int, bits: np.ndarray, size: int):
        self.wheel = wheel
        self.limit_N = limit_N
        self.bits = bits
        self.size = size

    @classmethod
    def allocate(cls, wheel: Wheel, limit_N: int) -> "CandidateTrack":
        size = _track_size(wheel, limit_N)
        try:
            bits = np.zeros((size + 7) // 8, dtype=np.uint8)
        except MemoryError as exc:
            raise ResourceError(f"cannot allocate a {wheel.value} track for N={limit_N}") from exc
        return cls(wheel, limit_N, bits, size)

    @property
    def first_order(self) -> int:
        return _FIRST_ORDER[self.wheel]

    @property
    def last_order(self) -> int:
        return self.size - 1

    def is_composite(self, i: int) -> bool:
        if not 0 <= i < self.size:
            raise IndexError(i)
        return bool(_test_bit(self.bits, i))

    def composite_orders(self) -> np.ndarray:
        flags = np.unpackbits(self.bits, bitorder="little")[: self.size]
        return np.flatnonzero(flags)

    def values(self, orders: np.ndarray) -> np.ndarray:
        return _order_values(np.asarray(orders, dtype=np.int64), _WHEEL_CODE[self.wheel])

    def count_survivors(self) -> int:
        """Candidates in ``[first_order, last_order]`` left unmarked with value <= N."""
        lo, hi = self.first_order, self.last_order
        if hi < lo:
            return 0
        n = (hi - lo + 1) - int(_count_set(self.bits, lo, hi))
        if self.wheel is Wheel.MOD6 and not _test_bit(self.bits, hi):
            if im._mod6_value(hi) > self.limit_N:
                n -= 1
        return n

    def survivor_chunks(self, chunk_orders: int = CHUNK_ORDERS) -> Iterator[np.ndarray]:
        """Values of unmarked candidates, ascending, a chunk at a time."""
        lo, hi = self.first_order, self.last_order
        if hi < lo:
            return
        step = max(8, chunk_orders - chunk_orders % 8)
        # chunks start on byte boundaries
        for start in range(0, hi + 1, step):
            stop = min(start + step, hi + 1)
            flags = np.unpackbits(self.bits[start >> 3 : (stop + 7) >> 3], bitorder="little")
            flags = flags[: stop - start]
            orders = np.flatnonzero(flags == 0) + start
            if start < lo:
                orders = orders[orders >= lo]
            vals = self.values(orders)
            if self.wheel is Wheel.MOD6 and stop == hi + 1 and vals.size and vals[-1] > self.limit_N:
                vals = vals[:-1]
            if vals.size:
                yield vals

    def __eq__(self, other):
        if not isinstance(other, CandidateTrack):
            return NotImplemented
        return (
            self.wheel is other.wheel
            and self.limit_N == other.limit_N
            and self.size == other.size
            and np.array_equal(self.bits, other.bits)
        )

    def __repr__(self):
        return f"CandidateTrack(wheel={self.wheel.value}, limit_N={self.limit_N}, size={self.size})"


class PrimeStream:
    """Ascending primes <= ``limit_N`` read lazily off a finished track."""

    def __init__(self, track: CandidateTrack):
        self.track = track
        self.limit_N = track.limit_N
        self.wheel_primes = tuple(p for p in _WHEEL_PRIMES[track.wheel] if p <= track.limit_N)

    def chunks(self, chunk_orders: int = CHUNK_ORDERS) -> Iterator[np.ndarray]:
        if self.wheel_primes:
            yield np.array(self.wheel_primes, dtype=np.int64)
        yield from self.track.survivor_chunks(chunk_orders)

    def __iter__(self) -> Iterator[int]:
        for chunk in self.chunks():
            yield from chunk.tolist()

    def count(self) -> int:
        return len(self.wheel_primes) + self.track.count_survivors()

    def __len__(self):
        return self.count()

    def to_array(self) -> np.ndarray:
        parts = list(self.chunks())
        return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def count(stream) -> int:
    """Number of primes in ``stream``; a PrimeStream is counted without decoding."""
    if isinstance(stream, PrimeStream):
        return stream.count()
    return sum(1 for _ in stream)


# ---------------------------------------------------------------------------
# engines


def _limit(N) -> int:
    N = im._check_int(N, "N")
    if N < 0:
        raise DomainError(f"limit must be >= 0, got {N}")
    if N > MAX_LIMIT:
        raise DomainError(f"limit {N} exceeds the supported maximum {MAX_LIMIT}")
    return N


def soe(N: int) -> PrimeStream:
    """Classic sieve of Eratosthenes over every integer up to ``N``."""
    N = _limit(N)
    track = CandidateTrack.allocate(Wheel.PLAIN, N)
    if N >= 4:
        _soe_kernel(track.bits, N)
    return PrimeStream(track)


def d1soe(N: int, *, skip_composite_orders: bool = True) -> PrimeStream:
    """Odd-track sieve: prime order ``z`` strikes ``2(z^2+z)``, stepping by ``2z+1``.

    ``skip_composite_orders=False`` strikes from every order up to the root
    bound, not just prime ones; the output is the same, only the work grows.
    """
    N = _limit(N)
    track = CandidateTrack.allocate(Wheel.ODD, N)
    if track.size:
        _d1soe_kernel(track.bits, track.last_order, skip_composite_orders)
    return PrimeStream(track)


def dsos(N: int) -> PrimeStream:
    """Sundaram's sieve restricted to prime orders ``i`` and bounded by the odd root bound.

    Strikes ``i + j + 2ij`` for ``j = i, i+1, ...``; the finished track is
    bit-identical to :func:`d1soe`'s.
    """
    N = _limit(N)
    track = CandidateTrack.allocate(Wheel.ODD, N)
    if track.size:
        _dsos_kernel(track.bits, track.last_order)
    return PrimeStream(track)


def d2soe(N: int, *, first_class_start: str = "g+f2") -> PrimeStream:
    """Mod-6 track sieve.

    For each prime order ``b`` the progression containing ``p*p`` is struck
    from ``g`` in steps of ``f1 = 2p``, then the companion progression: from
    ``g + f3`` when ``p = 5 (mod 6)``, otherwise from ``g + f2``.
    ``first_class_start="g-f3"`` starts the latter one step of ``f1`` earlier,
    at ``p(p - 2)``, which is already composite.
    """
    if first_class_start not in ("g+f2", "g-f3"):
        raise ValueError(f"first_class_start must be 'g+f2' or 'g-f3', got {first_class_start!r}")
    N = _limit(N)
    track = CandidateTrack.allocate(Wheel.MOD6, N)
    if track.size:
        _d2soe_kernel(track.bits, track.last_order, first_class_start == "g-f3")
    return PrimeStream(track)


ENGINES: dict[str, Callable[[int], PrimeStream]] = {
    "soe": soe,
    "d1soe": d1soe,
    "dsos": dsos,
    "d2soe": d2soe,
}

# column order of the published runtime table
TABLE_ORDER = ("soe", "d1soe", "d2soe", "dsos")

_ENGINE_WHEEL = {"soe": Wheel.PLAIN, "d1soe": Wheel.ODD, "dsos": Wheel.ODD, "d2soe": Wheel.MOD6}


def get_engine(name: str) -> Callable[[int], PrimeStream]:
    try:
        return ENGINES[name]
    except KeyError:
        raise ValueError(f"unknown engine {name!r}; choose from {', '.join(ENGINES)}") from None


def track_bytes(name: str, N: int) -> int:
    """Bytes the engine's track needs at limit ``N``, without allocating it."""
    get_engine(name)
    return (_track_size(_ENGINE_WHEEL[name], _limit(N)) + 7) // 8
