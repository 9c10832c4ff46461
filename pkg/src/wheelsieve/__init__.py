"""Wheel-factorized prime sieves: SOE, D1SOE, DSOS and D2SOE."""

from .index_math import DomainError, SequenceClass
from .sieve_core import (
    ENGINES,
    TABLE_ORDER,
    CandidateTrack,
    PrimeStream,
    ResourceError,
    count,
    d1soe,
    d2soe,
    dsos,
    get_engine,
    soe,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "SequenceClass",
    "ENGINES",
    "TABLE_ORDER",
    "CandidateTrack",
    "PrimeStream",
    "ResourceError",
    "count",
    "d1soe",
    "d2soe",
    "dsos",
    "get_engine",
    "soe",
]
