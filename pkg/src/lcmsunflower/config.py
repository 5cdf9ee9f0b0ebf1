"""Tunable caps. Every limit is checked loudly; nothing degrades silently."""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Limits:
    sieve_limit: int = 10**8
    exact_fk_ceiling: int = 60
    exact_capacity_n: int = 5
    enumeration_cap: int = 10**6
    exact_harmonic_limit: int = 10**5
    pair_cap: int = 5 * 10**7
    """Largest number of element pairs the bucketed clique detector materializes."""


LIMITS = Limits()

CACHE_ENV = "LCMSUN_CACHE_DIR"


def cache_dir() -> str | None:
    """Directory for cached sieves, or None when caching is off."""
    path = os.environ.get(CACHE_ENV)
    return path or None
