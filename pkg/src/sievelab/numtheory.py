"""Shared number-theoretic primitives.

Everything downstream leans on four things: a classical prime sieve, the
Jacobi symbol, squarefree detection, and two weighted sums over primes
(the Mertens-type sum sum_{p <= Q} log p / p and the squarefree-supported
multiplicative sum sum_{q <= N} prod_{p|q} w(p)/p).  All of it is eager and
exact; nothing here is probabilistic.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PrimeTable",
    "primes_up_to",
    "jacobi",
    "is_squarefree",
    "mertens_log_sum",
    "multiplicative_partial_sum",
    "next_prime",
]


def _sieve_array(limit: int) -> np.ndarray:
    """Boolean primality array for 0..limit via the classical sieve."""
    if limit < 0:
        raise ValueError(f"sieve limit must be nonnegative, got {limit}")
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit, increasing."""
    if limit < 2:
        return []
    return np.flatnonzero(_sieve_array(limit)).tolist()


@dataclass(frozen=True)
class PrimeTable:
    """Eagerly sieved primes up to a fixed limit.

    The table refuses queries beyond its limit rather than resieving
    silently; callers own the decision to build a bigger one.
    """

    limit: int
    primes: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(primes_up_to(self.limit)))

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def up_to(self, q: int) -> tuple[int, ...]:
        """Primes p <= q as a tuple; q must not exceed the table limit."""
        self._check(q)
        return self.primes[: bisect_right(self.primes, q)]

    def in_window(self, lo: int, hi: int) -> tuple[int, ...]:
        """Primes in [lo, hi] inclusive."""
        self._check(hi)
        i = bisect_right(self.primes, lo - 1)
        j = bisect_right(self.primes, hi)
        return self.primes[i:j]

    def is_prime(self, n: int) -> bool:
        self._check(n)
        i = bisect_right(self.primes, n)
        return i > 0 and self.primes[i - 1] == n

    def _check(self, q: int) -> None:
        if q > self.limit:
            raise ValueError(f"query {q} exceeds table limit {self.limit}")


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd positive n; (a|1) = 1 by convention."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs odd positive n, got {n}")
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_squarefree(n: int) -> bool:
    """True iff no prime square divides n.  Defined for n != 0."""
    if n == 0:
        raise ValueError("squarefreeness is undefined at 0")
    n = abs(n)
    if n % 4 == 0:
        return False
    p = 3
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        while n % p == 0:
            n //= p
        p += 2
    return True


def mertens_log_sum(table: PrimeTable, q: int, subset=None) -> float:
    """sum log p / p over primes p <= q, optionally restricted to `subset`.

    Tracks log q to within an additive constant; the gap is what the
    denominator comparisons downstream care about.
    """
    if q > table.limit:
        raise ValueError(f"q={q} exceeds prime table limit {table.limit}")
    keep = (lambda p: True) if subset is None else (set(subset).__contains__)
    return sum(math.log(p) / p for p in table.up_to(q) if keep(p))


def multiplicative_partial_sum(weight, n: int) -> float:
    """sum over squarefree q <= n of prod_{p|q} w(p)/p, including q = 1.

    `weight` maps each prime p <= n to w(p) with 0 <= w(p) < p, either as a
    mapping or a callable.  The sum is assembled from the smallest-prime-factor
    sieve so each squarefree q is visited once.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    get = weight.__getitem__ if isinstance(weight, Mapping) else weight
    wp = {}
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in primes_up_to(n):
        w = get(p)
        if not 0 <= w < p:
            raise ValueError(f"weight at p={p} must lie in [0, p), got {w}")
        wp[p] = w
        mask = spf[p::p] == 0
        spf[p::p][mask] = p
    # g[q] = prod_{p|q} w(p)/p on squarefree q, 0 on the rest.
    g = np.zeros(n + 1, dtype=float)
    g[1] = 1.0
    for q in range(2, n + 1):
        p = int(spf[q])
        rest = q // p
        g[q] = 0.0 if rest % p == 0 else g[rest] * (wp[p] / p)
    return float(g.sum())


def next_prime(n: int, table: PrimeTable) -> int:
    """Smallest prime strictly greater than n, from the given table."""
    i = bisect_right(table.primes, n)
    if i >= len(table.primes):
        raise ValueError(f"no prime above {n} within table limit {table.limit}")
    return table.primes[i]
