"""Sieve bound evaluators.

Two inequalities do the work.  The large sieve: for A inside [1, X] whose
reduction mod p avoids the complement of S_p,

    |A| <= (X + Q^2) / sum_{q <= Q squarefree} prod_{p | q} |S_p^c|/|S_p|,

with the crude companion obtained by keeping only the prime terms.  The
larger sieve: with sigma_p = |S_p|/p over a chosen prime set P,

    |A| <= Q / (delta^2 * sum_{p in P, p <= Q} log p/(sigma_p p) - log X),

meaningful only when the denominator is positive.  Both are evaluated
exactly as written, O(1)-free; reports carry the raw sums so callers can
apply their own slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .numtheory import multiplicative_partial_sum, primes_up_to
from .residues import IntegerSet, ResidueConstraintFamily, residue_counts

__all__ = [
    "BoundReport",
    "LargerSieveInput",
    "large_sieve_bound",
    "larger_sieve_bound",
    "larger_sieve_value",
    "UniformFibreReport",
    "uniform_fibre_report",
    "miss_count_bound",
    "PairOccupancyReport",
    "pair_occupancy_scan",
]

# Denominators this close to zero count as nonpositive.
DENOMINATOR_TOLERANCE = 1e-9


@dataclass(frozen=True)
class BoundReport:
    """Outcome of a sieve evaluation.

    `bound` is None when the method is inconclusive (nonpositive
    denominator).  `per_prime` holds the per-prime terms of the denominator
    sum: the prime-q ratio terms for the large sieve, log p/(sigma_p p) for
    the larger sieve.
    """

    kind: str
    bound: float | None
    denominator: float
    per_prime: tuple[tuple[int, float], ...]
    crude_bound: float | None = None

    @property
    def conclusive(self) -> bool:
        return self.bound is not None

    def to_json_dict(self) -> dict:
        return {
            "bound": self.bound,
            "denominator": self.denominator,
            "crude_bound": self.crude_bound,
            "per_prime": [{"p": p, "term": t} for p, t in self.per_prime],
        }


def _squarefree_product_sum(primes: list[int], ratios: list[float], q: int) -> float:
    """sum over squarefree products of the given primes up to q of the
    corresponding ratio products; the empty product (q'=1) contributes 1."""
    total = 1.0
    stack = [(0, 1, 1.0)]
    while stack:
        i, prod, val = stack.pop()
        for j in range(i, len(primes)):
            nxt = prod * primes[j]
            if nxt > q:
                break  # ascending primes: later factors only grow
            contrib = val * ratios[j]
            total += contrib
            stack.append((j + 1, nxt, contrib))
    return total


def large_sieve_bound(
    family: ResidueConstraintFamily, x: int, q: int | None = None
) -> BoundReport:
    """Montgomery-form large sieve bound for sets obeying the family.

    Primes without a constraint contribute factor 0, i.e. squarefree moduli
    touching them drop out of the denominator.  Every constrained S_p must be
    nonempty.
    """
    if q is None:
        q = math.isqrt(x)
    if q < 1:
        raise ValueError(f"need Q >= 1, got {q}")
    primes, ratios, per_prime = [], [], []
    for p in family.primes():
        if p > q:
            continue
        s = family.constraints[p]
        if s.size == 0:
            raise ValueError(f"constraint at p={p} is empty; bound undefined")
        r = (p - s.size) / s.size
        primes.append(p)
        ratios.append(r)
        per_prime.append((p, r))
    denominator = _squarefree_product_sum(primes, ratios, q)
    crude_denom = sum((p - family.constraints[p].size) / p for p in primes)
    crude = (x + q * q) / crude_denom if crude_denom > DENOMINATOR_TOLERANCE else None
    return BoundReport(
        kind="large_sieve",
        bound=(x + q * q) / denominator,
        denominator=denominator,
        per_prime=tuple(per_prime),
        crude_bound=crude,
    )


@dataclass(frozen=True)
class LargerSieveInput:
    """Inputs for the larger sieve: family, box size X, prime cutoff Q, delta."""

    family: ResidueConstraintFamily
    x: int
    q: int
    delta: float = 1.0

    def __post_init__(self):
        if not 0 < self.delta <= 1:
            raise ValueError(f"delta must be in (0, 1], got {self.delta}")


def larger_sieve_value(
    sigma_by_prime: dict[int, float], x: int, q: int, delta: float = 1.0
) -> BoundReport:
    """Larger sieve straight from per-prime densities (no set plumbing)."""
    per_prime = []
    total = 0.0
    for p, sigma in sorted(sigma_by_prime.items()):
        if p > q:
            continue
        if sigma <= 0:
            raise ValueError(f"density at p={p} must be positive, got {sigma}")
        term = math.log(p) / (sigma * p)
        per_prime.append((p, term))
        total += term
    denominator = delta * delta * total - math.log(x)
    conclusive = denominator > DENOMINATOR_TOLERANCE
    return BoundReport(
        kind="larger_sieve",
        bound=q / denominator if conclusive else None,
        denominator=denominator,
        per_prime=tuple(per_prime),
    )


def larger_sieve_bound(inp: LargerSieveInput, prime_subset=None) -> BoundReport:
    """Larger sieve bound over the family's primes (or a chosen subset).

    Subset primes without a constraint are treated as unconstrained
    (sigma = 1); empty constraints are a domain error.
    """
    if prime_subset is None:
        primes = [p for p in inp.family.primes() if p <= inp.q]
    else:
        primes = sorted(p for p in prime_subset if p <= inp.q)
    sigma = {}
    for p in primes:
        s = inp.family.set_for(p)
        if s is None:
            sigma[p] = 1.0
        elif s.size == 0:
            raise ValueError(f"constraint at p={p} is empty; sigma undefined")
        else:
            sigma[p] = s.size / p
    return larger_sieve_value(sigma, inp.x, inp.q, inp.delta)


@dataclass(frozen=True)
class UniformFibreReport:
    """Which primes see near-uniform fibres of A, and the mass of the rest.

    p counts as uniform when sum_a |A cap (a mod p)|^2 <= (2+eta)|A|^2/p.
    excluded_mass = sum of log p/p over the non-uniform primes <= q.
    """

    eta: float
    uniform: tuple[int, ...]
    excluded: tuple[int, ...]
    excluded_mass: float
    second_moments: tuple[tuple[int, int], ...] = field(repr=False)


def uniform_fibre_report(a: IntegerSet, eta: float, primes) -> UniformFibreReport:
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    size_sq = len(a) ** 2
    uniform, excluded, moments = [], [], []
    mass = 0.0
    for p in sorted(primes):
        counts = residue_counts(a, p)
        m2 = int((counts.astype(object) ** 2).sum())
        moments.append((p, m2))
        if m2 * p <= (2 + eta) * size_sq:
            uniform.append(p)
        else:
            excluded.append(p)
            mass += math.log(p) / p
    return UniformFibreReport(
        eta=eta,
        uniform=tuple(uniform),
        excluded=tuple(excluded),
        excluded_mass=mass,
        second_moments=tuple(moments),
    )


def miss_count_bound(miss_counts, n: int) -> BoundReport:
    """Small-from-large bound: at Q = isqrt(2N) the set of integers missing
    w(p) classes mod each p has at most (2N + Q^2)/sum_{q} prod w(p)/p
    elements in [-N, N], the sum over squarefree q <= Q."""
    if n < 1:
        raise ValueError(f"need N >= 1, got {n}")
    q = math.isqrt(2 * n)
    denominator = multiplicative_partial_sum(miss_counts, q)
    get = miss_counts.__getitem__ if hasattr(miss_counts, "__getitem__") else miss_counts
    per_prime = tuple((p, get(p) / p) for p in primes_up_to(q))
    return BoundReport(
        kind="miss_count",
        bound=(2 * n + q * q) / denominator,
        denominator=denominator,
        per_prime=per_prime,
    )


@dataclass(frozen=True)
class PairOccupancyReport:
    """Occupancy fractions of two sets across a prime window.

    deficit = sum (log p/p) ((1-2*alpha_p)^2 + (1-2*beta_p)^2), the quantity
    that is small exactly when both sets fill half the classes mod most p.
    """

    occupancies: tuple[tuple[int, float, float], ...]
    deficit: float
    balanced_fraction: float
    eps: float


def pair_occupancy_scan(
    a: IntegerSet, b: IntegerSet, primes, eps: float = 0.05
) -> PairOccupancyReport:
    rows = []
    deficit = 0.0
    balanced = 0
    primes = sorted(primes)
    for p in primes:
        alpha = int((residue_counts(a, p) > 0).sum()) / p
        beta = int((residue_counts(b, p) > 0).sum()) / p
        rows.append((p, alpha, beta))
        deficit += (math.log(p) / p) * ((1 - 2 * alpha) ** 2 + (1 - 2 * beta) ** 2)
        if alpha <= 0.5 + eps and beta <= 0.5 + eps:
            balanced += 1
    fraction = balanced / len(primes) if primes else 0.0
    return PairOccupancyReport(
        occupancies=tuple(rows), deficit=deficit, balanced_fraction=fraction, eps=eps
    )
