"""Integer sets, residue sets and per-prime constraint families.

The objects here are the common currency of the whole package: a finite set
of integers inside [1, X], its reduction mod p (as a bitset plus fibre
counts), and a family of per-prime allowed residue sets.  Constructors for
the recurring examples (squares, intervals, progressions, primorials, random
constrained sets) live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numtheory import PrimeTable, next_prime, primes_up_to

__all__ = [
    "IntegerSet",
    "ResidueSet",
    "ResidueConstraintFamily",
    "FibreCounts",
    "InfeasibleConstraintError",
    "PrimorialGrowthError",
    "InvariantViolationError",
    "PrimorialConstruction",
    "reduce_mod",
    "residue_counts",
    "minimal_covering_interval",
    "occupancy_ok",
    "squares_set",
    "quadratic_residue_family",
    "interval_family",
    "progression_family",
    "family_from_reductions",
    "primorial_set",
    "random_constrained_set",
    "default_primorial_growth",
]


class InfeasibleConstraintError(ValueError):
    """Raised when a constrained sample is asked for more elements than exist."""


class PrimorialGrowthError(OverflowError):
    """Raised when the next primorial threshold exceeds the sieve cap."""


class InvariantViolationError(RuntimeError):
    """A theorem-backed inequality failed; this always indicates a bug."""


def _check_prime(p: int) -> None:
    if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"modulus {p} is not prime")


@dataclass(frozen=True)
class IntegerSet:
    """Finite set of distinct integers in [1, bound], stored sorted."""

    bound: int
    elements: tuple[int, ...]

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError(f"bound must be >= 1, got {self.bound}")
        elems = tuple(self.elements)
        if list(elems) != sorted(set(elems)):
            raise ValueError("elements must be sorted and distinct")
        if elems and (elems[0] < 1 or elems[-1] > self.bound):
            raise ValueError(f"elements must lie in [1, {self.bound}]")
        object.__setattr__(self, "elements", elems)

    @classmethod
    def from_iterable(cls, bound: int, elems) -> "IntegerSet":
        return cls(bound, tuple(sorted(set(int(e) for e in elems))))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in set(self.elements)

    def as_array(self) -> np.ndarray:
        if self.bound >= 2**62:
            raise OverflowError("elements exceed the fixed-width range")
        return np.asarray(self.elements, dtype=np.int64)

    def to_json_dict(self) -> dict:
        return {"bound": self.bound, "elements": list(self.elements)}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "IntegerSet":
        return cls.from_iterable(int(obj["bound"]), obj["elements"])


@dataclass(frozen=True)
class ResidueSet:
    """Subset of Z/pZ held as a bitmask; set algebra is bitwise."""

    modulus: int
    mask: int

    def __post_init__(self):
        _check_prime(self.modulus)
        if not 0 <= self.mask < (1 << self.modulus):
            raise ValueError("mask has bits outside [0, modulus)")

    @classmethod
    def from_members(cls, p: int, members) -> "ResidueSet":
        mask = 0
        for r in members:
            r = int(r)
            if not 0 <= r < p:
                raise ValueError(f"residue {r} out of range for modulus {p}")
            mask |= 1 << r
        return cls(p, mask)

    @classmethod
    def full(cls, p: int) -> "ResidueSet":
        return cls(p, (1 << p) - 1)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @property
    def density(self) -> float:
        return self.size / self.modulus

    def members(self) -> tuple[int, ...]:
        m, out, r = self.mask, [], 0
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return tuple(out)

    def __contains__(self, r: int) -> bool:
        return bool((self.mask >> (r % self.modulus)) & 1)

    def shift(self, h: int) -> "ResidueSet":
        """The translate S + h in Z/pZ."""
        p = self.modulus
        h %= p
        if h == 0:
            return self
        full = (1 << p) - 1
        return ResidueSet(p, ((self.mask << h) | (self.mask >> (p - h))) & full)

    def intersect(self, other: "ResidueSet") -> "ResidueSet":
        self._same_modulus(other)
        return ResidueSet(self.modulus, self.mask & other.mask)

    def union(self, other: "ResidueSet") -> "ResidueSet":
        self._same_modulus(other)
        return ResidueSet(self.modulus, self.mask | other.mask)

    def complement(self) -> "ResidueSet":
        return ResidueSet(self.modulus, ((1 << self.modulus) - 1) ^ self.mask)

    def indicator(self) -> np.ndarray:
        out = np.zeros(self.modulus, dtype=np.int64)
        for r in self.members():
            out[r] = 1
        return out

    def _same_modulus(self, other: "ResidueSet") -> None:
        if self.modulus != other.modulus:
            raise ValueError(
                f"modulus mismatch: {self.modulus} vs {other.modulus}"
            )


@dataclass
class FibreCounts:
    """How many elements of an integer set land in each residue class."""

    modulus: int
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def occupied(self) -> ResidueSet:
        return ResidueSet.from_members(self.modulus, np.flatnonzero(self.counts))


@dataclass(frozen=True)
class ResidueConstraintFamily:
    """Per-prime allowed residue sets over a prime window.

    Primes of the window without an entry are unconstrained; consumers decide
    what that means for them (factor 0 in the large sieve denominator,
    density 1 in the larger sieve).
    """

    prime_range: tuple[int, int]
    constraints: dict[int, ResidueSet] = field(repr=False)

    def __post_init__(self):
        lo, hi = self.prime_range
        if lo > hi:
            raise ValueError(f"empty prime range {self.prime_range}")
        for p, s in self.constraints.items():
            _check_prime(p)
            if not lo <= p <= hi:
                raise ValueError(f"modulus {p} outside prime range [{lo}, {hi}]")
            if s.modulus != p:
                raise ValueError(f"constraint at {p} has modulus {s.modulus}")

    @classmethod
    def from_sets(cls, sets: dict[int, ResidueSet]) -> "ResidueConstraintFamily":
        if not sets:
            raise ValueError("need at least one constraint; range is derived")
        ps = sorted(sets)
        return cls((ps[0], ps[-1]), dict(sets))

    def primes(self) -> tuple[int, ...]:
        return tuple(sorted(self.constraints))

    def set_for(self, p: int):
        return self.constraints.get(p)

    def restrict(self, keep) -> "ResidueConstraintFamily":
        kept = {p: s for p, s in self.constraints.items() if p in set(keep)}
        return ResidueConstraintFamily(self.prime_range, kept)

    def to_json_dict(self) -> dict:
        return {
            "primes": [
                {"p": p, "members": list(self.constraints[p].members())}
                for p in self.primes()
            ]
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ResidueConstraintFamily":
        sets = {
            int(rec["p"]): ResidueSet.from_members(int(rec["p"]), rec["members"])
            for rec in obj["primes"]
        }
        return cls.from_sets(sets)


# ---------------------------------------------------------------------------
# reductions


def residue_counts(a: IntegerSet, p: int) -> np.ndarray:
    """Fibre count vector of a mod p (exact, handles arbitrary-width ints)."""
    _check_prime(p)
    if a.bound < 2**62:
        return np.bincount(a.as_array() % p, minlength=p)
    counts = np.zeros(p, dtype=np.int64)
    for x in a.elements:
        counts[x % p] += 1
    return counts


def reduce_mod(a: IntegerSet, p: int) -> tuple[ResidueSet, FibreCounts]:
    counts = residue_counts(a, p)
    fibre = FibreCounts(p, counts)
    return fibre.occupied(), fibre


def minimal_covering_interval(s: ResidueSet) -> tuple[int, int]:
    """Shortest cyclic interval (start, length) containing the set.

    The complement of the largest circular gap; among equal gaps the one
    yielding the smallest start wins, so the answer is deterministic.
    """
    k = s.size
    p = s.modulus
    if k == 0:
        return (0, 0)
    if k == p:
        return (0, p)
    members = s.members()
    if k == 1:
        return (members[0], 1)
    best_gap, best_start = -1, 0
    for i, r in enumerate(members):
        nxt = members[(i + 1) % k]
        gap = (nxt - r) % p
        if gap > best_gap or (gap == best_gap and nxt < best_start):
            best_gap, best_start = gap, nxt
    return (best_start, p - best_gap + 1)


def occupancy_ok(a: IntegerSet, family: ResidueConstraintFamily) -> list[tuple[int, int]]:
    """All (p, residue) pairs where a residue of A escapes S_p; empty = ok."""
    violations = []
    for p in family.primes():
        allowed = family.constraints[p]
        occupied, _ = reduce_mod(a, p)
        bad = occupied.mask & ~allowed.mask
        for r in ResidueSet(p, bad).members():
            violations.append((p, r))
    return violations


# ---------------------------------------------------------------------------
# constructors


def squares_set(x: int) -> IntegerSet:
    """The perfect squares in [1, x]."""
    return IntegerSet(x, tuple(n * n for n in range(1, math.isqrt(x) + 1)))


def quadratic_residue_family(primes) -> ResidueConstraintFamily:
    """S_p = {squares mod p} (0 included); the family the squares obey."""
    sets = {}
    for p in primes:
        mask = 0
        for r in range(p):
            mask |= 1 << (r * r % p)
        sets[p] = ResidueSet(p, mask)
    return ResidueConstraintFamily.from_sets(sets)


def interval_family(primes, rule) -> ResidueConstraintFamily:
    """S_p = cyclic interval given by rule(p) -> (start, length)."""
    sets = {}
    for p in primes:
        start, length = rule(p)
        if not 0 <= length <= p:
            raise ValueError(f"interval length {length} invalid mod {p}")
        members = [(start + j) % p for j in range(length)]
        sets[p] = ResidueSet.from_members(p, members)
    return ResidueConstraintFamily.from_sets(sets)


def progression_family(primes, rule) -> ResidueConstraintFamily:
    """S_p = arithmetic progression given by rule(p) -> (start, step, length)."""
    sets = {}
    for p in primes:
        start, step, length = rule(p)
        if not 0 <= length <= p:
            raise ValueError(f"progression length {length} invalid mod {p}")
        if length > 1 and step % p == 0:
            raise ValueError(f"step {step} degenerate mod {p}")
        members = {(start + j * step) % p for j in range(length)}
        if len(members) != length:
            raise ValueError(f"progression wraps onto itself mod {p}")
        sets[p] = ResidueSet.from_members(p, members)
    return ResidueConstraintFamily.from_sets(sets)


def family_from_reductions(a: IntegerSet, primes) -> ResidueConstraintFamily:
    """The tightest family a given set obeys: S_p = A mod p."""
    sets = {}
    for p in primes:
        occupied, _ = reduce_mod(a, p)
        sets[p] = occupied
    return ResidueConstraintFamily.from_sets(sets)


def default_primorial_growth(i: int, prev_product) -> int:
    """X_1 = 3, then the smallest prime above 10 * (previous product)."""
    if i == 1:
        return 3
    target = 10 * prev_product
    limit = 2 * target + 100  # Bertrand guarantees a prime below this
    if limit > 50_000_000:
        raise PrimorialGrowthError(
            f"next threshold above 10*{prev_product} exceeds the sieve cap"
        )
    table = PrimeTable(int(limit))
    return next_prime(int(target), table)


@dataclass(frozen=True)
class PrimorialConstruction:
    """Nested primorials plus, per checked prime, the covering interval."""

    values: IntegerSet
    thresholds: tuple[int, ...]
    coverings: dict[int, tuple[int, int]]

    def worst_ratio(self) -> float:
        """max over checked p of covering length / p."""
        return max(length / p for p, (_, length) in self.coverings.items())


def primorial_set(growth_rule=None, count: int = 2, check_limit: int = 100_000) -> PrimorialConstruction:
    """Products a_i of all primes <= X_i, X_i from the growth rule.

    Elements are exact arbitrary-width integers.  For every prime
    p <= check_limit the minimal cyclic interval covering {a_i mod p} is
    reported; the construction is designed to keep its length below 0.6*p.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rule = growth_rule if growth_rule is not None else default_primorial_growth
    thresholds, values = [], []
    product = 1
    for i in range(1, count + 1):
        x_i = rule(i, product)
        if thresholds and x_i <= thresholds[-1]:
            raise ValueError(f"growth rule must increase: X_{i}={x_i}")
        product = 1
        for p in primes_up_to(x_i):
            product *= p
        thresholds.append(x_i)
        values.append(product)
    coverings = {}
    for p in primes_up_to(check_limit):
        occupied = ResidueSet.from_members(p, {a % p for a in values})
        coverings[p] = minimal_covering_interval(occupied)
    return PrimorialConstruction(
        values=IntegerSet(values[-1], tuple(values)),
        thresholds=tuple(thresholds),
        coverings=coverings,
    )


def allowed_elements(family: ResidueConstraintFamily, x: int) -> np.ndarray:
    """All n in [1, x] whose residues obey every constraint of the family."""
    n = np.arange(1, x + 1, dtype=np.int64)
    keep = np.ones(x, dtype=bool)
    for p in family.primes():
        table = family.constraints[p].indicator().astype(bool)
        keep &= table[n % p]
    return n[keep]


def random_constrained_set(
    family: ResidueConstraintFamily, x: int, size: int, seed: int
) -> IntegerSet:
    """Uniform random size-`size` subset of the family's allowed elements.

    Deterministic in `seed` (counter-based generator).  Raises
    InfeasibleConstraintError when fewer than `size` elements satisfy the
    constraints.
    """
    pool = allowed_elements(family, x)
    if len(pool) < size:
        raise InfeasibleConstraintError(
            f"only {len(pool)} elements of [1, {x}] satisfy the family; "
            f"cannot draw {size}"
        )
    gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    chosen = gen.choice(pool, size=size, replace=False)
    return IntegerSet.from_iterable(x, chosen)
