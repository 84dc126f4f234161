"""Additive energy, shift structure, and the differenced sieve pipelines.

For A a finite set of integers, E(A) counts quadruples a+b = c+d; mod p the
cyclic analogue E_p(A) counts congruent quadruples and always satisfies
p*E_p >= |A|^4.  The lifted comparison

    sum_{p <= sqrt(X)} (p*E_p(A) - |A|^4)  <=  3*X*E(A)

ties the two scales together and is checked here in exact integers.  On top
of these sit the shift sets H = {h : |A cap (A+h)| >= |A|/2K}, the Pollard
intersection profiles mod p, and two search pipelines that try to turn a
low-energy structure into a conclusive larger-sieve certificate.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .bounds import BoundReport, LargerSieveInput, larger_sieve_bound
from .residues import (
    IntegerSet,
    ResidueConstraintFamily,
    ResidueSet,
    residue_counts,
)
from .numtheory import primes_up_to

__all__ = [
    "additive_energy",
    "representation_counts",
    "additive_energy_mod",
    "EnergyReport",
    "energy_report",
    "QuadrupleCheck",
    "quadruple_threshold_check",
    "LiftCheck",
    "lift_inequality_check",
    "ShiftSet",
    "shift_set",
    "PollardProfile",
    "pollard_profile",
    "threshold_select",
    "DifferencedSieveReport",
    "differenced_larger_sieve",
    "IntersectionTrace",
    "intersecting_process",
]


def _exact_square_sum(values: np.ndarray) -> int:
    """sum v^2 over an int64 array, exact regardless of magnitude."""
    vals, mult = np.unique(values, return_counts=True)
    return sum(int(v) * int(v) * int(m) for v, m in zip(vals, mult) if v)


def representation_counts(a: IntegerSet) -> np.ndarray:
    """r[s] = number of ordered pairs of elements of A summing to s."""
    return kernels.sum_histogram(a.as_array(), 2 * a.bound + 1)


def additive_energy(a: IntegerSet) -> int:
    """E(A) = sum_s r(s)^2, the number of quadruples with a+b = c+d."""
    return _exact_square_sum(representation_counts(a))


def _count_vector(obj, p: int | None = None) -> tuple[np.ndarray, int]:
    if isinstance(obj, ResidueSet):
        return obj.indicator(), obj.modulus
    if isinstance(obj, IntegerSet):
        if p is None:
            raise ValueError("reducing an integer set needs a modulus")
        return residue_counts(obj, p), p
    raise TypeError(f"expected IntegerSet or ResidueSet, got {type(obj).__name__}")


def additive_energy_mod(obj, p: int | None = None) -> int:
    """E_p: congruent-quadruple count mod p, with multiplicity for integer
    sets.  Uses E_p = sum_h c(h)^2 where c(h) is the cyclic autocorrelation
    of the fibre counts; O(p^2 + |A|) and exact."""
    counts, p = _count_vector(obj, p)
    return _exact_square_sum(kernels.cyclic_autocorrelation(counts))


@dataclass(frozen=True)
class EnergyReport:
    """E(A) together with every E_p for p up to sqrt(bound)."""

    size: int
    energy: int
    per_prime: tuple[tuple[int, int], ...]

    def to_json_dict(self) -> dict:
        return {
            "size": self.size,
            "energy": self.energy,
            "per_prime": [{"p": p, "energy": e} for p, e in self.per_prime],
        }


def energy_report(a: IntegerSet, x: int | None = None) -> EnergyReport:
    x = a.bound if x is None else x
    reps = representation_counts(a)
    per_prime = []
    for p in primes_up_to(math.isqrt(x)):
        folded = kernels.fold_mod(reps, p)
        per_prime.append((p, _exact_square_sum(folded)))
    return EnergyReport(size=len(a), energy=additive_energy(a), per_prime=tuple(per_prime))


@dataclass(frozen=True)
class QuadrupleCheck:
    modulus: int
    energy: int
    ratio: float
    margin: float
    passed: bool


def quadruple_threshold_check(s, delta: float, p: int | None = None) -> QuadrupleCheck:
    """Does E_p exceed (1/16 + delta) p^3?  margin = E_p/p^3 - 1/16."""
    counts, p = _count_vector(s, p)
    e = _exact_square_sum(kernels.cyclic_autocorrelation(counts))
    ratio = e / p**3
    return QuadrupleCheck(
        modulus=p, energy=e, ratio=ratio, margin=ratio - 1 / 16,
        passed=e >= (1 / 16 + delta) * p**3,
    )


@dataclass(frozen=True)
class LiftCheck:
    """Exact-integer comparison of the lifted energy sum against 3*X*E."""

    x: int
    size: int
    energy: int
    lhs: int
    rhs: int
    per_prime: tuple[tuple[int, int], ...]

    @property
    def slack(self) -> int:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def lift_inequality_check(a: IntegerSet, x: int | None = None) -> LiftCheck:
    x = a.bound if x is None else x
    if not a.elements:
        raise ValueError("lift comparison needs a nonempty set")
    reps = representation_counts(a)
    fourth = len(a) ** 4
    lhs = 0
    per_prime = []
    for p in primes_up_to(math.isqrt(x)):
        e_p = _exact_square_sum(kernels.fold_mod(reps, p))
        term = p * e_p - fourth  # Cauchy-Schwarz keeps this nonnegative
        per_prime.append((p, term))
        lhs += term
    energy = _exact_square_sum(reps)
    return LiftCheck(
        x=x, size=len(a), energy=energy, lhs=lhs, rhs=3 * x * energy,
        per_prime=tuple(per_prime),
    )


@dataclass(frozen=True)
class ShiftSet:
    """Shifts h with |A cap (A+h)| >= |A|/(2K), counts included."""

    k: float
    threshold: float
    shifts: tuple[int, ...]
    counts: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.shifts)

    def nonzero(self) -> tuple[int, ...]:
        return tuple(h for h in self.shifts if h != 0)


def shift_set(a: IntegerSet, k: float) -> ShiftSet:
    if k <= 0:
        raise ValueError(f"K must be positive, got {k}")
    if not a.elements:
        raise ValueError("shift set of an empty set is undefined")
    span = a.bound - 1
    hist = kernels.difference_histogram(a.as_array(), span)
    threshold = len(a) / (2 * k)
    hs = np.flatnonzero(hist >= threshold - 1e-9) - span
    counts = hist[hs + span]
    return ShiftSet(
        k=float(k),
        threshold=threshold,
        shifts=tuple(int(h) for h in hs),
        counts=tuple(int(c) for c in counts),
    )


@dataclass(frozen=True)
class PollardProfile:
    """N_i = #{h in Z/pZ : |S cap (S+h)| >= i}, i = 1..|S|.

    Partial sums obey N_1 + ... + N_r >= r(2|S| - r) for
    2|S| - p <= r <= |S|, and the near-invariant shifts
    {h : |S cap (S+h)| >= (1-eps)|S|} number at most 4 eps |S| + 1 whenever
    |S| < (1 - 2 eps) p.
    """

    modulus: int
    set_size: int
    correlations: tuple[int, ...] = field(repr=False)
    profile: tuple[int, ...]

    def audit_violations(self) -> list[tuple[int, int, int]]:
        """(r, partial_sum, required) triples where the bound fails; [] = ok."""
        out = []
        partial = 0
        s = self.set_size
        lo = max(1, 2 * s - self.modulus)
        for r in range(1, s + 1):
            partial += self.profile[r - 1]
            need = r * (2 * s - r)
            if r >= lo and partial < need:
                out.append((r, partial, need))
        return out

    def near_invariant(self, eps: float) -> tuple[int, float, bool]:
        """(count, bound 4*eps*|S|+1, applicable flag |S| < (1-2 eps) p)."""
        cut = (1 - eps) * self.set_size
        count = sum(1 for c in self.correlations if c >= cut - 1e-9)
        return count, 4 * eps * self.set_size + 1, self.set_size < (1 - 2 * eps) * self.modulus


def pollard_profile(s: ResidueSet) -> PollardProfile:
    if s.size == 0:
        raise ValueError("profile of the empty set is undefined")
    corr = kernels.cyclic_autocorrelation(s.indicator())
    hist = np.bincount(corr, minlength=s.size + 1)
    # N_i = number of shifts with correlation at least i
    tail = np.cumsum(hist[::-1])[::-1]
    profile = tuple(int(t) for t in tail[1 : s.size + 1])
    return PollardProfile(
        modulus=s.modulus,
        set_size=s.size,
        correlations=tuple(int(c) for c in corr),
        profile=profile,
    )


def threshold_select(items, weights, values, eps: float, eps_prime: float):
    """Keep the items with value >= 1 - eps_prime.

    Given nonnegative weights and values in [0,1] whose weighted mean is at
    least 1 - eps (0 < eps < eps_prime < 1), the kept items carry at least a
    (1 - eps/eps_prime) share of the total weight; that guarantee is exact
    averaging, and the function raises if the preconditions fail.  Returns
    (kept items, kept weight, total weight).
    """
    items = list(items)
    weights = [float(w) for w in weights]
    values = [float(v) for v in values]
    if not (len(items) == len(weights) == len(values)):
        raise ValueError("items, weights, values must align")
    if not 0 < eps < eps_prime < 1:
        raise ValueError(f"need 0 < eps < eps' < 1, got {eps}, {eps_prime}")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    if any(not 0 <= v <= 1 for v in values):
        raise ValueError("values must lie in [0, 1]")
    total = sum(weights)
    if total <= 0:
        raise ValueError("total weight must be positive")
    mean = sum(w * v for w, v in zip(weights, values)) / total
    if mean < 1 - eps - 1e-12:
        raise ValueError(f"weighted mean {mean:.6f} below 1 - eps = {1 - eps}")
    kept = [(x, w) for x, w, v in zip(items, weights, values) if v >= 1 - eps_prime]
    kept_weight = sum(w for _, w in kept)
    return [x for x, _ in kept], kept_weight, total


# ---------------------------------------------------------------------------
# pipelines


def _log_weight_sum(family, q: int, h: int, cache: dict) -> float:
    """sum over p <= q of (log p/p) * |S_p cap (S_p + h)| / p, with
    unconstrained primes counting as full (ratio 1)."""
    total = 0.0
    for p in primes_up_to(q):
        s = family.set_for(p)
        if s is None:
            total += math.log(p) / p
            continue
        key = (p, h % p)
        hit = cache.get(key)
        if hit is None:
            hit = s.intersect(s.shift(h)).size
            cache[key] = hit
        total += (math.log(p) / p) * (hit / p)
    return total


def _shifted_family(family, q: int, h: int) -> dict[int, ResidueSet]:
    sets = {}
    for p in primes_up_to(q):
        s = family.set_for(p)
        if s is not None:
            sets[p] = s.intersect(s.shift(h))
    return sets


def _intersect_with_shift(a: IntegerSet, h: int) -> IntegerSet:
    base = set(a.elements)
    return IntegerSet.from_iterable(a.bound, (x for x in a.elements if x - h in base))


@dataclass(frozen=True)
class DifferencedSieveReport:
    """One full run of the shift-then-sieve search.

    `evaluations` lists (h, weighted_sum, triggered); `best` is the
    (h, implied_bound) pair with the smallest implied bound 2K * B among the
    conclusive triggered shifts, and `certificate` says whether that implied
    bound beats sqrt(X).
    """

    x: int
    q: int
    c: float
    size: int
    energy: int
    k: float
    threshold: float
    trigger_level: float
    evaluations: tuple[tuple[int, float, bool], ...]
    best: tuple[int, float] | None
    best_report: BoundReport | None
    certificate: bool

    def to_json_dict(self) -> dict:
        return {
            "x": self.x,
            "q": self.q,
            "c": self.c,
            "size": self.size,
            "energy": self.energy,
            "k": self.k,
            "threshold": self.threshold,
            "trigger_level": self.trigger_level,
            "evaluations": [
                {"h": h, "weighted_sum": w, "triggered": t}
                for h, w, t in self.evaluations
            ],
            "best": None
            if self.best is None
            else {"h": self.best[0], "implied_bound": self.best[1]},
            "certificate": self.certificate,
        }


def differenced_larger_sieve(
    a: IntegerSet,
    family: ResidueConstraintFamily,
    c: float = 0.05,
    q: int | None = None,
) -> DifferencedSieveReport:
    """Look for a shift h of A whose p-adic intersections are thin enough
    that the larger sieve on A cap (A+h) bounds |A| through |A| <= 2K * B.

    A shift qualifies when its weighted intersection sum falls below
    (1/2 - c) log Q; the reported certificate additionally requires the
    implied bound to beat sqrt(X).
    """
    if not 0 < c < 0.5:
        raise ValueError(f"need 0 < c < 1/2, got {c}")
    x = a.bound
    if q is None:
        q = int(x ** (0.5 - c / 2))
    e = additive_energy(a)
    k = len(a) ** 3 / e
    shifts = shift_set(a, k)
    trigger_level = (0.5 - c) * math.log(q)
    cache: dict = {}
    evaluations = []
    best = None
    best_report = None
    for h in shifts.shifts:
        w = _log_weight_sum(family, q, h, cache)
        triggered = w < trigger_level
        evaluations.append((h, w, triggered))
        if not triggered:
            continue
        part = _intersect_with_shift(a, h)
        if not part.elements:
            continue
        shifted = ResidueConstraintFamily(
            (2, max(q, 2)), _shifted_family(family, q, h)
        )
        report = larger_sieve_bound(
            LargerSieveInput(shifted, x, q, 1.0), prime_subset=primes_up_to(q)
        )
        if not report.conclusive:
            continue
        implied = 2 * k * report.bound
        better = best is None or (
            implied < best[1] - 1e-12
            or (abs(implied - best[1]) <= 1e-12 and (abs(h), h < 0) < (abs(best[0]), best[0] < 0))
        )
        if better:
            best = (h, implied)
            best_report = report
    return DifferencedSieveReport(
        x=x,
        q=q,
        c=c,
        size=len(a),
        energy=e,
        k=k,
        threshold=shifts.threshold,
        trigger_level=trigger_level,
        evaluations=tuple(evaluations),
        best=best,
        best_report=best_report,
        certificate=best is not None and best[1] < math.sqrt(x),
    )


@dataclass(frozen=True)
class IntersectionRound:
    index: int
    h: int | None
    size: int
    weighted_sum: float
    sizes_digest: str

    def to_json_dict(self) -> dict:
        return {
            "round": self.index,
            "h": self.h,
            "size": self.size,
            "weighted_sum": self.weighted_sum,
            "per_prime_sizes_digest": self.sizes_digest,
        }


@dataclass(frozen=True)
class IntersectionTrace:
    rounds: tuple[IntersectionRound, ...]
    status: str
    final_size: int
    final_bound: BoundReport | None

    def to_json_dict(self) -> dict:
        return {
            "rounds": [r.to_json_dict() for r in self.rounds],
            "status": self.status,
            "final_size": self.final_size,
            "final_bound": None if self.final_bound is None else self.final_bound.to_json_dict(),
        }


def _sizes_digest(sets: dict[int, ResidueSet]) -> str:
    text = ",".join(f"{p}:{sets[p].size}" for p in sorted(sets))
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def intersecting_process(
    a: IntegerSet,
    family: ResidueConstraintFamily,
    eps: float,
    c: float = 0.05,
    q: int | None = None,
    max_rounds: int | None = None,
) -> IntersectionTrace:
    """Repeatedly replace A by A cap (A+h), h chosen greedily to thin the
    constrained residue sets, until the weighted occupancy falls below the
    (1/2 - c) log Q line or no usable shift remains.

    Only primes with |S_p| >= p/10 vote for h; h = 0 never qualifies; ties go
    to the smallest |h|, positive first.  The round cap is ceil(4/(c*eps)).
    Finishes with a larger-sieve evaluation of whatever survives.
    """
    if not 0 < eps < 1:
        raise ValueError(f"need 0 < eps < 1, got {eps}")
    if not 0 < c < 0.5:
        raise ValueError(f"need 0 < c < 1/2, got {c}")
    x = a.bound
    if q is None:
        q = int(x ** (0.5 - c / 2))
    if max_rounds is None:
        max_rounds = math.ceil(4 / (c * eps))
    for p in family.primes():
        if p <= q and family.constraints[p].size > (1 - eps) * p:
            raise ValueError(
                f"constraint at p={p} has {family.constraints[p].size} members, "
                f"above the (1-eps)p ceiling"
            )

    current = a
    sets = {p: family.constraints[p] for p in family.primes() if p <= q}
    trigger_level = (0.5 - c) * math.log(q)
    rounds = []
    status = "round_cap"

    def weighted_occupancy() -> float:
        total = 0.0
        for p in primes_up_to(q):
            s = sets.get(p)
            ratio = 1.0 if s is None else s.size / p
            total += (math.log(p) / p) * ratio
        return total

    w0 = weighted_occupancy()
    rounds.append(IntersectionRound(0, None, len(current), w0, _sizes_digest(sets)))

    for i in range(1, max_rounds + 1):
        if rounds[-1].weighted_sum < trigger_level:
            status = "threshold_reached"
            break
        if not current.elements:
            status = "emptied"
            break
        e = additive_energy(current)
        k = len(current) ** 3 / e
        candidates = shift_set(current, k).nonzero()
        if not candidates:
            status = "no_shifts"
            break
        voters = {p: s for p, s in sets.items() if s.size >= p / 10}
        best_h, best_score = None, None
        for h in candidates:
            score = sum(
                (math.log(p) / p) * (s.intersect(s.shift(h)).size / p)
                for p, s in voters.items()
            )
            key = (score, abs(h), h < 0)
            if best_score is None or key < best_score:
                best_score, best_h = key, h
        current = _intersect_with_shift(current, best_h)
        sets = {p: s.intersect(s.shift(best_h)) for p, s in sets.items()}
        rounds.append(
            IntersectionRound(i, best_h, len(current), weighted_occupancy(), _sizes_digest(sets))
        )
    else:
        status = "round_cap"
    if status == "round_cap" and rounds[-1].weighted_sum < trigger_level:
        status = "threshold_reached"

    nonempty = {p: s for p, s in sets.items() if s.size > 0}
    final_bound = None
    if nonempty:
        fam = ResidueConstraintFamily((2, max(q, 2)), nonempty)
        final_bound = larger_sieve_bound(
            LargerSieveInput(fam, x, q, 1.0), prime_subset=primes_up_to(q)
        )
    return IntersectionTrace(
        rounds=tuple(rounds),
        status=status,
        final_size=len(current),
        final_bound=final_bound,
    )
