"""Extremal search: how large can A inside [1, X] be when |A mod p| is
capped at (p+1)/2 residue classes for each constraint prime?

The squares occupy exactly (p+1)/2 classes mod every odd p, so they are
always feasible and give the baseline |A| ~ sqrt(X).  The search probes how
far above that baseline unstructured sets can climb at desk scale.

Three methods: `exhaustive` (plain depth-first enumeration, X <= 28),
`branch_and_bound` (exact, with an admissible per-prime capacity bound), and
`greedy_local` (seeded restarts from the squares baseline plus swap moves;
never certified).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .residues import IntegerSet, InvariantViolationError, squares_set

__all__ = [
    "ExtremalResult",
    "extremal_search",
    "capacity_violations",
]

EXHAUSTIVE_LIMIT = 28


@dataclass(frozen=True)
class ExtremalResult:
    x: int
    primes: tuple[int, ...]
    method: str
    best: IntegerSet
    certified_optimal: bool
    nodes: int

    @property
    def size(self) -> int:
        return len(self.best)

    @property
    def sqrt_ratio(self) -> float:
        return self.size / math.sqrt(self.x)

    def to_json_dict(self) -> dict:
        return {
            "x": self.x,
            "primes": list(self.primes),
            "method": self.method,
            "size": self.size,
            "elements": list(self.best.elements),
            "certified_optimal": self.certified_optimal,
            "nodes": self.nodes,
            "sqrt_ratio": self.sqrt_ratio,
        }


def capacity_violations(a: IntegerSet, primes) -> list[tuple[int, int, int]]:
    """(p, occupied, cap) for each prime where |A mod p| > (p+1)/2."""
    out = []
    for p in primes:
        occupied = len({n % p for n in a.elements})
        cap = (p + 1) // 2
        if occupied > cap:
            out.append((p, occupied, cap))
    return out


class _Budget:
    __slots__ = ("nodes", "limit", "exhausted")

    def __init__(self, limit: int):
        self.nodes = 0
        self.limit = limit
        self.exhausted = False

    def tick(self) -> bool:
        self.nodes += 1
        if self.nodes > self.limit:
            self.exhausted = True
        return self.exhausted


def _suffix_class_counts(x: int, p: int) -> np.ndarray:
    """counts[i][r] = #{n in [i, x] : n = r mod p}, for i = 1..x+1."""
    counts = np.zeros((x + 2, p), dtype=np.int64)
    for i in range(x, 0, -1):
        counts[i] = counts[i + 1]
        counts[i][i % p] += 1
    return counts


def _exact_dfs(x: int, primes: tuple[int, ...], budget: _Budget, use_capacity_bound: bool):
    caps = {p: (p + 1) // 2 for p in primes}
    suffix = {p: _suffix_class_counts(x, p) for p in primes}
    occupied = {p: set() for p in primes}

    best_set: list[int] = []
    chosen: list[int] = []

    def capacity_upper_bound(i: int) -> int:
        ub = x  # no-constraint fallback
        for p in primes:
            future = suffix[p][i]
            occ = occupied[p]
            in_occupied = int(sum(int(future[r]) for r in occ))
            spare = caps[p] - len(occ)
            if spare > 0:
                free = sorted(
                    (int(future[r]) for r in range(p) if r not in occ), reverse=True
                )
                in_occupied += sum(free[:spare])
            ub = min(ub, len(chosen) + in_occupied)
        return ub

    def dfs(i: int) -> None:
        nonlocal best_set
        if budget.tick():
            return
        if len(chosen) > len(best_set):
            best_set = chosen.copy()
        if i > x:
            return
        # even the trivial bound is admissible: cannot beat best with what's left
        if len(chosen) + (x - i + 1) <= len(best_set):
            return
        if use_capacity_bound and capacity_upper_bound(i) <= len(best_set):
            return
        # include i when it respects every cap
        new_classes = []
        feasible = True
        for p in primes:
            r = i % p
            if r not in occupied[p]:
                if len(occupied[p]) >= caps[p]:
                    feasible = False
                    break
                new_classes.append((p, r))
        if feasible:
            chosen.append(i)
            for p, r in new_classes:
                occupied[p].add(r)
            dfs(i + 1)
            for p, r in new_classes:
                occupied[p].discard(r)
            chosen.pop()
        dfs(i + 1)

    dfs(1)
    return best_set


def _greedy_fill(order, chosen: set[int], occupied: dict[int, set], caps: dict[int, int]):
    for n in order:
        n = int(n)
        if n in chosen:
            continue
        new_classes = []
        ok = True
        for p, occ in occupied.items():
            r = n % p
            if r not in occ:
                if len(occ) >= caps[p]:
                    ok = False
                    break
                new_classes.append((p, r))
        if ok:
            chosen.add(n)
            for p, r in new_classes:
                occupied[p].add(r)


def _rebuild_occupied(chosen: set[int], primes) -> dict[int, set]:
    return {p: {n % p for n in chosen} for p in primes}


def _greedy_local(x: int, primes: tuple[int, ...], budget: _Budget, seed: int, restarts: int):
    caps = {p: (p + 1) // 2 for p in primes}
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    baseline = set(squares_set(x).elements)
    # squares fill (p+1)/2 classes only for odd p; mod 2 they overflow the cap
    if capacity_violations(IntegerSet.from_iterable(x, sorted(baseline)), primes):
        baseline = set()
    best = set(baseline)

    for _ in range(max(1, restarts)):
        if budget.exhausted:
            break
        chosen = set(baseline)
        occupied = _rebuild_occupied(chosen, primes)
        _greedy_fill(rng.permutation(np.arange(1, x + 1)), chosen, occupied, caps)
        improved = True
        while improved and not budget.tick():
            improved = False
            # drop one element, refill greedily; keep strict improvements
            for out in sorted(chosen):
                trial = set(chosen)
                trial.discard(out)
                occ = _rebuild_occupied(trial, primes)
                _greedy_fill(rng.permutation(np.arange(1, x + 1)), trial, occ, caps)
                if len(trial) > len(chosen):
                    chosen = trial
                    improved = True
                    break
        if len(chosen) > len(best):
            best = chosen
    return sorted(best)


def extremal_search(
    x: int,
    primes,
    method: str = "branch_and_bound",
    budget: int = 5_000_000,
    seed: int = 0,
    restarts: int = 8,
) -> ExtremalResult:
    if x < 1:
        raise ValueError(f"x must be at least 1, got {x}")
    primes = tuple(sorted(set(int(p) for p in primes)))
    for p in primes:
        if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
            raise ValueError(f"constraint modulus {p} is not prime")

    tracker = _Budget(budget)
    if method == "exhaustive":
        if x > EXHAUSTIVE_LIMIT:
            raise ValueError(
                f"exhaustive method is capped at x = {EXHAUSTIVE_LIMIT}, got {x}"
            )
        best = _exact_dfs(x, primes, tracker, use_capacity_bound=False)
        certified = not tracker.exhausted
    elif method == "branch_and_bound":
        best = _exact_dfs(x, primes, tracker, use_capacity_bound=True)
        certified = not tracker.exhausted
    elif method == "greedy_local":
        best = _greedy_local(x, primes, tracker, seed, restarts)
        certified = False
    else:
        raise ValueError(f"unknown method {method!r}")

    result = IntegerSet.from_iterable(x, best)
    bad = capacity_violations(result, primes)
    if bad:
        raise InvariantViolationError(f"search produced an infeasible set: {bad}")
    return ExtremalResult(
        x=x,
        primes=primes,
        method=method,
        best=result,
        certified_optimal=certified,
        nodes=tracker.nodes,
    )
