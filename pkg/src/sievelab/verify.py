"""Acceptance suite: twelve numbered checks, one PASS/FAIL line each.

Every check is a plain function returning a CheckResult; `run_checks` runs a
selection in order and prints one line per criterion.  Checks combine three
kinds of assertion:

  * theorem-backed inequalities that must hold exactly (any violation is a
    bug, never noise);
  * behavior on randomized instances drawn from seeded generators, so reruns
    are reproducible;
  * pinned regression values in REGRESSIONS, frozen from oracle runs
    (brute-force enumerations or first certified evaluations) to guard
    against silent drift.

Each criterion carries the runtime limit it must meet; blowing the limit
fails the check even if the math held.
"""

from __future__ import annotations

import io
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from .bounds import LargerSieveInput, large_sieve_bound, larger_sieve_bound
from .configfile import parse_config_text
from .energy import lift_inequality_check, pollard_profile
from .fourier import build_majorant, detect_large_frequency, sieve_weight
from .kernels import cyclic_autocorrelation
from .numtheory import jacobi, primes_up_to
from .quadratics import (
    RationalQuadratic,
    integer_value_containment,
    quasisquares,
    verify_reduction_agreement,
)
from .reports import csv_text, dumps_stable
from .residues import (
    IntegerSet,
    ResidueConstraintFamily,
    ResidueSet,
    allowed_elements,
    primorial_set,
    quadratic_residue_family,
    random_constrained_set,
    squares_set,
)
from .scenarios import SCHEMAS, run_scenario
from .search import extremal_search

__all__ = ["CheckResult", "REGRESSIONS", "run_checks", "ALL_CHECKS"]


# Frozen oracle values.  Tolerances are stated per use; exact-integer pins
# are compared with ==.  Reproduction recipes:
#   squares_sieve_*: large_sieve_bound on the quadratic-residue family at
#     Q = sqrt(X) against the squares in [X];
#   census_hits_1e4: brute-force Euler-criterion scan of squarefree q <= 1e4
#     against all primes in [50, 100];
#   extremal_24_optimum: certified branch-and-bound (16363-node exhaustive
#     DFS agrees);
#   weight_mass_ratio_*: sum of the default smoothed-divisor weight over
#     [Y, 2Y] divided by pi(Y).
REGRESSIONS = {
    "squares_sieve_bound_1e4": 652.59083213608835,
    "squares_sieve_ratio_1e6": 6.5338568002931803,
    "census_hits_1e4": (1, 7674, 9806),
    "extremal_24_optimum": 8,
    "weight_mass_ratio_1e3": 2.3974445120333465,
    "weight_mass_ratio_1e4": 2.8614723521862473,
    "majorant_c1_half": 1.6211389382774042,
    "primorial_worst_ratio": 0.54545454545454541,
}


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{self.number:2d}] {status} {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _timed(number, name, limit, body) -> CheckResult:
    start = time.perf_counter()
    try:
        passed, detail = body()
    except Exception as exc:  # a crash is a failure with the reason inline
        elapsed = time.perf_counter() - start
        return CheckResult(number, name, False, f"raised {type(exc).__name__}: {exc}", elapsed)
    elapsed = time.perf_counter() - start
    if passed and limit is not None and elapsed > limit:
        passed = False
        detail += f"; exceeded {limit:.0f}s budget"
    return CheckResult(number, name, passed, detail, elapsed)


def check_lift_inequality() -> CheckResult:
    """1. Exact integer lift inequality on 100 seeded random sets."""

    def body():
        rng = np.random.default_rng(20240901)
        x = 10_000
        worst_slack = None
        for _ in range(100):
            size = int(rng.integers(50, 501))
            elems = rng.choice(x, size=size, replace=False) + 1
            a = IntegerSet.from_iterable(x, (int(v) for v in elems))
            chk = lift_inequality_check(a)
            if not chk.holds:
                return False, f"violated at |A|={size}: lhs={chk.lhs} > rhs={chk.rhs}"
            if worst_slack is None or chk.slack < worst_slack:
                worst_slack = chk.slack
        return True, f"100/100 exact; min slack {worst_slack}"

    return _timed(1, "lift-inequality", 60, body)


def check_pollard_audit() -> CheckResult:
    """2. Intersection-profile inequality, exhaustive then randomized."""

    def body():
        checked = 0
        for p in (3, 5, 7):
            for mask in range(1, 1 << p):
                members = [i for i in range(p) if mask >> i & 1]
                prof = pollard_profile(ResidueSet.from_members(p, members))
                if prof.audit_violations():
                    return False, f"profile violation, p={p} S={members}"
                for eps in (0.05, 0.1, 0.2):
                    count, cap, applies = prof.near_invariant(eps)
                    if applies and count > cap:
                        return False, f"shift-count violation, p={p} S={members} eps={eps}"
                checked += 1
        rng = np.random.default_rng(77)
        for p in (31, 101):
            for _ in range(10_000):
                size = int(rng.integers(1, p))
                members = [int(m) for m in rng.choice(p, size=size, replace=False)]
                prof = pollard_profile(ResidueSet.from_members(p, members))
                if prof.audit_violations():
                    return False, f"profile violation, p={p} |S|={size}"
                for eps in (0.05, 0.1, 0.2):
                    count, cap, applies = prof.near_invariant(eps)
                    if applies and count > cap:
                        return False, f"shift-count violation, p={p} |S|={size} eps={eps}"
                checked += 1
        return True, f"{checked} profiles, zero violations"

    return _timed(2, "pollard-audit", 30, body)


def check_interval_energy() -> CheckResult:
    """3. Closed form for the cyclic energy of a half-length interval."""

    def body():
        for p in primes_up_to(199):
            if p == 2:
                continue
            m = (p + 1) // 2
            counts = np.zeros(p, dtype=np.int64)
            counts[1 : m + 1] = 1
            energy = int((cyclic_autocorrelation(counts).astype(object) ** 2).sum())
            closed = m * m + 2 * sum((m - h) ** 2 for h in range(1, (p - 1) // 2 + 1))
            if energy != closed:
                return False, f"p={p}: computed {energy} != closed form {closed}"
            if 12 * energy < p**3:
                return False, f"p={p}: energy {energy} below p^3/12"
        return True, "all odd p <= 199 match the closed form, each >= p^3/12"

    return _timed(3, "interval-energy", 5, body)


def check_majorant_suite() -> CheckResult:
    """4. Nonpositivity certificate and coefficient caps for the majorant."""

    def body():
        for eps in (0.5, 0.2, 0.1):
            m = build_majorant(eps, grid_points=100_000)
            if not m.certified_negative:
                return False, f"eps={eps}: certificate failed, margin {m.negativity_margin}"
            thetas = np.linspace(eps / 2, 0.5, 100_000)
            worst = float(m.evaluate(thetas).max())
            if worst > 1e-9:
                return False, f"eps={eps}: grid max {worst} above 1e-9"
            ks = np.arange(1, m.degree + 1)
            caps = np.minimum(8.0, 1.0 / (eps * eps * ks * ks))
            if not np.all(np.abs(m.coefficients[1:]) <= caps + 1e-12):
                return False, f"eps={eps}: coefficient cap violated"
        c1 = build_majorant(0.5).coefficient(1)
        if abs(c1 - REGRESSIONS["majorant_c1_half"]) > 1e-4:
            return False, f"c1(1/2) = {c1!r} drifted"
        return True, f"eps in {{0.5, 0.2, 0.1}} certified; c1(1/2) = {c1:.6f}"

    return _timed(4, "majorant-suite", 10, body)


def check_detector_guarantee() -> CheckResult:
    """5. Large-coefficient detector meets its magnitude floor, both modes."""

    def body():
        rng = np.random.default_rng(5150)
        primes = [31, 101, 401]
        count_half = count_gen = 0
        for _ in range(1000):
            p = int(rng.choice(primes))
            width = int(rng.integers(2, p // 2 + 1))
            start = int(rng.integers(0, p))
            allowed = [(start + i) % p for i in range(width)]
            size = int(rng.integers(3, 3 * width + 1))
            elems = sorted(
                {int(allowed[int(j)]) + p * int(rng.integers(0, 3)) + 1
                 for j in rng.integers(0, width, size=size)}
            )
            a = IntegerSet.from_iterable(3 * p + 1, elems)
            res = detect_large_frequency(a, p, mode="half_interval")
            if res.k not in (1, 2) or not res.guarantee_met:
                return False, (
                    f"half_interval miss: p={p} |A|={len(a)} k={res.k} "
                    f"|S|={res.magnitude:.4f} < {res.guarantee:.4f}"
                )
            count_half += 1
        for _ in range(1000):
            p = int(rng.choice(primes))
            eps = float(rng.choice([0.5, 0.3, 0.2]))
            width = int((1 - eps) * p)
            start = int(rng.integers(0, p))
            allowed = [(start + i) % p for i in range(width)]
            size = int(rng.integers(3, 2 * width + 1))
            elems = sorted(
                {int(allowed[int(j)]) + p * int(rng.integers(0, 2)) + 1
                 for j in rng.integers(0, width, size=size)}
            )
            a = IntegerSet.from_iterable(2 * p + 1, elems)
            res = detect_large_frequency(a, p, eps=eps, mode="general")
            if res.k > math.ceil(2 / eps**2) or not res.guarantee_met:
                return False, (
                    f"general miss: p={p} eps={eps} |A|={len(a)} k={res.k} "
                    f"|S|={res.magnitude:.4f} < {res.guarantee:.4f}"
                )
            count_gen += 1
        return True, f"{count_half} half-interval + {count_gen} general instances, zero failures"

    return _timed(5, "detector-guarantee", 60, body)


def _random_family(rng, primes) -> ResidueConstraintFamily:
    sets = {}
    for p in primes:
        keep = int(rng.integers(max(1, p // 3), p + 1))
        members = [int(m) for m in rng.choice(p, size=keep, replace=False)]
        sets[p] = ResidueSet.from_members(p, members)
    return ResidueConstraintFamily.from_sets(sets)


def check_sieve_validity() -> CheckResult:
    """6. Bounds really bound: 500 seeded sets, then the pinned squares run."""

    def body():
        rng = np.random.default_rng(606)
        window = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
        checked = 0
        while checked < 500:
            x = int(rng.integers(500, 10_001))
            fam = _random_family(rng, window)
            available = allowed_elements(fam, x)
            if available.size == 0:
                continue  # resample; the family excluded everything in [x]
            size = int(rng.integers(1, min(40, available.size) + 1))
            a = random_constrained_set(fam, x, size, seed=int(rng.integers(2**31)))
            rep = large_sieve_bound(fam, x)
            if len(a) > rep.bound + 1e-9:
                return False, f"large sieve violated: |A|={len(a)} > {rep.bound}"
            lrep = larger_sieve_bound(LargerSieveInput(fam, x, math.isqrt(x)))
            if lrep.conclusive and len(a) > lrep.bound + 1e-9:
                return False, f"larger sieve violated: |A|={len(a)} > {lrep.bound}"
            checked += 1
        for x, key, combine in (
            (10_000, "squares_sieve_bound_1e4", lambda rep, n: rep.bound),
            (1_000_000, "squares_sieve_ratio_1e6", lambda rep, n: rep.bound / n),
        ):
            q = math.isqrt(x)
            fam = quadratic_residue_family(primes_up_to(q))
            rep = large_sieve_bound(fam, x, q)
            n = len(squares_set(x))
            if n > rep.bound:
                return False, f"squares in [{x}] exceed their own bound"
            got = combine(rep, n)
            if not math.isclose(got, REGRESSIONS[key], rel_tol=1e-12):
                return False, f"{key} drifted: {got!r}"
        return True, f"{checked} random sets bounded; squares pins hold"

    return _timed(6, "sieve-validity", 120, body)


def check_reduction_agreement() -> CheckResult:
    """7. Value-set containment and mod-p agreement for random quadratics."""

    def body():
        rng = np.random.default_rng(7007)
        primes_checked = 0
        for index in range(100):
            while True:
                a, b, c, d = (int(v) for v in rng.integers(-10, 11, size=4))
                if a != 0 and d != 0:
                    psi = RationalQuadratic(a, b, c, d)
                    if psi.height <= 10:
                        break
            failures = integer_value_containment(psi, 100_000)
            if failures:
                return False, f"containment failed for {psi}: {failures[:3]}"
            lo = 2 * psi.height * psi.height
            for p in primes_up_to(200):
                if p <= lo or (2 * psi.a * psi.d) % p == 0:
                    continue
                agree = verify_reduction_agreement(psi, p)
                if not agree.ok:
                    return False, f"reduction mismatch for {psi} at p={p}"
                primes_checked += 1
        return True, f"100 quadratics, {primes_checked} prime reductions, zero exceptions"

    return _timed(7, "reduction-agreement", 60, body)


def check_primorial_covering() -> CheckResult:
    """8. Primorial reductions stay inside short cyclic intervals."""

    def body():
        construction = primorial_set(check_limit=100_000)
        worst = construction.worst_ratio()
        for p, (_, length) in construction.coverings.items():
            if length > 0.6 * p:
                return False, f"covering length {length} > 0.6p at p={p}"
        if not math.isclose(worst, REGRESSIONS["primorial_worst_ratio"], rel_tol=1e-12):
            return False, f"worst ratio drifted: {worst!r}"
        return True, f"all p <= 1e5 covered within 0.6p; worst ratio {worst:.6f}"

    return _timed(8, "primorial-covering", 30, body)


def check_quasisquare_census() -> CheckResult:
    """9. Census matches the brute-force scan and respects the size bound."""

    def body():
        window = [p for p in primes_up_to(100) if p >= 50]
        census = quasisquares(10_000, window)
        if census.hits != REGRESSIONS["census_hits_1e4"]:
            return False, f"hit list drifted: {census.hits}"
        for q in census.hits:
            for p in window:
                if jacobi(q, p) != 1:
                    return False, f"hit {q} is not a residue mod {p}"
        if census.count > census.bound_value:
            return False, f"count {census.count} above bound {census.bound_value}"
        return True, (
            f"hits {census.hits}, count {census.count} <= bound "
            f"{census.bound_value:.3g} at eta {census.eta:.4f}"
        )

    return _timed(9, "quasisquare-census", 60, body)


def check_weight_audit() -> CheckResult:
    """10. Smoothed divisor weights: w(p) >= 1 on primes, bounded total mass."""

    def body():
        details = []
        for y, key in ((1000, "weight_mass_ratio_1e3"), (10_000, "weight_mass_ratio_1e4")):
            w = sieve_weight(y)
            if w.min_prime_weight < 1 - 1e-9:
                return False, f"Y={y}: prime weight {w.min_prime_weight} below 1"
            ratio = w.mass_ratio
            if ratio > 10:
                return False, f"Y={y}: mass ratio {ratio} above 10"
            if not math.isclose(ratio, REGRESSIONS[key], rel_tol=1e-12):
                return False, f"{key} drifted: {ratio!r}"
            details.append(f"Y={y} mass/pi(Y)={ratio:.4f}")
        return True, "; ".join(details)

    return _timed(10, "weight-audit", 30, body)


def check_extremal_search() -> CheckResult:
    """11. Small extremal probes: exhaustive pin and greedy-vs-certified."""

    def body():
        small = extremal_search(6, (3,), method="exhaustive")
        if small.size != 4 or not small.certified_optimal:
            return False, f"X=6 primes {{3}}: got {small.size}, want certified 4"
        certified = extremal_search(24, (3, 5, 7), method="branch_and_bound")
        if not certified.certified_optimal:
            return False, "branch and bound failed to certify X=24"
        if certified.size != REGRESSIONS["extremal_24_optimum"]:
            return False, f"certified optimum drifted: {certified.size}"
        greedy = extremal_search(24, (3, 5, 7), method="greedy_local", seed=0, restarts=8)
        if greedy.size != certified.size:
            return False, f"greedy {greedy.size} != certified {certified.size}"
        return True, f"X=6 -> 4; X=24 -> {certified.size} (greedy matches, {certified.nodes} nodes)"

    return _timed(11, "extremal-search", 60, body)


_DETERMINISM_CONFIG = """\
[scenario]
name = large-sieve-sharpness
seed = 9

[params]
x_grid = 10000, 30000
"""

_DETERMINISM_CONFIG_2 = """\
[scenario]
name = progression-intersection
seed = 4

[params]
size = 80
rounds = 6
"""


def check_determinism() -> CheckResult:
    """12. Same config + seed twice: byte-identical JSON and CSV."""

    def body():
        for text in (_DETERMINISM_CONFIG, _DETERMINISM_CONFIG_2):
            cfg = parse_config_text(text, SCHEMAS)
            first = run_scenario(cfg)
            second = run_scenario(cfg)
            if dumps_stable(first.report) != dumps_stable(second.report):
                return False, f"{cfg.name}: JSON differs between reruns"
            if csv_text(first.csv_header, first.csv_rows) != csv_text(
                second.csv_header, second.csv_rows
            ):
                return False, f"{cfg.name}: CSV differs between reruns"
        return True, "reruns byte-identical (JSON and CSV, two scenarios)"

    return _timed(12, "determinism", None, body)


ALL_CHECKS = (
    check_lift_inequality,
    check_pollard_audit,
    check_interval_energy,
    check_majorant_suite,
    check_detector_guarantee,
    check_sieve_validity,
    check_reduction_agreement,
    check_primorial_covering,
    check_quasisquare_census,
    check_weight_audit,
    check_extremal_search,
    check_determinism,
)


def run_checks(selected=None, stream=None) -> list[CheckResult]:
    """Run the numbered checks (all by default), printing one line each."""
    if stream is None:
        stream = sys.stdout
    wanted = None if selected is None else {int(s) for s in selected}
    results = []
    for index, check in enumerate(ALL_CHECKS, start=1):
        if wanted is not None and index not in wanted:
            continue
        result = check()
        print(result.line(), file=stream)
        results.append(result)
    return results


if __name__ == "__main__":
    failures = [r for r in run_checks() if not r.passed]
    sys.exit(4 if failures else 0)
