"""Acceptance gate: one test per numbered criterion.

Each criterion delegates to the matching check in sievelab.verify, which
owns the seeded instance generators, the pinned regression values (see
verify.REGRESSIONS), the stated tolerances, and the per-criterion runtime
budget.  A check that exceeds its budget fails even when the mathematics
held, so this file doubles as the performance gate.

Run with -rA to see the full PASS/FAIL line (including timing and detail)
for every criterion.
"""

import pytest

from sievelab import verify


def _run(check):
    result = check()
    print(result.line())
    assert result.passed, result.line()
    return result


def test_criterion_01_lift_inequality_exact_on_seeded_sets():
    # 100 random A in [1e4], 50 <= |A| <= 500: integer lhs <= rhs, < 60 s
    _run(verify.check_lift_inequality)


def test_criterion_02_pollard_profile_audit():
    # exhaustive p in {3,5,7} plus 1e4 random draws at p in {31,101}, < 30 s
    _run(verify.check_pollard_audit)


def test_criterion_03_interval_energy_closed_form():
    # all odd p <= 199: E_p equals the closed form and is >= p^3/12, < 5 s
    _run(verify.check_interval_energy)


def test_criterion_04_majorant_suite():
    # eps in {0.5, 0.2, 0.1}: certified nonpositive beyond eps/2 on 1e5-point
    # grids, coefficient caps min(8, 1/(eps^2 k^2)), c1(1/2) within 1e-4
    _run(verify.check_majorant_suite)


def test_criterion_05_detector_guarantee():
    # 1e3 seeded instances per mode; magnitude floors eps|A|/32 and |A|/3
    _run(verify.check_detector_guarantee)


def test_criterion_06_sieve_validity_and_squares_pin():
    # 500 seeded constrained sets bounded by both sieves; squares bound at
    # X=1e4 and ratio at X=1e6 pinned to 1e-12 relative
    _run(verify.check_sieve_validity)


def test_criterion_07_reduction_agreement():
    # 100 random quadratics of height <= 10: containment in [-1e5, 1e5] and
    # mod-p agreement for all p in (2 height^2, 200] coprime to 2ad
    _run(verify.check_reduction_agreement)


def test_criterion_08_primorial_covering():
    # default construction: covering interval <= 0.6 p for every p <= 1e5
    _run(verify.check_primorial_covering)


def test_criterion_09_quasisquare_census():
    # Y=1e4, primes in [50,100]: hits pinned (1, 7674, 9806), count under
    # the census bound at the measured eta
    _run(verify.check_quasisquare_census)


def test_criterion_10_weight_audit():
    # Y in {1e3, 1e4}: w(p) >= 1 on primes in [Y, 2Y], mass <= 10 pi(Y)
    _run(verify.check_weight_audit)


def test_criterion_11_extremal_search():
    # X=6 {3} certified 4; X=24 {3,5,7} greedy matches certified optimum 8
    _run(verify.check_extremal_search)


def test_criterion_12_determinism():
    # same config + seed: byte-identical JSON and CSV on rerun
    _run(verify.check_determinism)
