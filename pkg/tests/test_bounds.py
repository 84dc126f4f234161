import math

import numpy as np
import pytest

from sievelab.bounds import (
    LargerSieveInput,
    large_sieve_bound,
    larger_sieve_bound,
    larger_sieve_value,
    miss_count_bound,
    pair_occupancy_scan,
    uniform_fibre_report,
)
from sievelab.numtheory import primes_up_to
from sievelab.residues import (
    IntegerSet,
    ResidueConstraintFamily,
    ResidueSet,
    quadratic_residue_family,
    squares_set,
)


def _single_constraint(p, members):
    return ResidueConstraintFamily.from_sets({p: ResidueSet.from_members(p, members)})


def test_large_sieve_single_constraint():
    fam = _single_constraint(2, [0])
    rep = large_sieve_bound(fam, 100, 2)
    # q=1 contributes 1, q=2 contributes |S_2^c|/|S_2| = 1
    assert rep.denominator == pytest.approx(2.0)
    assert rep.bound == pytest.approx(52.0)
    assert rep.crude_bound == pytest.approx(208.0)
    assert rep.conclusive


def test_large_sieve_no_information():
    # all classes allowed at every prime: only q=1 survives
    fam = ResidueConstraintFamily.from_sets(
        {p: ResidueSet.from_members(p, range(p)) for p in (2, 3, 5, 7)}
    )
    rep = large_sieve_bound(fam, 100, 10)
    assert rep.denominator == pytest.approx(1.0)
    assert rep.bound == pytest.approx(200.0)


def test_large_sieve_denominator_matches_brute_force():
    fam = quadratic_residue_family([2, 3, 5, 7])
    q = 20
    rep = large_sieve_bound(fam, 400, q)
    ratio = {p: (p - fam.constraints[p].size) / fam.constraints[p].size for p in (2, 3, 5, 7)}
    brute = 0.0
    for m in range(1, q + 1):
        fs, n, ok = [], m, True
        d = 2
        while d * d <= n:
            if n % d == 0:
                fs.append(d)
                n //= d
                if n % d == 0:
                    ok = False
                    break
            d += 1
        if not ok:
            continue
        if n > 1:
            fs.append(n)
        if all(f in ratio for f in fs):
            term = 1.0
            for f in fs:
                term *= ratio[f]
            brute += term
        # moduli with an unconstrained prime factor contribute nothing
    assert rep.denominator == pytest.approx(brute, rel=1e-12)


def test_large_sieve_actually_bounds_squares():
    x = 10_000
    fam = quadratic_residue_family(primes_up_to(100))
    rep = large_sieve_bound(fam, x, 100)
    assert len(squares_set(x)) <= rep.bound
    assert rep.bound == pytest.approx(652.59083213608835, rel=1e-12)


def test_large_sieve_rejects_empty_constraint():
    fam = ResidueConstraintFamily.from_sets({3: ResidueSet.from_members(3, [])})
    with pytest.raises(ValueError):
        large_sieve_bound(fam, 100, 10)


def test_larger_sieve_value_pinned():
    rep = larger_sieve_value({p: 1 / 3 for p in primes_up_to(100)}, x=100, q=100)
    assert rep.denominator == pytest.approx(5.503242439008854, rel=1e-12)
    assert rep.bound == pytest.approx(18.171105690559077, rel=1e-12)


def test_larger_sieve_inconclusive_when_uninformative():
    # sigma = 1 everywhere: denominator ~ log Q - log X <= 0
    rep = larger_sieve_value({p: 1.0 for p in primes_up_to(50)}, x=50, q=50)
    assert rep.bound is None
    assert not rep.conclusive


def test_larger_sieve_bound_from_family():
    fam = quadratic_residue_family(primes_up_to(30))
    inp = LargerSieveInput(fam, x=900, q=30)
    rep = larger_sieve_bound(inp)
    # sigma_p = (p+1)/2p, all above 1/2, so a conclusive answer needs more
    # primes than this; just confirm consistency with the value form
    direct = larger_sieve_value(
        {p: fam.constraints[p].size / p for p in fam.primes()}, x=900, q=30
    )
    assert rep.denominator == pytest.approx(direct.denominator)
    if rep.conclusive:
        assert rep.bound == pytest.approx(direct.bound)


def test_larger_sieve_prime_subset_restricts():
    fam = quadratic_residue_family(primes_up_to(30))
    inp = LargerSieveInput(fam, x=900, q=30)
    full = larger_sieve_bound(inp)
    sub = larger_sieve_bound(inp, prime_subset=[3, 5])
    assert sub.denominator < full.denominator
    assert {p for p, _ in sub.per_prime} == {3, 5}


def test_larger_sieve_beats_large_sieve_past_half_density():
    # interval constraints of density ~1/4: the larger sieve wins
    primes = primes_up_to(100)
    fam = ResidueConstraintFamily.from_sets(
        {p: ResidueSet.from_members(p, range(max(1, p // 4))) for p in primes}
    )
    x = 10_000
    large = large_sieve_bound(fam, x, 100)
    larger = larger_sieve_bound(LargerSieveInput(fam, x, 100))
    assert larger.conclusive
    assert larger.bound < large.bound


def test_uniform_fibre_classification():
    spread = IntegerSet.from_iterable(5, [1, 2, 3, 4, 5])
    assert uniform_fibre_report(spread, 0.1, [5]).uniform == (5,)
    lumped = IntegerSet.from_iterable(15, [5, 10, 15])
    rep = uniform_fibre_report(lumped, 0.1, [5])
    assert rep.excluded == (5,)
    assert rep.excluded_mass == pytest.approx(math.log(5) / 5)
    # squares mod 3 land in classes {0, 1} yet still pass the second-moment
    # test: 33^2 + 67^2 = 5578 and 5578*3 <= 2.1 * 100^2
    sq = squares_set(10_000)
    rep3 = uniform_fibre_report(sq, 0.1, [3])
    assert rep3.uniform == (3,)
    assert rep3.second_moments == ((3, 5578),)


def test_uniform_fibre_empty_set_is_vacuous():
    empty = IntegerSet.from_iterable(10, [])
    rep = uniform_fibre_report(empty, 0.5, [3, 5])
    assert rep.uniform == (3, 5)


def test_miss_count_bound_examples():
    n = 10_000
    rep0 = miss_count_bound(lambda p: 0, n)
    q = math.isqrt(2 * n)
    assert rep0.bound == pytest.approx(2 * n + q * q)
    rep1 = miss_count_bound(lambda p: 1, n)
    assert rep1.bound == pytest.approx(9835.3923066708849, rel=1e-12)
    rep2 = miss_count_bound(lambda p: 1 if p == 2 else 0, 50)
    assert rep2.denominator == pytest.approx(1.5)
    assert rep2.bound == pytest.approx(200 / 1.5)


def test_miss_count_bound_tracks_prime_density():
    # one missed class per prime: the bound thins out relative to N but
    # keeps the N/log N shape, approaching (4 pi^2/3) N / log 2N from below
    bounds = {n: miss_count_bound(lambda p: 1, n).bound for n in (10**3, 10**4, 10**5)}
    fractions = [bounds[n] / n for n in (10**3, 10**4, 10**5)]
    assert fractions[0] > fractions[1] > fractions[2]
    ceiling = 4 * math.pi**2 / 3
    for n, b in bounds.items():
        assert 6 < b * math.log(2 * n) / n < ceiling


def test_miss_count_bound_rejects_full_miss():
    with pytest.raises(ValueError):
        miss_count_bound(lambda p: p, 100)


def test_pair_occupancy_scan_squares():
    sq = squares_set(10_000)
    window = [p for p in primes_up_to(31) if p >= 11]
    rep = pair_occupancy_scan(sq, sq, window)
    for p, alpha, beta in rep.occupancies:
        assert alpha == pytest.approx((p + 1) / (2 * p))
        assert beta == alpha
    expect = sum(math.log(p) / p * 2 * (1 / p) ** 2 for p in window)
    assert rep.deficit == pytest.approx(expect, rel=1e-12)
    assert rep.balanced_fraction == 1.0


def test_pair_occupancy_flags_concentration():
    lumped = IntegerSet.from_iterable(100, [7, 14, 21, 28])
    rep = pair_occupancy_scan(lumped, lumped, [7])
    p, alpha, beta = rep.occupancies[0]
    assert alpha == pytest.approx(1 / 7)
    # one occupied class trivially satisfies the half-occupancy cap; the
    # imbalance shows up in the deficit sum instead
    assert rep.balanced_fraction == 1.0
    expect = 2 * (math.log(7) / 7) * (1 - 2 / 7) ** 2
    assert rep.deficit == pytest.approx(expect, rel=1e-12)
