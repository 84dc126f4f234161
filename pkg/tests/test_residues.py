import numpy as np
import pytest

from sievelab.numtheory import jacobi, primes_up_to
from sievelab.residues import (
    InfeasibleConstraintError,
    IntegerSet,
    PrimorialGrowthError,
    ResidueConstraintFamily,
    ResidueSet,
    allowed_elements,
    family_from_reductions,
    interval_family,
    minimal_covering_interval,
    occupancy_ok,
    primorial_set,
    progression_family,
    quadratic_residue_family,
    random_constrained_set,
    reduce_mod,
    residue_counts,
    squares_set,
)


def test_integer_set_basics():
    a = IntegerSet.from_iterable(10, [3, 1, 7, 3])
    assert a.elements == (1, 3, 7)
    assert len(a) == 3
    assert a.bound == 10
    with pytest.raises(ValueError):
        IntegerSet.from_iterable(5, [6])
    with pytest.raises(ValueError):
        IntegerSet.from_iterable(5, [0])


def test_residue_counts_matches_direct_histogram():
    a = IntegerSet.from_iterable(100, [1, 4, 9, 16, 25])
    counts = residue_counts(a, 5)
    assert counts.tolist() == [1, 2, 0, 0, 2]
    rng = np.random.default_rng(0)
    elems = sorted(int(v) for v in rng.choice(500, size=60, replace=False) + 1)
    b = IntegerSet.from_iterable(500, elems)
    for p in (2, 7, 13):
        direct = [sum(1 for e in elems if e % p == r) for r in range(p)]
        assert residue_counts(b, p).tolist() == direct


def test_reduce_mod_and_occupancy():
    a = IntegerSet.from_iterable(100, [1, 4, 9, 16, 25])
    s, fibres = reduce_mod(a, 5)
    assert sorted(s.members()) == [0, 1, 4]
    assert fibres.counts.tolist() == [1, 2, 0, 0, 2]
    fam = quadratic_residue_family([5])
    assert occupancy_ok(a, fam) == []  # squares stay inside QR union {0}
    b = IntegerSet.from_iterable(10, [1, 2, 3, 4, 5])
    bad = occupancy_ok(b, fam)
    assert (5, 2) in bad and (5, 3) in bad  # non-residues escape


def test_minimal_covering_interval_examples():
    s = ResidueSet.from_members(7, [0, 2, 6])
    start, length = minimal_covering_interval(s)
    assert (start, length) == (6, 4)  # {6, 0, 1, 2}
    full = ResidueSet.from_members(5, range(5))
    assert minimal_covering_interval(full)[1] == 5
    single = ResidueSet.from_members(11, [4])
    assert minimal_covering_interval(single) == (4, 1)


def test_minimal_covering_interval_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(100):
        p = int(rng.choice([5, 7, 11, 13]))
        size = int(rng.integers(1, p + 1))
        members = sorted(int(m) for m in rng.choice(p, size=size, replace=False))
        s = ResidueSet.from_members(p, members)
        start, length = minimal_covering_interval(s)
        covered = {(start + i) % p for i in range(length)}
        assert set(members) <= covered
        # no shorter interval works
        best = min(
            ln
            for st in range(p)
            for ln in range(1, p + 1)
            if set(members) <= {(st + i) % p for i in range(ln)}
        )
        assert length == best


def test_residue_set_shift_and_intersect():
    s = ResidueSet.from_members(7, [1, 2, 4])
    t = s.shift(3)
    assert sorted(t.members()) == [0, 4, 5]
    u = s.intersect(t)
    assert sorted(u.members()) == [4]


def test_quadratic_residue_family():
    fam = quadratic_residue_family([3, 5, 7])
    assert sorted(fam.constraints[7].members()) == [0, 1, 2, 4]
    for p in (3, 5, 7):
        qr = {pow(x, 2, p) for x in range(p)}
        assert set(fam.constraints[p].members()) == qr
        assert fam.constraints[p].size == (p + 1) // 2


def test_family_from_reductions_and_membership():
    a = squares_set(100)
    fam = family_from_reductions(a, [3, 7])
    for p in (3, 7):
        expect = {e % p for e in a.elements}
        assert set(fam.constraints[p].members()) == expect


def test_interval_and_progression_families():
    fam = interval_family([5, 7], lambda p: (p - 1, 3))
    assert sorted(fam.constraints[5].members()) == [0, 1, 4]
    prog = progression_family([7], lambda p: (1, 2, 3))
    assert sorted(prog.constraints[7].members()) == [1, 3, 5]
    with pytest.raises(ValueError):
        interval_family([5], lambda p: (0, 6))


def test_allowed_elements_and_random_set():
    fam = interval_family([3, 5], lambda p: (1, 2))  # n mod p in {1, 2}
    avail = allowed_elements(fam, 100)
    expect = [n for n in range(1, 101) if n % 3 in (1, 2) and n % 5 in (1, 2)]
    assert avail.tolist() == expect
    a = random_constrained_set(fam, 100, 10, seed=1)
    assert len(a) == 10
    assert set(a.elements) <= set(expect)
    b = random_constrained_set(fam, 100, 10, seed=1)
    assert a.elements == b.elements  # same seed, same draw
    with pytest.raises(InfeasibleConstraintError):
        random_constrained_set(fam, 100, len(expect) + 1, seed=0)


def test_squares_set():
    s = squares_set(100)
    assert s.elements == tuple(k * k for k in range(1, 11))
    assert len(squares_set(10**6)) == 1000


def test_primorial_construction_values():
    c = primorial_set()
    assert c.thresholds == (3, 61)
    vals = c.values.elements
    assert vals[0] == 6  # 2*3
    # second value is the product of all primes <= 61
    prod = 1
    for p in primes_up_to(61):
        prod *= p
    assert vals[1] == prod == 117288381359406970983270


def test_primorial_covering_is_genuinely_short():
    c = primorial_set(check_limit=1000)
    for p, (start, length) in c.coverings.items():
        covered = {(start + i) % p for i in range(length)}
        residues = {v % p for v in c.values.elements}
        assert residues <= covered
        assert length <= 0.6 * p
    assert c.worst_ratio() <= 0.6


def test_primorial_growth_rule_must_make_progress():
    with pytest.raises(ValueError):
        primorial_set(growth_rule=lambda i, prev: 3, count=3, check_limit=100)
    # the default rule outgrows the sieve cap at the third step; that limit
    # is surfaced as its own error type rather than a silent truncation
    with pytest.raises(PrimorialGrowthError):
        primorial_set(count=3, check_limit=100)


def test_family_accepts_empty_constraint():
    # intersected families are allowed to shrink to nothing; downstream
    # consumers decide whether that is an error
    fam = ResidueConstraintFamily.from_sets({3: ResidueSet.from_members(3, [])})
    assert fam.constraints[3].size == 0
    with pytest.raises(ValueError):
        ResidueConstraintFamily.from_sets({})
