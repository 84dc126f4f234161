import math
from fractions import Fraction

import numpy as np
import pytest

from sievelab.numtheory import is_squarefree, jacobi, primes_up_to
from sievelab.quadratics import (
    RationalQuadratic,
    goldbach_obstruction,
    integer_value_containment,
    membership_integer,
    quadratic_image_set,
    quasisquares,
    split_discriminant_primes,
    stability_classifier,
    tilde,
    verify_reduction_agreement,
)
from sievelab.residues import IntegerSet, InvariantViolationError

SQUARE = RationalQuadratic.from_string("(1*x^2+0*x+0)/1")
TRIANGULAR = RationalQuadratic.from_string("(1*x^2+1*x+0)/2")


def test_parse_and_normalize():
    psi = RationalQuadratic.from_string("(2*x^2-4*x+6)/8")
    assert (psi.a, psi.b, psi.c, psi.d) == (1, -2, 3, 4)
    neg = RationalQuadratic(1, 0, 0, -2)
    assert neg.d > 0 and neg.a == -1  # sign moved out of the denominator
    assert str(TRIANGULAR) == "(1*x^2+1*x+0)/2"
    assert RationalQuadratic.from_string(str(psi)) == psi
    with pytest.raises(ValueError):
        RationalQuadratic.from_string("x^2/2")
    with pytest.raises(ValueError):
        RationalQuadratic(0, 1, 1, 1)


def test_evaluate_and_height():
    assert TRIANGULAR.evaluate(10) == Fraction(55)
    assert TRIANGULAR.evaluate(Fraction(1, 2)) == Fraction(3, 8)
    assert TRIANGULAR.height == 2
    assert SQUARE.discriminant_data == 0
    assert TRIANGULAR.discriminant_data == 1


def test_membership_square_condition():
    # n is a rational value iff 4adn + D is a perfect square
    assert membership_integer(TRIANGULAR, 10)  # 81 = 9^2
    assert not membership_integer(TRIANGULAR, 11)  # 89
    assert membership_integer(SQUARE, 49)
    assert not membership_integer(SQUARE, 50)
    assert not membership_integer(SQUARE, -4)


def test_membership_matches_direct_rational_search():
    # brute force over x = u/v with small numerator and denominator
    def direct(psi, n):
        for v in range(1, 30):
            for u in range(-200, 201):
                if psi.evaluate(Fraction(u, v)) == n:
                    return True
        return False

    for n in range(-5, 30):
        assert membership_integer(TRIANGULAR, n) == direct(TRIANGULAR, n), n


def test_quadratic_image_set_examples():
    assert quadratic_image_set(SQUARE, 100).elements == tuple(
        k * k for k in range(1, 11)
    )
    assert quadratic_image_set(TRIANGULAR, 30).elements == (1, 3, 6, 10, 15, 21, 28)


def test_integer_value_containment_clean():
    for psi in (SQUARE, TRIANGULAR, RationalQuadratic.from_string("(-2*x^2+3*x+5)/7")):
        assert integer_value_containment(psi, 5000) == ()


def test_tilde_examples():
    doubled = RationalQuadratic.from_string("(2*x^2+0*x+1)/1")
    t = tilde(doubled)
    assert (t.a, t.b, t.c, t.d) == (1, 0, 2, 2)  # (x^2 + 2)/2
    # integer values of psi are values of tilde at integers
    img = quadratic_image_set(doubled, 500)
    tvals = {int(t.evaluate(x)) for x in range(-100, 101) if t.evaluate(x).denominator == 1}
    assert set(img.elements) <= tvals


def test_tilde_height_bound_on_corpus():
    rng = np.random.default_rng(17)
    for _ in range(200):
        a, b, c, d = (int(v) for v in rng.integers(-10, 11, size=4))
        if a == 0 or d == 0:
            continue
        psi = RationalQuadratic(a, b, c, d)
        assert tilde(psi).height <= psi.height**2


def test_reduction_agreement_square_and_triangular():
    rep = verify_reduction_agreement(SQUARE, 7)
    assert rep.ok and not rep.vacuous
    assert set(rep.monic_image) == {0, 1, 2, 4}  # squares mod 7
    rep5 = verify_reduction_agreement(TRIANGULAR, 5)
    assert rep5.ok
    assert set(rep5.integer_value_image) == {0, 1, 3}  # triangulars mod 5


def test_reduction_agreement_rejects_bad_prime():
    with pytest.raises(ValueError):
        verify_reduction_agreement(TRIANGULAR, 2)  # p | 2ad


def test_reduction_agreement_vacuous_value_set():
    # (x^2+1)/3 takes no integer values: 12n - 4 = m^2 is impossible mod 3
    empty = RationalQuadratic.from_string("(1*x^2+0*x+1)/3")
    assert integer_value_containment(empty, 10_000) == ()
    rep = verify_reduction_agreement(empty, 5)
    assert rep.vacuous and rep.ok


def test_quasisquares_single_prime():
    census = quasisquares(15, [3])
    assert census.hits == (1, 7, 10, 13)
    for q in census.hits:
        assert is_squarefree(q) and jacobi(q, 3) == 1


def test_quasisquares_brute_force_window():
    window = [11, 13, 17]
    census = quasisquares(500, window)
    brute = tuple(
        q
        for q in range(1, 501)
        if is_squarefree(q) and all(jacobi(q, p) == 1 for p in window)
    )
    assert census.hits == brute
    assert census.count == len(brute)
    assert census.count <= census.bound_value


def test_quasisquares_fraction_mode():
    window = [11, 13, 17, 19]
    strict = quasisquares(300, window)
    loose = quasisquares(300, window, mode="fraction", theta=0.75)
    assert set(strict.hits) <= set(loose.hits)
    brute = tuple(
        q
        for q in range(1, 301)
        if is_squarefree(q)
        and sum(1 for p in window if jacobi(q, p) == 1) >= 0.75 * len(window) - 1e-12
    )
    assert loose.hits == brute
    with pytest.raises(ValueError):
        quasisquares(300, window, mode="fraction", theta=0.4)
    with pytest.raises(ValueError):
        quasisquares(300, [4])  # not an odd prime


def test_stability_classifier_flags_alien_element():
    base = quadratic_image_set(SQUARE, 400)
    elems = sorted(set(base.elements) | {3})
    a = IntegerSet.from_iterable(400, elems)
    rep = stability_classifier(a, SQUARE, (11, 97))
    assert rep.exceptional.elements == (3,)
    assert set(rep.explained.elements) == set(base.elements)
    # 3 is a quadratic residue for only about half the window primes
    frac = dict(rep.fractions)[3]
    assert frac < 0.8


def test_stability_classifier_requires_wide_primes():
    a = quadratic_image_set(SQUARE, 100)
    with pytest.raises(ValueError):
        stability_classifier(a, SQUARE, (2, 2))


def test_goldbach_obstruction_example():
    a = IntegerSet.from_iterable(10, [1])
    b = IntegerSet.from_iterable(10, [1, 3])
    chk = goldbach_obstruction(a, b, 3)
    assert not chk.has_multiple  # sums {2, 4} miss multiples of 3
    assert chk.occupancy_sum == 3  # 1 + 2 <= p
    chk2 = goldbach_obstruction(a, IntegerSet.from_iterable(10, [2]), 3)
    assert chk2.has_multiple and chk2.witness == 2


def test_goldbach_obstruction_scan_squares():
    sq = quadratic_image_set(SQUARE, 10_000)
    for p in primes_up_to(50):
        chk = goldbach_obstruction(sq, sq, p)
        if not chk.has_multiple:
            assert chk.occupancy_sum <= p


def test_split_discriminant_primes_squares():
    assert split_discriminant_primes(SQUARE, SQUARE, 100) == (17, 41, 73, 89, 97)
    for p in split_discriminant_primes(SQUARE, SQUARE, 500):
        assert p % 8 == 1


def test_split_discriminant_primes_jacobi_filter():
    psi = RationalQuadratic.from_string("(3*x^2+0*x+0)/1")
    for p in split_discriminant_primes(psi, SQUARE, 500):
        assert p % 8 == 1
        assert jacobi(3, p) == 1
