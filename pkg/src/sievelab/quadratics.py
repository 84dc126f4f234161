"""Rational quadratics, their integer value sets, and the census machinery.

A rational quadratic psi(x) = (a x^2 + b x + c)/d with integer data carries
the integer discriminant D = b^2 - 4ac, and the whole module runs on one
identity: an integer n is a rational value of psi exactly when 4adn + D is a
perfect square (from 4ad*psi(t) + D = (2at + b)^2).  The monic companion
psi~(x) = psi(x/a) = (x^2 + bx + ac)/(ad) has the same rational values and
realizes every integer among them at an integer argument, which is what the
reduction-agreement verifier checks mod p.

Also here: quasisquare censuses (squarefree q that are residues modulo all,
or a fraction, of a prime window), the stability classifier splitting a set
into psi-explained and exceptional parts, and the sumset obstruction checks.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .numtheory import is_squarefree, jacobi, primes_up_to
from .residues import (
    IntegerSet,
    InvariantViolationError,
    ResidueSet,
    residue_counts,
)

__all__ = [
    "RationalQuadratic",
    "membership_integer",
    "quadratic_image_set",
    "integer_value_containment",
    "tilde",
    "ReductionAgreement",
    "verify_reduction_agreement",
    "QuasisquareCensus",
    "quasisquares",
    "StabilityReport",
    "stability_classifier",
    "GoldbachCheck",
    "goldbach_obstruction",
    "split_discriminant_primes",
]

_QUADRATIC_RE = re.compile(
    r"""^\(\s*(?P<a>[+-]?\d+)\s*\*\s*x\^2\s*
         (?P<b>[+-]\s*\d+)\s*\*\s*x\s*
         (?P<c>[+-]\s*\d+)\s*\)\s*/\s*(?P<d>[+-]?\d+)$""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class RationalQuadratic:
    """(a x^2 + b x + c)/d, gcd(a,b,c,d) = 1, d > 0, a != 0."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a == 0:
            raise ValueError("leading coefficient must be nonzero")
        if self.d == 0:
            raise ValueError("denominator must be nonzero")
        g = math.gcd(math.gcd(self.a, self.b), math.gcd(self.c, self.d))
        if self.d < 0:
            g = -g
        if g != 1:
            for name, value in zip("abcd", (self.a, self.b, self.c, self.d)):
                object.__setattr__(self, name, value // g)

    @property
    def height(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    @property
    def discriminant_data(self) -> int:
        """D = b^2 - 4ac; equals d^2 times the discriminant of psi as a
        rational polynomial, so all square conditions are phrased in D."""
        return self.b * self.b - 4 * self.a * self.c

    def evaluate(self, t) -> Fraction:
        t = Fraction(t)
        return (self.a * t * t + self.b * t + self.c) / Fraction(self.d)

    def __str__(self) -> str:
        return f"({self.a}*x^2{self.b:+d}*x{self.c:+d})/{self.d}"

    @classmethod
    def from_string(cls, text: str) -> "RationalQuadratic":
        m = _QUADRATIC_RE.match(text.strip())
        if m is None:
            raise ValueError(
                f"cannot parse {text!r}; expected the form (a*x^2+b*x+c)/d"
            )
        a, b, c, d = (int(m.group(k).replace(" ", "")) for k in "abcd")
        return cls(a, b, c, d)


def membership_integer(psi: RationalQuadratic, n: int) -> bool:
    """n in psi(Q)?  Exactly when 4adn + D is a perfect square."""
    probe = 4 * psi.a * psi.d * n + psi.discriminant_data
    if probe < 0:
        return False
    r = math.isqrt(probe)
    return r * r == probe


def _square_values_in(psi: RationalQuadratic, lo: int, hi: int) -> list[int]:
    """All integers n in [lo, hi] with 4adn + D a perfect square, via a scan
    over candidate square roots m >= 0."""
    g = 4 * psi.a * psi.d
    dd = psi.discriminant_data
    if g > 0:
        low, high = g * lo + dd, g * hi + dd
    else:
        low, high = g * hi + dd, g * lo + dd
    if high < 0:
        return []
    m_lo = math.isqrt(low - 1) + 1 if low > 0 else 0
    m_hi = math.isqrt(high)
    if m_hi - m_lo > 10**8:
        raise ValueError("square-root scan too large for desk scale")
    if m_hi * m_hi > 2**62:  # exact big-int fallback
        out = set()
        for m in range(m_lo, m_hi + 1):
            num = m * m - dd
            if num % g == 0 and lo <= num // g <= hi:
                out.add(num // g)
        return sorted(out)
    m = np.arange(m_lo, m_hi + 1, dtype=np.int64)
    num = m * m - dd
    num = num[num % g == 0]
    n = num // g
    return sorted(set(int(v) for v in n[(n >= lo) & (n <= hi)]))


def quadratic_image_set(psi: RationalQuadratic, x: int) -> IntegerSet:
    """psi(Q) cap Z cap [1, x] as an IntegerSet; O(sqrt(|ad| x)) scan."""
    if x < 1:
        raise ValueError(f"x must be at least 1, got {x}")
    if psi.height > 10**6:
        raise ValueError(f"height {psi.height} above the 10^6 desk-scale cap")
    return IntegerSet.from_iterable(x, _square_values_in(psi, 1, x))


def integer_value_containment(psi: RationalQuadratic, radius: int) -> tuple[int, ...]:
    """Integer values of psi in [-radius, radius] that fail to be values of
    the monic companion at an integer argument.  Always empty: the square
    root of 4adn + D automatically matches the parity of b, making
    (-b +- m)/2 integral; the scan re-derives that instead of assuming it."""
    failures = []
    for n in _square_values_in(psi, -radius, radius):
        probe = 4 * psi.a * psi.d * n + psi.discriminant_data
        m = math.isqrt(probe)
        if (m - psi.b) % 2 != 0 and (m + psi.b) % 2 != 0:
            failures.append(n)
    return tuple(failures)


def tilde(psi: RationalQuadratic) -> RationalQuadratic:
    """The monic companion psi~(x) = psi(x/a) = (x^2 + bx + ac)/(ad).

    Same rational values; every integer rational value of psi is an integer
    value of psi~ at an integer point."""
    return RationalQuadratic(1, psi.b, psi.a * psi.c, psi.a * psi.d)


def _monic_image_mod(psi: RationalQuadratic, p: int) -> ResidueSet:
    """{psi~(x) mod p : x in Z/pZ} for p coprime to 2ad.

    Renormalization can flip the companion to leading coefficient -1, so the
    numerator is evaluated with its actual coefficients."""
    t = tilde(psi)
    inv = pow(t.d % p, -1, p)
    xs = np.arange(p, dtype=np.int64)
    num = ((t.a % p) * ((xs * xs) % p) + (t.b % p) * xs + t.c % p) % p
    vals = (num * inv) % p
    return ResidueSet.from_members(p, (int(v) for v in np.unique(vals)))


@dataclass(frozen=True)
class ReductionAgreement:
    """Do the mod-p reductions of psi(Q) cap Z and psi~(Z) coincide?

    `vacuous` marks quadratics with no integer rational value at all (the
    agreement statement assumes there is one); `ok` folds that in."""

    modulus: int
    search_radius: int
    monic_image: tuple[int, ...]
    integer_value_image: tuple[int, ...]
    equal: bool
    vacuous: bool
    containment_failures: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.vacuous or (self.equal and not self.containment_failures)


def _integrality_argument(psi: RationalQuadratic) -> int | None:
    """Smallest-magnitude x with ad | x^2 + bx + ac, i.e. an integer argument
    where the monic companion takes an integer value; None when the
    congruence has no solution (then psi takes no integer value at all)."""
    mod = abs(psi.a * psi.d)
    best = None
    for x in range(mod):
        if (x * x + psi.b * x + psi.a * psi.c) % mod == 0:
            for rep in (x, x - mod):
                if best is None or abs(rep) < abs(best):
                    best = rep
    return best


def verify_reduction_agreement(
    psi: RationalQuadratic, p: int, search_range: int | None = None
) -> ReductionAgreement:
    """Compare {psi~(x) mod p} with {n mod p : n an integer value of psi in
    [-R, R]}.

    The default R is large enough that integer values along the progression
    x* + ad*Z (x* solving the integrality congruence) cover every residue
    class mod p, which makes equality a theorem whenever p does not divide
    2ad and psi has any integer value.  Each integer value's monic preimage
    is also re-derived explicitly (parity of the square root against b), and
    any failures are reported.
    """
    g = 2 * psi.a * psi.d
    if p < 2 or g % p == 0:
        raise ValueError(f"p={p} divides 2ad = {g}; reduction undefined")
    anchor = _integrality_argument(psi)
    if search_range is not None:
        radius = int(search_range)
    elif anchor is None:
        radius = abs(psi.a * psi.d) * p
    else:
        span = abs(anchor) + abs(psi.a * psi.d) * p
        radius = (
            span * span + abs(psi.b) * span + abs(psi.a * psi.c)
        ) // abs(psi.a * psi.d) + 1
    values = _square_values_in(psi, -radius, radius)

    failures = []
    for n in values:
        probe = 4 * psi.a * psi.d * n + psi.discriminant_data
        m = math.isqrt(probe)
        # integer preimage of the monic companion needs (-b +- m)/2 integral
        if (m - psi.b) % 2 != 0 and (m + psi.b) % 2 != 0:
            failures.append(n)

    monic = _monic_image_mod(psi, p)
    lifted = sorted({n % p for n in values})
    return ReductionAgreement(
        modulus=p,
        search_radius=radius,
        monic_image=tuple(monic.members()),
        integer_value_image=tuple(lifted),
        equal=tuple(monic.members()) == tuple(lifted),
        vacuous=not values,
        containment_failures=tuple(failures),
    )


@dataclass(frozen=True)
class QuasisquareCensus:
    """Squarefree q <= y that are quadratic residues modulo every prime of
    the window (mode "all") or modulo at least a theta fraction of it
    (mode "fraction").  bound_value is the census ceiling
    8 (6 log Y / eta)^(3 log Y / log Z) at eta = |P| log Z / Z, Z = min P;
    it applies to mode "all"."""

    y: int
    primes: tuple[int, ...]
    mode: str
    theta: float | None
    hits: tuple[int, ...]
    eta: float
    bound_value: float

    @property
    def count(self) -> int:
        return len(self.hits)

    def min_nontrivial(self) -> int | None:
        for q in self.hits:
            if q > 1:
                return q
        return None

    def observed_exponent(self) -> float | None:
        """log_Y of the smallest nontrivial hit; reported, never asserted."""
        q = self.min_nontrivial()
        if q is None or self.y <= 1:
            return None
        return math.log(q) / math.log(self.y)

    def to_json_dict(self) -> dict:
        return {
            "y": self.y,
            "primes": list(self.primes),
            "mode": self.mode,
            "theta": self.theta,
            "count": self.count,
            "hits": list(self.hits),
            "eta": self.eta,
            "bound_value": self.bound_value,
            "min_nontrivial": self.min_nontrivial(),
            "observed_exponent": self.observed_exponent(),
        }


def quasisquares(
    y: int, primes, mode: str = "all", theta: float | None = None
) -> QuasisquareCensus:
    primes = sorted(set(int(p) for p in primes))
    if not primes:
        raise ValueError("the prime window must be nonempty")
    table = set(primes_up_to(primes[-1]))
    for p in primes:
        if p == 2 or p not in table:
            raise ValueError(f"window entries must be odd primes, got {p}")
    if mode == "all":
        needed = len(primes)
    elif mode == "fraction":
        if theta is None or not 0.5 < theta <= 1:
            raise ValueError(f"fraction mode needs theta in (1/2, 1], got {theta}")
        needed = theta * len(primes)
    else:
        raise ValueError(f"unknown census mode {mode!r}")

    hits = []
    for q in range(1, y + 1):
        if not is_squarefree(q):
            continue
        good = sum(1 for p in primes if jacobi(q, p) == 1)
        if good >= needed - 1e-12:
            hits.append(q)

    z = primes[0]
    eta = len(primes) * math.log(z) / z
    bound_value = 8.0 * (6.0 * math.log(y) / eta) ** (3.0 * math.log(y) / math.log(z))
    return QuasisquareCensus(
        y=y,
        primes=tuple(primes),
        mode=mode,
        theta=theta,
        hits=tuple(hits),
        eta=eta,
        bound_value=bound_value,
    )


@dataclass(frozen=True)
class StabilityReport:
    """Partition of A into the psi-explained part and the exceptional part.

    x goes to the explained part when x mod p lands in the reduction of the
    psi-image for at least `threshold` of the window primes."""

    threshold: float
    window: tuple[int, ...]
    explained: IntegerSet
    exceptional: IntegerSet
    fractions: tuple[tuple[int, float], ...]
    per_prime: tuple[tuple[int, tuple[int, ...], tuple[int, ...]], ...]

    def to_json_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "window": list(self.window),
            "explained": list(self.explained.elements),
            "exceptional": list(self.exceptional.elements),
            "fractions": [{"x": x, "fraction": f} for x, f in self.fractions],
            "per_prime": [
                {"p": p, "image_classes": list(t), "unexplained_classes": list(u)}
                for p, t, u in self.per_prime
            ],
        }


def stability_classifier(
    a: IntegerSet,
    psi: RationalQuadratic,
    prime_window: tuple[int, int],
    threshold: float = 0.97,
) -> StabilityReport:
    """Split A by how often each element reduces into the psi-image mod p
    across the window.  Window primes must exceed 2 * height(psi), which
    keeps every p coprime to 2ad."""
    lo, hi = prime_window
    window = [p for p in primes_up_to(hi) if p >= lo]
    if not window:
        raise ValueError(f"no primes in window [{lo}, {hi}]")
    if window[0] <= 2 * psi.height:
        raise ValueError(
            f"window prime {window[0]} not above 2*height = {2 * psi.height}"
        )
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must lie in (0,1], got {threshold}")

    images = {p: _monic_image_mod(psi, p) for p in window}
    explained, exceptional, fractions = [], [], []
    for x in a.elements:
        good = sum(1 for p in window if (images[p].mask >> (x % p)) & 1)
        frac = good / len(window)
        fractions.append((x, frac))
        (explained if frac >= threshold - 1e-12 else exceptional).append(x)

    per_prime = []
    for p in window:
        t_p = images[p]
        a_classes = np.flatnonzero(residue_counts(a, p))
        unexplained = tuple(int(r) for r in a_classes if not (t_p.mask >> int(r)) & 1)
        per_prime.append((p, t_p.members(), unexplained))

    return StabilityReport(
        threshold=threshold,
        window=tuple(window),
        explained=IntegerSet.from_iterable(a.bound, explained),
        exceptional=IntegerSet.from_iterable(a.bound, exceptional),
        fractions=tuple(fractions),
        per_prime=tuple(per_prime),
    )


@dataclass(frozen=True)
class GoldbachCheck:
    modulus: int
    has_multiple: bool
    occupancy_sum: int
    witness: int | None


def goldbach_obstruction(a: IntegerSet, b: IntegerSet, p: int) -> GoldbachCheck:
    """Does A+B contain a multiple of p?  Equivalent to (-A mod p) meeting
    (B mod p); no sumset is formed.  When it does not, |A mod p| + |B mod p|
    cannot exceed p, and that implication is asserted."""
    a_res = np.flatnonzero(residue_counts(a, p))
    b_res = set(int(r) for r in np.flatnonzero(residue_counts(b, p)))
    witness = None
    for r in a_res:
        if (-int(r)) % p in b_res:
            witness = (-int(r)) % p
            break
    occupancy = len(a_res) + len(b_res)
    if witness is None and a_res.size and b_res and occupancy > p:
        raise InvariantViolationError(
            f"disjoint negated residues mod {p} but occupancy {occupancy} > {p}"
        )
    return GoldbachCheck(
        modulus=p,
        has_multiple=witness is not None,
        occupancy_sum=occupancy,
        witness=witness,
    )


def _odd_prime_divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    while n % 2 == 0:
        n //= 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 2
    if n > 1:
        out.append(n)
    return out


def split_discriminant_primes(
    psi_a: RationalQuadratic, psi_b: RationalQuadratic, y: int
) -> tuple[int, ...]:
    """Primes p <= y with p = 1 mod 8 and every odd prime divisor of
    a_A a_B d_A d_B a quadratic residue mod p; for such p the product
    -a_A a_B d_A d_B is itself a square mod p (verified)."""
    product = psi_a.a * psi_b.a * psi_a.d * psi_b.d
    odd_divisors = _odd_prime_divisors(product)
    found = []
    for p in primes_up_to(y):
        if p % 8 != 1:
            continue
        if any(jacobi(q, p) != 1 for q in odd_divisors):
            continue
        if jacobi((-product) % p, p) != 1:
            raise InvariantViolationError(
                f"-{product} expected to be a square mod {p}"
            )
        found.append(p)
    return tuple(found)
