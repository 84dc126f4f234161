"""Trigonometric majorants, the large-frequency detector, exponential sums,
the smoothed divisor weight, and dense-subinterval search.

The central object is a real trigonometric polynomial with constant term 1
that is provably nonpositive outside a prescribed arc around 0.  Summing it
over the normalized residues of a set that avoids an arc forces a large
Fourier coefficient, which is what detect_large_frequency extracts.  The
negativity is certified numerically: a dense grid check combined with the
derivative bound |f'| <= 2*pi*sum |k c_k| between grid points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numtheory import primes_up_to
from .residues import IntegerSet, minimal_covering_interval, reduce_mod

__all__ = [
    "MajorantPolynomial",
    "build_majorant",
    "CosinePolynomial",
    "cosine_majorant",
    "DetectorResult",
    "detect_large_frequency",
    "reciprocal_exponential_sum",
    "SieveWeight",
    "sieve_weight",
    "default_bump",
    "dense_subinterval",
]

_EVAL_CHUNK = 4096


@dataclass(frozen=True)
class MajorantPolynomial:
    """f(theta) = 1 + sum_{0<|k|<=K} c_k e(k theta), with c_k real and even
    in k, so f(theta) = 1 + 2 sum_{k=1}^{K} c_k cos(2 pi k theta).

    Nonpositive on ||theta|| >= eps/2; `certified_negative` records that the
    construction-time grid-plus-Lipschitz check proved f <= 1e-9 there, and
    `negativity_margin` is the certified upper bound for f on that region.
    """

    eps: float
    degree: int
    coefficients: np.ndarray  # index k = 0..K, coefficients[0] = 1
    lipschitz: float
    negativity_margin: float
    certified_negative: bool

    def coefficient(self, k: int) -> float:
        k = abs(k)
        return float(self.coefficients[k]) if k <= self.degree else 0.0

    def evaluate(self, theta):
        theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
        out = np.empty_like(theta)
        ks = np.arange(1, self.degree + 1, dtype=np.float64)
        cs = self.coefficients[1:]
        for lo in range(0, len(theta), _EVAL_CHUNK):
            block = theta[lo : lo + _EVAL_CHUNK, None]
            out[lo : lo + _EVAL_CHUNK] = 1.0 + 2.0 * (
                np.cos(2.0 * np.pi * block * ks) @ cs
            )
        return out if out.size > 1 else float(out[0])

    def coefficient_rows(self) -> list[tuple[int, float]]:
        return [(k, float(self.coefficients[k])) for k in range(self.degree + 1)]


def build_majorant(eps: float, grid_points: int = 10_000) -> MajorantPolynomial:
    """Truncated tent-function transform: c_k = (8/eps^2)(sin(pi k eps/2)/(pi k))^2
    for 0 < k <= K = ceil(2/eps^2).

    The untruncated series is (8/eps^2) times the self-convolution of the
    indicator of an eps/4-arc, minus 1; it equals -1 off the eps/2-arc, and
    the truncation tail is below 16/(pi^2 eps^2 K) <= 8/pi^2 < 0.82, which is
    where the negativity margin comes from.  Construction verifies the
    negativity on a grid of at least `grid_points` points plus a Lipschitz
    certificate and raises if the check fails.
    """
    if not 0 < eps <= 0.5:
        raise ValueError(f"eps must lie in (0, 1/2], got {eps}")
    k_max = math.ceil(2 / eps**2)
    ks = np.arange(1, k_max + 1, dtype=np.float64)
    coeffs = np.empty(k_max + 1)
    coeffs[0] = 1.0
    coeffs[1:] = (8.0 / eps**2) * (np.sin(np.pi * ks * eps / 2.0) / (np.pi * ks)) ** 2
    lipschitz = float(2.0 * np.pi * 2.0 * np.sum(ks * coeffs[1:]))

    poly = MajorantPolynomial(
        eps=eps,
        degree=k_max,
        coefficients=coeffs,
        lipschitz=lipschitz,
        negativity_margin=math.inf,
        certified_negative=False,
    )
    lo, hi = eps / 2.0, 0.5  # f is even and 1-periodic
    n = max(int(grid_points), 10_000, int(lipschitz * (hi - lo) / 0.05) + 2)
    grid = np.linspace(lo, hi, n)
    spacing = (hi - lo) / (n - 1)
    margin = float(np.max(poly.evaluate(grid))) + lipschitz * spacing / 2.0
    certified = margin <= 1e-9
    if not certified:
        raise ValueError(
            f"negativity certificate failed for eps={eps}: margin {margin:.3e}"
        )
    return MajorantPolynomial(
        eps=eps,
        degree=k_max,
        coefficients=coeffs,
        lipschitz=lipschitz,
        negativity_margin=margin,
        certified_negative=certified,
    )


@dataclass(frozen=True)
class CosinePolynomial:
    """1 - 2cos(theta) + cos(2theta), nonpositive for |theta| <= pi/2.

    Angles here are radians, not fractions of a turn.  The polynomial
    factors as 2cos(theta)(cos(theta) - 1).
    """

    coefficients: tuple[float, float, float] = (1.0, -2.0, 1.0)

    def evaluate(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        a0, a1, a2 = self.coefficients
        out = a0 + a1 * np.cos(theta) + a2 * np.cos(2.0 * theta)
        return out if out.ndim else float(out)

    def product_form(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        out = 2.0 * np.cos(theta) * (np.cos(theta) - 1.0)
        return out if out.ndim else float(out)


def cosine_majorant() -> CosinePolynomial:
    return CosinePolynomial()


@dataclass(frozen=True)
class DetectorResult:
    """Maximizing frequency for the exponential sum of A mod p.

    magnitude = |sum_{x in A} e(k x / p)| at the returned k; the guarantee is
    eps|A|/32 in general mode (k <= ceil(2/eps^2)) and |A|/3 in half-interval
    mode (k in {1, 2}).  Magnitudes do not depend on where the covering
    interval sits, so no centering is computed.
    """

    modulus: int
    mode: str
    k: int
    magnitude: float
    guarantee: float
    guarantee_met: bool
    covering_interval: tuple[int, int]

    def to_json_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "mode": self.mode,
            "k": self.k,
            "magnitude": self.magnitude,
            "guarantee": self.guarantee,
            "guarantee_met": self.guarantee_met,
            "covering_interval": {
                "start": self.covering_interval[0],
                "length": self.covering_interval[1],
            },
        }


def detect_large_frequency(
    a: IntegerSet, p: int, eps: float | None = None, mode: str = "general"
) -> DetectorResult:
    """Scan k for the largest |sum_{x in A} e(kx/p)| (multiplicities kept).

    general mode: requires the residues of A to fit in a cyclic interval of
    length <= (1-eps)p and scans 1 <= k <= ceil(2/eps^2); some k must reach
    eps|A|/32.  half_interval mode: requires length <= p/2, scans k in
    {1, 2}, and some k must reach |A|/3.  Ties go to the smallest k.
    """
    residue_set, _ = reduce_mod(a, p)
    start, length = minimal_covering_interval(residue_set)
    if mode == "general":
        if eps is None or not 0 < eps < 1:
            raise ValueError(f"general mode needs eps in (0,1), got {eps}")
        ceiling = (1 - eps) * p
        if length > ceiling:
            raise ValueError(
                f"covering interval has length {length}, above (1-eps)p = {ceiling:.6g}"
            )
        k_max = math.ceil(2 / eps**2)
        guarantee = eps * len(a) / 32.0
    elif mode == "half_interval":
        if length > p / 2:
            raise ValueError(
                f"covering interval has length {length}, above p/2 = {p / 2:.6g}"
            )
        k_max = 2
        guarantee = len(a) / 3.0
    else:
        raise ValueError(f"unknown detector mode {mode!r}")

    if a.elements:
        residues = np.asarray(a.elements, dtype=np.float64) % p
        mags = np.empty(k_max)
        ks = np.arange(1, k_max + 1, dtype=np.float64)
        for lo in range(0, k_max, _EVAL_CHUNK):
            block = ks[lo : lo + _EVAL_CHUNK, None]
            mags[lo : lo + _EVAL_CHUNK] = np.abs(
                np.exp(2j * np.pi * block * residues / p).sum(axis=1)
            )
        best = int(np.argmax(mags))  # first maximum: smallest k on ties
        k, magnitude = best + 1, float(mags[best])
    else:
        k, magnitude = 1, 0.0

    return DetectorResult(
        modulus=p,
        mode=mode,
        k=k,
        magnitude=magnitude,
        guarantee=guarantee,
        guarantee_met=magnitude >= guarantee - 1e-9,
        covering_interval=(start, length),
    )


def reciprocal_exponential_sum(x: float, y: int, primes_only: bool = False) -> complex:
    """sum_{Y <= n <= 2Y} e(x/n), optionally over primes only."""
    if y < 1:
        raise ValueError(f"Y must be at least 1, got {y}")
    if primes_only:
        ns = np.array([p for p in primes_up_to(2 * y) if p >= y], dtype=np.float64)
    else:
        ns = np.arange(y, 2 * y + 1, dtype=np.float64)
    if ns.size == 0:
        return complex(0.0)
    return complex(np.exp(2j * np.pi * (float(x) / ns)).sum())


def default_bump(x):
    """Smooth cutoff exp(1 - 1/(1 - (4x)^2)) on |x| < 1/4, zero outside."""
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.zeros_like(arr)
    inside = np.abs(arr) < 0.25
    t = 4.0 * arr[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - t * t))
    return out if np.ndim(x) else float(out[0])


@dataclass(frozen=True)
class SieveWeight:
    """w(n) = (sum_{d|n} mu(d) psi(log d / log Y))^2 on [Y, 2Y].

    Squarefree-supported lambda_d satisfy w(n) = sum_{d|n} lambda_d; the
    audit fields record the three checked properties: primes in the window
    get weight >= 1 (exactly 1 in fact), the total mass stays below
    10 * pi(Y), and sum |lambda_d|/d stays a bounded multiple of log^3 Y.
    """

    y: int
    values: np.ndarray  # index n - y for n in [y, 2y]
    lambda_d: dict[int, float]
    min_prime_weight: float
    total: float
    prime_count: int  # pi(Y)
    lambda_ratio: float  # (sum |lambda_d|/d) / log^3 Y

    def weight(self, n: int) -> float:
        if not self.y <= n <= 2 * self.y:
            raise ValueError(f"n={n} outside [{self.y}, {2 * self.y}]")
        return float(self.values[n - self.y])

    @property
    def mass_ratio(self) -> float:
        return self.total / self.prime_count


def _mobius_up_to(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int64)
    sq = np.ones(n + 1, dtype=bool)
    for p in primes_up_to(n):
        mu[p::p] *= -1
        sq[p * p :: p * p] = False
    # fix magnitude: mu currently holds (-1)^{#distinct primes}; zero the
    # non-squarefree slots
    mu[~sq] = 0
    mu[0] = 0
    return mu


def sieve_weight(y: int, bump=None) -> SieveWeight:
    if y < 16:
        raise ValueError(f"Y must be at least 16, got {y}")
    psi = default_bump if bump is None else bump
    if abs(float(psi(0.0)) - 1.0) > 1e-9:
        raise ValueError("bump must satisfy psi(0) = 1")
    probes = np.linspace(-1.0, 1.0, 401)
    vals = np.array([float(psi(float(t))) for t in probes])
    if np.any(np.abs(vals) > 1.0 + 1e-9):
        raise ValueError("bump must satisfy |psi| <= 1")
    if np.any(vals[np.abs(probes) >= 0.25] != 0.0):
        raise ValueError("bump must vanish for |x| >= 1/4")

    log_y = math.log(y)
    d_max = int(math.exp(log_y / 4.0)) + 1  # support kills log d/log Y >= 1/4
    mu = _mobius_up_to(d_max)
    taper = {
        d: float(mu[d]) * float(psi(math.log(d) / log_y))
        for d in range(1, d_max + 1)
        if mu[d] != 0 and math.log(d) / log_y < 0.25
    }
    taper = {d: t for d, t in taper.items() if t != 0.0}

    base = np.zeros(y + 1, dtype=np.float64)  # index n - y
    for d, t in taper.items():
        first = ((y + d - 1) // d) * d
        base[first - y :: d] += t
    values = base * base

    lambda_d: dict[int, float] = {}
    for d1, t1 in taper.items():
        for d2, t2 in taper.items():
            key = d1 * d2 // math.gcd(d1, d2)
            lambda_d[key] = lambda_d.get(key, 0.0) + t1 * t2
    lambda_sum = sum(abs(v) / d for d, v in lambda_d.items())

    window_primes = [p for p in primes_up_to(2 * y) if p >= y]
    min_prime_weight = min(float(values[p - y]) for p in window_primes)
    prime_count = len(primes_up_to(y))
    return SieveWeight(
        y=y,
        values=values,
        lambda_d=lambda_d,
        min_prime_weight=min_prime_weight,
        total=float(values.sum()),
        prime_count=prime_count,
        lambda_ratio=lambda_sum / log_y**3,
    )


def dense_subinterval(a: IntegerSet, length: int) -> tuple[int, int]:
    """Leftmost window [s, s+L-1] inside [1, X] maximizing |A cap window|."""
    x = a.bound
    if not 1 <= length <= x:
        raise ValueError(f"window length must lie in [1, {x}], got {length}")
    if not a.elements:
        return 1, 0
    elems = np.asarray(a.elements, dtype=np.int64)
    starts = np.unique(np.clip(elems - length + 1, 1, x - length + 1))
    # counts via prefix positions of the sorted element list
    hi = np.searchsorted(elems, starts + length - 1, side="right")
    lo = np.searchsorted(elems, starts, side="left")
    counts = hi - lo
    best = int(np.argmax(counts))  # first maximum = leftmost candidate
    return int(starts[best]), int(counts[best])
