"""sievelab: desk-scale experiments around the large and larger sieves.

Exact additive-energy identities, residue constraint families, explicit
trigonometric majorants, rational-quadratic value sets, quasisquare
censuses, and extremal searches for how large a sieved set can be, all
behind reproducible seeded scenarios and a small CLI.
"""

__version__ = "0.1.0"

from .kernels import BACKEND as KERNEL_BACKEND
from .numtheory import PrimeTable, jacobi, is_squarefree, mertens_log_sum, primes_up_to
from .residues import (
    IntegerSet,
    ResidueSet,
    ResidueConstraintFamily,
    FibreCounts,
    InfeasibleConstraintError,
    InvariantViolationError,
    PrimorialGrowthError,
    reduce_mod,
    minimal_covering_interval,
    occupancy_ok,
    squares_set,
    quadratic_residue_family,
    interval_family,
    progression_family,
    family_from_reductions,
    primorial_set,
    random_constrained_set,
)
from .bounds import (
    BoundReport,
    LargerSieveInput,
    large_sieve_bound,
    larger_sieve_bound,
    larger_sieve_value,
    uniform_fibre_report,
    miss_count_bound,
    pair_occupancy_scan,
)
from .energy import (
    additive_energy,
    additive_energy_mod,
    energy_report,
    lift_inequality_check,
    quadruple_threshold_check,
    shift_set,
    pollard_profile,
    threshold_select,
    differenced_larger_sieve,
    intersecting_process,
)
from .fourier import (
    MajorantPolynomial,
    build_majorant,
    cosine_majorant,
    detect_large_frequency,
    reciprocal_exponential_sum,
    sieve_weight,
    dense_subinterval,
)
from .quadratics import (
    RationalQuadratic,
    membership_integer,
    quadratic_image_set,
    tilde,
    verify_reduction_agreement,
    quasisquares,
    stability_classifier,
    goldbach_obstruction,
    split_discriminant_primes,
)
from .search import ExtremalResult, extremal_search

__all__ = [
    "__version__",
    "KERNEL_BACKEND",
    "PrimeTable",
    "jacobi",
    "is_squarefree",
    "mertens_log_sum",
    "primes_up_to",
    "IntegerSet",
    "ResidueSet",
    "ResidueConstraintFamily",
    "FibreCounts",
    "InfeasibleConstraintError",
    "InvariantViolationError",
    "PrimorialGrowthError",
    "reduce_mod",
    "minimal_covering_interval",
    "occupancy_ok",
    "squares_set",
    "quadratic_residue_family",
    "interval_family",
    "progression_family",
    "family_from_reductions",
    "primorial_set",
    "random_constrained_set",
    "BoundReport",
    "LargerSieveInput",
    "large_sieve_bound",
    "larger_sieve_bound",
    "larger_sieve_value",
    "uniform_fibre_report",
    "miss_count_bound",
    "pair_occupancy_scan",
    "additive_energy",
    "additive_energy_mod",
    "energy_report",
    "lift_inequality_check",
    "quadruple_threshold_check",
    "shift_set",
    "pollard_profile",
    "threshold_select",
    "differenced_larger_sieve",
    "intersecting_process",
    "MajorantPolynomial",
    "build_majorant",
    "cosine_majorant",
    "detect_large_frequency",
    "reciprocal_exponential_sum",
    "sieve_weight",
    "dense_subinterval",
    "RationalQuadratic",
    "membership_integer",
    "quadratic_image_set",
    "tilde",
    "verify_reduction_agreement",
    "quasisquares",
    "stability_classifier",
    "goldbach_obstruction",
    "split_discriminant_primes",
    "ExtremalResult",
    "extremal_search",
]
