"""Hot-kernel dispatch.

The quadratic-time histograms and correlations behind the energy and shift
machinery live either in the compiled module (_kernels, built from
_kernels.pyx) or in the numpy fallback (_kernels_py).  Selection happens once
at import; BACKEND records the winner so reports and benchmarks can say which
code actually ran.
"""

from __future__ import annotations

try:  # pragma: no cover - exercised indirectly via either backend
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:  # pragma: no cover
    from . import _kernels_py as _impl

    BACKEND = "python"

sum_histogram = _impl.sum_histogram
difference_histogram = _impl.difference_histogram
cyclic_autocorrelation = _impl.cyclic_autocorrelation
fold_mod = _impl.fold_mod
