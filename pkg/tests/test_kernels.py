import numpy as np
import pytest

from sievelab import _kernels_py
from sievelab.kernels import BACKEND

try:
    from sievelab import _kernels

    HAVE_COMPILED = True
except ImportError:
    _kernels = None
    HAVE_COMPILED = False

KERNELS = ["sum_histogram", "difference_histogram", "cyclic_autocorrelation", "fold_mod"]


def test_backend_is_reported():
    assert BACKEND in ("cython", "python")
    if HAVE_COMPILED:
        assert BACKEND == "cython"


def test_sum_histogram_small():
    out = _kernels_py.sum_histogram([1, 2, 3], 9)
    # sums 2..6 with multiplicities 1,2,3,2,1
    assert out.tolist() == [0, 0, 1, 2, 3, 2, 1, 0, 0]
    assert _kernels_py.sum_histogram([], 4).tolist() == [0, 0, 0, 0]


def test_difference_histogram_small():
    out = _kernels_py.difference_histogram([1, 2, 4], 3)
    # differences -3..3: multiplicities 1,1,1,3,1,1,1
    assert out.tolist() == [1, 1, 1, 3, 1, 1, 1]


def test_cyclic_autocorrelation_direct():
    v = np.array([2, 0, 1, 1, 0], dtype=np.int64)
    got = _kernels_py.cyclic_autocorrelation(v)
    expect = [sum(int(v[a]) * int(v[(a + h) % 5]) for a in range(5)) for h in range(5)]
    assert got.tolist() == expect


def test_fold_mod_direct():
    v = np.arange(10, dtype=np.int64)
    got = _kernels_py.fold_mod(v, 3)
    expect = [sum(i for i in range(10) if i % 3 == r) for r in range(3)]
    assert got.tolist() == expect


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernels not built")
def test_backends_agree_on_random_inputs():
    rng = np.random.default_rng(23)
    for _ in range(40):
        n = int(rng.integers(0, 80))
        elems = np.sort(rng.choice(300, size=n, replace=False)) if n else np.array([], dtype=np.int64)
        length = int(elems.max() * 2 + 2) if n else 4
        span = int(elems.max()) if n else 2
        a = _kernels_py.sum_histogram(elems, length)
        b = _kernels.sum_histogram(elems.astype(np.int64), length)
        assert np.array_equal(a, b)
        a = _kernels_py.difference_histogram(elems, span)
        b = _kernels.difference_histogram(elems.astype(np.int64), span)
        assert np.array_equal(a, b)
        p = int(rng.choice([3, 5, 7, 11, 101]))
        counts = rng.integers(0, 50, size=p).astype(np.int64)
        assert np.array_equal(
            _kernels_py.cyclic_autocorrelation(counts),
            _kernels.cyclic_autocorrelation(counts),
        )
        m = int(rng.integers(1, 200))
        vals = rng.integers(0, 1000, size=int(rng.integers(0, 400))).astype(np.int64)
        assert np.array_equal(_kernels_py.fold_mod(vals, m), _kernels.fold_mod(vals, m))


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernels not built")
def test_backends_agree_on_large_counts():
    # exercise the chunked path and check no overflow below int64 limits
    elems = np.arange(1, 3001, dtype=np.int64)
    assert np.array_equal(
        _kernels_py.sum_histogram(elems, 6002),
        _kernels.sum_histogram(elems, 6002),
    )
    v = np.full(1009, 999, dtype=np.int64)
    assert np.array_equal(
        _kernels_py.cyclic_autocorrelation(v),
        _kernels.cyclic_autocorrelation(v),
    )
