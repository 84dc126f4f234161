"""Numpy implementations of the hot kernels.

Mirror of the compiled module in _kernels.pyx; sievelab.kernels picks
whichever is importable.  All four functions are exact integer arithmetic,
no FFT rounding anywhere.
"""

from __future__ import annotations

import numpy as np

# Outer-product workspaces are chunked to at most ~4M entries.
_CHUNK = 1 << 22


def sum_histogram(elements, length: int):
    """Counts of ordered pairwise sums a_i + a_j, indexed by the sum."""
    a = np.asarray(elements, dtype=np.int64)
    out = np.zeros(length, dtype=np.int64)
    if len(a) == 0:
        return out
    step = max(1, _CHUNK // len(a))
    for i in range(0, len(a), step):
        block = (a[i : i + step, None] + a[None, :]).ravel()
        out += np.bincount(block, minlength=length)
    return out


def difference_histogram(elements, span: int):
    """Counts of ordered pairwise differences a_i - a_j, index d + span."""
    a = np.asarray(elements, dtype=np.int64)
    out = np.zeros(2 * span + 1, dtype=np.int64)
    if len(a) == 0:
        return out
    step = max(1, _CHUNK // len(a))
    for i in range(0, len(a), step):
        block = (a[i : i + step, None] - a[None, :] + span).ravel()
        out += np.bincount(block, minlength=2 * span + 1)
    return out


def cyclic_autocorrelation(values):
    """c[h] = sum_a v[a] * v[(a+h) mod p] for a length-p count vector."""
    v = np.asarray(values, dtype=np.int64)
    p = len(v)
    if p == 0:
        return np.zeros(0, dtype=np.int64)
    full = np.convolve(v, v[::-1])[::-1]  # index m <-> difference m-(p-1)
    c = full[p - 1 :].copy()
    if p > 1:
        c[1:] += full[: p - 1]
    return c


def fold_mod(values, p: int):
    """out[r] = sum of values[i] over i = r (mod p)."""
    v = np.asarray(values, dtype=np.int64)
    pad = (-len(v)) % p
    if pad:
        v = np.concatenate([v, np.zeros(pad, dtype=np.int64)])
    return v.reshape(-1, p).sum(axis=0)
