# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the _kernels_py functions (same names, same contracts)."""

import numpy as np


def sum_histogram(elements, Py_ssize_t length):
    a = np.ascontiguousarray(elements, dtype=np.int64)
    out = np.zeros(length, dtype=np.int64)
    cdef long long[::1] av = a
    cdef long long[::1] ov = out
    cdef Py_ssize_t n = av.shape[0]
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            ov[av[i] + av[j]] += 1
    return out


def difference_histogram(elements, Py_ssize_t span):
    a = np.ascontiguousarray(elements, dtype=np.int64)
    out = np.zeros(2 * span + 1, dtype=np.int64)
    cdef long long[::1] av = a
    cdef long long[::1] ov = out
    cdef Py_ssize_t n = av.shape[0]
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            ov[av[i] - av[j] + span] += 1
    return out


def cyclic_autocorrelation(values):
    v = np.ascontiguousarray(values, dtype=np.int64)
    cdef long long[::1] vv = v
    cdef Py_ssize_t p = vv.shape[0]
    out = np.zeros(p, dtype=np.int64)
    cdef long long[::1] ov = out
    cdef Py_ssize_t a, h, b
    cdef long long acc
    for h in range(p):
        acc = 0
        for a in range(p):
            b = a + h
            if b >= p:
                b -= p
            acc += vv[a] * vv[b]
        ov[h] = acc
    return out


def fold_mod(values, Py_ssize_t p):
    v = np.ascontiguousarray(values, dtype=np.int64)
    cdef long long[::1] vv = v
    out = np.zeros(p, dtype=np.int64)
    cdef long long[::1] ov = out
    cdef Py_ssize_t i, r
    r = 0
    for i in range(vv.shape[0]):
        ov[r] += vv[i]
        r += 1
        if r == p:
            r = 0
    return out
