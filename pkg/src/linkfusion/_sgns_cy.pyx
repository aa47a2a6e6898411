# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled skip-gram negative-sampling kernel; hot inner loop of embedding training."""

from libc.math cimport exp

import numpy as np

KERNEL_NAME = "cython"

cdef double _CLAMP = 10.0


cdef inline double _sigmoid(double x) nogil:
    if x > _CLAMP:
        return 1.0
    if x < -_CLAMP:
        return 0.0
    return 1.0 / (1.0 + exp(-x))


def sgns_train(double[:, ::1] w_in, double[:, ::1] w_out,
               long[::1] centers, long[::1] contexts,
               long[:, ::1] negatives, double lr):
    """One sequential SGD pass; mutates w_in/w_out in place.

    Arithmetic order matches the pure-Python fallback exactly so both
    kernels produce identical tables for identical inputs.
    """
    cdef Py_ssize_t n_pairs = centers.shape[0]
    cdef Py_ssize_t dim = w_in.shape[1]
    cdef Py_ssize_t n_neg = negatives.shape[1]
    cdef Py_ssize_t idx, j, k
    cdef long c, tgt
    cdef double x, g, label
    cdef double[::1] grad_c = np.empty(dim)

    for idx in range(n_pairs):
        c = centers[idx]
        for j in range(dim):
            grad_c[j] = 0.0
        for k in range(n_neg + 1):
            if k == 0:
                tgt = contexts[idx]
                label = 1.0
            else:
                tgt = negatives[idx, k - 1]
                if tgt == contexts[idx]:
                    continue
                label = 0.0
            x = 0.0
            for j in range(dim):
                x += w_in[c, j] * w_out[tgt, j]
            g = lr * (_sigmoid(x) - label)
            for j in range(dim):
                grad_c[j] += g * w_out[tgt, j]
                w_out[tgt, j] -= g * w_in[c, j]
        for j in range(dim):
            w_in[c, j] -= grad_c[j]
