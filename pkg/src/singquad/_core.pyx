# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: truncated power series and direct circular convolution.

Mirrors ``_pycore`` function for function.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

DEF MAX_TERMS = 40
DEF TERM_RTOL = 1e-17


cdef inline double _hyp_series(double p, double x, double num, double den0) nogil:
    cdef double c = 1.0
    cdef double total
    cdef double term
    cdef int l
    if num == 0.0:
        total = 1.0
    else:
        total = num / den0
    for l in range(1, MAX_TERMS):
        c = c * (-x) / (l * (l - 1 + p))
        if num == 0.0:
            term = c
        else:
            term = c * (num / (den0 + 2 * l))
        total += term
        if fabs(term) < TERM_RTOL * fabs(total):
            break
    return total


cdef cnp.ndarray _apply(double p, object x, double num, double den0):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t n = xs.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _hyp_series(p, 0.25 * xs[i] * xs[i], num, den0)
    return out.reshape(np.shape(x))


def a_series(double m, t):
    return _apply(0.5 * m, t, 0.0, 0.0)


def l_series(double m, rho):
    return _apply(0.5 * m + 1.0, rho, 1.0, m)


def m_series(double mu, double m, rho):
    return _apply(0.5 * m, rho, m, mu)


def circular_convolve(weights, source, out_shape):
    w = np.asarray(weights, dtype=np.complex128)
    f = np.asarray(source, dtype=np.complex128)
    ndim = w.ndim
    if ndim > 3:
        raise ValueError("direct convolution supports at most 3 dimensions")
    shape = list(w.shape) + [1] * (3 - ndim)
    oshape = list(out_shape) + [1] * (3 - ndim)
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] W = w.reshape(shape)
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] F = f.reshape(shape)
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] U = np.zeros(oshape, dtype=np.complex128)
    cdef Py_ssize_t n0 = shape[0], n1 = shape[1], n2 = shape[2]
    cdef Py_ssize_t o0 = oshape[0], o1 = oshape[1], o2 = oshape[2]
    cdef Py_ssize_t a, b, c, i, j, k
    cdef double complex fv
    with nogil:
        for a in range(n0):
            for b in range(n1):
                for c in range(n2):
                    fv = F[a, b, c]
                    if fv == 0:
                        continue
                    for i in range(o0):
                        for j in range(o1):
                            for k in range(o2):
                                U[i, j, k] = U[i, j, k] + W[(i - a + n0) % n0, (j - b + n1) % n1, (k - c + n2) % n2] * fv
    return U.reshape(tuple(out_shape))
