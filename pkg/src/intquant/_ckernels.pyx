# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled displacement kernel; same contract as ``_pykernels``."""
import numpy as np

from libc.math cimport exp, sqrt


cdef void _fill(double complex z, double complex[:, ::1] d,
                double complex[::1] f0, double complex[::1] prev,
                double complex[::1] cur) noexcept nogil:
    cdef Py_ssize_t dim = d.shape[0]
    cdef Py_ssize_t m, n, k, width
    cdef double J = z.real * z.real + z.imag * z.imag
    cdef double complex nxt, val
    f0[0] = exp(-0.5 * J)
    for m in range(1, dim):
        f0[m] = f0[m - 1] * z / sqrt(<double>m)
    for k in range(dim):
        cur[k] = f0[k]
        prev[k] = 0
    for n in range(dim):
        width = dim - n
        for k in range(width):
            val = cur[k]
            d[n + k, n] = val
            if k > 0:
                if k % 2 == 0:
                    d[n, n + k] = val.conjugate()
                else:
                    d[n, n + k] = -val.conjugate()
        if n == dim - 1:
            break
        for k in range(width - 1):
            nxt = (2 * n + 1 + k - J) * cur[k]
            if n > 0:
                nxt = nxt - sqrt(<double>(n * (n + k))) * prev[k]
            nxt = nxt / sqrt(<double>((n + 1) * (n + k + 1)))
            prev[k] = cur[k]
            cur[k] = nxt


def displacement_stack(z, Py_ssize_t dim):
    cdef double complex[::1] zv = np.ascontiguousarray(np.atleast_1d(z), dtype=np.complex128)
    cdef Py_ssize_t k, K = zv.shape[0]
    out = np.empty((K, dim, dim), dtype=np.complex128)
    cdef double complex[:, :, ::1] ov = out
    cdef double complex[::1] f0 = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] prev = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] cur = np.empty(dim, dtype=np.complex128)
    with nogil:
        for k in range(K):
            _fill(zv[k], ov[k], f0, prev, cur)
    return out


def displacement_matrix(z, Py_ssize_t dim):
    return displacement_stack(np.array([z]), dim)[0]
