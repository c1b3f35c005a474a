# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-frequency solves for small dense Langevin systems.

Mirrors ``_kernels_py`` exactly: Gaussian elimination with partial pivoting,
a pivot below ``PIVOT_RTOL * max|M|`` flags the frequency as singular.
"""

import numpy as np

ctypedef double complex cplx

cdef extern from "complex.h" nogil:
    double cabs(cplx z)

cdef double PIVOT_RTOL = 1e-13


cdef int _solve_t(const cplx[:, ::1] A, double omega, const cplx[::1] rhs,
                  cplx[:, ::1] work, cplx[::1] x) noexcept nogil:
    # x solves (-i omega I - A)^T x = rhs
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t i, j, k, r, piv
    cdef double scale = 0.0, best, mag
    cdef cplx f, tmp
    for i in range(n):
        for j in range(n):
            work[i, j] = -A[j, i]
        work[i, i] = work[i, i] - 1j * omega
        for j in range(n):
            mag = cabs(work[i, j])
            if mag > scale:
                scale = mag
        x[i] = rhs[i]
    for k in range(n):
        piv = k
        best = cabs(work[k, k])
        for r in range(k + 1, n):
            mag = cabs(work[r, k])
            if mag > best:
                best = mag
                piv = r
        if best <= PIVOT_RTOL * scale:
            return 1
        if piv != k:
            for j in range(k, n):
                tmp = work[k, j]
                work[k, j] = work[piv, j]
                work[piv, j] = tmp
            tmp = x[k]
            x[k] = x[piv]
            x[piv] = tmp
        for r in range(k + 1, n):
            f = work[r, k] / work[k, k]
            if f != 0:
                for j in range(k, n):
                    work[r, j] = work[r, j] - f * work[k, j]
                x[r] = x[r] - f * x[k]
    for i in range(n - 1, -1, -1):
        tmp = x[i]
        for j in range(i + 1, n):
            tmp = tmp - work[i, j] * x[j]
        x[i] = tmp / work[i, i]
    return 0


def response_rows(const cplx[:, ::1] A, const cplx[::1] u, const double[::1] omegas,
                  double sign=1.0):
    """Rows ``u^T (-i*sign*omega I - A)^{-1}`` for every omega; returns ``(rows, bad)``."""
    cdef Py_ssize_t n = A.shape[0], m = omegas.shape[0], i, j
    out = np.empty((m, n), dtype=np.complex128)
    cdef cplx[:, ::1] o = out
    cdef cplx[:, ::1] work = np.empty((n, n), dtype=np.complex128)
    cdef cplx[::1] x = np.empty(n, dtype=np.complex128)
    cdef Py_ssize_t bad = -1
    with nogil:
        for i in range(m):
            if _solve_t(A, sign * omegas[i], u, work, x):
                bad = i
                break
            for j in range(n):
                o[i, j] = x[j]
    return out, bad


def quadratic_spectrum(const cplx[:, ::1] A, const cplx[:, ::1] D, const cplx[::1] u,
                       const cplx[::1] v, const double[::1] omegas):
    """``u^T M(w)^{-1} D M(-w)^{-T} v`` with ``M(w) = -i w I - A``; returns ``(values, bad)``."""
    cdef Py_ssize_t n = A.shape[0], m = omegas.shape[0], i, j, k
    out = np.empty(m, dtype=np.complex128)
    cdef cplx[::1] o = out
    cdef cplx[:, ::1] work = np.empty((n, n), dtype=np.complex128)
    cdef cplx[::1] p = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] q = np.empty(n, dtype=np.complex128)
    cdef Py_ssize_t bad = -1
    cdef cplx acc, row
    with nogil:
        for i in range(m):
            if _solve_t(A, omegas[i], u, work, p) or _solve_t(A, -omegas[i], v, work, q):
                bad = i
                break
            acc = 0
            for j in range(n):
                if p[j] == 0:
                    continue
                row = 0
                for k in range(n):
                    row = row + D[j, k] * q[k]
                acc = acc + p[j] * row
            o[i] = acc
    return out, bad
