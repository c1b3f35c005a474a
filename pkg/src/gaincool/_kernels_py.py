"""Pure numpy backend for the per-frequency solves, vectorized over frequency."""

import numpy as np

PIVOT_RTOL = 1e-13


def _solve_t(A, omegas, rhs):
    # x[i] solves (-i omegas[i] I - A)^T x = rhs
    n = A.shape[0]
    m = omegas.shape[0]
    M = np.broadcast_to(-A.T, (m, n, n)).copy()
    M[:, np.arange(n), np.arange(n)] -= 1j * omegas[:, None]
    b = np.broadcast_to(rhs, (m, n)).copy()
    scale = np.abs(M).reshape(m, -1).max(axis=1)
    bad = np.zeros(m, dtype=bool)
    rows = np.arange(m)
    for k in range(n):
        piv = k + np.argmax(np.abs(M[:, k:, k]), axis=1)
        top = M[rows, k].copy()
        M[rows, k] = M[rows, piv]
        M[rows, piv] = top
        top_b = b[rows, k].copy()
        b[rows, k] = b[rows, piv]
        b[rows, piv] = top_b
        pivot = M[:, k, k]
        bad |= np.abs(pivot) <= PIVOT_RTOL * scale
        pivot = np.where(bad, 1.0, pivot)
        f = M[:, k + 1:, k] / pivot[:, None]
        M[:, k + 1:, k:] -= f[:, :, None] * M[:, None, k, k:]
        b[:, k + 1:] -= f * b[:, k, None]
    x = np.empty_like(b)
    for i in range(n - 1, -1, -1):
        acc = b[:, i] - np.einsum("mj,mj->m", M[:, i, i + 1:], x[:, i + 1:])
        x[:, i] = acc / np.where(bad, 1.0, M[:, i, i])
    first = int(np.argmax(bad)) if bad.any() else -1
    return x, first


def response_rows(A, u, omegas, sign=1.0):
    x, bad = _solve_t(A, sign * omegas, u)
    if bad >= 0:
        x = x[:bad]
    return x, bad


def quadratic_spectrum(A, D, u, v, omegas):
    p, bad_p = _solve_t(A, omegas, u)
    q, bad_q = _solve_t(A, -omegas, v)
    bads = [b for b in (bad_p, bad_q) if b >= 0]
    bad = min(bads) if bads else -1
    values = np.einsum("mj,jk,mk->m", p, D, q)
    if bad >= 0:
        values = values[:bad]
    return values, bad
