"""Backend selection for the frequency-domain solves.

The compiled extension is used when it imports; otherwise (or when
``GAINCOOL_PURE_PYTHON`` is set) the numpy implementation takes over.
"""

import os

import numpy as np

from . import _kernels_py
from .errors import SingularResponse

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

if _compiled is not None and not os.environ.get("GAINCOOL_PURE_PYTHON"):
    _impl, BACKEND = _compiled, "cython"
else:
    _impl, BACKEND = _kernels_py, "python"


def _prepare(A, omegas):
    A = np.ascontiguousarray(A, dtype=np.complex128)
    scalar = np.ndim(omegas) == 0
    w = np.ascontiguousarray(np.atleast_1d(omegas), dtype=np.float64)
    return A, w, scalar


def response_rows(A, u, omegas, *, backend=None):
    """``u^T (-i omega I - A)^{-1}`` for each omega, shape ``(len(omegas), n)``."""
    impl = _select(backend)
    A, w, scalar = _prepare(A, omegas)
    u = np.ascontiguousarray(u, dtype=np.complex128)
    rows, bad = impl.response_rows(A, u, w, 1.0)
    if bad >= 0:
        raise SingularResponse(float(w[bad]))
    rows = np.asarray(rows)
    return rows[0] if scalar else rows


def quadratic_spectrum(A, D, u, v, omegas, *, backend=None):
    """``u^T M(w)^{-1} D M(-w)^{-T} v`` with ``M(w) = -i w I - A``."""
    impl = _select(backend)
    A, w, scalar = _prepare(A, omegas)
    D = np.ascontiguousarray(D, dtype=np.complex128)
    u = np.ascontiguousarray(u, dtype=np.complex128)
    v = np.ascontiguousarray(v, dtype=np.complex128)
    values, bad = impl.quadratic_spectrum(A, D, u, v, w)
    if bad >= 0:
        raise SingularResponse(float(w[bad]))
    values = np.asarray(values)
    return values[0] if scalar else values


def available_backends():
    return ("python",) if _compiled is None else ("python", "cython")


def _select(backend):
    if backend is None:
        return _impl
    if backend == "python":
        return _kernels_py
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {backend!r}")
