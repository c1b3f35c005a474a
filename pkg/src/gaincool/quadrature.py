"""Peak-anchored Gauss-Legendre quadrature over the real line.

Spectra of linear systems are sums of resonances centred at ``-Im(lambda)``
with half-widths ``|Re(lambda)|`` for the drift eigenvalues ``lambda``, and
fall off as ``1/omega^2``. Breakpoints are placed geometrically around every
resonance so that panels are narrow near a peak and wide away from it; the
two tails beyond ``+-R`` are added analytically from ``S(R) * R``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import NonConvergedQuadrature


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    evaluations: int
    cutoff: float


def breakpoints(anchors: Iterable[tuple], cutoff: float, ratio: float = 2.0) -> np.ndarray:
    """Breakpoints in ``[-cutoff, cutoff]`` refined geometrically around anchors.

    ``anchors`` holds ``(centre, width)`` pairs; spacing starts at half the
    width next to the centre and grows by ``ratio`` outwards.
    """
    pts = [-cutoff, 0.0, cutoff]
    floor = 1e-12 * cutoff
    for centre, width in anchors:
        width = max(float(width), floor)
        # a marginal mode sits at zero up to round-off; keep nodes away from it
        centre = 0.0 if abs(centre) < floor else float(centre)
        pts.append(centre)
        step = 0.5 * width
        while step < 2 * cutoff:
            pts.extend((centre - step, centre + step))
            step *= ratio
    pts = np.unique(np.clip(pts, -cutoff, cutoff))
    return pts


def _gauss(f, edges, order):
    x, w = np.polynomial.legendre.leggauss(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo) + half * x).ravel()
    vals = np.asarray(f(nodes), dtype=float).reshape(half.shape[0], order)
    return float(np.sum(half * (vals * w).sum(axis=1, keepdims=True))), nodes.size


def integrate(f: Callable[[np.ndarray], np.ndarray], anchors, cutoff: float,
              rtol: float = 1e-3, order: int = 16) -> QuadratureResult:
    """``int f`` over the real line; the error is the change when every panel is bisected.

    ``omega = 0`` is always a breakpoint and Gauss nodes never sit on panel
    edges, so a marginal mode at zero frequency is never evaluated.
    """
    edges = breakpoints(anchors, cutoff)
    halves = np.sort(np.concatenate([edges, 0.5 * (edges[1:] + edges[:-1])]))
    coarse, n1 = _gauss(f, edges, order)
    fine, n2 = _gauss(f, halves, order)
    tails = np.asarray(f(np.array([-cutoff, cutoff])), dtype=float)
    tail = float(tails.sum()) * cutoff
    value = fine + tail
    error = abs(fine - coarse)
    if not np.isfinite(value) or error > rtol * abs(value):
        raise NonConvergedQuadrature(
            f"relative change {error / abs(value) if value else np.inf:.2e} under panel "
            f"doubling exceeds {rtol:g}", value, error)
    return QuadratureResult(value, error, n1 + n2 + 2, cutoff)
