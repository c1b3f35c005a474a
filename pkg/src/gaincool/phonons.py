"""Phonon spectrum with radiation-pressure back-action."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import ModelMismatch
from .noise import DiffusionSet
from .params import WorkingPoint
from .quadrature import QuadratureResult, integrate
from .spectra import LinearLangevinSystem, Model, build_system, spectrum

B_INDEX = 3
# Maxima below this fraction of the tallest one in the window are ignored.
PEAK_FLOOR = 1e-3


@dataclass(frozen=True)
class SusceptibilitySet:
    omega: np.ndarray
    chi_a: np.ndarray
    chi_adag: np.ndarray
    chi_b: np.ndarray
    chi_bdag: np.ndarray
    chi_m: np.ndarray
    chi_r: np.ndarray


def _mechanics_system(wp: WorkingPoint, noise: Optional[DiffusionSet] = None,
                      include_Fpar: bool = False) -> LinearLangevinSystem:
    if wp.mech is None:
        raise ModelMismatch("phonon spectra need mechanical parameters")
    return build_system(Model.MECHANICS, wp, noise, include_Fpar)


def chi_m(wp: WorkingPoint, omega):
    m = wp.mech
    return 1.0 / (1j * (m.omega_m - np.asarray(omega, dtype=float)) + 0.5 * m.Gamma_m)


def chi_r(wp: WorkingPoint, omega):
    return 1.0 / (1j * (wp.delta_tilde - np.asarray(omega, dtype=float)) + wp.kappa_tilde)


def susceptibilities(wp: WorkingPoint, omega, noise: Optional[DiffusionSet] = None,
                     check_stability: bool = True) -> SusceptibilitySet:
    """Response of ``b(omega)`` to ``F_a``, ``F_a^dag``, ``F_m``, ``F_m^dag``."""
    sys = _mechanics_system(wp, noise)
    if check_stability:
        sys.check_stable()
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    rows = kernels.response_rows(sys.drift, sys.vector("b"), w)
    return SusceptibilitySet(w, rows[:, 0], rows[:, 1], rows[:, 3], rows[:, 4],
                             chi_m(wp, w), chi_r(wp, w))


def chi_a_unseeded(wp: WorkingPoint, omega):
    """Closed-form ``chi_a`` of the clamped laser."""
    if wp.is_seeded:
        raise ModelMismatch("this closed form applies to the unseeded laser")
    w = np.asarray(omega, dtype=float)
    wp_, wm_ = wp.omega_pm
    return (-wp.a_bar * wp.mech.G * (w + 1j * wp.gamma_sat)
            / ((w - wp_) * (w - wm_)) * chi_m(wp, w))


def chi_a_seeded(wp: WorkingPoint, omega):
    """Closed-form ``chi_a`` with back-action and gain terms in the denominator."""
    las, m = wp.laser, wp.mech
    w = np.asarray(omega, dtype=float)
    G = m.G
    cr_conj_neg = np.conj(chi_r(wp, -w))
    cr = chi_r(wp, w)
    cm = chi_m(wp, w)
    cm_conj_neg = np.conj(chi_m(wp, -w))
    backaction = 4 * wp.n_bar * G * G * m.omega_m * wp.delta_tilde * cr_conj_neg * cr * cm_conj_neg * cm
    gain = (2j * wp.n_bar * wp.W * wp.D_bar * las.g**2 / (w + 1j * wp.gamma_sat)
            * (cr_conj_neg / complex(las.gamma_perp, -las.delta_La)
               + cr / complex(las.gamma_perp, las.delta_La)))
    return 1j * wp.a_bar * G * cr_conj_neg * cm / (1 + backaction + gain)


def sbb(wp: WorkingPoint, omega, noise: Optional[DiffusionSet] = None,
        include_Fpar: bool = False, check_stability: bool = True):
    """``S_{b^dag b}(omega) = <b^dag(omega) b(-omega)>`` (real)."""
    sys = _mechanics_system(wp, noise, include_Fpar)
    return spectrum(sys, omega, "bd", "b", check_stability).real


def resonances(sys: LinearLangevinSystem) -> list:
    """``(centre, half-width)`` of every resonance of the drift matrix."""
    lam = sys.eigenvalues
    return [(-float(l.imag), abs(float(l.real))) for l in lam]


def integrate_phonon_number(wp: WorkingPoint, noise: Optional[DiffusionSet] = None,
                            include_Fpar: bool = False, rtol: float = 1e-3,
                            order: int = 16) -> QuadratureResult:
    """``(1/2 pi) int S_{b^dag b} d omega`` by peak-anchored quadrature."""
    sys = _mechanics_system(wp, noise, include_Fpar)
    sys.check_stable()
    anchors = resonances(sys)
    reach = max(abs(c) + w for c, w in anchors)
    cutoff = 1e3 * max(reach, wp.mech.omega_m)
    u, v = sys.vector("bd"), sys.vector("b")

    def f(w):
        return kernels.quadratic_spectrum(sys.drift, sys.diffusion, u, v, w).real / (2 * math.pi)

    return integrate(f, anchors, cutoff, rtol, order)


@dataclass(frozen=True)
class Splitting:
    peaks: tuple
    heights: tuple
    splitting: Optional[float]

    @property
    def regime(self) -> str:
        return "strong" if len(self.peaks) >= 2 else "weak"


def _parabolic(x, y, i):
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = y0 - 2 * y1 + y2
    if denom == 0:
        return x[i], y1
    h = x[i + 1] - x[i]
    shift = 0.5 * (y0 - y2) / denom
    return x[i] + shift * h, y1 - 0.25 * (y0 - y2) * shift


def splitting_window(wp: WorkingPoint, sys: Optional[LinearLangevinSystem] = None) -> float:
    """Half-width of the frequency window searched around ``-omega_m``."""
    sys = sys or _mechanics_system(wp)
    m = wp.mech
    near = [(c, w) for c, w in resonances(sys) if abs(c + m.omega_m) < 0.5 * m.omega_m]
    reach = max((abs(c + m.omega_m) + 10 * w for c, w in near), default=0.0)
    return max(reach, 5 * wp.a_bar * m.G, 10 * m.Gamma_m)


def mode_splitting(wp: WorkingPoint, noise: Optional[DiffusionSet] = None,
                   points: int = 4001, half_width: Optional[float] = None) -> Splitting:
    """Local maxima of the phonon spectrum near ``-omega_m`` (one or two)."""
    sys = _mechanics_system(wp, noise)
    half = half_width if half_width is not None else splitting_window(wp, sys)
    w = -wp.mech.omega_m + np.linspace(-half, half, points)
    s = spectrum(sys, w, "bd", "b").real
    idx = np.where((s[1:-1] > s[:-2]) & (s[1:-1] >= s[2:]))[0] + 1
    found = [_parabolic(w, s, i) for i in idx]
    if found:
        top = max(h for _, h in found)
        found = [(x, h) for x, h in found if h >= PEAK_FLOOR * top]
    found.sort(key=lambda p: -p[1])
    found = sorted(found[:2])
    peaks = tuple(x for x, _ in found)
    heights = tuple(h for _, h in found)
    split = peaks[1] - peaks[0] if len(peaks) == 2 else None
    return Splitting(peaks, heights, split)
