"""Frequency-domain spectra of linearized Langevin systems.

A system is stored as ``d(dx)/dt = A dx + F`` with
``<F_k(t) F_l(t')> = D_kl delta(t - t')``. With the Fourier convention
``F(w) = int F(t) exp(i w t) dt`` the response matrix is ``M(w) = -i w I - A``
and the cross spectrum is

    S_xy(w) = [M(w)^{-1} D M(-w)^{-T}]_xy,   S_xy(w) = int <x(t) y(0)> e^{i w t} dt.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from . import kernels
from .errors import ModelMismatch, UnstableSystem, ZeroGain
from .noise import (EFFECTIVE_FORCES, DiffusionSet, bare_correlations,
                    diffusion_coefficients, effective_correlations)
from .params import WorkingPoint

STABILITY_RTOL = 1e-9


class Model(str, enum.Enum):
    PASSIVE = "passive"
    UNSEEDED = "unseeded_adiabatic"
    SEEDED = "seeded"
    FULL_POLARIZATION = "full_polarization"
    MECHANICS = "seeded_with_mechanics"


DEFAULT_INCLUDE_FPAR = {
    Model.PASSIVE: False,
    Model.UNSEEDED: True,
    Model.SEEDED: False,
    Model.FULL_POLARIZATION: True,
    Model.MECHANICS: False,
}


@dataclass(frozen=True)
class LinearLangevinSystem:
    """Labelled drift and diffusion matrices.

    ``observables`` maps extra names (e.g. the photon-number fluctuation
    ``"n"`` in field bases) to coefficient vectors over ``labels``.
    """

    labels: tuple
    drift: np.ndarray
    diffusion: np.ndarray
    model: Model
    observables: Mapping[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.labels)
        if self.drift.shape != (n, n) or self.diffusion.shape != (n, n):
            raise ValueError("drift and diffusion must be square with one row per label")

    def vector(self, name: str) -> np.ndarray:
        if name in self.observables:
            return np.asarray(self.observables[name], dtype=complex)
        try:
            i = self.labels.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is neither a label nor an observable of {self.model.value}")
        e = np.zeros(len(self.labels), dtype=complex)
        e[i] = 1.0
        return e

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.drift)

    @property
    def is_stable(self) -> bool:
        scale = np.abs(self.drift).max() or 1.0
        return bool(np.all(self.eigenvalues.real <= STABILITY_RTOL * scale))

    def check_stable(self):
        if not self.is_stable:
            worst = self.eigenvalues.real.max()
            raise UnstableSystem(
                f"{self.model.value} drift has an eigenvalue with real part {worst:.3e} > 0")


def _assemble(labels, drift, B, C, model, observables=None):
    D = B @ C @ B.T
    return LinearLangevinSystem(tuple(labels), np.asarray(drift, dtype=complex), D,
                                model, dict(observables or {}))


def _rows(names, basis):
    B = np.zeros((len(names), len(basis)), dtype=complex)
    for i, entry in enumerate(names):
        for force, coeff in entry.items():
            B[i, basis.index(force)] = coeff
    return B


def build_system(model, wp: WorkingPoint, noise: Optional[DiffusionSet] = None,
                 include_Fpar: Optional[bool] = None) -> LinearLangevinSystem:
    """Drift and diffusion matrices of one fluctuation model.

    ==================  ==========================  =======================
    model               variables                   notes
    ==================  ==========================  =======================
    PASSIVE             a, a^dag                    gain ignored
    UNSEEDED            n, D                        clamped laser only
    SEEDED              n, u, D                     u = a*da - a da^dag
    FULL_POLARIZATION   a, a^dag, P, P^dag, D       bare forces
    MECHANICS           a, a^dag, D, b, b^dag       needs ``wp.mech``
    ==================  ==========================  =======================
    """
    model = Model(model)
    if noise is None:
        noise = diffusion_coefficients(wp)
    if include_Fpar is None:
        include_Fpar = DEFAULT_INCLUDE_FPAR[model]
    las = wp.laser
    a = wp.a_bar
    W, Db, n = wp.W, wp.D_bar, wp.n_bar
    gsat = wp.gamma_sat
    kt, dt = wp.kappa_tilde, wp.delta_tilde
    number = {"n": np.array([a, a, 0, 0, 0], dtype=complex)}

    if model is Model.PASSIVE:
        A = np.diag([1j * las.delta_Lr - las.kappa, -1j * las.delta_Lr - las.kappa])
        C = np.array([[0, 2 * las.kappa * (las.n_bb + 1)], [2 * las.kappa * las.n_bb, 0]],
                     dtype=complex)
        return _assemble(("a", "ad"), A, np.eye(2), C, model, {"n": np.array([a, a])})

    C = effective_correlations(noise, include_Fpar)

    if model is Model.UNSEEDED:
        if wp.is_seeded:
            raise ModelMismatch("the clamped-gain model needs an unseeded working point")
        A = np.array([[0.0, 0.5 * wp.xi * las.gamma_par], [-2 * W * Db, -gsat]])
        B = _rows([{"Fa": a, "Fad": a}, {"Fpar": 1.0}], EFFECTIVE_FORCES)
        return _assemble(("n", "D"), A, B, C, model)

    if model is Model.SEEDED:
        A = np.array([
            [-kt, 1j * dt, W * n],
            [1j * dt, -kt, 1j * W * n * las.delta_La / las.gamma_perp],
            [-2 * W * Db, 0.0, -gsat],
        ])
        B = _rows([{"Fa": a, "Fad": a}, {"Fa": a, "Fad": -a}, {"Fpar": 1.0}],
                  EFFECTIVE_FORCES)
        return _assemble(("n", "u", "D"), A, B, C, model)

    if model is Model.FULL_POLARIZATION:
        if las.g == 0:
            raise ZeroGain("the polarization model needs g > 0")
        g, dLa, dLr = las.g, las.delta_La, las.delta_Lr
        P_bar = 1j * g * a * Db / complex(las.gamma_perp, -dLa)
        A = np.zeros((5, 5), dtype=complex)
        A[0, 0] = 1j * dLr - las.kappa
        A[0, 2] = -1j * g
        A[1, 1] = -1j * dLr - las.kappa
        A[1, 3] = 1j * g
        A[2, 2] = 1j * dLa - las.gamma_perp
        A[2, 0] = 1j * g * Db
        A[2, 4] = 1j * g * a
        A[3, 3] = -1j * dLa - las.gamma_perp
        A[3, 1] = -1j * g * Db
        A[3, 4] = -1j * g * a
        A[4, 4] = -las.gamma_par
        A[4, 0] = -2j * g * np.conj(P_bar)
        A[4, 1] = 2j * g * P_bar
        A[4, 2] = 2j * g * a
        A[4, 3] = -2j * g * a
        Cb = bare_correlations(wp, noise, include_Fpar)
        return _assemble(("a", "ad", "P", "Pd", "D"), A, np.eye(5), Cb, model, number)

    if model is Model.MECHANICS:
        if wp.mech is None:
            raise ModelMismatch("the optomechanical model needs mechanical parameters")
        mech = wp.mech
        G = mech.G
        lo = complex(las.gamma_perp, -las.delta_La)
        hi = complex(las.gamma_perp, las.delta_La)
        g2a = las.g**2 * a
        A = np.zeros((5, 5), dtype=complex)
        A[0, 0] = 1j * dt - kt
        A[0, 2] = g2a / lo
        A[0, 3] = A[0, 4] = 1j * G * a
        A[1, 1] = -1j * dt - kt
        A[1, 2] = g2a / hi
        A[1, 3] = A[1, 4] = -1j * G * a
        A[2, 0] = A[2, 1] = -2 * W * Db * a
        A[2, 2] = -gsat
        A[3, 0] = A[3, 1] = 1j * G * a
        A[3, 3] = -1j * mech.omega_m - 0.5 * mech.Gamma_m
        A[4, 0] = A[4, 1] = -1j * G * a
        A[4, 4] = 1j * mech.omega_m - 0.5 * mech.Gamma_m
        return _assemble(("a", "ad", "D", "b", "bd"), A, np.eye(5), C, model, number)

    raise ModelMismatch(f"unknown model {model!r}")


def spectrum(sys: LinearLangevinSystem, omegas, row: str = "n", col: Optional[str] = None,
             check_stability: bool = True):
    """Cross spectrum ``S_{row,col}(omega)`` (complex) on an array of frequencies."""
    if check_stability:
        sys.check_stable()
    u = sys.vector(row)
    v = sys.vector(col if col is not None else row)
    return kernels.quadratic_spectrum(sys.drift, sys.diffusion, u, v, omegas)


def spectrum_matrix(sys: LinearLangevinSystem, omega: float, row: str, col: str) -> complex:
    """Single entry ``[M(w)^{-1} D M(-w)^{-T}]_{row,col}``."""
    return complex(spectrum(sys, float(omega), row, col))


# -- closed forms -----------------------------------------------------------


def snn_passive(wp: WorkingPoint, omega):
    """Empty-cavity number spectrum, including thermal photons."""
    las = wp.laser
    w = np.asarray(omega, dtype=float)
    k, d = las.kappa, las.delta_Lr
    return wp.n_bar * (2 * k * (las.n_bb + 1) / ((w + d) ** 2 + k * k)
                       + 2 * k * las.n_bb / ((w - d) ** 2 + k * k))


def _relaxation_poles(wp, w):
    wp_, wm_ = wp.omega_pm
    return ((w * w - wp_**2) * (w * w - wm_**2)).real


def snn_unseeded_four_term(wp: WorkingPoint, omega, noise: Optional[DiffusionSet] = None,
                           include_Fpar: bool = True):
    """Number spectrum of the clamped laser with photon and inversion noise."""
    if wp.is_seeded:
        raise ModelMismatch("the four-term spectrum applies to the unseeded laser")
    noise = noise or diffusion_coefficients(wp)
    gl, xi, a = wp.laser.gamma_par, wp.xi, wp.a_bar
    w = np.asarray(omega, dtype=float)
    P = _relaxation_poles(wp, w)
    out = (w * w + wp.gamma_sat**2) * wp.n_bar * noise.photon_sum / P
    if include_Fpar:
        cross = noise.d_apar + noise.d_adpar
        out = out + (gl**2 * xi**2 / 4 * noise.d_pp
                     + (1 + xi) * xi * gl**2 * a * cross.real
                     + w * xi * gl * a * cross.imag) / P
    return out


def snn_unseeded_symmetric(wp: WorkingPoint, omega):
    """Leading term only, with the photon noise approximated by ``W N_g``."""
    w = np.asarray(omega, dtype=float)
    return ((w * w + wp.gamma_sat**2) / _relaxation_poles(wp, w)
            * wp.W * wp.laser.N_g * wp.n_bar)


def theta(wp: WorkingPoint, omega):
    """``gamma_perp`` times the determinant of the seeded number/phase/inversion system."""
    las = wp.laser
    w = np.asarray(omega, dtype=float)
    kt, dt = wp.kappa_tilde, wp.delta_tilde
    s = -1j * w
    return (las.gamma_perp * ((s + kt) ** 2 + dt * dt) * (s + wp.gamma_sat)
            - 2 * wp.n_bar * wp.W**2 * wp.D_bar
            * (las.delta_La * dt - las.gamma_perp * (kt - 1j * w)))


def _seeded_closed(wp, w, photon_sum, photon_difference):
    las = wp.laser
    kt, dt = wp.kappa_tilde, wp.delta_tilde
    lam = wp.n_bar * las.gamma_perp**2 * (w * w + wp.gamma_sat**2) / np.abs(theta(wp, w)) ** 2
    return lam * ((w * w + dt * dt + kt * kt) * photon_sum + 2 * w * dt * photon_difference)


def snn_seeded_closed_form(wp: WorkingPoint, omega, noise: Optional[DiffusionSet] = None):
    """Seeded number spectrum without inversion noise, for arbitrary photon noise.

    Uses ``Lambda(w) [(w^2 + dt^2 + kt^2) S + 2 w dt Q]`` with
    ``S = <F_a F_a^dag> + <F_a^dag F_a>`` and ``Q = <F_a^dag F_a> - <F_a F_a^dag>``.
    :func:`snn_seeded_approx` is the special case ``S = W N_g + 2 kappa``,
    ``Q = -2 kappa_tilde``.
    """
    noise = noise or diffusion_coefficients(wp)
    w = np.asarray(omega, dtype=float)
    return _seeded_closed(wp, w, noise.photon_sum, noise.photon_difference)


def snn_seeded_approx(wp: WorkingPoint, omega):
    w = np.asarray(omega, dtype=float)
    return _seeded_closed(wp, w, wp.W * wp.laser.N_g + 2 * wp.laser.kappa,
                          -2 * wp.kappa_tilde)


def default_model(wp: WorkingPoint) -> Model:
    return Model.SEEDED if wp.is_seeded else Model.UNSEEDED


def snn(wp: WorkingPoint, omega, model=None, method: str = "matrix",
        noise: Optional[DiffusionSet] = None, include_Fpar: Optional[bool] = None):
    """Photon-number spectrum ``S_nn(omega)`` (real) by matrix solve or closed form."""
    model = Model(model) if model is not None else default_model(wp)
    if include_Fpar is None:
        include_Fpar = DEFAULT_INCLUDE_FPAR[model]
    noise = noise or diffusion_coefficients(wp)
    if method == "matrix":
        sys = build_system(model, wp, noise, include_Fpar)
        return spectrum(sys, omega, "n").real
    if method != "closed_form":
        raise ValueError(f"unknown method {method!r}")
    if model is Model.PASSIVE:
        return snn_passive(wp, omega)
    if model is Model.UNSEEDED:
        return snn_unseeded_four_term(wp, omega, noise, include_Fpar)
    if model is Model.SEEDED:
        if include_Fpar:
            raise ModelMismatch("the seeded closed form has no inversion-noise terms")
        return snn_seeded_closed_form(wp, omega, noise)
    raise ModelMismatch(f"no closed form for {model.value}")


def snn_full_polarization(wp: WorkingPoint, omega, noise: Optional[DiffusionSet] = None,
                          include_Fpar: bool = True):
    """Number spectrum with the polarization kept as a dynamical variable."""
    if wp.is_seeded:
        raise ModelMismatch("the polarization model is provided for the unseeded laser")
    sys = build_system(Model.FULL_POLARIZATION, wp, noise, include_Fpar)
    return spectrum(sys, omega, "n").real


# -- grids and results -------------------------------------------------------


@dataclass(frozen=True)
class SpectrumResult:
    omega: np.ndarray
    values: np.ndarray
    model: Model
    method: str

    def is_nonnegative(self, rtol: float = 1e-12) -> bool:
        peak = np.abs(self.values).max() if self.values.size else 0.0
        return bool(np.all(self.values >= -rtol * peak))


def characteristic_scale(wp: WorkingPoint) -> float:
    return max(abs(wp.delta_tilde), wp.gamma_sat, wp.laser.kappa)


def default_grid(wp: WorkingPoint, n: int = 2048, span=(1e-4, 10.0)) -> np.ndarray:
    """Symmetric log grid ``+-[span[0], span[1]] * scale``; never contains zero."""
    scale = characteristic_scale(wp)
    half = np.geomspace(span[0] * scale, span[1] * scale, n // 2)
    return np.concatenate([-half[::-1], half])


def refine_peaks(omega: np.ndarray, values: np.ndarray, points: int = 401) -> np.ndarray:
    """Insert a dense linear patch across every interior local maximum."""
    idx = np.where((values[1:-1] > values[:-2]) & (values[1:-1] >= values[2:]))[0] + 1
    patches = [omega]
    for i in idx:
        # interior points only: the ends are already on the grid
        patch = np.linspace(omega[i - 1], omega[i + 1], points)[1:-1]
        patches.append(patch[patch != 0.0])
    return np.unique(np.concatenate(patches))


def compute_spectrum(wp: WorkingPoint, model=None, method: str = "matrix",
                     omega=None, n: int = 2048, refine: bool = True,
                     include_Fpar: Optional[bool] = None) -> SpectrumResult:
    model = Model(model) if model is not None else default_model(wp)
    noise = diffusion_coefficients(wp)

    def evaluate(w):
        if model is Model.FULL_POLARIZATION:
            if method != "matrix":
                raise ModelMismatch("the polarization model has no closed form")
            return snn_full_polarization(wp, w, noise,
                                         True if include_Fpar is None else include_Fpar)
        return np.asarray(snn(wp, w, model, method, noise, include_Fpar), dtype=float)

    w = default_grid(wp, n) if omega is None else np.asarray(omega, dtype=float)
    values = evaluate(w)
    if refine and omega is None:
        w = refine_peaks(w, values)
        values = evaluate(w)
    return SpectrumResult(w, values, model, method)
