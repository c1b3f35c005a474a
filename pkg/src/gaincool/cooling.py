"""Optical damping, effective optical bath and rate-equation phonon numbers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (HeatingConfiguration, NearSingularKappa, NoMinimumInBounds,
                     UnstableSystem, ValidationError)
from .noise import DiffusionSet, diffusion_coefficients
from .params import DriveSpec, LaserParams, MechanicsParams, WorkingPoint, derive_working_point
from .spectra import snn

# Approximate formulas refuse |kappa_tilde| below this fraction of kappa.
KAPPA_GUARD = 1e-3
# |Gamma_opt| below this fraction of G^2 S_nn(omega_m) is treated as zero.
VANISHING_RTOL = 1e-9
# Golden-section tolerance on D0, in units of D_th.
PUMP_XTOL = 1e-4

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _mech_value(wp: WorkingPoint, name: str, given):
    if given is not None:
        return float(given)
    if wp.mech is None:
        raise ValidationError(f"{name} is required when the working point has no mechanics")
    return float(getattr(wp.mech, name))


def sideband_spectra(wp: WorkingPoint, omega_m: float, model=None, method: str = "matrix",
                     noise: Optional[DiffusionSet] = None,
                     include_Fpar: Optional[bool] = None) -> tuple:
    """``(S_nn(omega_m), S_nn(-omega_m))``."""
    if omega_m <= 0:
        raise ValidationError("omega_m > 0")
    s = snn(wp, np.array([omega_m, -omega_m]), model, method, noise, include_Fpar)
    return float(s[0]), float(s[1])


def gamma_opt(wp: WorkingPoint, omega_m=None, *, G=None, model=None, method: str = "matrix",
              noise: Optional[DiffusionSet] = None, include_Fpar: Optional[bool] = None):
    """``G^2 [S_nn(w) - S_nn(-w)]``; vectorized over ``omega_m``. Negative means heating."""
    G = _mech_value(wp, "G", G)
    w = np.asarray(_mech_value(wp, "omega_m", omega_m) if omega_m is None else omega_m,
                   dtype=float)
    noise = noise or diffusion_coefficients(wp)
    flat = np.atleast_1d(w)
    s = snn(wp, np.concatenate([flat, -flat]), model, method, noise, include_Fpar)
    out = G * G * (s[:flat.size] - s[flat.size:])
    return float(out[0]) if w.ndim == 0 else out


def _guard(wp: WorkingPoint):
    if abs(wp.kappa_tilde) < KAPPA_GUARD * wp.laser.kappa:
        raise NearSingularKappa(
            f"|kappa_tilde| = {abs(wp.kappa_tilde):.3e} is below "
            f"{KAPPA_GUARD:g} kappa; use the exact spectra instead")


def gamma_opt_lorentzian(wp: WorkingPoint, omega, G=None):
    """Two-Lorentzian approximation of the optical damping rate."""
    _guard(wp)
    G = _mech_value(wp, "G", G)
    w = np.asarray(omega, dtype=float)
    kt, dt = wp.kappa_tilde, wp.delta_tilde
    return (-8 * G * G * wp.n_bar * w * dt * kt
            / ((kt * kt + (w - dt) ** 2) * (kt * kt + (w + dt) ** 2)))


def required_detuning(kappa_tilde: float, omega_m: float) -> float:
    """Effective detuning that maximizes damping: ``-omega_m`` for gain below
    transparency, ``+omega_m`` once ``kappa_tilde`` turns negative."""
    return -omega_m if kappa_tilde > 0 else omega_m


def gamma_opt_max(wp: WorkingPoint, omega_m=None, G=None) -> float:
    """Peak damping in the resolved-sideband limit at the optimal detuning."""
    _guard(wp)
    G = _mech_value(wp, "G", G)
    wm = _mech_value(wp, "omega_m", omega_m)
    kt = wp.kappa_tilde
    return 2 * G * G * wp.n_bar / abs(kt) / (1 + (kt / (2 * wm)) ** 2)


def n_opt_from_spectra(s_plus: float, s_minus: float) -> float:
    if not s_plus > s_minus:
        raise HeatingConfiguration(
            f"S_nn(omega_m) = {s_plus:.6g} does not exceed S_nn(-omega_m) = {s_minus:.6g}")
    return s_minus / (s_plus - s_minus)


def n_opt_approx(wp: WorkingPoint) -> float:
    _guard(wp)
    las = wp.laser
    kt = wp.kappa_tilde
    if kt < 0:
        raise HeatingConfiguration("negative kappa_tilde gives no positive optical occupation")
    return (wp.W * las.N_g + 2 * (las.kappa - kt)) / (4 * kt)


def n_opt(wp: WorkingPoint, omega_m=None, *, model=None, method: str = "exact",
          noise: Optional[DiffusionSet] = None, include_Fpar: Optional[bool] = None) -> float:
    """Effective occupation of the optical bath, exact or ``method="approx"``."""
    if method == "approx":
        return n_opt_approx(wp)
    if method not in ("exact", "matrix", "closed_form"):
        raise ValueError(f"unknown method {method!r}")
    route = "matrix" if method == "exact" else method
    wm = _mech_value(wp, "omega_m", omega_m)
    return n_opt_from_spectra(*sideband_spectra(wp, wm, model, route, noise, include_Fpar))


def effective_temperature(n_opt_value: float, omega_m: float) -> float:
    """Bath temperature with ``hbar = k_B = 1``."""
    return omega_m / math.log((n_opt_value + 1.0) / n_opt_value)


@dataclass(frozen=True)
class CoolingResult:
    gamma_opt: float
    n_opt: Optional[float]
    n_m: float
    optical_part: float
    thermal_part: float
    t_opt: Optional[float]
    s_plus: float
    s_minus: float
    vanishing: bool = False


def rate_equation(s_plus: float, s_minus: float, mech: MechanicsParams) -> CoolingResult:
    """Phonon number from the sideband spectra and the mechanical bath."""
    G2 = mech.G**2
    gam = G2 * (s_plus - s_minus)
    up = G2 * s_minus
    if abs(gam) <= VANISHING_RTOL * G2 * abs(s_plus) or G2 == 0.0:
        optical = up / mech.Gamma_m
        thermal = mech.n_th
        return CoolingResult(gam, None, optical + thermal, optical, thermal, None,
                             s_plus, s_minus, vanishing=True)
    total = gam + mech.Gamma_m
    if total <= 0:
        raise UnstableSystem(
            f"net damping Gamma_opt + Gamma_m = {total:.3e} <= 0 (phonon lasing)")
    optical = up / total
    thermal = mech.Gamma_m * mech.n_th / total
    nopt = topt = None
    if gam > 0:
        nopt = n_opt_from_spectra(s_plus, s_minus)
        topt = effective_temperature(nopt, mech.omega_m)
    return CoolingResult(gam, nopt, optical + thermal, optical, thermal, topt,
                         s_plus, s_minus)


def phonon_number_rate(wp: WorkingPoint, mech: Optional[MechanicsParams] = None, *,
                       model=None, method: str = "matrix",
                       noise: Optional[DiffusionSet] = None,
                       include_Fpar: Optional[bool] = None) -> CoolingResult:
    mech = mech or wp.mech
    if mech is None:
        raise ValidationError("mechanical parameters are required")
    s_plus, s_minus = sideband_spectra(wp, mech.omega_m, model, method, noise, include_Fpar)
    return rate_equation(s_plus, s_minus, mech)


def golden_section(f: Callable[[float], float], lo: float, hi: float, xtol: float) -> tuple:
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``.

    Both end points are compared against the interior optimum so a minimum
    on the boundary is found as well.
    """
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x, fx = (c, fc) if fc <= fd else (d, fd)
    for edge in (lo, hi):
        fe = f(edge)
        if fe < fx:
            x, fx = edge, fe
    return x, fx


def kappa_tilde_prediction(wp: WorkingPoint, mech: MechanicsParams) -> float:
    """Effective decay at which the optical and thermal contributions balance."""
    las = wp.laser
    return math.sqrt(mech.G**2 * wp.n_bar * (wp.W * las.N_g + 2 * las.kappa)
                     / (2 * mech.Gamma_m * mech.n_th))


def n_m_prediction(wp: WorkingPoint, mech: MechanicsParams) -> float:
    """Geometric-mean estimate of the optimized phonon number."""
    las = wp.laser
    return math.sqrt((wp.W * las.N_g + 2 * las.kappa) * mech.Gamma_m * mech.n_th
                     / (2 * mech.G**2 * wp.n_bar)) - 0.5


@dataclass(frozen=True)
class PumpOptimum:
    D0: float
    kappa_tilde: float
    n_m: float
    cooling: CoolingResult
    working_point: WorkingPoint
    kappa_tilde_predicted: float
    n_m_predicted: float
    bounds: tuple

    @property
    def at_lower_bound(self) -> bool:
        return math.isclose(self.D0, self.bounds[0], abs_tol=1e-12 * max(1.0, abs(self.D0)))

    @property
    def at_upper_bound(self) -> bool:
        return math.isclose(self.D0, self.bounds[1], abs_tol=1e-12 * max(1.0, abs(self.D0)))


def pump_bounds(laser: LaserParams, n_target: float, bounds=None) -> tuple:
    """Feasible ``D0`` interval keeping ``kappa_tilde > KAPPA_GUARD * kappa``."""
    xi = n_target / laser.n_sat
    upper = (1 + xi) * (1 - KAPPA_GUARD) * laser.D_th
    lo, hi = (0.0, upper) if bounds is None else (float(bounds[0]), float(bounds[1]))
    hi = min(hi, upper, laser.N_g)
    lo = max(lo, -laser.N_g)
    if not lo < hi:
        raise NoMinimumInBounds(f"empty pump interval [{lo:.6g}, {hi:.6g}] after clipping")
    return lo, hi


def optimize_pump(laser: LaserParams, mech: MechanicsParams, n_target: float,
                  bounds=None, *, model=None, method: str = "matrix") -> PumpOptimum:
    """Minimize the rate-equation phonon number over ``D0`` at fixed photon number.

    The cavity detuning is reset to ``-omega_m`` before the search.
    """
    laser = laser.replace(delta_Lr=-mech.omega_m)
    lo, hi = pump_bounds(laser, n_target, bounds)
    drive = DriveSpec.seeded_with(n_target=n_target)

    def point(D0):
        return derive_working_point(laser.replace(D0=D0), mech, drive)

    def objective(D0):
        try:
            return phonon_number_rate(point(D0), model=model, method=method).n_m
        except UnstableSystem:
            return math.inf

    D0, fx = golden_section(objective, lo, hi, PUMP_XTOL * laser.D_th)
    if not math.isfinite(fx):
        raise NoMinimumInBounds("phonon number is undefined throughout the pump interval")
    wp = point(D0)
    res = phonon_number_rate(wp, model=model, method=method)
    return PumpOptimum(D0=D0, kappa_tilde=wp.kappa_tilde, n_m=res.n_m, cooling=res,
                       working_point=wp, kappa_tilde_predicted=kappa_tilde_prediction(wp, mech),
                       n_m_predicted=n_m_prediction(wp, mech), bounds=(lo, hi))
