"""Physical parameters and steady states of the laser-cavity optomechanical system.

All rates and frequencies are angular and expressed in GHz. Detunings are
inputs: ``delta_La = omega_L - omega_a`` and ``delta_Lr = omega_L - omega_r``.
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

from .errors import AmbiguousSteadyState, BelowThreshold, ValidationError, ZeroGain

# Relative tolerance used to decide whether unseeded detunings obey line pulling.
LINE_PULLING_RTOL = 1e-9
# A cubic root is accepted as real when |Im| < CUBIC_IMAG_TOL * max(1, |root|).
CUBIC_IMAG_TOL = 1e-10


def _require(condition, text):
    if not condition:
        raise ValidationError(text)


@dataclass(frozen=True)
class LaserParams:
    """Cavity and gain-medium parameters.

    ``D0`` is the unsaturated inversion set by the incoherent pump; it may be
    negative (absorbing medium) but is bounded by the number of atoms.
    """

    gamma_perp: float
    gamma_par: float
    kappa: float
    g: float
    N_g: float
    D0: float
    delta_La: float
    delta_Lr: float
    n_bb: float = 0.0

    def __post_init__(self):
        for name in ("gamma_perp", "gamma_par", "kappa", "g", "N_g", "D0",
                     "delta_La", "delta_Lr", "n_bb"):
            _require(math.isfinite(getattr(self, name)), f"{name} must be finite")
        _require(self.gamma_perp > 0, "gamma_perp > 0")
        _require(self.gamma_par > 0, "gamma_par > 0")
        _require(self.kappa > 0, "kappa > 0")
        _require(self.g >= 0, "g >= 0")
        _require(self.N_g > 0, "N_g > 0")
        _require(self.n_bb >= 0, "n_bb >= 0")
        _require(abs(self.D0) <= self.N_g * (1 + 1e-12), "|D0| <= N_g")

    @property
    def W(self) -> float:
        """Stimulated emission rate ``2 g^2 gamma_perp / (gamma_perp^2 + delta_La^2)``."""
        return 2.0 * self.g**2 * self.gamma_perp / (self.gamma_perp**2 + self.delta_La**2)

    @property
    def n_sat(self) -> float:
        W = self.W
        return math.inf if W == 0 else self.gamma_par / (2.0 * W)

    @property
    def D_th(self) -> float:
        W = self.W
        return math.inf if W == 0 else 2.0 * self.kappa / W

    def with_line_pulling(self) -> "LaserParams":
        """Copy with ``delta_Lr`` fixed by line pulling from ``delta_La``."""
        return replace(self, delta_Lr=-self.kappa * self.delta_La / self.gamma_perp)

    def replace(self, **changes) -> "LaserParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class MechanicsParams:
    omega_m: float
    Gamma_m: float
    n_th: float
    G: float

    def __post_init__(self):
        for name in ("omega_m", "Gamma_m", "n_th", "G"):
            _require(math.isfinite(getattr(self, name)), f"{name} must be finite")
        _require(self.omega_m > 0, "omega_m > 0")
        _require(self.Gamma_m > 0, "Gamma_m > 0")
        _require(self.n_th >= 0, "n_th >= 0")
        _require(self.G >= 0, "G >= 0")

    def replace(self, **changes) -> "MechanicsParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class DriveSpec:
    """Unseeded operation, or a coherent seed given by amplitude or target photon number.

    ``root`` selects a branch (index into the ascending root list) when a
    seed amplitude admits several steady states.
    """

    seeded: bool = False
    omega_s: Optional[float] = None
    n_target: Optional[float] = None
    root: Optional[int] = None

    def __post_init__(self):
        if not self.seeded:
            _require(self.omega_s is None and self.n_target is None,
                     "unseeded drive takes neither omega_s nor n_target")
            return
        _require((self.omega_s is None) != (self.n_target is None),
                 "seeded drive needs exactly one of omega_s, n_target")
        if self.omega_s is not None:
            _require(self.omega_s >= 0, "omega_s >= 0")
        if self.n_target is not None:
            _require(self.n_target > 0, "n_target > 0")

    @classmethod
    def unseeded(cls) -> "DriveSpec":
        return cls()

    @classmethod
    def seeded_with(cls, *, omega_s=None, n_target=None, root=None) -> "DriveSpec":
        return cls(seeded=True, omega_s=omega_s, n_target=n_target, root=root)


@dataclass(frozen=True)
class WorkingPoint:
    """Steady state about which the fluctuations are linearized.

    ``a_bar`` is real and non-negative; ``a_phase`` records the phase that was
    removed from the seeded solution. ``omega_pm`` are the roots of the
    photon-number / inversion block (the relaxation-oscillation frequencies
    in the unseeded case).
    """

    laser: LaserParams
    mech: Optional[MechanicsParams]
    drive: DriveSpec
    W: float
    n_sat: float
    D_th: float
    xi: float
    D_bar: float
    n_bar: float
    a_bar: float
    kappa_tilde: float
    delta_tilde: float
    omega_pm: tuple
    a_phase: float = 0.0
    omega_s: float = 0.0

    @property
    def is_seeded(self) -> bool:
        return self.drive.seeded

    @property
    def omega_plus(self) -> complex:
        return self.omega_pm[0]

    @property
    def omega_minus(self) -> complex:
        return self.omega_pm[1]

    @property
    def gamma_sat(self) -> float:
        """Inversion relaxation rate ``gamma_par (1 + xi)``."""
        return self.laser.gamma_par * (1.0 + self.xi)

    def summary(self) -> dict:
        return {
            "W": self.W,
            "n_sat": self.n_sat,
            "D_th": self.D_th,
            "xi": self.xi,
            "D_bar": self.D_bar,
            "n_bar": self.n_bar,
            "a_bar": self.a_bar,
            "a_phase": self.a_phase,
            "omega_s": self.omega_s,
            "kappa_tilde": self.kappa_tilde,
            "delta_tilde": self.delta_tilde,
            "omega_plus_re": self.omega_plus.real,
            "omega_plus_im": self.omega_plus.imag,
            "omega_minus_re": self.omega_minus.real,
            "omega_minus_im": self.omega_minus.imag,
        }


def line_pulling_frequency(omega_r: float, omega_a: float, kappa: float,
                           gamma_perp: float) -> float:
    """Laser frequency solving ``gamma_perp*delta_Lr + kappa*delta_La = 0``."""
    return (gamma_perp * omega_r + kappa * omega_a) / (gamma_perp + kappa)


def satisfies_line_pulling(delta_La: float, delta_Lr: float, kappa: float,
                           gamma_perp: float, rtol: float = LINE_PULLING_RTOL) -> bool:
    residual = gamma_perp * delta_Lr + kappa * delta_La
    scale = max(abs(gamma_perp * delta_Lr), abs(kappa * delta_La), kappa * gamma_perp * 1e-12)
    return abs(residual) <= rtol * scale


def relaxation_frequencies(gamma_par: float, xi: float, WD_bar: float) -> tuple:
    """Roots of ``omega^2 + i gamma_par (1+xi) omega - xi gamma_par W D_bar = 0``.

    For the clamped laser ``W D_bar = 2 kappa``.
    """
    disc = cmath.sqrt((1.0 + xi) ** 2 - 4.0 * xi * WD_bar / gamma_par)
    plus = -0.5j * gamma_par * ((1.0 + xi) + disc)
    minus = -0.5j * gamma_par * ((1.0 + xi) - disc)
    return (complex(plus), complex(minus))


def unseeded_steady_state(laser: LaserParams) -> tuple:
    """Clamped inversion and photon number ``(D_bar, n_bar)`` above threshold."""
    if laser.g == 0:
        raise ZeroGain("no lasing without gain coupling (g = 0)")
    D_th = laser.D_th
    if laser.D0 <= D_th:
        raise BelowThreshold(f"D0 = {laser.D0:.6g} does not exceed D_th = {D_th:.6g}")
    return D_th, laser.n_sat * (laser.D0 / D_th - 1.0)


def _effective(laser: LaserParams, D_bar: float) -> tuple:
    half_gain = 0.5 * laser.W * D_bar
    kappa_tilde = laser.kappa - half_gain
    delta_tilde = laser.delta_Lr + half_gain * laser.delta_La / laser.gamma_perp
    return kappa_tilde, delta_tilde


def seeding_amplitude(laser: LaserParams, n_target: float) -> float:
    """Seed amplitude that produces mean photon number ``n_target``."""
    if n_target < 0:
        raise ValidationError("n_target >= 0")
    D_bar = laser.D0 / (1.0 + n_target / laser.n_sat)
    kt, dt = _effective(laser, D_bar)
    return math.sqrt(n_target * (dt * dt + kt * kt))


def _field_amplitude(laser: LaserParams, n_bar: float, omega_s: float) -> complex:
    """Complex intracavity amplitude for a (real, positive) seed amplitude."""
    D_bar = laser.D0 / (1.0 + n_bar / laser.n_sat)
    kt, dt = _effective(laser, D_bar)
    denom = complex(-kt, dt)
    if denom == 0:
        return complex(math.sqrt(n_bar))
    return 1j * omega_s / denom


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _disc_noise(b, c, d):
    """Round-off scale of the depressed-cubic discriminant."""
    p_scale = abs(c) + b * b / 3.0
    q_scale = abs(2.0 * b**3 / 27.0) + abs(b * c / 3.0) + abs(d)
    return 8.0 * sys.float_info.epsilon * (4.0 * p_scale**3 + 27.0 * q_scale**2)


def solve_real_cubic(c3: float, c2: float, c1: float, c0: float) -> list:
    """All three roots of ``c3 x^3 + c2 x^2 + c1 x + c0`` (complex in general).

    Closed form: trigonometric branch when the discriminant says three real
    roots, Cardano otherwise. Each root is polished by up to two Newton steps that
    reduce the residual.
    """
    c3, c2, c1, c0 = float(c3), float(c2), float(c1), float(c0)
    if c3 == 0:
        raise ValueError("leading coefficient must be non-zero")
    b, c, d = c2 / c3, c1 / c3, c0 / c3
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b**3 / 27.0 - b * c / 3.0 + d
    noise = _disc_noise(b, c, d)
    disc = -(4.0 * p**3 + 27.0 * q * q)
    if 4.0 * abs(p) ** 3 + 27.0 * q * q <= noise:
        # p and q are round-off: triple root
        ts = [0.0, 0.0, 0.0]
    elif p < 0 and disc >= -noise:
        # a negative discriminant within round-off is a double root
        r = 2.0 * math.sqrt(-p / 3.0)
        arg = min(1.0, max(-1.0, 3.0 * q / (p * r)))
        theta = math.acos(arg) / 3.0
        ts = [r * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
    else:
        # one real root: q^2/4 + p^3/27 > 0
        sq = math.sqrt(max(q * q / 4.0 + p**3 / 27.0, 0.0))
        u = _cbrt(-q / 2.0 + sq)
        v = _cbrt(-q / 2.0 - sq)
        re_pair = -(u + v) / 2.0
        im_pair = math.sqrt(3.0) / 2.0 * (u - v)
        ts = [u + v, complex(re_pair, im_pair), complex(re_pair, -im_pair)]

    def residual(z):
        return abs(((c3 * z + c2) * z + c1) * z + c0)

    roots = []
    for t in ts:
        x = complex(t) - shift
        for _ in range(2):
            f = ((c3 * x + c2) * x + c1) * x + c0
            df = (3.0 * c3 * x + 2.0 * c2) * x + c1
            # polish only: near a repeated root df ~ 0 and a step can jump branches
            limit = 1e-6 * max(1.0, abs(x))
            if f == 0 or abs(f) > limit * abs(df):
                break
            step = f / df
            if residual(x - step) >= residual(x):
                break
            x -= step
        roots.append(x)
    return roots


class PhotonRoot(NamedTuple):
    n_bar: float
    a_bar: float  # |a_bar|, the re-phased real amplitude
    phase: float  # argument of the amplitude before re-phasing
    multistable: bool


def seeded_photon_number(laser: LaserParams, omega_s: float) -> list:
    """Non-negative steady-state photon numbers for seed amplitude ``omega_s``.

    With ``D_bar = D0/(1 + n/n_sat)`` the modulus squared of the field
    equation is a cubic in ``y = n/n_sat``::

        n_sat*y*[(d(1+y)+cD)^2 + (k(1+y)-cK)^2] = omega_s^2 (1+y)^2

    with ``cD = W D0 delta_La/(2 gamma_perp)`` and ``cK = W D0/2``.
    Roots are returned in ascending order.
    """
    if omega_s < 0:
        raise ValidationError("omega_s >= 0")
    W = laser.W
    if W == 0 or laser.D0 == 0:
        n = omega_s**2 / (laser.delta_Lr**2 + laser.kappa**2)
        return [PhotonRoot(n, math.sqrt(n), cmath.phase(_field_amplitude(laser, n, omega_s))
                           if n > 0 else 0.0, False)]
    ns = laser.n_sat
    d, k = laser.delta_Lr, laser.kappa
    cD = W * laser.D0 * laser.delta_La / (2.0 * laser.gamma_perp)
    cK = 0.5 * W * laser.D0
    P0, Q0 = d + cD, k - cK
    s2 = omega_s**2
    c3 = ns * (d * d + k * k)
    c2 = 2.0 * ns * (d * P0 + k * Q0) - s2
    c1 = ns * (P0 * P0 + Q0 * Q0) - 2.0 * s2
    c0 = -s2
    ys = []
    for r in solve_real_cubic(c3, c2, c1, c0):
        if abs(r.imag) >= CUBIC_IMAG_TOL * max(1.0, abs(r)):
            continue
        y = r.real
        if y < 0:
            continue
        if any(abs(y - other) <= 1e-12 * max(1.0, abs(y)) for other in ys):
            continue
        ys.append(y)
    ys.sort()
    multi = len(ys) > 1
    out = []
    for y in ys:
        n = y * ns
        amp = _field_amplitude(laser, n, omega_s)
        out.append(PhotonRoot(n, math.sqrt(n), cmath.phase(amp) if n > 0 else 0.0, multi))
    return out


def derive_working_point(laser: LaserParams, mech: Optional[MechanicsParams] = None,
                         drive: DriveSpec = DriveSpec()) -> WorkingPoint:
    """Steady state and derived rates for the given drive.

    Unseeded operation requires detunings consistent with line pulling
    (see :meth:`LaserParams.with_line_pulling`).
    """
    W = laser.W
    if not drive.seeded:
        D_bar, n_bar = unseeded_steady_state(laser)
        if not satisfies_line_pulling(laser.delta_La, laser.delta_Lr, laser.kappa,
                                      laser.gamma_perp):
            raise ValidationError(
                "unseeded operation requires gamma_perp*delta_Lr + kappa*delta_La = 0")
        omega_s, phase = 0.0, 0.0
    elif drive.n_target is not None:
        n_bar = float(drive.n_target)
        D_bar = laser.D0 / (1.0 + n_bar / laser.n_sat)
        omega_s = seeding_amplitude(laser, n_bar)
        phase = cmath.phase(_field_amplitude(laser, n_bar, omega_s))
    else:
        roots = seeded_photon_number(laser, drive.omega_s)
        if len(roots) > 1 and drive.root is None:
            raise AmbiguousSteadyState(
                f"{len(roots)} steady states for omega_s = {drive.omega_s:.6g}; select one "
                "with DriveSpec.root", roots)
        chosen = roots[drive.root if drive.root is not None else 0]
        n_bar, phase, omega_s = chosen.n_bar, chosen.phase, float(drive.omega_s)
        D_bar = laser.D0 / (1.0 + n_bar / laser.n_sat)
    n_sat = laser.n_sat
    xi = 0.0 if math.isinf(n_sat) else n_bar / n_sat
    kt, dt = _effective(laser, D_bar)
    if not drive.seeded:
        # clamped gain: both vanish analytically, remove round-off
        kt, dt = 0.0, 0.0
    return WorkingPoint(
        laser=laser, mech=mech, drive=drive, W=W, n_sat=n_sat, D_th=laser.D_th,
        xi=xi, D_bar=D_bar, n_bar=n_bar, a_bar=math.sqrt(n_bar), kappa_tilde=kt,
        delta_tilde=dt, omega_pm=relaxation_frequencies(laser.gamma_par, xi, W * D_bar),
        a_phase=phase, omega_s=omega_s,
    )
