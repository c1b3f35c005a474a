"""Langevin-force diffusion coefficients.

Correlators are delta-correlated, ``<F_k(t) F_l(t')> = D_kl delta(t - t')``.
Two force bases are used:

* effective forces after adiabatic elimination of the polarization,
  ``(F_a, F_a^dag, F_par, F_m, F_m^dag)``;
* bare forces of the full linearization,
  ``(F_kappa, F_kappa^dag, F_perp, F_perp^dag, F_par)``.

Cross terms obey ``<X Y>^* = <Y^dag X^dag>``. This ordering (not the
symmetric ``<F_par F_a> = <F_a F_par>``) is what reproduces the four-term
unseeded number spectrum from the matrix solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ZeroGain
from .params import WorkingPoint

EFFECTIVE_FORCES = ("Fa", "Fad", "Fpar", "Fm", "Fmd")
BARE_FORCES = ("Fk", "Fkd", "Fp", "Fpd", "Fpar")


@dataclass(frozen=True)
class DiffusionSet:
    """Diffusion strengths in GHz.

    ``d_aad``/``d_ada`` are the totals ``<F_a F_a^dag>``/``<F_a^dag F_a>``
    (blackbody plus stimulated-emission parts, the latter kept separately).
    ``bare_pol`` holds ``(<F_perp^dag F_perp>, <F_perp F_perp^dag>)`` and is
    ``None`` without gain coupling.
    """

    d_aad: float
    d_ada: float
    d_se_aad: float
    d_se_ada: float
    d_pp: float
    d_apar: complex
    d_adpar: complex
    d_bdb: float
    d_bbd: float
    bare_pol: Optional[tuple]

    @property
    def photon_sum(self) -> float:
        return self.d_aad + self.d_ada

    @property
    def photon_difference(self) -> float:
        """``<F_a^dag F_a> - <F_a F_a^dag>``."""
        return self.d_ada - self.d_aad

    def require_bare_pol(self) -> tuple:
        if self.bare_pol is None:
            raise ZeroGain("bare polarization noise is undefined for g = 0")
        return self.bare_pol


def diffusion_coefficients(wp: WorkingPoint) -> DiffusionSet:
    las = wp.laser
    W, Db, D0, Ng = wp.W, wp.D_bar, las.D0, las.N_g
    ratio = las.gamma_par / (2.0 * las.gamma_perp)
    se_ada = 0.5 * W * ((Ng + Db) + ratio * (D0 - Db))
    se_aad = 0.5 * W * ((Ng - Db) - ratio * (D0 - Db))
    d_aad = 2.0 * las.kappa * (las.n_bb + 1.0) + se_aad
    d_ada = 2.0 * las.kappa * las.n_bb + se_ada

    d_pp = 2.0 * las.gamma_par * (Ng - D0 * Db / Ng)
    g2 = las.g**2
    lo = complex(las.gamma_perp, -las.delta_La)
    hi = complex(las.gamma_perp, las.delta_La)
    common = las.gamma_par * g2 * Db * wp.a_bar
    d_apar = common / lo**2 * (1.0 - D0 / Ng)
    d_adpar = -common / hi**2 * (1.0 + D0 / Ng)

    if wp.mech is not None:
        d_bdb = wp.mech.Gamma_m * wp.mech.n_th
        d_bbd = wp.mech.Gamma_m * (wp.mech.n_th + 1.0)
    else:
        d_bdb = d_bbd = 0.0

    bare = None
    if W > 0:
        scale = 2.0 * las.gamma_perp / W
        bare = (scale * se_ada, scale * se_aad)
    return DiffusionSet(d_aad=d_aad, d_ada=d_ada, d_se_aad=se_aad, d_se_ada=se_ada,
                        d_pp=d_pp, d_apar=complex(d_apar), d_adpar=complex(d_adpar),
                        d_bdb=d_bdb, d_bbd=d_bbd, bare_pol=bare)


def effective_correlations(noise: DiffusionSet, include_Fpar: bool = True) -> np.ndarray:
    """5x5 correlation matrix over :data:`EFFECTIVE_FORCES`."""
    C = np.zeros((5, 5), dtype=complex)
    C[0, 1] = noise.d_aad
    C[1, 0] = noise.d_ada
    if include_Fpar:
        C[0, 2] = noise.d_apar
        C[1, 2] = noise.d_adpar
        C[2, 0] = np.conj(noise.d_adpar)
        C[2, 1] = np.conj(noise.d_apar)
        C[2, 2] = noise.d_pp
    C[3, 4] = noise.d_bbd
    C[4, 3] = noise.d_bdb
    return C


def bare_correlations(wp: WorkingPoint, noise: DiffusionSet,
                      include_Fpar: bool = True) -> np.ndarray:
    """5x5 correlation matrix over :data:`BARE_FORCES`.

    The polarization correlators follow from
    ``F_a = F_kappa - i g F_perp / (gamma_perp - i delta_La)``. The bare
    inversion force is backed out so that eliminating the polarization
    reproduces ``d_pp``, ``d_apar`` and ``d_adpar`` exactly: the eliminated
    polarization adds ``X = 2 i g a (F_perp/(gp - i dLa) - F_perp^dag/(gp + i dLa))``
    to the inversion noise.
    """
    las = wp.laser
    n_dag, n_norm = noise.require_bare_pol()  # <Fp^dag Fp>, <Fp Fp^dag>
    g, a, n = las.g, wp.a_bar, wp.n_bar
    lo = complex(las.gamma_perp, -las.delta_La)
    hi = complex(las.gamma_perp, las.delta_La)

    C = np.zeros((5, 5), dtype=complex)
    C[0, 1] = 2.0 * las.kappa * (las.n_bb + 1.0)
    C[1, 0] = 2.0 * las.kappa * las.n_bb
    C[2, 3] = n_norm
    C[3, 2] = n_dag
    if not include_Fpar:
        return C

    fp_x = -2j * g * a * n_norm / hi          # <Fp X>
    fpd_x = 2j * g * a * n_dag / lo           # <Fp^dag X>
    c1 = noise.d_apar * lo / (-1j * g) - fp_x     # <Fp Fpar_bare>
    c2 = noise.d_adpar * hi / (1j * g) - fpd_x    # <Fp^dag Fpar_bare>
    xx = 4.0 * g * g * n * (n_norm + n_dag) / (las.gamma_perp**2 + las.delta_La**2)
    x_f = 2j * g * a * (c1 / lo - c2 / hi)
    f_x = 2j * g * a * (np.conj(c2) / lo - np.conj(c1) / hi)
    C[2, 4] = c1
    C[3, 4] = c2
    C[4, 2] = np.conj(c2)
    C[4, 3] = np.conj(c1)
    C[4, 4] = noise.d_pp - x_f - f_x - xx
    return C
