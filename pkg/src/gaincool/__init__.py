"""Optomechanical cooling of a mirror in a cavity with an incoherently pumped gain medium."""

__version__ = "0.1.0"

from .errors import (AmbiguousSteadyState, BelowThreshold, ConfigError, GaincoolError,
                     HeatingConfiguration, ModelMismatch, NearSingularKappa,
                     NoMinimumInBounds, NonConvergedQuadrature, ParseError, PhysicsError,
                     SingularResponse, UnstableSystem, ValidationError, ZeroGain)
from .params import (DriveSpec, LaserParams, MechanicsParams, WorkingPoint,
                     derive_working_point, relaxation_frequencies, seeded_photon_number,
                     seeding_amplitude)
from .noise import DiffusionSet, diffusion_coefficients
from .spectra import (LinearLangevinSystem, Model, SpectrumResult, build_system,
                      compute_spectrum, snn, snn_full_polarization, spectrum, spectrum_matrix)
from .cooling import (CoolingResult, PumpOptimum, gamma_opt, gamma_opt_lorentzian,
                      gamma_opt_max, n_opt, optimize_pump, phonon_number_rate)
from .phonons import (SusceptibilitySet, integrate_phonon_number, mode_splitting, sbb,
                      susceptibilities)
from .config import RunConfig, parse_config

__all__ = [
    "AmbiguousSteadyState", "BelowThreshold", "ConfigError", "GaincoolError",
    "HeatingConfiguration", "ModelMismatch", "NearSingularKappa", "NoMinimumInBounds",
    "NonConvergedQuadrature", "ParseError", "PhysicsError", "SingularResponse",
    "UnstableSystem", "ValidationError", "ZeroGain", "DriveSpec", "LaserParams",
    "MechanicsParams", "WorkingPoint", "derive_working_point", "relaxation_frequencies",
    "seeded_photon_number", "seeding_amplitude", "DiffusionSet", "diffusion_coefficients",
    "LinearLangevinSystem", "Model", "SpectrumResult", "build_system", "compute_spectrum",
    "snn", "snn_full_polarization", "spectrum", "spectrum_matrix", "CoolingResult",
    "PumpOptimum", "gamma_opt", "gamma_opt_lorentzian", "gamma_opt_max", "n_opt",
    "optimize_pump", "phonon_number_rate", "SusceptibilitySet", "integrate_phonon_number",
    "mode_splitting", "sbb", "susceptibilities", "RunConfig", "parse_config",
]
