"""Command implementations shared by the CLI and the tests.

Every command takes a :class:`RunConfig` and returns a :class:`Table`.
"""

from __future__ import annotations

import math
from importlib import resources

import numpy as np

from . import cooling, phonons, spectra
from .config import RunConfig, from_entries, parse_config
from .errors import GaincoolError, PhysicsError, ValidationError
from .noise import diffusion_coefficients
from .output import Table
from .params import DriveSpec, derive_working_point, seeded_photon_number

FIGURES = ("1", "2", "3a", "3b", "4", "5")
_FIGURE_CONFIG = {"1": "fig1.cfg", "2": "fig2.cfg", "3a": "fig3.cfg", "3b": "fig3.cfg",
                  "4": "fig4.cfg", "5": "fig5.cfg"}


def bundled_config_text(name: str) -> str:
    return resources.files("gaincool").joinpath("configs", name).read_text(encoding="utf-8")


def figure_config(figure: str) -> RunConfig:
    if figure not in _FIGURE_CONFIG:
        raise ValidationError(f"unknown figure {figure!r}; choose from {', '.join(FIGURES)}")
    return parse_config(bundled_config_text(_FIGURE_CONFIG[figure]))


def working_point(cfg: RunConfig):
    return derive_working_point(cfg.laser, cfg.mech, cfg.drive)


def _model(cfg, wp):
    name = cfg.option("model")
    return spectra.Model(name) if name else spectra.default_model(wp)


def _grid(cfg, lo, hi, n, scale="log", prefix="omega"):
    lo = cfg.option(f"{prefix}_min", lo)
    hi = cfg.option(f"{prefix}_max", hi)
    n = cfg.option(f"{prefix}_n" if prefix == "sweep" else "n_omega", n)
    scale = cfg.option(f"{prefix}_scale", scale)
    if lo is None or hi is None:
        raise ValidationError(f"{prefix} range needs {prefix}_min and {prefix}_max")
    if not hi > lo:
        raise ValidationError(f"{prefix} range must have {prefix}_max > {prefix}_min")
    if scale == "log":
        if lo <= 0:
            raise ValidationError(f"log-spaced {prefix} range needs {prefix}_min > 0")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


# -- basic commands ------------------------------------------------------------


def cmd_derive(cfg: RunConfig) -> Table:
    wp = working_point(cfg)
    rows = [(k, v) for k, v in wp.summary().items()]
    return Table(("quantity", "value"), rows)


def cmd_steady_state(cfg: RunConfig) -> Table:
    cols = ("root", "n_bar", "a_phase", "omega_s", "D_bar", "multistable")
    las = cfg.laser
    if cfg.drive.seeded and cfg.drive.omega_s is not None:
        roots = seeded_photon_number(las, cfg.drive.omega_s)
        rows = [(i, r.n_bar, r.phase, cfg.drive.omega_s, las.D0 / (1 + r.n_bar / las.n_sat),
                 r.multistable) for i, r in enumerate(roots)]
        return Table(cols, rows)
    wp = working_point(cfg)
    return Table(cols, [(0, wp.n_bar, wp.a_phase, wp.omega_s, wp.D_bar, False)])


def cmd_spectrum(cfg: RunConfig) -> Table:
    wp = working_point(cfg)
    model = _model(cfg, wp)
    method = cfg.option("method", "matrix")
    fpar = cfg.option("include_Fpar")
    if "omega_min" in cfg.options or "omega_max" in cfg.options:
        grid = _grid(cfg, 0.0, 1.0, 2048, "linear")
        res = spectra.compute_spectrum(wp, model, method, omega=grid, include_Fpar=fpar)
    else:
        res = spectra.compute_spectrum(wp, model, method,
                                       n=cfg.option("n_omega", 2048), include_Fpar=fpar)
    rows = list(zip(res.omega, res.values))
    return Table(("omega", "S_nn"), rows, {"model": model.value, "method": method,
                                           "nonnegative": res.is_nonnegative()})


def _cooling_row(res: cooling.CoolingResult):
    return (res.gamma_opt, res.n_opt, res.n_m, res.optical_part, res.thermal_part,
            res.t_opt, res.s_plus, res.s_minus, res.vanishing)


COOLING_COLUMNS = ("gamma_opt", "n_opt", "n_m", "optical_part", "thermal_part", "t_opt",
                   "S_plus", "S_minus", "vanishing")


def _require_mech(cfg):
    if cfg.mech is None:
        raise ValidationError("this command needs omega_m, Gamma_m, n_th and G")


def cmd_cooling(cfg: RunConfig) -> Table:
    _require_mech(cfg)
    wp = working_point(cfg)
    res = cooling.phonon_number_rate(wp, model=_model(cfg, wp),
                                     method=cfg.option("method", "matrix"),
                                     include_Fpar=cfg.option("include_Fpar"))
    meta = {}
    if wp.is_seeded:
        try:
            meta["gamma_opt_max_approx"] = cooling.gamma_opt_max(wp)
            meta["n_opt_approx"] = cooling.n_opt_approx(wp)
        except PhysicsError as exc:
            meta["approximation"] = type(exc).__name__
    return Table(COOLING_COLUMNS, [_cooling_row(res)], meta)


def cmd_phonon_spectrum(cfg: RunConfig) -> Table:
    _require_mech(cfg)
    wp = working_point(cfg)
    fpar = bool(cfg.option("include_Fpar", False))
    if "omega_min" in cfg.options or "omega_max" in cfg.options:
        grid = _grid(cfg, 0.0, 1.0, 4001, "linear")
    else:
        half = phonons.splitting_window(wp)
        grid = -cfg.mech.omega_m + np.linspace(-half, half, cfg.option("n_omega", 4001))
    s = phonons.sbb(wp, grid, include_Fpar=fpar)
    split = phonons.mode_splitting(wp)
    quad = phonons.integrate_phonon_number(wp, include_Fpar=fpar)
    meta = {"n_m_integrated": quad.value, "n_m_integrated_error": quad.error,
            "regime": split.regime, "n_peaks": len(split.peaks),
            "splitting": split.splitting}
    for i, p in enumerate(split.peaks):
        meta[f"peak_{i}"] = p
    return Table(("omega", "S_bdb"), list(zip(grid, s)), meta)


SWEEP_ALIASES = ("D0_over_Dth", "N_g_over_Dth", "G_over_kappa", "Gamma_m_over_kappa")


def cmd_sweep(cfg: RunConfig) -> Table:
    name = cfg.option("sweep_param")
    if not name:
        raise ValidationError("sweep needs sweep_param")
    entries = cfg.entries()
    if name not in entries and name not in SWEEP_ALIASES:
        raise ValidationError(f"cannot sweep {name!r}")
    grid = _grid(cfg, None, None, 21, "linear", prefix="sweep")
    if not np.all(np.diff(grid) > 0):
        raise ValidationError("sweep grid must be strictly increasing")
    base = {k: v for k, v in entries.items() if not k.startswith("sweep_")}
    related = {"D0_over_Dth": "D0", "N_g_over_Dth": "N_g", "G_over_kappa": "G",
               "Gamma_m_over_kappa": "Gamma_m"}
    wp_cols = ("xi", "n_bar", "D_bar", "kappa_tilde", "delta_tilde")
    rows = []
    for value in grid:
        point = dict(base)
        point.pop(related.get(name, name), None)
        point[name] = float(value)
        sub = from_entries(point)
        status = "ok"
        try:
            wp = working_point(sub)
            wp_vals = tuple(getattr(wp, c) for c in wp_cols)
            cool = (None,) * len(COOLING_COLUMNS)
            if sub.mech is not None:
                cool = _cooling_row(cooling.phonon_number_rate(
                    wp, model=_model(sub, wp), method=sub.option("method", "matrix")))
        except PhysicsError as exc:
            status = type(exc).__name__
            wp_vals = (None,) * len(wp_cols)
            cool = (None,) * len(COOLING_COLUMNS)
        rows.append((float(value),) + wp_vals + cool + (status,))
    return Table((name,) + wp_cols + COOLING_COLUMNS + ("status",), rows)


def cmd_optimize_pump(cfg: RunConfig) -> Table:
    _require_mech(cfg)
    if not (cfg.drive.seeded and cfg.drive.n_target is not None):
        raise ValidationError("optimize-pump needs seeded = true and n_target")
    Dth = cfg.laser.D_th
    bounds = None
    if "D0_min_over_Dth" in cfg.options or "D0_max_over_Dth" in cfg.options:
        bounds = (cfg.option("D0_min_over_Dth", 0.0) * Dth,
                  cfg.option("D0_max_over_Dth", math.inf) * Dth)
    opt = cooling.optimize_pump(cfg.laser, cfg.mech, cfg.drive.n_target, bounds)
    cols = ("D0", "D0_over_Dth", "kappa_tilde", "n_m", "kappa_tilde_predicted", "n_m_predicted",
            "at_lower_bound", "at_upper_bound")
    row = (opt.D0, opt.D0 / Dth, opt.kappa_tilde, opt.n_m, opt.kappa_tilde_predicted,
           opt.n_m_predicted, opt.at_lower_bound, opt.at_upper_bound)
    return Table(cols, [row])


# -- figures ---------------------------------------------------------------------


def _passive_point(wp):
    """Same cavity and photon number with the gain medium removed."""
    return derive_working_point(wp.laser.replace(g=0.0, D0=0.0), wp.mech,
                                DriveSpec.seeded_with(n_target=wp.n_bar))


def figure1(cfg: RunConfig) -> Table:
    """Optical damping and number spectra, seeded vs passive.

    ``ratio`` is the seeded damping divided by the passive maximum, so its
    own maximum is the enhancement of the peak damping rate.
    """
    wp = working_point(cfg)
    passive = _passive_point(wp)
    w = _grid(cfg, 0.5, 1.5, 2001, "linear")
    g_seed = cooling.gamma_opt(wp, w, G=1.0)
    g_pass = cooling.gamma_opt(passive, w, G=1.0)
    s_seed = spectra.snn(wp, w)
    s_pass = spectra.snn(passive, w, spectra.Model.PASSIVE)
    peak = g_pass.max()
    rows = list(zip(w, g_seed, g_pass, g_seed / peak, s_seed, s_pass))
    return Table(("omega", "gamma_opt_seeded_per_G2", "gamma_opt_passive_per_G2", "ratio",
                  "S_nn_seeded", "S_nn_passive"), rows,
                 {"ratio_of_maxima": g_seed.max() / peak})


def figure2(cfg: RunConfig) -> Table:
    _require_mech(cfg)
    wp = working_point(cfg)
    passive = _passive_point(wp)
    kappa = cfg.laser.kappa
    grid = _grid(cfg, 1e-5, 1e-2, 60, "log", prefix="sweep")
    mech = cfg.mech
    sp, sm = cooling.sideband_spectra(wp, mech.omega_m)
    pp, pm = cooling.sideband_spectra(passive, mech.omega_m, spectra.Model.PASSIVE)
    rows = []
    for x in grid:
        m = mech.replace(G=x * kappa)
        seed = cooling.rate_equation(sp, sm, m)
        pas = cooling.rate_equation(pp, pm, m)
        rows.append((x, x * kappa, seed.n_m, seed.optical_part, seed.thermal_part, pas.n_m))
    return Table(("G_over_kappa", "G", "n_m_seeded", "optical_part", "thermal_part",
                  "n_m_passive"), rows, {"n_opt": cooling.n_opt_from_spectra(sp, sm)})


def _d0_point(cfg, ratio):
    las = cfg.laser.replace(D0=ratio * cfg.laser.D_th)
    return derive_working_point(las, cfg.mech, cfg.drive)


def figure3a(cfg: RunConfig) -> Table:
    _require_mech(cfg)
    grid = _grid(cfg, 0.0, 1.5, 151, "linear", prefix="sweep")
    integrate_upto = 1.0
    passive = cooling.phonon_number_rate(_passive_point(working_point(cfg)),
                                         model=spectra.Model.PASSIVE).n_m
    rows = []
    for r in grid:
        wp = _d0_point(cfg, r)
        status = "ok"
        n_rate = opt_part = th_part = gam = n_int = None
        try:
            res = cooling.phonon_number_rate(wp)
            n_rate, opt_part, th_part, gam = (res.n_m, res.optical_part, res.thermal_part,
                                              res.gamma_opt)
            if r <= integrate_upto + 1e-12:
                n_int = phonons.integrate_phonon_number(wp).value
        except GaincoolError as exc:
            status = type(exc).__name__
        rows.append((r, wp.kappa_tilde, n_rate, opt_part, th_part, gam, n_int, passive, status))
    opt = cooling.optimize_pump(cfg.laser, cfg.mech, cfg.drive.n_target)
    wp0 = working_point(cfg)
    meta = {"kappa_tilde_predicted": cooling.kappa_tilde_prediction(wp0, cfg.mech),
            "n_m_predicted": cooling.n_m_prediction(wp0, cfg.mech),
            "D0_over_Dth_opt": opt.D0 / cfg.laser.D_th, "kappa_tilde_opt": opt.kappa_tilde,
            "n_m_opt": opt.n_m, "D0_over_Dth_transparency": 1 + wp0.xi}
    return Table(("D0_over_Dth", "kappa_tilde", "n_m_rate", "optical_part", "thermal_part",
                  "gamma_opt", "n_m_integrated", "n_m_passive", "status"), rows, meta)


def figure3b(cfg: RunConfig) -> Table:
    _require_mech(cfg)
    grid = _grid(cfg, 0.2, 5.0, 25, "log", prefix="sweep")
    rows = []
    for wm in grid:
        mech = cfg.mech.replace(omega_m=float(wm))
        opt = cooling.optimize_pump(cfg.laser, mech, cfg.drive.n_target)
        fit = opt.n_m_predicted * (1 + 6 * (opt.kappa_tilde / wm) ** 2)
        rows.append((wm, opt.D0 / cfg.laser.D_th, opt.kappa_tilde, opt.n_m,
                     opt.n_m_predicted, fit))
    return Table(("omega_m", "D0_over_Dth_opt", "kappa_tilde_opt", "n_m_opt", "n_m_predicted",
                  "n_m_fit"), rows)


def figure4(cfg: RunConfig) -> Table:
    _require_mech(cfg)
    d0 = _grid(cfg, 0.0, 1.39, 40, "linear", prefix="sweep")
    half = 3 * cfg.mech.G * math.sqrt(cfg.drive.n_target)
    w = -cfg.mech.omega_m + np.linspace(-half, half, cfg.option("n_omega", 601))
    rows = []
    for r in d0:
        wp = _d0_point(cfg, r)
        s = phonons.sbb(wp, w)
        split = phonons.mode_splitting(wp)
        sep = split.splitting
        rows.extend((r, x, math.log10(v) if v > 0 else -math.inf, len(split.peaks), sep)
                    for x, v in zip(w, s))
    return Table(("D0_over_Dth", "omega", "log10_S_bdb", "n_peaks", "splitting"), rows,
                 {"aG": cfg.mech.G * math.sqrt(cfg.drive.n_target)})


def figure5(cfg: RunConfig) -> Table:
    wp = working_point(cfg)
    half = _grid(cfg, 1e-3, 1.0, 400, "log")
    w = np.concatenate([-half[::-1], half])
    noise = diffusion_coefficients(wp)
    adiabatic = spectra.snn(wp, w, spectra.Model.UNSEEDED, "closed_form", noise)
    full = spectra.snn_full_polarization(wp, w, noise)
    full_mirror = full[::-1]
    rows = list(zip(w, adiabatic, full, np.abs(full - adiabatic) / adiabatic,
                    np.abs(full - full_mirror) / full))
    return Table(("omega", "S_nn_adiabatic", "S_nn_full", "rel_diff", "asymmetry_full"), rows,
                 {"omega_plus_re": wp.omega_plus.real, "omega_plus_im": wp.omega_plus.imag})


FIGURE_BUILDERS = {"1": figure1, "2": figure2, "3a": figure3a, "3b": figure3b,
                   "4": figure4, "5": figure5}

COMMANDS = {
    "derive": cmd_derive,
    "steady-state": cmd_steady_state,
    "spectrum": cmd_spectrum,
    "cooling": cmd_cooling,
    "phonon-spectrum": cmd_phonon_spectrum,
    "sweep": cmd_sweep,
    "optimize-pump": cmd_optimize_pump,
}


def run_command(cfg: RunConfig, command: str, figure: str = None) -> Table:
    if command == "figure":
        if figure not in FIGURE_BUILDERS:
            raise ValidationError(f"unknown figure {figure!r}; choose from {', '.join(FIGURES)}")
        return FIGURE_BUILDERS[figure](cfg)
    if command not in COMMANDS:
        raise ValidationError(f"unknown command {command!r}")
    return COMMANDS[command](cfg)


def derived_summary(cfg: RunConfig) -> dict:
    try:
        return working_point(cfg).summary()
    except PhysicsError:
        return {}
