"""Flat ``key = value`` run configuration.

Physical keys map one-to-one onto :class:`LaserParams`,
:class:`MechanicsParams` and :class:`DriveSpec`. A few convenience keys are
resolved at parse time:

``D0_over_Dth``, ``N_g_over_Dth``
    inversion and atom number in units of the threshold inversion;
``G_over_kappa``, ``Gamma_m_over_kappa``
    mechanical rates in units of the cavity decay;
``line_pulling = true``
    sets ``delta_Lr`` from ``delta_La`` (unseeded lasing).

The JSON written by the CLI can be fed back in: its ``parameters`` object
holds the fully resolved flat entries.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import ParseError, ValidationError
from .params import DriveSpec, LaserParams, MechanicsParams

LASER_KEYS = ("gamma_perp", "gamma_par", "kappa", "g", "N_g", "D0", "delta_La",
              "delta_Lr", "n_bb")
MECH_KEYS = ("omega_m", "Gamma_m", "n_th", "G")
DRIVE_KEYS = ("seeded", "omega_s", "n_target", "root")
ALIAS_KEYS = ("D0_over_Dth", "N_g_over_Dth", "G_over_kappa", "Gamma_m_over_kappa",
              "line_pulling")
OPTION_KEYS = {
    "model": str, "method": str, "include_Fpar": bool, "format": str,
    "omega_min": float, "omega_max": float, "n_omega": int, "omega_scale": str,
    "sweep_param": str, "sweep_min": float, "sweep_max": float, "sweep_n": int,
    "sweep_scale": str, "D0_min_over_Dth": float, "D0_max_over_Dth": float,
}
BOOL_KEYS = ("seeded", "line_pulling", "include_Fpar")
INT_KEYS = ("root", "n_omega", "sweep_n")
KNOWN_KEYS = set(LASER_KEYS) | set(MECH_KEYS) | set(DRIVE_KEYS) | set(ALIAS_KEYS) | set(OPTION_KEYS)

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


@dataclass(frozen=True)
class RunConfig:
    laser: LaserParams
    mech: Optional[MechanicsParams]
    drive: DriveSpec
    options: dict = field(default_factory=dict)

    def option(self, key, default=None):
        return self.options.get(key, default)

    def entries(self) -> dict:
        """Resolved flat key/value pairs; parsing them again gives the same config."""
        out = {k: getattr(self.laser, k) for k in LASER_KEYS}
        if self.mech is not None:
            out.update({k: getattr(self.mech, k) for k in MECH_KEYS})
        out["seeded"] = self.drive.seeded
        for k in ("omega_s", "n_target", "root"):
            v = getattr(self.drive, k)
            if v is not None:
                out[k] = v
        out.update(sorted(self.options.items()))
        return out

    def with_entries(self, **changes) -> "RunConfig":
        merged = self.entries()
        merged.update(changes)
        return from_entries(merged)


def _convert(key, value, line=None):
    if isinstance(value, str):
        text = value.strip()
    else:
        text = value
    try:
        if key in BOOL_KEYS:
            if isinstance(text, bool):
                return text
            low = str(text).lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
            raise ValueError
        if key in INT_KEYS:
            if isinstance(text, bool):
                raise ValueError
            f = float(text)
            if not f.is_integer():
                raise ValueError
            return int(f)
        if key in OPTION_KEYS and OPTION_KEYS[key] is str:
            return str(text)
        if isinstance(text, bool):
            raise ValueError
        return float(text)
    except (TypeError, ValueError):
        raise ParseError(f"invalid value {value!r} for {key}", line)


def parse_lines(text: str) -> dict:
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in entries:
            raise ParseError(f"duplicate key {key!r}", lineno)
        if not value:
            raise ParseError(f"missing value for {key!r}", lineno)
        entries[key] = _convert(key, value, lineno)
    return entries


def parse_config(text: str) -> RunConfig:
    """Parse a flat config (or the JSON emitted by the CLI) and validate it."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno)
        params = doc.get("parameters", doc) if isinstance(doc, dict) else None
        if not isinstance(params, dict):
            raise ParseError("JSON input needs a 'parameters' object")
        unknown = sorted(set(params) - KNOWN_KEYS)
        if unknown:
            raise ParseError(f"unknown key {unknown[0]!r}")
        entries = {k: _convert(k, v) for k, v in params.items()}
    else:
        entries = parse_lines(text)
    return from_entries(entries)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _pop_exclusive(entries, key, alias, scale):
    if key in entries and alias in entries:
        raise ValidationError(f"give either {key} or {alias}, not both")
    if alias in entries:
        entries[key] = entries.pop(alias) * scale()


def from_entries(entries: dict) -> RunConfig:
    entries = dict(entries)
    for key in entries:
        if key not in KNOWN_KEYS:
            raise ParseError(f"unknown key {key!r}")

    def required(key):
        if key not in entries:
            raise ValidationError(f"missing required key {key}")
        return entries[key]

    gp, gl, kappa, g, dLa = (required(k) for k in ("gamma_perp", "gamma_par", "kappa", "g",
                                                   "delta_La"))

    def d_th():
        W = 2.0 * g * g * gp / (gp * gp + dLa * dLa)
        if W == 0.0:
            raise ValidationError("threshold-relative keys need g > 0")
        return 2.0 * kappa / W

    _pop_exclusive(entries, "D0", "D0_over_Dth", d_th)
    _pop_exclusive(entries, "N_g", "N_g_over_Dth", d_th)
    _pop_exclusive(entries, "G", "G_over_kappa", lambda: kappa)
    _pop_exclusive(entries, "Gamma_m", "Gamma_m_over_kappa", lambda: kappa)
    if entries.pop("line_pulling", False):
        if "delta_Lr" in entries:
            raise ValidationError("give either delta_Lr or line_pulling, not both")
        entries["delta_Lr"] = -kappa * dLa / gp

    laser = LaserParams(**{k: required(k) for k in LASER_KEYS if k != "n_bb"},
                        n_bb=entries.get("n_bb", 0.0))
    mech = None
    present = [k for k in MECH_KEYS if k in entries]
    if present:
        missing = [k for k in MECH_KEYS if k not in entries]
        if missing:
            raise ValidationError(f"mechanical parameters incomplete, missing {missing[0]}")
        mech = MechanicsParams(**{k: entries[k] for k in MECH_KEYS})
    if entries.get("seeded", False):
        drive = DriveSpec.seeded_with(omega_s=entries.get("omega_s"),
                                      n_target=entries.get("n_target"),
                                      root=entries.get("root"))
    else:
        extra = [k for k in ("omega_s", "n_target", "root") if k in entries]
        if extra:
            raise ValidationError(f"{extra[0]} requires seeded = true")
        drive = DriveSpec.unseeded()
    options = {k: v for k, v in entries.items() if k in OPTION_KEYS}
    _check_options(options)
    return RunConfig(laser, mech, drive, options)


def _check_options(options):
    for key in ("omega_scale", "sweep_scale"):
        if key in options and options[key] not in ("log", "linear"):
            raise ValidationError(f"{key} must be 'log' or 'linear'")
    if "format" in options and options["format"] not in ("csv", "json"):
        raise ValidationError("format must be 'csv' or 'json'")
    if "method" in options and options["method"] not in ("matrix", "closed_form"):
        raise ValidationError("method must be 'matrix' or 'closed_form'")
    for key in ("n_omega", "sweep_n"):
        if key in options and options[key] < 2:
            raise ValidationError(f"{key} >= 2")
    for key in ("omega_min", "omega_max", "sweep_min", "sweep_max"):
        if key in options and not math.isfinite(options[key]):
            raise ValidationError(f"{key} must be finite")
