"""Command-line entry point.

Exit status: 0 success, 2 bad configuration, 3 physics error,
4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .commands import FIGURES, derived_summary, figure_config, run_command
from .config import load_config
from .errors import ConfigError, GaincoolError, NonConvergedQuadrature, PhysicsError
from .output import render

EXIT_OK, EXIT_CONFIG, EXIT_PHYSICS, EXIT_CONVERGENCE = 0, 2, 3, 4

# CLI flag -> config option
_OVERRIDES = {
    "model": "model", "method": "method", "param": "sweep_param", "min": "sweep_min",
    "max": "sweep_max", "n": "sweep_n", "scale": "sweep_scale",
    "omega_min": "omega_min", "omega_max": "omega_max", "n_omega": "n_omega",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaincool",
        description="Optomechanical cooling with an incoherently pumped gain medium.")
    parser.add_argument("--version", action="version", version=f"gaincool {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-o", "--output", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument("--model", help="fluctuation model (e.g. seeded, passive)")
        p.add_argument("--method", choices=("matrix", "closed_form"))
        p.add_argument("--omega-min", dest="omega_min", type=float)
        p.add_argument("--omega-max", dest="omega_max", type=float)
        p.add_argument("--n-omega", dest="n_omega", type=int)
        return p

    for name, text in (("derive", "steady state and derived rates"),
                       ("steady-state", "all steady-state branches"),
                       ("spectrum", "photon-number spectrum"),
                       ("cooling", "optical damping and rate-equation phonon number"),
                       ("phonon-spectrum", "phonon spectrum, splitting and integral"),
                       ("optimize-pump", "minimize the phonon number over D0")):
        add(name, text).add_argument("config", help="configuration file (key = value or JSON)")

    sweep = add("sweep", "one-parameter sweep")
    sweep.add_argument("config")
    sweep.add_argument("--param")
    sweep.add_argument("--min", type=float)
    sweep.add_argument("--max", type=float)
    sweep.add_argument("--n", type=int)
    sweep.add_argument("--scale", choices=("log", "linear"))

    fig = add("figure", "data behind one figure")
    fig.add_argument("figure", choices=FIGURES)
    fig.add_argument("--config", help="override the bundled configuration")
    return parser


def _apply_overrides(cfg, args):
    changes = {}
    for flag, key in _OVERRIDES.items():
        value = getattr(args, flag, None)
        if value is not None:
            changes[key] = value
    if args.format:
        changes["format"] = args.format
    return cfg.with_entries(**changes) if changes else cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "figure":
            cfg = load_config(args.config) if args.config else figure_config(args.figure)
        else:
            cfg = load_config(args.config)
        cfg = _apply_overrides(cfg, args)
        table = run_command(cfg, args.command, getattr(args, "figure", None))
        command = args.command if args.command != "figure" else f"figure {args.figure}"
        text = render(table, command, cfg.entries(), derived_summary(cfg),
                      cfg.option("format", "csv"))
    except OSError as exc:
        print(f"error: ConfigError: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GaincoolError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        if isinstance(exc, ConfigError):
            return EXIT_CONFIG
        if isinstance(exc, NonConvergedQuadrature):
            return EXIT_CONVERGENCE
        return EXIT_PHYSICS if isinstance(exc, PhysicsError) else EXIT_CONFIG
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
