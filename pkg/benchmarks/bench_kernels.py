"""Compare the compiled and pure-Python spectrum kernels.

Runs ``quadratic_spectrum`` on the drift/diffusion pairs the package builds
for the seeded (3x3) and mechanics (5x5) models, over several grid sizes,
and reports the best of several repeats plus the largest backend disagreement.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--sizes 256 4096 65536]
"""

import argparse
import sys
import timeit

import numpy as np

from gaincool import (DriveSpec, LaserParams, MechanicsParams, Model, build_system,
                      derive_working_point, kernels)


def _systems():
    kappa, gamma_perp, g = 0.1, 10.0, 1e-3
    W = 2 * g * g * gamma_perp / gamma_perp**2
    D_th = 2 * kappa / W
    laser = LaserParams(kappa=kappa, gamma_perp=gamma_perp, gamma_par=0.1, g=g, D0=1.2 * D_th,
                        N_g=1.5 * D_th, delta_Lr=-1.0, delta_La=1.0)
    mech = MechanicsParams(omega_m=1.0, Gamma_m=2e-5, n_th=1e3, G=3e-5)
    wp = derive_working_point(laser, mech, DriveSpec.seeded_with(n_target=1e5))
    out = []
    for model, label in ((Model.SEEDED, "n"), (Model.MECHANICS, "b")):
        sys_ = build_system(model, wp)
        u = sys_.vector(label)
        out.append((f"{model.value} {sys_.drift.shape[0]}x{sys_.drift.shape[0]}",
                    sys_.drift, sys_.diffusion, u))
    return out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--sizes", type=int, nargs="+", default=[256, 4096, 65536])
    args = p.parse_args(argv)

    if "cython" not in kernels.available_backends():
        print("compiled kernels not built; run `pip install -e . --no-build-isolation`",
              file=sys.stderr)
        return 1

    print(f"{'system':<26}{'points':>8}{'python ms':>12}{'cython ms':>12}{'speedup':>10}"
          f"{'max rel diff':>15}")
    for name, A, D, u in _systems():
        for n in args.sizes:
            w = np.linspace(-3.0, 3.0, n)
            times = {}
            for backend in ("python", "cython"):
                call = lambda: kernels.quadratic_spectrum(A, D, u, u, w, backend=backend)
                call()
                times[backend] = min(timeit.repeat(call, number=1, repeat=args.repeat))
            py = kernels.quadratic_spectrum(A, D, u, u, w, backend="python")
            cy = kernels.quadratic_spectrum(A, D, u, u, w, backend="cython")
            diff = np.max(np.abs(py - cy) / np.maximum(np.abs(py), 1e-300))
            print(f"{name:<26}{n:>8}{1e3 * times['python']:>12.3f}{1e3 * times['cython']:>12.3f}"
                  f"{times['python'] / times['cython']:>10.1f}{diff:>15.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
