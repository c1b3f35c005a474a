import math

import pytest

from gaincool import DriveSpec, LaserParams, MechanicsParams, derive_working_point

GP, GL, KAPPA, G = 10.0, 0.1, 0.1, 1e-3


def stim_rate(delta_La):
    return 2 * G * G * GP / (GP**2 + delta_La**2)


def fig1_laser(D0_over_Dth=1.2, **changes):
    D_th = 2 * KAPPA / stim_rate(1.0)
    base = dict(gamma_perp=GP, gamma_par=GL, kappa=KAPPA, g=G, N_g=1.5 * D_th,
                D0=D0_over_Dth * D_th, delta_La=1.0, delta_Lr=-1.0)
    base.update(changes)
    return LaserParams(**base)


def fig2_mech(G_over_kappa=3e-4, **changes):
    base = dict(omega_m=1.0, Gamma_m=2e-4 * KAPPA, n_th=1e3, G=G_over_kappa * KAPPA)
    base.update(changes)
    return MechanicsParams(**base)


def seeded_point(laser, mech=None, n=1e5):
    return derive_working_point(laser, mech, DriveSpec.seeded_with(n_target=n))


def fig5_point(xi=0.2, mech=None):
    W = stim_rate(10.0)
    D_th = 2 * KAPPA / W
    laser = LaserParams(gamma_perp=GP, gamma_par=GL, kappa=KAPPA, g=G, N_g=10 * D_th,
                        D0=(1 + xi) * D_th, delta_La=10.0, delta_Lr=-KAPPA * 10.0 / GP)
    return derive_working_point(laser, mech)


@pytest.fixture
def fig1_wp():
    return seeded_point(fig1_laser())


@pytest.fixture
def fig2_wp():
    return seeded_point(fig1_laser(), fig2_mech())


@pytest.fixture
def fig5_wp():
    return fig5_point()


# -- acceptance reporting -------------------------------------------------------

_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion, then assert it."""

    def check(label, ok, detail):
        _ACCEPTANCE.append((label, bool(ok), detail))
        assert ok, f"criterion {label}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in sorted(_ACCEPTANCE, key=lambda r: _order(r[0])):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {label}: {detail}")


def _order(label):
    head = label.split()[0]
    digits = "".join(ch for ch in head if ch.isdigit())
    return (int(digits) if digits else math.inf, label)
