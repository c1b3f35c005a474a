import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaincool import (DriveSpec, LinearLangevinSystem, Model, ModelMismatch, SingularResponse,
                      UnstableSystem, ZeroGain, build_system, compute_spectrum,
                      derive_working_point, diffusion_coefficients, snn, snn_full_polarization,
                      spectrum, spectrum_matrix)
from gaincool.spectra import (characteristic_scale, default_grid, refine_peaks, snn_passive,
                              snn_seeded_approx, snn_seeded_closed_form,
                              snn_unseeded_four_term, snn_unseeded_symmetric, theta)

from conftest import fig1_laser, fig2_mech, fig5_point, seeded_point

W_GRID = np.concatenate([-np.geomspace(5, 1e-3, 200), np.geomspace(1e-3, 5, 200)])


def test_zero_diffusion_gives_zero_spectrum():
    A = np.array([[-0.3 + 1j, 0.2], [0.1, -0.5]])
    sys = LinearLangevinSystem(("x", "y"), A, np.zeros((2, 2)), Model.PASSIVE)
    assert np.all(spectrum(sys, W_GRID, "x") == 0)
    assert spectrum_matrix(sys, 0.4, "x", "y") == 0


def test_system_shape_validated():
    with pytest.raises(ValueError):
        LinearLangevinSystem(("x",), np.eye(2), np.eye(2), Model.PASSIVE)


def test_unknown_label():
    sys = build_system(Model.PASSIVE, seeded_point(fig1_laser()))
    with pytest.raises(KeyError):
        sys.vector("b")


def test_passive_peak_height():
    wp = seeded_point(fig1_laser(g=0.0, D0=0.0))
    k, d = wp.laser.kappa, wp.laser.delta_Lr
    peak = snn(wp, -d, Model.PASSIVE, "matrix")
    assert math.isclose(peak, 2 * wp.n_bar / k, rel_tol=1e-12)


def test_passive_with_blackbody_photons():
    wp = seeded_point(fig1_laser(g=0.0, D0=0.0, n_bb=0.7))
    assert np.allclose(snn(wp, W_GRID, Model.PASSIVE), snn_passive(wp, W_GRID), rtol=1e-10)


def test_seeded_without_gain_is_passive():
    wp = seeded_point(fig1_laser(g=0.0, D0=0.0))
    seeded = snn(wp, W_GRID, Model.SEEDED, "matrix")
    assert np.allclose(seeded, snn_passive(wp, W_GRID), rtol=1e-10)
    sys = build_system(Model.SEEDED, wp)
    # number/phase block carries only the cavity decay and detuning
    assert np.allclose(sys.drift[:2, :2], [[-0.1, -1j], [-1j, -0.1]])


def test_unseeded_drift_matrix():
    wp = fig5_point(0.2)
    A = build_system(Model.UNSEEDED, wp).drift
    gl, xi = wp.laser.gamma_par, wp.xi
    assert np.allclose(A, [[0, xi * gl / 2], [-2 * wp.W * wp.D_bar, -gl * (1 + xi)]], rtol=1e-14)


def test_seeded_determinant_is_theta():
    wp = seeded_point(fig1_laser(0.9, delta_La=-2.5, delta_Lr=0.3))
    A = build_system(Model.SEEDED, wp).drift
    for w in (-1.7, -0.2, 0.0, 0.05, 3.0):
        det = np.linalg.det(-1j * w * np.eye(3) - A)
        assert np.isclose(wp.laser.gamma_perp * det, theta(wp, w), rtol=1e-10)


def test_clamped_spectrum_is_even():
    wp = fig5_point(0.7)
    assert np.array_equal(snn_unseeded_symmetric(wp, W_GRID), snn_unseeded_symmetric(wp, -W_GRID))
    s = snn_unseeded_four_term(wp, W_GRID, include_Fpar=False)
    assert np.allclose(s, s[::-1], rtol=1e-13)


def test_unseeded_asymmetry_is_the_odd_term():
    wp = fig5_point(0.2)
    las = wp.laser
    gl, xi, a, g, Db, D0, Ng = (las.gamma_par, wp.xi, wp.a_bar, las.g, wp.D_bar, las.D0,
                                las.N_g)
    cross = (gl * g * g * Db * a / complex(las.gamma_perp, -las.delta_La) ** 2 * (1 - D0 / Ng)
             - gl * g * g * Db * a / complex(las.gamma_perp, las.delta_La) ** 2 * (1 + D0 / Ng))
    poles = ((W_GRID**2 - wp.omega_plus**2) * (W_GRID**2 - wp.omega_minus**2)).real
    odd = 2 * W_GRID * xi * gl * a * cross.imag / poles
    s = snn(wp, W_GRID, Model.UNSEEDED, "matrix", include_Fpar=True)
    assert np.allclose(s - s[::-1], odd, rtol=1e-6, atol=1e-10 * s.max())


def test_phase_mode_is_singular_at_zero():
    wp = fig5_point()
    # the number/inversion pair is damped; the free phase of the field basis is not
    assert np.isfinite(snn(wp, 0.0, Model.UNSEEDED))
    with pytest.raises(SingularResponse) as info:
        snn_full_polarization(wp, np.array([-0.1, 0.0, 0.1]))
    assert info.value.omega == 0.0


def test_fig1_seeded_peaks():
    wp = seeded_point(fig1_laser())
    dt, kt = wp.delta_tilde, wp.kappa_tilde
    w = np.linspace(-2, 2, 40001)
    s = snn(wp, w)
    passive = snn_passive(dataclasses.replace(wp, laser=wp.laser.replace(g=0.0, D0=0.0)), w)
    for side in (-1, 1):
        mask = side * w > 0
        i = np.argmax(np.where(mask, s, -np.inf))
        assert abs(abs(w[i]) - abs(dt)) <= kt
        assert s[i] > passive[i]


def test_literal_seeded_form_is_a_special_noise_choice():
    wp = seeded_point(fig1_laser())
    las = wp.laser
    total = wp.W * las.N_g + 2 * las.kappa
    diff = -2 * wp.kappa_tilde
    noise = dataclasses.replace(diffusion_coefficients(wp), d_aad=(total - diff) / 2,
                                d_ada=(total + diff) / 2)
    matrix = snn(wp, W_GRID, Model.SEEDED, "matrix", noise=noise, include_Fpar=False)
    assert np.allclose(matrix, snn_seeded_approx(wp, W_GRID), rtol=1e-8)


def test_literal_seeded_form_close_to_full_noise():
    wp = seeded_point(fig1_laser())
    rel = np.abs(snn_seeded_approx(wp, W_GRID) / snn_seeded_closed_form(wp, W_GRID) - 1)
    # they differ only by the gamma_par/(2 gamma_perp) inversion share of the noise
    assert rel.max() < 0.02


def test_seeded_closed_form_continues_to_unseeded():
    un = fig5_point(0.2)
    w = np.array([-0.3, -0.05, -0.01, 0.02, 0.07, 0.4])
    target = snn_unseeded_four_term(un, w, include_Fpar=False)
    errs = []
    for eps in (1e-2, 1e-4, 1e-6):
        s = derive_working_point(un.laser, drive=DriveSpec.seeded_with(n_target=un.n_bar * (1 + eps)))
        errs.append(np.max(np.abs(snn_seeded_closed_form(s, w) / target - 1)))
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-5
    # the printed even form keeps W N_g of the photon noise 2 kappa + W N_g
    ratio = target / snn_unseeded_symmetric(un, w)
    assert np.allclose(ratio, 1 + 2 * un.laser.kappa / (un.W * un.laser.N_g), rtol=1e-12)


def test_full_polarization_weak_coupling_is_passive():
    un = fig5_point(0.2)
    for g, tol in ((1e-6, 1e-4), (1e-9, 1e-9)):
        wp = dataclasses.replace(un, laser=un.laser.replace(g=g))
        assert np.allclose(snn_full_polarization(wp, W_GRID), snn_passive(wp, W_GRID), rtol=tol)


def test_model_mismatch():
    seeded, unseeded = seeded_point(fig1_laser()), fig5_point()
    with pytest.raises(ModelMismatch):
        build_system(Model.UNSEEDED, seeded)
    with pytest.raises(ModelMismatch):
        snn_full_polarization(seeded, 0.1)
    with pytest.raises(ModelMismatch):
        build_system(Model.MECHANICS, seeded)
    with pytest.raises(ModelMismatch):
        snn_unseeded_four_term(seeded, 0.1)
    with pytest.raises(ModelMismatch):
        snn(seeded, 0.1, Model.SEEDED, "closed_form", include_Fpar=True)
    with pytest.raises(ModelMismatch):
        snn(unseeded, 0.1, Model.FULL_POLARIZATION, "closed_form")
    with pytest.raises(ModelMismatch):
        compute_spectrum(unseeded, Model.FULL_POLARIZATION, "closed_form")
    with pytest.raises(ValueError):
        snn(seeded, 0.1, method="fourier")


def test_full_polarization_needs_gain():
    un = fig5_point()
    wp = dataclasses.replace(un, laser=un.laser.replace(g=0.0))
    with pytest.raises(ZeroGain):
        build_system(Model.FULL_POLARIZATION, wp)


def test_unstable_working_point_is_reported():
    wp = seeded_point(fig1_laser(1.45))
    sys = build_system(Model.SEEDED, wp)
    assert not sys.is_stable
    with pytest.raises(UnstableSystem):
        snn(wp, 0.3)
    # the raw solve is still available on request
    assert np.isfinite(spectrum(sys, 0.3, check_stability=False))


def test_matrix_and_closed_form_agree_for_every_model():
    seeded, unseeded = seeded_point(fig1_laser()), fig5_point(0.5)
    passive = seeded_point(fig1_laser(g=0.0, D0=0.0))
    pairs = [(passive, Model.PASSIVE, None), (seeded, Model.SEEDED, False),
             (unseeded, Model.UNSEEDED, True), (unseeded, Model.UNSEEDED, False)]
    for wp, model, fpar in pairs:
        m = snn(wp, W_GRID, model, "matrix", include_Fpar=fpar)
        c = snn(wp, W_GRID, model, "closed_form", include_Fpar=fpar)
        assert np.allclose(m, c, rtol=1e-8), model


def test_mechanics_model_number_spectrum_reduces_to_seeded():
    # G = 0: the number observable of the field basis equals the n/u/D model
    wp = seeded_point(fig1_laser(), fig2_mech(G_over_kappa=0.0))
    field = snn(wp, W_GRID, Model.MECHANICS, include_Fpar=False)
    assert np.allclose(field, snn(wp, W_GRID, Model.SEEDED, include_Fpar=False), rtol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 1.35), st.floats(-3.0, 3.0), st.floats(-2.0, 2.0), st.floats(1e2, 1e7))
def test_seeded_spectrum_nonnegative(D0_ratio, delta_La, delta_Lr, n):
    wp = seeded_point(fig1_laser(D0_ratio, delta_La=delta_La, delta_Lr=delta_Lr), n=n)
    if not build_system(Model.SEEDED, wp).is_stable:
        return
    res = compute_spectrum(wp, n=256)
    assert res.is_nonnegative()


def test_default_grid_excludes_zero_and_refines_peaks():
    wp = seeded_point(fig1_laser())
    grid = default_grid(wp, 2048)
    assert grid.size == 2048 and 0.0 not in grid and np.all(np.diff(grid) > 0)
    assert math.isclose(grid[-1], 10 * characteristic_scale(wp))
    res = compute_spectrum(wp)
    assert res.omega.size > grid.size and 0.0 not in res.omega
    # the refined maximum is at least as high as the coarse one
    assert res.values.max() >= snn(wp, grid).max()


def test_refine_peaks_inserts_linear_patch():
    w = np.linspace(-1, 1, 11)
    v = -(w - 0.35) ** 2
    out = refine_peaks(w, v, points=20)
    assert out.size == 11 + 18 and np.all(np.diff(out) > 0)
    assert np.all((out[~np.isin(out, w)] > 0.2) & (out[~np.isin(out, w)] < 0.6))
