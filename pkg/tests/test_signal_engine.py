import mpmath
import numpy as np
import pytest

from qls_equiv import (FrequencyGrid, MatterParams, ProbeState, QuadratureSpec, QuadratureUnderResolved,
                       condition_on_reference, conventional_probe, equivalence_report, heralded_signal,
                       pump_probe_signal, spectrum)
from qls_equiv.pulses import DEFAULT_GRID, biphoton_amplitude
from qls_equiv.signal_engine import DEFAULT_OMEGA_AXIS, heralded_density, input_density

from test_matter_response import mp_f_tilde

SMALL_OMEGA = FrequencyGrid(10000.0, 12000.0, 21)
SMALL_T0 = np.array([0.0, 40.0, 120.0])


def test_single_point_against_adaptive_quadrature(fig2_probe, ref_matter):
    # independent: mpmath adaptive integration of the Gaussian probe times F~
    omega, t0 = 10850.0, 60.0
    mpmath.mp.dps = 20
    norm = (np.pi * 600.0 ** 2) ** -0.25

    def xi(w):
        return norm * mpmath.exp(-(w - 11000) ** 2 / (2 * 600.0 ** 2))

    def integrand(wp):
        return mpmath.re(xi(omega) * xi(wp) * mp_f_tilde(float(wp), omega, t0))

    exact = -float(mpmath.quad(integrand, [4000, 10000, 10850, 11200, 12000, 18000]))
    got = pump_probe_signal(fig2_probe, ref_matter, 1.0, omega, t0)
    assert got == pytest.approx(exact, rel=1e-7)


def test_point_function_matches_spectrum(fig2_probe, ref_matter):
    spec = spectrum(ProbeState.coherent(fig2_probe, 3.0), ref_matter, SMALL_OMEGA, SMALL_T0)
    for i in (0, 7, 20):
        for j, t0 in enumerate(SMALL_T0):
            v = pump_probe_signal(fig2_probe, ref_matter, 3.0, SMALL_OMEGA.omega[i], t0)
            assert spec.values[i, j] == pytest.approx(v, rel=1e-12, abs=1e-14)


def test_heralded_point_matches_spectrum(ref_biphoton, ref_matter):
    spec = spectrum(ProbeState.heralded(ref_biphoton, 10400.0), ref_matter, SMALL_OMEGA, SMALL_T0)
    v = heralded_signal(ref_biphoton, 10400.0, ref_matter, SMALL_OMEGA.omega[9], SMALL_T0[1])
    assert spec.values[9, 1] == pytest.approx(v, rel=1e-12)


def test_threads_do_not_change_output(fig2_probe, ref_matter):
    probe = ProbeState.coherent(fig2_probe, 1.0)
    a = spectrum(probe, ref_matter, SMALL_OMEGA, np.linspace(0, 150, 9), threads=1)
    b = spectrum(probe, ref_matter, SMALL_OMEGA, np.linspace(0, 150, 9), threads=4)
    assert np.array_equal(a.values, b.values)


def test_fock_equals_coherent_m1(fig2_probe, ref_matter):
    a = spectrum(ProbeState.fock(fig2_probe), ref_matter, SMALL_OMEGA, SMALL_T0)
    b = spectrum(ProbeState.coherent(fig2_probe, 1.0), ref_matter, SMALL_OMEGA, SMALL_T0)
    assert np.array_equal(a.values, b.values)


def test_zero_scale_gives_zero_signal(fig2_probe):
    spec = spectrum(ProbeState.coherent(fig2_probe, 1.0), MatterParams(scale=0.0), SMALL_OMEGA, SMALL_T0)
    assert np.all(spec.values == 0)


def test_linear_in_scale(fig2_probe):
    probe = ProbeState.coherent(fig2_probe, 1.0)
    a = spectrum(probe, MatterParams(scale=1.0), SMALL_OMEGA, SMALL_T0).values
    b = spectrum(probe, MatterParams(scale=7.5), SMALL_OMEGA, SMALL_T0).values
    np.testing.assert_allclose(b, 7.5 * a, rtol=1e-12, atol=1e-12 * np.abs(b).max())


def test_profile_grid_must_match(fig2_probe, ref_matter):
    other = QuadratureSpec(FrequencyGrid(7000.0, 15000.0, 1601))
    with pytest.raises(ValueError):
        pump_probe_signal(fig2_probe, ref_matter, 1.0, 11000.0, 0.0, quad=other)
    with pytest.raises(ValueError):
        pump_probe_signal(fig2_probe, ref_matter, 0.0, 11000.0, 0.0)


def test_verify_passes_on_defaults(fig2_probe, ref_matter):
    pump_probe_signal(fig2_probe, ref_matter, 1.0, 10800.0, 30.0, verify=True)


def test_verify_flags_coarse_grid():
    grid = FrequencyGrid(7000.0, 15000.0, 41)
    probe = conventional_probe(11000.0, 600.0, grid)
    sharp = MatterParams(gamma=5.0, k_transfer=5.0)
    with pytest.raises(QuadratureUnderResolved):
        pump_probe_signal(probe, sharp, 1.0, 10800.0, 30.0, verify=True)


def test_negative_delay_flag(fig2_probe, ref_matter):
    spec = spectrum(ProbeState.coherent(fig2_probe), ref_matter, SMALL_OMEGA, np.array([-10.0, 0.0]))
    assert spec.metadata["negative_delays"]
    assert not spectrum(ProbeState.coherent(fig2_probe), ref_matter, SMALL_OMEGA, SMALL_T0).metadata["negative_delays"]


def test_spectrum_shape(fig2_probe, ref_matter):
    spec = spectrum(ProbeState.coherent(fig2_probe), ref_matter, SMALL_OMEGA, SMALL_T0)
    assert spec.values.shape == (21, 3) and spec.values.dtype == float


def test_equivalence_report_small_grid(ref_biphoton, ref_matter):
    report = equivalence_report(ref_biphoton, 11400.0, 1e6, ref_matter, SMALL_OMEGA, SMALL_T0)
    _, weight = condition_on_reference(ref_biphoton, 11400.0)
    assert report.analytic_scale == pytest.approx(1e6 / weight, rel=1e-15)
    assert report.fitted_scale == pytest.approx(report.analytic_scale, rel=1e-9)
    assert report.max_rel_deviation < 1e-12


def test_densities(ref_biphoton, fig2_probe):
    w = DEFAULT_OMEGA_AXIS.omega
    assert np.allclose(input_density(fig2_probe, 2.0, w), 2 * np.abs(fig2_probe.at(w)) ** 2, rtol=1e-15)
    profile, weight = condition_on_reference(ref_biphoton, 10400.0)
    np.testing.assert_allclose(heralded_density(ref_biphoton, 10400.0, w),
                               weight * input_density(profile, 1.0, w), rtol=1e-10, atol=1e-20)


def test_default_grid_is_wide_enough(fig2_probe):
    # the probe decays to below 1e-8 of its peak at both ends of the quadrature grid
    a = np.abs(fig2_probe.amplitude)
    assert max(a[0], a[-1]) < 1e-8 * a.max()
    assert fig2_probe.grid == DEFAULT_GRID


def test_heralded_cross_path_identity(ref_biphoton, ref_matter):
    omega_r = 11400.0
    profile, weight = condition_on_reference(ref_biphoton, omega_r)
    for omega in (10800.0, 11000.0, 11083.0, 11300.0):
        for t0 in (0.0, 35.0, 140.0):
            h = heralded_signal(ref_biphoton, omega_r, ref_matter, omega, t0)
            p = pump_probe_signal(profile, ref_matter, 1.0, omega, t0)
            assert h == pytest.approx(weight * p, rel=1e-9)


def test_heralded_signal_vanishes_outside_support(ref_biphoton, ref_matter):
    spec = spectrum(ProbeState.heralded(ref_biphoton, 11400.0), ref_matter, DEFAULT_OMEGA_AXIS, SMALL_T0)
    amp = np.abs(biphoton_amplitude(ref_biphoton, DEFAULT_OMEGA_AXIS.omega, 11400.0))
    far = amp < 1e-10 * amp.max()
    assert far.any()
    # the signal is linear in the prefactor Phi*(omega), so it falls off like the amplitude
    assert np.abs(spec.values[far]).max() < 1e-10 * np.abs(spec.values).max()


def test_heralded_feature_follows_conditioned_window(ref_biphoton, ref_matter):
    spec = spectrum(ProbeState.heralded(ref_biphoton, 11400.0), ref_matter, DEFAULT_OMEGA_AXIS,
                    np.linspace(0, 150, 16))
    peak = DEFAULT_OMEGA_AXIS.omega[np.argmax(np.abs(spec.values).max(axis=1))]
    assert abs(peak - 11100.0) <= ref_matter.gamma


@pytest.mark.parametrize("omega, t0", [(10800.0, 0.0), (11200.0, 100.0), (10500.0, 37.0), (12000.0, 150.0)])
def test_against_fourfold_refined_quadrature(fig2_probe, ref_matter, omega, t0):
    fine = DEFAULT_GRID.refined(4)
    ref = pump_probe_signal(conventional_probe(11000.0, 600.0, fine), ref_matter, 1e6, omega, t0)
    assert pump_probe_signal(fig2_probe, ref_matter, 1e6, omega, t0) == pytest.approx(ref, rel=1e-6)


def test_equivalence_m1_and_axis_doubling(ref_biphoton, ref_matter):
    _, weight = condition_on_reference(ref_biphoton, 10400.0)
    r1 = equivalence_report(ref_biphoton, 10400.0, 1.0, ref_matter, SMALL_OMEGA, SMALL_T0)
    assert r1.fitted_scale == pytest.approx(1.0 / weight, rel=1e-9)
    doubled = FrequencyGrid(SMALL_OMEGA.omega_min, SMALL_OMEGA.omega_max, 2 * SMALL_OMEGA.n_points - 1)
    r2 = equivalence_report(ref_biphoton, 10400.0, 1.0, ref_matter, doubled, SMALL_T0)
    assert max(r1.max_rel_deviation, r2.max_rel_deviation) < 1e-12


def test_sign_of_the_signal(fig2_probe, ref_matter):
    # -Re of the correlator integral is positive on the absorption features for this F~
    spec = spectrum(ProbeState.coherent(fig2_probe, 1.0), ref_matter)
    s = spec.values
    i_minus = np.argmin(np.abs(spec.omega_axis.omega - 10800.0))
    assert s[i_minus, 0] > 0
    assert np.all(spec.omega_axis.integrate(s, axis=0) > 0)
