"""Forced two-phase response and traveling-wave kinematics."""

import math

import numpy as np
import pytest

from twmotor.stator import StatorGeometry
from twmotor.wave import (
    DriveConfig,
    WaveSolution,
    ideal_no_slip_speed,
    steady_wave_response,
    surface_state,
)

GEOM = StatorGeometry(mean_radius=0.0125, section_width=0.005,
                      section_thickness=0.0025, tooth_height=0.001,
                      drive_nodal_diameters=4)


@pytest.fixture(scope="module")
def pair(stator_model):
    return stator_model.pair


@pytest.fixture(scope="module")
def balanced(stator_model):
    f = stator_model.forcing_per_volt
    drive = DriveConfig(voltage=100.0)
    return steady_wave_response(stator_model.pair, f.f_cos * drive.voltage,
                                f.f_sin * drive.voltage, drive,
                                stator_model.damping_ratio)


class TestSteadyResponse:
    def test_resonant_purity(self, balanced):
        """A balanced quadrature drive at resonance is a pure forward wave."""
        assert balanced.w_backward < 1e-9 * balanced.w_forward

    def test_phase_reversal_swaps_components(self, stator_model):
        f = stator_model.forcing_per_volt
        fwd = steady_wave_response(stator_model.pair, f.f_cos * 100, f.f_sin * 100,
                                   DriveConfig(voltage=100, phase_offset=math.pi / 2),
                                   stator_model.damping_ratio)
        rev = steady_wave_response(stator_model.pair, f.f_cos * 100, f.f_sin * 100,
                                   DriveConfig(voltage=100, phase_offset=-math.pi / 2),
                                   stator_model.damping_ratio)
        assert rev.w_backward == pytest.approx(fwd.w_forward, rel=1e-12)
        assert rev.w_forward == pytest.approx(fwd.w_backward, abs=1e-12 * fwd.w_forward)

    def test_zero_phase_is_standing(self, stator_model):
        f = stator_model.forcing_per_volt
        standing = steady_wave_response(stator_model.pair, f.f_cos * 100,
                                        f.f_sin * 100,
                                        DriveConfig(voltage=100, phase_offset=0.0),
                                        stator_model.damping_ratio)
        assert standing.w_forward == pytest.approx(standing.w_backward, rel=1e-12)

    def test_resonant_amplitude_closed_form(self, stator_model, balanced):
        """|q| = F / (2 zeta omega_n^2) at resonance, per channel."""
        f = abs(stator_model.forcing_per_volt.f_cos) * 100.0
        wn = stator_model.pair.omega
        expected = f / (2.0 * stator_model.damping_ratio * wn * wn)
        assert abs(balanced.q_cos) == pytest.approx(expected, rel=1e-12)

    def test_zero_damping_rejected(self, stator_model):
        with pytest.raises(ValueError):
            steady_wave_response(stator_model.pair, 1.0, 1.0, DriveConfig(),
                                 zeta=0.0)

    def test_frequency_default_is_resonance(self, pair):
        assert DriveConfig().resolve_frequency(pair) == pair.frequency_hz
        assert DriveConfig(frequency=40e3).resolve_frequency(pair) == 40e3


class TestTravelingDecomposition:
    def test_forward_backward_partition(self):
        sol = WaveSolution(q_cos=1.0 + 0j, q_sin=-1j, omega=1.0,
                           shape_amp=2.0, nodal_diameters=4)
        assert sol.q_forward == pytest.approx((1.0 - 1j * -1j) / 2)
        assert sol.q_backward == pytest.approx((1.0 + 1j * -1j) / 2)
        assert sol.amplitude == sol.w_forward + sol.w_backward


class TestSurfaceState:
    def test_time_derivative_consistency(self, balanced):
        """w_dot and v_t agree with finite differences of w and u_t."""
        theta = np.linspace(0, 2 * math.pi, 17)
        t0, dt = 1.3e-4, 1e-12
        w0, wdot, ut0, vt = surface_state(balanced, GEOM, theta, t0)
        wp, _, utp, _ = surface_state(balanced, GEOM, theta, t0 + dt)
        wm, _, utm, _ = surface_state(balanced, GEOM, theta, t0 - dt)
        np.testing.assert_allclose(wdot, (wp - wm) / (2 * dt), rtol=1e-6,
                                   atol=1e-6 * np.max(np.abs(wdot)))
        np.testing.assert_allclose(vt, (utp - utm) / (2 * dt), rtol=1e-6,
                                   atol=1e-6 * np.max(np.abs(vt)))

    def test_tangent_follows_slope(self, balanced):
        """u_t = -(z_c/R) dw/dtheta at fixed time."""
        theta = np.linspace(0, 2 * math.pi, 4097)
        t0 = 7.7e-5
        w, _, ut, _ = surface_state(balanced, GEOM, theta, t0)
        dw = np.gradient(w, theta)
        expected = -(GEOM.contact_offset / GEOM.mean_radius) * dw
        # np.gradient is only first-order at the two endpoints
        np.testing.assert_allclose(ut[1:-1], expected[1:-1], rtol=1e-4,
                                   atol=1e-5 * np.max(np.abs(ut)))

    def test_crest_amplitude(self, balanced):
        theta = np.linspace(0, 2 * math.pi, 20001)
        w, *_ = surface_state(balanced, GEOM, theta, 0.0)
        assert np.max(np.abs(w)) == pytest.approx(balanced.amplitude, rel=1e-6)


class TestIdealSpeed:
    def test_magnitude(self, balanced):
        speed = ideal_no_slip_speed(balanced, GEOM)
        n, zc, R = 4, GEOM.contact_offset, GEOM.mean_radius
        expected = n * zc * balanced.omega * balanced.w_forward / R**2
        assert abs(speed) == pytest.approx(expected, rel=1e-12)

    def test_forward_wave_drives_positive(self, balanced):
        assert ideal_no_slip_speed(balanced, GEOM) > 0

    def test_reversed_drive_flips_sign(self, stator_model):
        f = stator_model.forcing_per_volt
        rev = steady_wave_response(stator_model.pair, f.f_cos * 100, f.f_sin * 100,
                                   DriveConfig(voltage=100, phase_offset=-math.pi / 2),
                                   stator_model.damping_ratio)
        assert ideal_no_slip_speed(rev, GEOM) < 0

    def test_standing_wave_rejected(self, stator_model):
        f = stator_model.forcing_per_volt
        standing = steady_wave_response(stator_model.pair, f.f_cos * 100,
                                        f.f_sin * 100,
                                        DriveConfig(voltage=100, phase_offset=0.0),
                                        stator_model.damping_ratio)
        with pytest.raises(ValueError, match="standing"):
            ideal_no_slip_speed(standing, GEOM)

    def test_zero_drive_is_zero_speed(self, pair):
        sol = WaveSolution(q_cos=0j, q_sin=0j, omega=pair.omega,
                           shape_amp=pair.amp, nodal_diameters=4)
        assert ideal_no_slip_speed(sol, GEOM) == 0.0
