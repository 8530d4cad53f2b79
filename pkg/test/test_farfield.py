#!/usr/bin/env python
# -*- coding: UTF-8 -*-
import unittest

import numpy as np
from scipy.integrate import quad

from bandgap_emission.decay import EmitterConfig
from bandgap_emission.dispersion import VACUUM, Constant, DrudeLorentz
from bandgap_emission.errors import InvalidSideError
from bandgap_emission.farfield import (
    DEFAULT_THETA_POINTS,
    AngularSpectrum,
    angular_density,
    angular_energy,
    balance_identity,
    farfield_amplitudes,
    side_energy_kpar,
    side_energy_theta,
    solid_angle_energy,
    total_energy,
)
from bandgap_emission.presets import OMEGA_P_DESIGN, OMEGA_T
from bandgap_emission.stack import build_bragg

TWO_PI = 2.0 * np.pi
HIGH = DrudeLorentz.from_ratio(OMEGA_P_DESIGN, OMEGA_T, 1e-3)


def vacuum_stack():
    return build_bragg(1, 1, False, VACUUM, VACUUM)


class TestAmplitudes(unittest.TestCase):
    def test_free_space_amplitudes(self):
        stack = vacuum_stack()
        emitter = EmitterConfig(1.0, 0.1)
        k_par = np.linspace(0.0, 0.99, 7) * TWO_PI
        for side in ("above", "below"):
            with self.subTest(side):
                g = farfield_amplitudes(stack, emitter, k_par, side)
                self.assertEqual(g.side, side)
                for values in (g.p_plus, g.p_minus, g.s_plus):
                    np.testing.assert_allclose(np.abs(values), 1.0, rtol=1e-12)

    def test_invalid_side(self):
        stack = vacuum_stack()
        emitter = EmitterConfig(1.0, 0.1)
        with self.assertRaises(InvalidSideError):
            farfield_amplitudes(stack, emitter, 0.0, "left")

    def test_absorbing_side(self):
        stack = build_bragg(1, 1, False, VACUUM, VACUUM, eps_outer=Constant(2.0 + 0.1j))
        emitter = EmitterConfig(1.0, 0.1)
        for side in ("above", "below"):
            with self.subTest(side), self.assertRaises(InvalidSideError):
                farfield_amplitudes(stack, emitter, 0.0, side)


class TestAngularDensity(unittest.TestCase):
    def test_free_space_pattern(self):
        stack = vacuum_stack()
        thetas = np.array([0.0, 0.25 * np.pi, 0.5 * np.pi])
        test_cases = (
            ("parallel", 3.0 / 8.0 * (1.0 + np.cos(thetas) ** 2)),
            ("perpendicular", 3.0 / 4.0 * np.sin(thetas) ** 2),
        )
        for orientation, expected in test_cases:
            with self.subTest(orientation):
                emitter = EmitterConfig(1.0, 0.125, orientation)
                values = angular_density(stack, emitter, thetas, "above", 1.0)
                np.testing.assert_allclose(values, expected, rtol=1e-12, atol=1e-15)

    def test_perpendicular_dipole_is_dark_on_axis(self):
        stack = vacuum_stack()
        emitter = EmitterConfig(1.0, 0.125, "perpendicular")
        self.assertEqual(float(angular_density(stack, emitter, 0.0, "below")), 0.0)

    def test_scales_with_inverse_rate(self):
        stack = vacuum_stack()
        emitter = EmitterConfig(1.0, 0.125)
        thetas = np.linspace(0.0, 1.5, 5)
        np.testing.assert_allclose(
            angular_density(stack, emitter, thetas, "above", 4.0),
            0.25 * angular_density(stack, emitter, thetas, "above", 1.0),
            rtol=1e-14,
        )

    def test_angular_energy(self):
        stack = vacuum_stack()
        emitter = EmitterConfig(1.0, 0.125)
        spectrum = angular_energy(stack, emitter)
        self.assertEqual(spectrum.side, "above")
        self.assertEqual(len(spectrum.thetas), DEFAULT_THETA_POINTS)
        self.assertEqual(spectrum.thetas[0], 0.0)
        self.assertLess(spectrum.thetas[-1], 0.5 * np.pi)
        self.assertAlmostEqual(spectrum.values[0], 0.75, delta=1e-6)
        self.assertEqual(spectrum.peak_angle(), 0.0)

    def test_angular_energy_invalid_side(self):
        with self.assertRaises(InvalidSideError):
            angular_energy(vacuum_stack(), EmitterConfig(1.0, 0.125), side="sideways")


class TestAngularSpectrum(unittest.TestCase):
    thetas = np.arange(91) * np.pi / 180.0

    def test_peak_and_half_width(self):
        values = np.exp(-(((self.thetas - 0.5) / 0.1) ** 2))
        spectrum = AngularSpectrum("above", self.thetas, values, 1.0)
        self.assertAlmostEqual(spectrum.peak_angle(), 29.0 * np.pi / 180.0, places=14)
        self.assertAlmostEqual(spectrum.half_width(), 5.0 * np.pi / 180.0, places=14)

    def test_half_width_without_drop(self):
        spectrum = AngularSpectrum("below", self.thetas, np.linspace(0.1, 1.0, 91), 1.0)
        self.assertEqual(spectrum.peak_angle(), self.thetas[-1])
        self.assertEqual(spectrum.half_width(), 0.0)


class TestSolidAngle(unittest.TestCase):
    def test_azimuthal_integral(self):
        stack = build_bragg(2, 2, False, VACUUM, HIGH)
        for orientation in ((0.0, 1.0), (1.0, 0.0), (0.3, 0.7)):
            emitter = EmitterConfig(1.1, 0.4 * stack.emitter_thickness, orientation)
            for side in ("above", "below"):
                for theta in (0.1, 0.7, 1.3):
                    with self.subTest(orientation=orientation, side=side, theta=theta):
                        gamma = angular_energy(stack, emitter, side, [theta]).values[0]
                        integral, _ = quad(
                            lambda phi: float(
                                solid_angle_energy(stack, emitter, side, theta, phi)
                            ),
                            0.0,
                            TWO_PI,
                            epsabs=0.0,
                            epsrel=1e-12,
                        )
                        self.assertAlmostEqual(integral / gamma, 1.0, delta=1e-9)

    def test_azimuthal_symmetry_of_perpendicular_dipole(self):
        stack = build_bragg(2, 2, False, VACUUM, HIGH)
        emitter = EmitterConfig(1.1, 0.5 * stack.emitter_thickness, "perpendicular")
        phis = np.linspace(0.0, TWO_PI, 9)
        values = solid_angle_energy(stack, emitter, "above", 0.6, phis)
        np.testing.assert_allclose(values, values[0], rtol=1e-13)


class TestEnergy(unittest.TestCase):
    def test_free_space(self):
        stack = vacuum_stack()
        for orientation in ("parallel", "perpendicular", "isotropic"):
            with self.subTest(orientation):
                result = total_energy(stack, EmitterConfig(1.0, 0.125, orientation))
                self.assertAlmostEqual(result.W_top, 0.5, delta=1e-6)
                self.assertAlmostEqual(result.W_bottom, 0.5, delta=1e-6)
                self.assertAlmostEqual(result.lost_fraction, 0.0, delta=2e-6)
                self.assertNotIn("form_mismatch", result.flags)
                self.assertNotIn("normalization", result.flags)

    def test_forms_agree(self):
        stack = build_bragg(2, 2, False, VACUUM, HIGH)
        emitter = EmitterConfig(1.1, 0.5 * stack.emitter_thickness)
        for side in ("above", "below"):
            with self.subTest(side):
                by_angle = side_energy_theta(stack, emitter, side, 1.0)
                by_kpar = side_energy_kpar(stack, emitter, side, 1.0)
                self.assertAlmostEqual(by_angle.value / by_kpar.value, 1.0, delta=1e-7)

    def test_centered_emitter_radiates_symmetrically(self):
        stack = build_bragg(3, 3, False, VACUUM, HIGH)
        emitter = EmitterConfig(1.1, 0.5 * stack.emitter_thickness, "isotropic")
        result = total_energy(stack, emitter, check_forms=False)
        self.assertGreater(result.W_top, 0.0)
        self.assertAlmostEqual(result.W_top / result.W_bottom, 1.0, delta=1e-9)
        self.assertLessEqual(result.W_top + result.W_bottom, 1.0 + 1e-6)

    def test_free_space_balance(self):
        emitter = EmitterConfig(1.0, 0.125, "isotropic")
        self.assertAlmostEqual(
            balance_identity(vacuum_stack(), emitter), 0.0, delta=1e-7
        )


if __name__ == "__main__":
    unittest.main()
