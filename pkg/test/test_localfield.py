#!/usr/bin/env python
# -*- coding: UTF-8 -*-
import unittest

import numpy as np

from bandgap_emission.decay import RateResult
from bandgap_emission.errors import UnsupportedRegimeError
from bandgap_emission.farfield import AngularSpectrum, EnergyResult
from bandgap_emission.localfield import (
    corrected_energy,
    corrected_rates,
    local_field_factor,
)

RATES = RateResult(
    gamma_total=2.5,
    gamma_rad=0.75,
    quadrature_error=1e-9,
    guided_fraction=0.7,
    flags=("x",),
)


class TestLocalFieldFactor(unittest.TestCase):
    def test_values(self):
        test_cases = (
            (1.0, 1.0),
            (4.0, 16.0 / 9.0),
            (2.25, (6.75 / 5.5) ** 2),
            (4.0 + 1e-4j, abs(3.0 * (4.0 + 1e-4j) / (9.0 + 2e-4j)) ** 2),
        )
        for eps, expected in test_cases:
            with self.subTest(eps=eps):
                self.assertAlmostEqual(
                    local_field_factor(eps).factor_sq_abs, expected, places=14
                )

    def test_vacuum_is_identity(self):
        correction = local_field_factor(1.0)
        self.assertEqual(correction.factor, 1.0)
        self.assertEqual(correction.factor_sq_abs, 1.0)

    def test_unsupported_hosts(self):
        for eps in (0.0, -2.0, 4.0 + 0.1j, 1.0 + 0.01j):
            with self.subTest(eps=eps), self.assertRaises(UnsupportedRegimeError):
                local_field_factor(eps)


class TestCorrections(unittest.TestCase):
    def test_rates_scale(self):
        corrected = corrected_rates(RATES, 4.0)
        self.assertAlmostEqual(corrected.gamma_total, 2.5 * 16.0 / 9.0, places=13)
        self.assertAlmostEqual(corrected.gamma_rad, 0.75 * 16.0 / 9.0, places=13)
        self.assertAlmostEqual(corrected.quadrature_error, 1e-9 * 16.0 / 9.0, places=20)
        self.assertEqual(corrected.guided_fraction, RATES.guided_fraction)
        self.assertEqual(corrected.flags, RATES.flags)

    def test_ratio_is_invariant(self):
        for eps in (1.0, 2.25, 4.0, 12.0):
            with self.subTest(eps=eps):
                corrected = corrected_rates(RATES, eps)
                self.assertAlmostEqual(
                    corrected.gamma_ratio, RATES.gamma_ratio, delta=1e-15
                )

    def test_vacuum_host_leaves_rates(self):
        self.assertEqual(corrected_rates(RATES, 1.0), RATES)

    def test_energies_are_invariant(self):
        energy = EnergyResult(W_top=0.3, W_bottom=0.2, lost_fraction=0.5)
        spectrum = AngularSpectrum("above", np.linspace(0.0, 1.0, 3), np.ones(3), 1.0)
        for raw in (energy, spectrum):
            with self.subTest(type(raw).__name__):
                self.assertIs(corrected_energy(raw, 4.0), raw)

    def test_energy_rejects_lossy_host(self):
        energy = EnergyResult(W_top=0.3, W_bottom=0.2, lost_fraction=0.5)
        with self.assertRaises(UnsupportedRegimeError):
            corrected_energy(energy, 4.0 + 1.0j)

    def test_logs_correction(self):
        with self.assertLogs("bandgap_emission.localfield", "INFO") as logs:
            corrected_rates(RATES, 4.0)
        self.assertIn("1.7777777777", logs.output[0])


if __name__ == "__main__":
    unittest.main()
