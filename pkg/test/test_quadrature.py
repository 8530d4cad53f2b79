#!/usr/bin/env python
# -*- coding: UTF-8 -*-
import unittest

import numpy as np
from scipy.integrate import quad

from bandgap_emission.errors import InvalidParameterError, QuadratureError
from bandgap_emission.quadrature import (
    BRANCH_GUARD,
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    Integral,
    PanelBudget,
    QuadratureSettings,
    Resonance,
    Segment,
    adaptive,
    find_resonances,
    integrate,
    merge_flags,
    pole_integral,
    subtracted,
    tail,
    trapezoid_oracle,
    windows,
)

POLE = complex(0.5, 1e-3)
RESIDUE = complex(0.3, 0.7)


def lorentzian(k):
    return (RESIDUE / (k - POLE)).real


def reference(func, lower=0.0, upper=1.0, points=(0.5,)):
    value, _ = quad(
        func, lower, upper, points=points, limit=500, epsabs=1e-14, epsrel=1e-13
    )
    return value


class TestKronrodRule(unittest.TestCase):
    def test_tables(self):
        self.assertEqual(NODES.shape, (15,))
        self.assertTrue(np.all(np.diff(NODES) > 0.0))
        self.assertAlmostEqual(KRONROD_WEIGHTS.sum(), 2.0, places=14)
        self.assertAlmostEqual(GAUSS_WEIGHTS.sum(), 2.0, places=14)
        np.testing.assert_allclose(NODES, -NODES[::-1], atol=0.0)

    def test_polynomial_in_one_panel(self):
        result = adaptive(lambda x: x**5, [0.0, 1.0])
        self.assertAlmostEqual(result.value, 1.0 / 6.0, places=15)
        self.assertEqual(result.panels, 1)
        self.assertLess(result.error, 1e-14)

    def test_smooth(self):
        test_cases = (
            ("sin", np.sin, [0.0, np.pi], 2.0),
            ("exp", np.exp, [-1.0, 0.0, 2.0], np.exp(2.0) - np.exp(-1.0)),
            (
                "oscillating",
                lambda x: np.cos(40.0 * x),
                [0.0, 1.0],
                np.sin(40.0) / 40.0,
            ),
        )
        for name, func, breakpoints, expected in test_cases:
            with self.subTest(name):
                result = adaptive(func, breakpoints)
                self.assertAlmostEqual(result.value, expected, delta=1e-9)
                self.assertLessEqual(
                    abs(result.value - expected), 10.0 * result.error + 1e-14
                )

    def test_kink_is_resolved(self):
        result = adaptive(lambda x: np.abs(x - 0.3), [0.0, 1.0])
        self.assertAlmostEqual(result.value, 0.5 * (0.3**2 + 0.7**2), delta=1e-8)
        self.assertGreater(result.panels, 1)

    def test_empty_interval(self):
        self.assertEqual(adaptive(np.sin, [1.0]).value, 0.0)
        self.assertEqual(adaptive(np.sin, [1.0, 1.0]).value, 0.0)

    def test_budget_exhausted(self):
        settings = QuadratureSettings(rel_tol=1e-14, abs_tol=0.0, budget=3)
        with self.assertRaises(QuadratureError) as context:
            adaptive(lambda x: np.abs(x - 0.3) ** 0.5, [0.0, 1.0], settings)
        self.assertGreater(context.exception.panels, 3)
        self.assertGreater(context.exception.value, 0.0)

    def test_shared_budget(self):
        budget = PanelBudget(100)
        adaptive(np.sin, [0.0, 1.0], budget=budget)
        adaptive(np.cos, [0.0, 1.0], budget=budget)
        self.assertGreaterEqual(budget.used, 2)
        self.assertAlmostEqual(
            budget.partial, (1.0 - np.cos(1.0)) + np.sin(1.0), places=12
        )

    def test_not_finite(self):
        with self.assertRaises(FloatingPointError):
            adaptive(lambda x: np.full_like(x, np.nan), [0.0, 1.0])

    def test_segments_share_one_target(self):
        segments = [Segment(np.sin, [0.0, np.pi]), Segment(np.exp, [0.0, 0.5, 1.0])]
        result = integrate(segments, offset=0.5)
        expected = 2.0 + (np.e - 1.0) + 0.5
        self.assertAlmostEqual(result.value, expected, delta=1e-9)
        self.assertGreaterEqual(result.panels, 3)
        self.assertEqual(integrate([], offset=0.25).value, 0.25)

    def test_cancellation_stops_at_roundoff(self):
        result = adaptive(np.sin, [0.0, 2.0 * np.pi])
        self.assertAlmostEqual(result.value, 0.0, delta=1e-12)
        self.assertIn("quad_roundoff", result.flags)
        self.assertLess(result.panels, 200)

    def test_narrow_peaks_stay_within_budget(self):
        for width in (1e-5, 1e-7, 1e-9):
            with self.subTest(width=width):

                def peak(k, width=width):
                    return width / ((k - 0.5) ** 2 + width**2)

                budget = PanelBudget(QuadratureSettings().budget)
                result = adaptive(peak, [0.0, 0.5, 1.0], budget=budget)
                expected = 2.0 * np.arctan(0.5 / width)
                self.assertAlmostEqual(result.value / expected, 1.0, delta=1e-7)
                self.assertLess(budget.used, 2000)

    def test_settings(self):
        self.assertEqual(QuadratureSettings().with_tolerance(1e-6).rel_tol, 1e-6)
        for kwargs in ({"rel_tol": 0.0}, {"abs_tol": -1.0}, {"budget": 0}):
            with self.subTest(**kwargs):
                with self.assertRaises(InvalidParameterError):
                    QuadratureSettings(**kwargs)


class TestIntegral(unittest.TestCase):
    def test_add(self):
        total = Integral(1.0, 1e-9, 3, ("a",)) + Integral(2.0, 2e-9, 4, ("b", "a"))
        self.assertEqual(total.value, 3.0)
        self.assertAlmostEqual(total.error, 3e-9)
        self.assertEqual(total.panels, 7)
        self.assertEqual(total.flags, ("a", "b"))

    def test_scaled(self):
        scaled = Integral(2.0, 1e-9).scaled(-0.5)
        self.assertEqual(scaled.value, -1.0)
        self.assertEqual(scaled.error, 5e-10)

    def test_merge_flags(self):
        self.assertEqual(merge_flags(["x", "y"], (), ["y", "z"]), ("x", "y", "z"))


class TestResonances(unittest.TestCase):
    @staticmethod
    def denominator(k):
        return (k - complex(0.4, 1e-4)) * (k - complex(0.7, 2e-4))

    def test_find_resonances(self):
        found = find_resonances(self.denominator, 0.0, 1.0)
        self.assertEqual(len(found), 2)
        for item, pole, width in zip(found, (0.4 + 1e-4j, 0.7 + 2e-4j), (1e-4, 2e-4)):
            with self.subTest(pole=pole):
                self.assertAlmostEqual(item.k0, pole.real, delta=1e-7)
                self.assertAlmostEqual(item.half_width / width, 1.0, delta=0.05)
                self.assertAlmostEqual(item.pole, pole, delta=1e-6)

    def test_branch_points_are_not_resonances(self):
        def kinked(k):
            return 0.3 + 2.0 * np.sqrt(k - 1.0 + 0j)

        found = find_resonances(kinked, 0.0, 2.0)
        self.assertEqual(len(found), 1)
        self.assertAlmostEqual(found[0].k0, 1.0, delta=1e-3)
        self.assertLess(abs(found[0].k0 - 1.0), BRANCH_GUARD * found[0].half_width)
        self.assertEqual(find_resonances(kinked, 0.0, 2.0, branch_points=[1.0]), [])

    def test_branch_points_keep_nearby_poles(self):
        found = find_resonances(self.denominator, 0.0, 1.0, branch_points=[0.45])
        self.assertEqual([round(item.k0, 6) for item in found], [0.4, 0.7])

    def test_nothing_to_find(self):
        self.assertEqual(find_resonances(lambda k: np.ones_like(k) + 0j, 0.0, 1.0), [])
        self.assertEqual(find_resonances(self.denominator, 1.0, 1.0), [])

    def test_windows(self):
        first = Resonance(0.4, 1e-5j, 1.0, 1e-4)
        second = Resonance(0.401, 1e-5j, 1.0, 1e-2)
        result = windows([second, first], 0.0, 1.0, 100.0)
        self.assertEqual([item[2] for item in result], [first, second])
        (a1, b1, _), (a2, b2, _) = result
        self.assertAlmostEqual(a1, 0.4 - 0.005)
        self.assertLessEqual(b1, a2)
        self.assertAlmostEqual(b1, 0.40025)
        self.assertAlmostEqual(b2, 0.5 * (0.401 + 1.0))

    def test_pole_integral(self):
        self.assertAlmostEqual(
            pole_integral(RESIDUE, POLE, 0.0, 1.0), reference(lorentzian), delta=1e-10
        )
        on_axis = pole_integral(1j, complex(0.5, 0.0), 0.0, 1.0)
        self.assertAlmostEqual(on_axis, -np.pi, places=14)
        near_axis = pole_integral(1j, complex(0.5, 1e-12), 0.0, 1.0)
        self.assertAlmostEqual(near_axis, on_axis, places=9)
        outside = pole_integral(1j, complex(2.0, 0.0), 0.0, 1.0)
        self.assertAlmostEqual(outside, 0.0, places=14)

    def test_subtracted(self):
        resonance = Resonance(0.5, -1e-3j, 1.0 + 0j, 1e-3)
        self.assertAlmostEqual(resonance.pole, POLE)
        budget = PanelBudget(1000)
        settings = QuadratureSettings()
        result = subtracted(
            lambda k: lorentzian(k) + k**2,
            lambda k: RESIDUE,
            resonance,
            0.0,
            1.0,
            settings,
            budget,
        )
        self.assertAlmostEqual(
            result.value, reference(lorentzian) + 1.0 / 3.0, delta=1e-10
        )


class TestTailAndOracle(unittest.TestCase):
    def test_tail(self):
        settings = QuadratureSettings()
        result = tail(
            lambda u: np.exp(-10.0 * u), 1.0, settings, PanelBudget(1000), running=1.0
        )
        self.assertAlmostEqual(result.value, 0.1 * np.exp(-10.0), delta=1e-13)
        self.assertEqual(result.flags, ())

    def test_tail_cap(self):
        settings = QuadratureSettings(u_cap=3.0)
        with self.assertLogs("bandgap_emission.quadrature", level="WARNING"):
            result = tail(lambda u: np.ones_like(u), 1.0, settings, PanelBudget(1000))
        self.assertIn("tail_cap", result.flags)
        self.assertAlmostEqual(result.value, 2.0)

    def test_trapezoid_oracle(self):
        self.assertAlmostEqual(
            trapezoid_oracle(np.sin, 0.0, np.pi, 100_000), 2.0, delta=1e-8
        )

    def test_trapezoid_oracle_refines_resonances(self):
        width = 1e-6
        resonance = Resonance(0.5, 1j * width, 1.0, width)

        def peak(k):
            return width / ((k - 0.5) ** 2 + width**2)

        expected = 2.0 * np.arctan(0.5 / width)
        value = trapezoid_oracle(peak, 0.0, 1.0, 200_000, [resonance])
        self.assertAlmostEqual(value / expected, 1.0, delta=1e-7)
