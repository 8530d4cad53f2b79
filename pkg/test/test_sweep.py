#!/usr/bin/env python
# -*- coding: UTF-8 -*-
import math
import unittest
from unittest import mock

import numpy as np

from bandgap_emission import __version__
from bandgap_emission._helper import ResultTestcase
from bandgap_emission.decay import cached_total_rate
from bandgap_emission.errors import QuadratureError, SweepError
from bandgap_emission.presets import PRESETS, VACUUM, get_document, get_scenario
from bandgap_emission.report import to_csv
from bandgap_emission.scenario import scenario_from_dict
from bandgap_emission.sweep import emission_report, run, table_columns
from bandgap_emission.utils import deep_merge

emission_report_orig = emission_report


def vacuum_scenario(outputs, omegas=(1.0, 1.1, 1.2), name="free-space"):
    document = get_document(
        {
            "structure": {"periods_up": 1, "periods_down": 1},
            "materials": {"high": VACUUM},
            "sweep": {"omega_A": list(omegas)},
            "outputs": outputs,
        }
    )
    return scenario_from_dict(document, name=name)


def failing_at(*omegas):
    def side_effect(stack, emitter, *args, **kwargs):
        if emitter.omega_A in omegas:
            raise QuadratureError("budget exhausted", value=0.0, error=1.0, panels=3)
        return emission_report_orig(stack, emitter, *args, **kwargs)

    return side_effect


class TestEmissionReport(ResultTestcase):
    def test_rates_only(self):
        scenario = vacuum_scenario({"quantities": ["gamma_total"]})
        stack = scenario.stack_at({})
        report = emission_report(stack, scenario.emitter_at(stack, {}), ["gamma_total"])
        self.assertIsNotNone(report.rates)
        self.assertIsNone(report.energy)
        self.assertIsNone(report.spectrum)
        self.expect_close(report.value("gamma_total"), 1.0, "gamma_total")

    def test_local_field_scales_rates(self):
        scenario = vacuum_scenario({"quantities": ["gamma_total", "W_top"]})
        stack = scenario.stack_at({})
        emitter = scenario.emitter_at(stack, {})
        report = emission_report(stack, emitter, ["gamma_total", "W_top"], eps_host=4.0)
        self.expect_close(report.value("gamma_total"), 16.0 / 9.0, "gamma_total")
        self.expect_close(report.value("W_top"), 0.5, "W_top")


class TestRun(ResultTestcase):
    def test_vacuum_preset(self):
        table = run(get_scenario("vacuum"))
        self.assertEqual(
            table.columns,
            [
                "omega_A",
                "gamma_total",
                "gamma_rad",
                "W_top",
                "W_bottom",
                "quad_err",
                "flags",
            ],
        )
        self.expect_column(table, "omega_A", [0.95, 1.0, 1.05])
        self.expect_column(table, "gamma_total", [1.0] * 3)
        self.expect_column(table, "gamma_rad", [1.0] * 3)
        self.expect_column(table, "W_top", [0.5] * 3)
        self.expect_column(table, "W_bottom", [0.5] * 3)
        self.expect_column(table, "quad_err", ["lt:1e-6"] * 3)
        self.expect_dict(
            table.metadata,
            {
                "scenario": "vacuum",
                "scenario_hash": r"re:^[0-9a-f]{32}$",
                "engine_version": __version__,
                "points": 3,
                "failed": 0,
            },
        )
        self.assertEqual(table.failures, 0)

    def test_worker_count_does_not_change_output(self):
        scenario = vacuum_scenario({"quantities": ["gamma_total", "W_top"]})
        self.assertEqual(to_csv(run(scenario, jobs=1)), to_csv(run(scenario, jobs=4)))

    def test_worker_count_on_device_preset(self):
        reduced = {
            "structure": {"periods_up": 2, "periods_down": 2},
            "materials": {"high": {"gamma": 1e-3}},
            "sweep": {"omega_A": [1.0, 1.1, 1.25]},
        }
        document = get_document(deep_merge(PRESETS["fig5b"], reduced))
        scenario = scenario_from_dict(document, name="fig5b")
        cached_total_rate.cache_clear()
        serial = run(scenario, jobs=1)
        cached_total_rate.cache_clear()
        parallel = run(scenario, jobs=3)
        self.assertEqual(serial.failures, 0)
        self.assertEqual(to_csv(serial), to_csv(parallel))

    def test_angular_rows(self):
        scenario = vacuum_scenario(
            {"quantities": ["W_theta", "W_top"], "theta_points": 4}, omegas=(1.0, 1.2)
        )
        table = run(scenario)
        self.assertEqual(
            table.columns, ["omega_A", "theta", "W_theta", "W_top", "quad_err", "flags"]
        )
        self.assertEqual(len(table.rows), 8)
        self.expect_column(table, "omega_A", [1.0] * 4 + [1.2] * 4)
        thetas = list(np.arange(4) * np.pi / 8.0)
        self.expect_column(table, "theta", thetas * 2, abs_tol=1e-15)
        expected = [3.0 / 8.0 * (1.0 + math.cos(theta) ** 2) for theta in thetas]
        self.expect_column(table, "W_theta", expected * 2)

    def test_columns_follow_axes(self):
        scenario = get_scenario("fig4a")
        self.assertEqual(
            table_columns(scenario), ["omega_A", "gamma", "W_top", "quad_err", "flags"]
        )

    @mock.patch("bandgap_emission.sweep.emission_report", side_effect=failing_at(1.1))
    def test_partial_failure(self, _):
        scenario = vacuum_scenario({"quantities": ["gamma_total"]})
        with self.assertLogs("bandgap_emission.sweep", "WARNING"):
            table = run(scenario)
        self.assertEqual(len(table.rows), 3)
        self.assertEqual(table.failures, 1)
        self.assertEqual(table.metadata["failed"], 1)
        failed = table.rows[1]
        self.assertEqual(failed[0], 1.1)
        self.assertTrue(math.isnan(failed[1]))
        self.assertTrue(math.isnan(failed[2]))
        self.assertEqual(failed[3], "error:QuadratureError")
        self.expect_close(table.rows[0][1], 1.0, "gamma_total")
        self.expect_close(table.rows[2][1], 1.0, "gamma_total")

    @mock.patch(
        "bandgap_emission.sweep.emission_report", side_effect=failing_at(1.0, 1.1, 1.2)
    )
    def test_all_points_fail(self, _):
        scenario = vacuum_scenario({"quantities": ["gamma_total"]})
        with self.assertRaises(SweepError) as context:
            run(scenario, jobs=2)
        self.assertEqual(len(context.exception.errors), 3)
        for _, error in context.exception.errors:
            self.assertIsInstance(error, QuadratureError)


if __name__ == "__main__":
    unittest.main()
