#!/usr/bin/env python
# -*- coding: UTF-8 -*-
import json
import tempfile
import unittest
from pathlib import Path

from bandgap_emission.report import FORMATS, emit, to_csv, to_json, write
from bandgap_emission.sweep import ResultTable


def sample_table():
    return ResultTable(
        metadata={"scenario": "sample", "points": 2, "failed": 1},
        columns=["omega_A", "gamma_total", "quad_err", "flags"],
        rows=[
            [1.0, 0.1, 1e-7, "evanescent_clamped;normalization"],
            [1.1, float("nan"), float("nan"), "error:QuadratureError"],
        ],
    )


class TestReport(unittest.TestCase):
    def test_csv(self):
        self.assertEqual(
            to_csv(sample_table()),
            "omega_A,gamma_total,quad_err,flags\r\n"
            "1,0.10000000000000001,9.9999999999999995e-08,"
            "evanescent_clamped;normalization\r\n"
            "1.1000000000000001,nan,nan,error:QuadratureError\r\n",
        )

    def test_csv_single_row(self):
        table = ResultTable(metadata={}, columns=["omega_A", "flags"], rows=[[1.0, ""]])
        self.assertEqual(to_csv(table).splitlines(), ["omega_A,flags", "1,"])

    def test_json(self):
        document = json.loads(to_json(sample_table()))
        self.assertEqual(
            document["columns"], ["omega_A", "gamma_total", "quad_err", "flags"]
        )
        self.assertEqual(document["metadata"]["failed"], 1)
        self.assertEqual(
            document["rows"],
            [
                [1.0, 0.1, 1e-7, "evanescent_clamped;normalization"],
                [1.1, None, None, "error:QuadratureError"],
            ],
        )

    def test_emit(self):
        table = sample_table()
        self.assertEqual(FORMATS, ("csv", "json"))
        self.assertEqual(emit(table, "csv"), to_csv(table))
        self.assertEqual(emit(table, "json"), to_json(table))
        with self.assertRaises(ValueError):
            emit(table, "xlsx")

    def test_write(self):
        table = sample_table()
        with tempfile.TemporaryDirectory() as tmp_dir:
            for fmt in FORMATS:
                with self.subTest(fmt):
                    path = Path(tmp_dir) / f"result.{fmt}"
                    document = write(table, path, fmt)
                    self.assertEqual(path.read_bytes(), document.encode("utf-8"))

    def test_write_without_path(self):
        self.assertEqual(write(sample_table(), None, "csv"), to_csv(sample_table()))


if __name__ == "__main__":
    unittest.main()
