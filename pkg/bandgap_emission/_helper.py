#!/usr/bin/env python
# -*- coding: UTF-8 -*-
"""assertion helpers shared by the test-suite and acceptance checks"""

import math
import operator
import os
import re
import sys
from typing import Any, Dict, Mapping, Optional
from unittest import TestCase

import numpy as np

from .sweep import ResultTable
from .utils import digest

COUNT_REX = re.compile(r"^(?P<operation>min|max)?count:(?P<count>\d+)$")
CLOSE_REX = re.compile(r"^(?P<operation>approx|lt|gt):(?P<value>[-+.\deE]+)$")


def slow_tests_enabled() -> bool:
    return "--slow" in sys.argv or "test_slow" in os.environ


class ResultTestcase(TestCase):
    rel_tol = 1e-6
    abs_tol = 0.0

    def assert_field_is_valid(self, expr: bool, field: str, msg: str) -> None:
        if not expr:
            msg = self._formatMessage(msg, f"Mismatch in field {field!r}")
            raise self.failureException(msg)

    def assert_field_is_present(self, mapping: Mapping[str, Any], *fields: str) -> None:
        missing = tuple(field for field in fields if field not in mapping)
        if missing:
            fields_str = ", ".join(repr(field) for field in missing)
            plural_s = "s" if len(missing) > 1 else ""
            raise self.failureException(f"Missing field{plural_s} {fields_str}")

    def expect_close(
        self,
        got: Any,
        expected: float,
        field: str,
        rel_tol: Optional[float] = None,
        abs_tol: Optional[float] = None,
    ) -> None:
        rel_tol = self.rel_tol if rel_tol is None else rel_tol
        abs_tol = self.abs_tol if abs_tol is None else abs_tol
        self.assert_field_is_valid(
            isinstance(got, (int, float, np.floating)) and math.isfinite(got),
            field,
            f"expected a finite number, but got {got!r}",
        )
        self.assert_field_is_valid(
            math.isclose(got, expected, rel_tol=rel_tol, abs_tol=abs_tol),
            field,
            f"expected {expected!r} within rel={rel_tol:g} abs={abs_tol:g}, "
            f"got {got!r}",
        )

    def expect_value(self, got, expected, field):
        if isinstance(expected, str):
            self.expect_string(got, expected, field)
        elif isinstance(expected, type) or (
            isinstance(expected, tuple)
            and all(isinstance(item, type) for item in expected)
        ):
            self.assert_field_is_valid(
                isinstance(got, expected),
                field,
                f"expected type {expected!r}, "
                f"but got value {got!r} of type {type(got)!r}",
            )
        elif isinstance(expected, float):
            self.expect_close(got, expected, field)
        elif isinstance(expected, dict) and isinstance(got, Mapping):
            self.expect_dict(got, expected)
        elif isinstance(expected, list) and isinstance(got, (list, tuple, np.ndarray)):
            self.assert_field_is_valid(
                len(expected) == len(got),
                field,
                f"expected a sequence of length {len(expected):d}, "
                f"but got length {len(got):d}",
            )
            for index, (item_got, item_expected) in enumerate(zip(got, expected)):
                self.expect_value(item_got, item_expected, f"{field}[{index}]")
        else:
            self.expect_field(got, expected, field)

    def expect_field(self, got: Any, expected: Any, field: str):
        self.assert_field_is_valid(
            expected == got,
            field,
            f"expected {expected!r}, got {got!r}",
        )

    def expect_string(self, got: Any, expected: str, field: str):
        count_match = COUNT_REX.match(expected)
        close_match = CLOSE_REX.match(expected)
        if count_match:
            self.assert_field_is_valid(
                hasattr(got, "__len__") and not isinstance(got, str),
                field,
                "expected a sized container, "
                f"but value is of type {type(got).__name__}",
            )
            operation, expected_int = count_match.group("operation", "count")
            expected_int = int(expected_int)
            assert_func, msg_tmpl = {
                "min": (operator.ge, "expected at least {} items, but only got {}"),
                "max": (operator.le, "expected not more than {} items, but got {}"),
                None: (operator.eq, "expected exactly {} items, but got {}"),
            }[operation]
            self.assert_field_is_valid(
                assert_func(len(got), expected_int),
                field,
                msg_tmpl.format(expected_int, len(got)),
            )
        elif close_match:
            operation, value = close_match.group("operation", "value")
            value = float(value)
            if operation == "approx":
                self.expect_close(got, value, field)
            else:
                compare = operator.lt if operation == "lt" else operator.gt
                self.assert_field_is_valid(
                    compare(got, value),
                    field,
                    f"expected {operation} {value!r}, got {got!r}",
                )
        elif expected.startswith("re:"):
            match_str = expected[len("re:") :]
            self.assert_field_is_valid(
                isinstance(got, str) and bool(re.match(match_str, got)),
                field,
                f"{got!r} does not match regex r'{match_str}'",
            )
        elif expected.startswith("contains:"):
            contains_str = expected[len("contains:") :]
            self.assert_field_is_valid(
                isinstance(got, str) and contains_str in got,
                field,
                f"{got!r} does not contain {contains_str!r}",
            )
        elif expected.startswith("md5:"):
            self.assert_field_is_valid(
                isinstance(got, str),
                field,
                f"expected a string object, "
                f"but got value {got!r} of type {type(got)!r}",
            )
            self.expect_field("md5:" + digest(got), expected, field)
        else:
            self.expect_field(got, expected, field)

    def expect_dict(self, got_dict: Mapping[str, Any], expected_dict: Dict[str, Any]):
        self.assert_field_is_present(got_dict, *expected_dict)
        for key, expected in expected_dict.items():
            self.expect_value(got_dict[key], expected, key)

    def expect_column(self, table: ResultTable, name: str, expected, **tolerances):
        self.assertIn(name, table.columns)
        values = table.column(name)
        self.assert_field_is_valid(
            len(values) == len(expected),
            name,
            f"expected {len(expected)} rows, got {len(values)}",
        )
        for index, (got, value) in enumerate(zip(values, expected)):
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                self.expect_close(got, float(value), f"{name}[{index}]", **tolerances)
            else:
                self.expect_value(got, value, f"{name}[{index}]")
