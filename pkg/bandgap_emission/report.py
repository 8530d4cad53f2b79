#!/usr/bin/env python
# -*- coding: UTF-8 -*-
"""result documents: CSV with 17 significant digits or schema-stable JSON"""

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Optional, Union

from .sweep import ResultTable
from .utils import format_float

FORMATS = ("csv", "json")


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def to_csv(table: ResultTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def to_json(table: ResultTable) -> str:
    document = {
        "metadata": table.metadata,
        "columns": table.columns,
        "rows": [[_json_value(value) for value in row] for row in table.rows],
    }
    return json.dumps(document, indent=4) + "\n"


def emit(table: ResultTable, fmt: str = "csv") -> str:
    if fmt == "csv":
        return to_csv(table)
    if fmt == "json":
        return to_json(table)
    raise ValueError(f"unsupported format {fmt!r}, expected one of {FORMATS}")


def write(
    table: ResultTable, path: Optional[Union[str, Path]], fmt: str = "csv"
) -> str:
    document = emit(table, fmt)
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fd:
            fd.write(document)
    return document
