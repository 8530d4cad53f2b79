#!/usr/bin/env python
# -*- coding: UTF-8 -*-
import hashlib
import json
import math
from copy import deepcopy
from numbers import Real
from pathlib import Path
from typing import Any, Dict, Iterator, Mapping, Sequence, Union

import numpy as np


def table_lines(rows: Sequence[Sequence[Any]], separator: str = "  ") -> Iterator[str]:
    """plain text table, numbers aligned right and everything else left"""
    cells = [[_cell(value) for value in row] for row in rows]
    widths: Dict[int, int] = {}
    for row in cells:
        for column, text in enumerate(row):
            widths[column] = max(widths.get(column, 0), len(text))
    for row, texts in zip(rows, cells):
        parts = []
        for column, (value, text) in enumerate(zip(row, texts)):
            align = text.rjust if _numeric(value) else text.ljust
            parts.append(align(widths[column]))
        yield separator.join(parts).rstrip()


def _numeric(value) -> bool:
    return isinstance(value, Real) and not isinstance(value, bool)


def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


def _to_json(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, np.generic):
        return _to_json(value.item())
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (tuple, set, frozenset)):
        return list(value)
    raise TypeError(f"{type(value).__name__} is not a scenario value")


def dump_document(document: Mapping[str, Any], file: Union[Path, str]) -> Path:
    """write a scenario document as sorted JSON, complex values as [re, im]"""
    path = Path(file)
    text = json.dumps(document, indent=4, sort_keys=True, default=_to_json)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def digest(data: Union[Mapping[str, Any], str]) -> str:
    """md5 of a string, or of the canonical JSON form of a document"""
    if not isinstance(data, str):
        data = json.dumps(data, sort_keys=True, separators=(",", ":"), default=_to_json)
    return hashlib.md5(data.encode("utf-8")).hexdigest()


def deep_merge(base: Mapping[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    """
    recursively merge override into a copy of base,
    a None value in override removes the key and a table naming its
    "model" replaces the old table instead of merging into it
    """
    merged = deepcopy(dict(base))
    for key, value in override.items():
        if value is None:
            merged.pop(key, None)
        elif (
            isinstance(value, Mapping)
            and "model" not in value
            and isinstance(merged.get(key), Mapping)
        ):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = deepcopy(value)
    return merged


def format_float(value: float) -> str:
    """17 significant digits, round-trip exact"""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "nan"
    return f"{value:.17g}"
