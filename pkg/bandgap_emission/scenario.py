#!/usr/bin/env python
# -*- coding: UTF-8 -*-
"""
declarative scenario documents

A scenario is a TOML document with the sections structure, materials,
emitter, sweep, outputs, tolerances and local_field. Unknown keys are
rejected, every error names the offending field path. Positions
(emitter.z_A and the z_A axis) are fractions of the emitter-layer
thickness, omega_P values are given in units of omega_T.
"""

from dataclasses import dataclass, field, fields, replace
from itertools import product
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .decay import ORIENTATIONS, EmitterConfig
from .dispersion import Constant, DispersionModel, DrudeLorentz
from .errors import EmissionError, ScenarioError
from .quadrature import QuadratureSettings
from .stack import MATERIAL_LABELS, LayerStack, build_bragg, retune
from .utils import digest as document_digest

try:
    import tomllib
except ImportError:  # python < 3.11
    import tomli as tomllib  # type: ignore[no-redef]

QUANTITIES = ("gamma_total", "gamma_rad", "gamma_ratio", "W_top", "W_bottom", "W_theta")
AXES = ("omega_A", "z_A", "gamma", "omega_P", "periods_down")
MAX_AXES = 2
REAL_TOLERANCE = 1e-6

SECTIONS = {
    "structure": {
        "periods_up",
        "periods_down",
        "defect",
        "adjacent_material",
        "design",
    },
    "materials": set(MATERIAL_LABELS),
    "emitter": {"omega_A", "z_A", "orientation"},
    "sweep": set(AXES) | {"material"},
    "outputs": {"quantities", "side", "theta_points"},
    "tolerances": {item.name for item in fields(QuadratureSettings)},
    "local_field": {"enabled", "eps_host"},
}
MATERIAL_KEYS = {
    "constant": {"model", "eps"},
    "drude-lorentz": {"model", "omega_P_ratio", "omega_T", "gamma"},
}
GRID_KEYS = {"start", "stop", "num", "refine"}


@dataclass(frozen=True)
class SweepAxis:
    name: str
    values: Tuple[float, ...]

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class Scenario:
    name: str
    periods_up: int
    periods_down: int
    defect: bool
    adjacent_material: str
    materials: Mapping[str, DispersionModel]
    design: Mapping[str, DispersionModel]
    omega_A: float
    z_fraction: float
    orientation: Tuple[float, float]
    axes: Tuple[SweepAxis, ...]
    sweep_material: str
    quantities: Tuple[str, ...]
    side: str
    theta_points: int
    settings: QuadratureSettings
    eps_host: Optional[complex]
    document: Mapping[str, Any] = field(default_factory=dict, compare=False)

    @property
    def digest(self) -> str:
        return document_digest(self.document)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(len(axis) for axis in self.axes)

    def points(self) -> List[Dict[str, float]]:
        """sweep points in row order, the last axis runs fastest"""
        names = [axis.name for axis in self.axes]
        return [
            dict(zip(names, values))
            for values in product(*(axis.values for axis in self.axes))
        ]

    def stack_at(self, point: Mapping[str, float]) -> LayerStack:
        """
        geometry designed from the design materials, then retuned to the
        materials of the sweep point
        """
        periods_down = int(point.get("periods_down", self.periods_down))
        design = {**self.materials, **self.design}
        stack = build_bragg(
            self.periods_up,
            periods_down,
            self.defect,
            design["low"],
            design["high"],
            design["emitter"],
            adjacent_material=self.adjacent_material,
            eps_outer=design["outer"],
        )
        for label in MATERIAL_LABELS:
            model = self.material_at(label, point)
            if model != design[label] and any(
                layer.label == label for layer in stack.layers
            ):
                stack = retune(stack, label, model)
        return stack

    def material_at(self, label: str, point: Mapping[str, float]) -> DispersionModel:
        model = self.materials[label]
        if label != self.sweep_material:
            return model
        if "gamma" in point:
            model = replace(model, gamma=point["gamma"])
        if "omega_P" in point:
            model = replace(model, omega_P=point["omega_P"] * model.omega_T)
        return model

    def emitter_at(
        self, stack: LayerStack, point: Mapping[str, float]
    ) -> EmitterConfig:
        fraction = point.get("z_A", self.z_fraction)
        return EmitterConfig(
            omega_A=point.get("omega_A", self.omega_A),
            z_A=fraction * stack.emitter_thickness,
            orientation=self.orientation,
        )


def tolerance_table(settings: QuadratureSettings) -> Dict[str, Any]:
    return {item.name: getattr(settings, item.name) for item in fields(settings)}


def _fail(path: str, message: str):
    raise ScenarioError(path, message)


def _table(value: Any, path: str) -> Dict[str, Any]:
    if not isinstance(value, Mapping):
        _fail(path, f"expected a table, got {type(value).__name__}")
    return dict(value)


def _check_keys(table: Mapping[str, Any], allowed: set, path: str):
    for key in table:
        if key not in allowed:
            _fail(f"{path}.{key}" if path else key, "unknown key")


def _number(value: Any, path: str, *, positive=False, integer=False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {value!r}")
    if integer and int(value) != value:
        _fail(path, f"expected an integer, got {value!r}")
    if positive and not value > 0:
        _fail(path, f"must be positive, got {value!r}")
    if not np.isfinite(value):
        _fail(path, f"must be finite, got {value!r}")
    return int(value) if integer else float(value)


def _complex(value: Any, path: str) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            _fail(path, "expected [real, imag]")
        return complex(_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))
    return complex(_number(value, path))


def parse_material(table: Any, path: str) -> DispersionModel:
    table = _table(table, path)
    model = table.get("model")
    if model not in MATERIAL_KEYS:
        _fail(
            f"{path}.model",
            f"expected one of {sorted(MATERIAL_KEYS)}, got {model!r}",
        )
    _check_keys(table, MATERIAL_KEYS[model], path)
    try:
        if model == "constant":
            return Constant(_complex(table.get("eps", 1.0), f"{path}.eps"))
        for key in ("omega_P_ratio", "omega_T", "gamma"):
            if key not in table:
                _fail(f"{path}.{key}", "missing value")
        return DrudeLorentz.from_ratio(
            _number(table["omega_P_ratio"], f"{path}.omega_P_ratio"),
            _number(table["omega_T"], f"{path}.omega_T", positive=True),
            _number(table["gamma"], f"{path}.gamma"),
        )
    except ScenarioError:
        raise
    except EmissionError as exc:
        raise ScenarioError(path, str(exc)) from exc


def refined_grid(start, stop, num, refine=None) -> np.ndarray:
    """
    uniform grid, optionally with the spacing divided by factor inside
    [low, high]
    """
    grid = np.linspace(start, stop, num)
    if refine is not None and num > 1:
        low, high, factor = refine
        step = (stop - start) / (num - 1) / factor
        count = int(round((high - low) / step)) + 1
        grid = np.concatenate([grid, np.linspace(low, high, count)])
        grid = np.unique(np.round(grid, 12))
    return grid


def parse_axis(name: str, value: Any, path: str) -> SweepAxis:
    if isinstance(value, Mapping):
        table = dict(value)
        _check_keys(table, GRID_KEYS, path)
        for key in ("start", "stop", "num"):
            if key not in table:
                _fail(f"{path}.{key}", "missing value")
        start = _number(table["start"], f"{path}.start")
        stop = _number(table["stop"], f"{path}.stop")
        num = _number(table["num"], f"{path}.num", positive=True, integer=True)
        refine = table.get("refine")
        if refine is not None:
            if not isinstance(refine, list) or len(refine) != 3:
                _fail(f"{path}.refine", "expected [low, high, factor]")
            refine = [
                _number(item, f"{path}.refine[{i}]") for i, item in enumerate(refine)
            ]
            if not start <= refine[0] < refine[1] <= stop or refine[2] < 1:
                _fail(f"{path}.refine", "window must lie inside the grid, factor >= 1")
        if num > 1 and not stop > start:
            _fail(path, "stop must exceed start")
        values = refined_grid(start, stop, num, refine)
    elif isinstance(value, list):
        values = np.array(
            [_number(item, f"{path}[{i}]") for i, item in enumerate(value)]
        )
    else:
        values = np.array([_number(value, path)])

    if values.size < 1:
        _fail(path, "grid must not be empty")
    if np.any(np.diff(values) <= 0.0):
        _fail(path, "grid must be strictly increasing")
    if name == "periods_down":
        for i, item in enumerate(values):
            _number(item, f"{path}[{i}]", positive=True, integer=True)
    elif name == "z_A":
        if np.any((values <= 0.0) | (values >= 1.0)):
            _fail(path, "positions are fractions of the emitter layer in (0, 1)")
    elif name == "gamma":
        if np.any(values < 0.0):
            _fail(path, "linewidths must be non-negative")
    elif np.any(values <= 0.0):
        _fail(path, "values must be positive")
    return SweepAxis(name, tuple(float(item) for item in values))


def _orientation(value: Any, path: str) -> Tuple[float, float]:
    if isinstance(value, str):
        if value not in ORIENTATIONS:
            _fail(path, f"expected one of {sorted(ORIENTATIONS)} or [w_z, w_par]")
        return ORIENTATIONS[value]
    if not isinstance(value, list) or len(value) != 2:
        _fail(path, "expected a name or [w_z, w_par]")
    w_z, w_par = (_number(item, f"{path}[{i}]") for i, item in enumerate(value))
    if w_z < 0.0 or w_par < 0.0 or abs(w_z + w_par - 1.0) > 1e-12:
        _fail(path, "weights must be non-negative and add up to one")
    return (w_z, w_par)


def scenario_from_dict(document: Mapping[str, Any], name: str = "") -> Scenario:
    """validate a parsed document and fill in the defaults"""
    document = _table(document, "")
    _check_keys(document, set(SECTIONS), "")
    sections = {}
    for key, allowed in SECTIONS.items():
        sections[key] = _table(document.get(key, {}), key)
        if key != "materials":
            _check_keys(sections[key], allowed, key)

    structure = sections["structure"]
    periods_up = _number(
        structure.get("periods_up", 5),
        "structure.periods_up",
        positive=True,
        integer=True,
    )
    periods_down = _number(
        structure.get("periods_down", 5),
        "structure.periods_down",
        positive=True,
        integer=True,
    )
    defect = structure.get("defect", False)
    if not isinstance(defect, bool):
        _fail("structure.defect", f"expected true or false, got {defect!r}")
    adjacent = structure.get("adjacent_material", "H")
    if adjacent not in ("H", "L"):
        _fail("structure.adjacent_material", f"expected 'H' or 'L', got {adjacent!r}")

    _check_keys(sections["materials"], set(MATERIAL_LABELS), "materials")
    materials: Dict[str, DispersionModel] = {
        label: Constant(1.0) for label in MATERIAL_LABELS
    }
    for label, table in sections["materials"].items():
        materials[label] = parse_material(table, f"materials.{label}")
    design_tables = _table(structure.get("design", {}), "structure.design")
    _check_keys(design_tables, set(MATERIAL_LABELS), "structure.design")
    design = {
        label: parse_material(table, f"structure.design.{label}")
        for label, table in design_tables.items()
    }

    emitter = sections["emitter"]
    omega_A = _number(emitter.get("omega_A", 1.0), "emitter.omega_A", positive=True)
    z_fraction = _number(emitter.get("z_A", 0.5), "emitter.z_A")
    if not 0.0 < z_fraction < 1.0:
        _fail(
            "emitter.z_A",
            f"must lie inside the emitter layer (0, 1), got {z_fraction!r}",
        )
    orientation = _orientation(
        emitter.get("orientation", "parallel"), "emitter.orientation"
    )

    sweep = sections["sweep"]
    axes = tuple(
        parse_axis(axis, sweep[axis], f"sweep.{axis}") for axis in AXES if axis in sweep
    )
    if len(axes) > MAX_AXES:
        _fail("sweep", f"at most {MAX_AXES} sweep axes are supported, got {len(axes)}")
    sweep_material = sweep.get("material", "high")
    if sweep_material not in MATERIAL_LABELS:
        _fail(
            "sweep.material",
            f"expected one of {MATERIAL_LABELS}, got {sweep_material!r}",
        )
    if any(axis.name in ("gamma", "omega_P") for axis in axes) and not isinstance(
        materials[sweep_material], DrudeLorentz
    ):
        _fail(
            "sweep.material", f"material {sweep_material!r} has no resonance to sweep"
        )

    outputs = sections["outputs"]
    quantities = outputs.get("quantities", ["gamma_total"])
    if isinstance(quantities, str):
        quantities = [quantities]
    if not isinstance(quantities, list) or not quantities:
        _fail("outputs.quantities", "expected a non-empty list")
    for i, quantity in enumerate(quantities):
        if quantity not in QUANTITIES:
            _fail(f"outputs.quantities[{i}]", f"unknown quantity {quantity!r}")
    quantities = tuple(item for item in QUANTITIES if item in quantities)
    side = outputs.get("side", "above")
    if side not in ("above", "below"):
        _fail("outputs.side", f"expected 'above' or 'below', got {side!r}")
    theta_points = _number(
        outputs.get("theta_points", 721),
        "outputs.theta_points",
        positive=True,
        integer=True,
    )
    if any(item.startswith("W_") for item in quantities):
        outer = materials["outer"]
        if not isinstance(outer, Constant) or abs(outer.eps.imag) > REAL_TOLERANCE:
            _fail(
                "outputs.quantities",
                "radiated energies need a transparent outer medium",
            )

    try:
        settings = QuadratureSettings(**sections["tolerances"])
    except (TypeError, EmissionError) as exc:
        raise ScenarioError("tolerances", str(exc)) from exc

    local_field = sections["local_field"]
    enabled = local_field.get("enabled", False)
    if not isinstance(enabled, bool):
        _fail("local_field.enabled", f"expected true or false, got {enabled!r}")
    eps_host: Optional[complex] = None
    if enabled:
        eps_host = _complex(local_field.get("eps_host", 1.0), "local_field.eps_host")

    normalized = {
        "structure": {
            "periods_up": periods_up,
            "periods_down": periods_down,
            "defect": defect,
            "adjacent_material": adjacent,
            "design": {label: model.describe() for label, model in design.items()},
        },
        "materials": {label: model.describe() for label, model in materials.items()},
        "emitter": {
            "omega_A": omega_A,
            "z_A": z_fraction,
            "orientation": list(orientation),
        },
        "sweep": {axis.name: list(axis.values) for axis in axes},
        "sweep_material": sweep_material,
        "outputs": {
            "quantities": list(quantities),
            "side": side,
            "theta_points": theta_points,
        },
        "tolerances": tolerance_table(settings),
        "local_field": None if eps_host is None else [eps_host.real, eps_host.imag],
    }
    scenario = Scenario(
        name=name,
        periods_up=periods_up,
        periods_down=periods_down,
        defect=defect,
        adjacent_material=adjacent,
        materials=materials,
        design=design,
        omega_A=omega_A,
        z_fraction=z_fraction,
        orientation=orientation,
        axes=axes,
        sweep_material=sweep_material,
        quantities=quantities,
        side=side,
        theta_points=theta_points,
        settings=settings,
        eps_host=eps_host,
        document=normalized,
    )
    try:
        scenario.stack_at({})
    except EmissionError as exc:
        raise ScenarioError("structure", str(exc)) from exc
    return scenario


def load_scenario(text: Union[str, bytes], name: str = "") -> Scenario:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        document = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError("", f"malformed scenario document: {exc}") from exc
    return scenario_from_dict(document, name)


def load_scenario_file(path: Union[str, Path]) -> Scenario:
    path = Path(path)
    return load_scenario(path.read_text(encoding="utf-8"), name=path.stem)


def with_tolerance(scenario: Scenario, rel_tol: Optional[float]) -> Scenario:
    if rel_tol is None:
        return scenario
    settings = scenario.settings.with_tolerance(rel_tol)
    document = dict(scenario.document)
    document["tolerances"] = tolerance_table(settings)
    return replace(scenario, settings=settings, document=document)


def axis_names(scenario: Scenario) -> Sequence[str]:
    return [axis.name for axis in scenario.axes]
