#!/usr/bin/env python
# -*- coding: UTF-8 -*-
"""
sweep execution: one emission report per grid point, collected into a
table whose row order only depends on the grid
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .decay import EmitterConfig, RateResult, decay_rates
from .errors import SweepError
from .farfield import AngularSpectrum, EnergyResult, angular_energy, total_energy
from .localfield import corrected_energy, corrected_rates
from .quadrature import DEFAULT_SETTINGS, QuadratureSettings, merge_flags
from .scenario import Scenario
from .stack import LayerStack

LOG = logging.getLogger(__name__)

RATE_QUANTITIES = ("gamma_total", "gamma_rad", "gamma_ratio")
ENERGY_QUANTITIES = ("W_top", "W_bottom")
DIAGNOSTICS = ("quad_err", "flags")


@dataclass(frozen=True)
class EmissionReport:
    rates: Optional[RateResult] = None
    energy: Optional[EnergyResult] = None
    spectrum: Optional[AngularSpectrum] = None
    quadrature_error: float = 0.0
    flags: Tuple[str, ...] = ()

    def value(self, quantity: str) -> float:
        if quantity in RATE_QUANTITIES:
            return getattr(self.rates, quantity)
        return getattr(self.energy, quantity)


def emission_report(
    stack: LayerStack,
    emitter: EmitterConfig,
    quantities: Sequence[str] = ("gamma_total",),
    *,
    side: str = "above",
    thetas=None,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    eps_host: Optional[complex] = None,
) -> EmissionReport:
    """evaluate the requested quantities for a single configuration"""
    rates = energy = spectrum = None
    error = 0.0
    flags: Tuple[str, ...] = ()

    if any(item in RATE_QUANTITIES for item in quantities):
        rates = decay_rates(stack, emitter, settings)
        if eps_host is not None:
            rates = corrected_rates(rates, eps_host)
        error += rates.quadrature_error
        flags = merge_flags(flags, rates.flags)
    if any(item in ENERGY_QUANTITIES for item in quantities):
        energy = total_energy(stack, emitter, settings)
        if eps_host is not None:
            energy = corrected_energy(energy, eps_host)
        error += energy.quadrature_error
        flags = merge_flags(flags, energy.flags)
    if "W_theta" in quantities:
        spectrum = angular_energy(stack, emitter, side, thetas, settings)
        if eps_host is not None:
            spectrum = corrected_energy(spectrum, eps_host)
        flags = merge_flags(flags, spectrum.flags)
    return EmissionReport(rates, energy, spectrum, error, flags)


@dataclass
class ResultTable:
    metadata: Dict[str, Any]
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(
            1
            for row in self.rows
            if any(flag.startswith("error:") for flag in str(row[-1]).split(";"))
        )

    def column(self, name: str) -> List[Any]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


def _thetas(scenario: Scenario) -> np.ndarray:
    return np.linspace(0.0, 0.5 * np.pi, scenario.theta_points, endpoint=False)


def table_columns(scenario: Scenario) -> List[str]:
    axes = [axis.name for axis in scenario.axes]
    scalars = [item for item in scenario.quantities if item != "W_theta"]
    if "W_theta" in scenario.quantities:
        return axes + ["theta", "W_theta"] + scalars + list(DIAGNOSTICS)
    return axes + scalars + list(DIAGNOSTICS)


def evaluate_point(scenario: Scenario, point: Mapping[str, float]):
    """report for one sweep point, a failure is returned instead of raised"""
    try:
        stack = scenario.stack_at(point)
        emitter = scenario.emitter_at(stack, point)
        return emission_report(
            stack,
            emitter,
            scenario.quantities,
            side=scenario.side,
            thetas=_thetas(scenario),
            settings=scenario.settings,
            eps_host=scenario.eps_host,
        )
    except Exception as exc:  # pylint: disable=broad-except
        LOG.warning(
            "sweep point %s failed: %s: %s", dict(point), type(exc).__name__, exc
        )
        return exc


def _rows(scenario: Scenario, point: Mapping[str, float], outcome) -> List[List[Any]]:
    coordinates = [point[axis.name] for axis in scenario.axes]
    scalars = [item for item in scenario.quantities if item != "W_theta"]
    if isinstance(outcome, Exception):
        values = [float("nan")] * len(scalars)
        diagnostics = [float("nan"), f"error:{type(outcome).__name__}"]
    else:
        values = [float(outcome.value(item)) for item in scalars]
        diagnostics = [outcome.quadrature_error, ";".join(outcome.flags)]

    if "W_theta" not in scenario.quantities:
        return [coordinates + values + diagnostics]
    thetas = _thetas(scenario)
    if isinstance(outcome, Exception):
        spectrum = np.full(thetas.size, np.nan)
    else:
        spectrum = outcome.spectrum.values
    return [
        coordinates + [float(theta), float(density)] + values + diagnostics
        for theta, density in zip(thetas, spectrum)
    ]


def run(scenario: Scenario, jobs: int = 1) -> ResultTable:
    """
    evaluate every sweep point, rows are ordered by grid index whatever the
    number of workers
    """
    points = scenario.points()
    LOG.info(
        "running %s: %d points with %d worker(s)",
        scenario.name or "scenario",
        len(points),
        jobs,
    )
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            outcomes = list(
                executor.map(lambda item: evaluate_point(scenario, item), points)
            )
    else:
        outcomes = [evaluate_point(scenario, item) for item in points]

    errors = [
        (point, item)
        for point, item in zip(points, outcomes)
        if isinstance(item, Exception)
    ]
    if points and len(errors) == len(points):
        raise SweepError(f"all {len(points)} sweep points failed", errors)

    table = ResultTable(
        metadata={
            "scenario": scenario.name,
            "scenario_hash": scenario.digest,
            "engine_version": __version__,
            "tolerances": scenario.document.get("tolerances", {}),
            "points": len(points),
            "failed": len(errors),
            "document": scenario.document,
        },
        columns=table_columns(scenario),
    )
    for point, outcome in zip(points, outcomes):
        table.rows.extend(_rows(scenario, point, outcome))
    LOG.info("finished with %d failed point(s)", len(errors))
    return table
