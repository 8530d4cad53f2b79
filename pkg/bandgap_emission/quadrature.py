#!/usr/bin/env python
# -*- coding: UTF-8 -*-
"""
adaptive panel quadrature for resonant integrands

The engine bisects Gauss-Kronrod (7/15) panels under one global error
target. The panels picked for bisection are evaluated in a single
vectorized call per integrand, so the layer recursion runs on arrays
instead of one wavenumber at a time.
Resonances of a denominator D(k) are located on a scan grid and treated
either as extra breakpoints or by subtracting the pole term and adding its
integral back in closed form.
"""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import minimize_scalar

from .errors import InvalidParameterError, QuadratureError

LOG = logging.getLogger(__name__)

# Kronrod abscissae on [0, 1], the odd entries are the 7-point Gauss nodes
_XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]

EPSILON = np.finfo(float).eps
# a bisection that changes the value by less than this and keeps 99 % of
# the error is noise, the children are not split again
STALL_CHANGE = 1e-5
STALL_ERROR = 0.99
# minima of |D| closer to a light line than this many half widths are
# branch points, not poles
BRANCH_GUARD = 10.0


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-14
    budget: int = 10000
    tail_panel: float = 0.5
    tail_ratio: float = 1e-12
    tail_panels: int = 5
    u_cap: float = 20.0
    scan_points: int = 4000
    window_factor: float = 100.0
    gamma_floor: float = 1e-12
    peak_threshold: float = 0.5

    def __post_init__(self):
        if not self.rel_tol > 0.0 or self.abs_tol < 0.0:
            raise InvalidParameterError("tolerances must be positive")
        if self.budget < 1 or self.scan_points < 3:
            raise InvalidParameterError("budget and scan_points must be positive")

    def with_tolerance(self, rel_tol: float) -> "QuadratureSettings":
        return replace(self, rel_tol=rel_tol)


DEFAULT_SETTINGS = QuadratureSettings()


@dataclass(frozen=True)
class Integral:
    value: float
    error: float
    panels: int = 0
    flags: Tuple[str, ...] = ()

    def __add__(self, other: "Integral") -> "Integral":
        return Integral(
            self.value + other.value,
            self.error + other.error,
            self.panels + other.panels,
            merge_flags(self.flags, other.flags),
        )

    def scaled(self, factor: float) -> "Integral":
        return replace(self, value=self.value * factor, error=self.error * abs(factor))


ZERO = Integral(0.0, 0.0)


def merge_flags(*groups: Iterable[str]) -> Tuple[str, ...]:
    merged: List[str] = []
    for group in groups:
        for flag in group:
            if flag not in merged:
                merged.append(flag)
    return tuple(merged)


@dataclass
class PanelBudget:
    """subdivision budget shared by all segments of one integral"""

    limit: int
    used: int = 0
    partial: float = 0.0
    partial_error: float = 0.0

    def spend(self, panels: int, value: float, error: float):
        self.used += panels
        if self.used > self.limit:
            total = self.partial + value
            raise QuadratureError(
                f"subdivision budget of {self.limit} panels exhausted "
                f"(value={total:.6g}, error={self.partial_error + error:.3g})",
                value=total,
                error=self.partial_error + error,
                panels=self.used,
            )

    def settle(self, value: float, error: float):
        self.partial += value
        self.partial_error += error


@dataclass(frozen=True)
class Segment:
    """one integrand over its breakpoints, a term of a composite integral"""

    func: Callable
    breakpoints: Sequence[float]


def _kronrod(func: Callable, lower: np.ndarray, upper: np.ndarray):
    """panel values, QUADPACK error estimates and their roundoff floors"""
    center = 0.5 * (lower + upper)
    half = 0.5 * (upper - lower)
    points = center[:, None] + half[:, None] * NODES[None, :]
    values = np.asarray(func(points.ravel()), dtype=float).reshape(points.shape)
    if not np.all(np.isfinite(values)):
        raise FloatingPointError("integrand is not finite on the panel nodes")
    kronrod = half * (values @ KRONROD_WEIGHTS)
    gauss = half * (values @ GAUSS_WEIGHTS)
    mean = kronrod / (2.0 * np.where(half == 0.0, 1.0, half))
    asc = np.abs(half) * (np.abs(values - mean[:, None]) @ KRONROD_WEIGHTS)
    absolute = np.abs(half) * (np.abs(values) @ KRONROD_WEIGHTS)
    error = np.abs(kronrod - gauss)
    scaled = np.where(
        (asc > 0.0) & (error > 0.0),
        asc * np.minimum(1.0, (200.0 * error / np.where(asc > 0.0, asc, 1.0)) ** 1.5),
        error,
    )
    floor = 50.0 * EPSILON * absolute
    return kronrod, np.maximum(scaled, floor), floor


def _evaluate(segments: Sequence[Segment], owner, lower, upper):
    value, error, floor = (np.empty(owner.size) for _ in range(3))
    for index in np.unique(owner):
        members = np.flatnonzero(owner == index)
        (
            value[members],
            error[members],
            floor[members],
        ) = _kronrod(segments[index].func, lower[members], upper[members])
    return value, error, floor


def integrate(
    segments: Sequence[Segment],
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    budget: Optional[PanelBudget] = None,
    offset: float = 0.0,
    reference: float = 0.0,
) -> Integral:
    """
    offset plus the sum of the segment integrals, under one error target
    max(abs_tol, rel_tol max(|I|, reference)) for the whole sum

    The panels carrying the largest errors are bisected until the pooled
    estimate meets the target. A panel is not split again once its error
    sits at the roundoff floor or its bisection stalls; when such panels
    alone keep the estimate above the target the result is flagged.
    """
    if budget is None:
        budget = PanelBudget(settings.budget)
    owners, lowers, uppers = [], [], []
    for index, segment in enumerate(segments):
        edges = np.unique(np.asarray(segment.breakpoints, dtype=float))
        if edges.size < 2:
            continue
        owners.append(np.full(edges.size - 1, index))
        lowers.append(edges[:-1])
        uppers.append(edges[1:])
    if not owners:
        budget.settle(offset, 0.0)
        return Integral(float(offset), 0.0)

    owner = np.concatenate(owners)
    lower, upper = np.concatenate(lowers), np.concatenate(uppers)
    value, error, floor = _evaluate(segments, owner, lower, upper)
    stalled = np.zeros(owner.size, dtype=bool)
    evaluated = owner.size
    budget.spend(owner.size, offset + value.sum(), error.sum())
    flags: List[str] = []

    while True:
        total = offset + value.sum()
        target = max(settings.abs_tol, settings.rel_tol * max(abs(total), reference))
        if error.sum() <= target:
            break
        resolved = upper - lower <= 64.0 * EPSILON * np.maximum(
            np.abs(lower), np.abs(upper)
        )
        candidates = np.flatnonzero(~resolved & ~stalled & (error > floor))
        pending = error[candidates].sum()
        if pending <= 0.5 * target:
            LOG.debug(
                "roundoff limits the error estimate to %.3g (target %.3g)",
                error.sum(),
                target,
            )
            flags.append("quad_roundoff")
            break

        order = candidates[np.argsort(error[candidates])[::-1]]
        remaining = pending - np.cumsum(error[order])
        count = int(np.searchsorted(-remaining, -0.25 * target)) + 1
        split = order[: min(count, order.size)]

        middle = 0.5 * (lower[split] + upper[split])
        new_owner = np.concatenate([owner[split], owner[split]])
        new_lower = np.concatenate([lower[split], middle])
        new_upper = np.concatenate([middle, upper[split]])
        new_value, new_error, new_floor = _evaluate(
            segments, new_owner, new_lower, new_upper
        )
        evaluated += new_owner.size

        pairs = split.size
        child_value = new_value[:pairs] + new_value[pairs:]
        child_error = new_error[:pairs] + new_error[pairs:]
        stall = (
            np.abs(child_value - value[split]) <= STALL_CHANGE * np.abs(child_value)
        ) & (child_error >= STALL_ERROR * error[split])

        keep = np.ones(owner.size, dtype=bool)
        keep[split] = False
        owner = np.concatenate([owner[keep], new_owner])
        lower = np.concatenate([lower[keep], new_lower])
        upper = np.concatenate([upper[keep], new_upper])
        value = np.concatenate([value[keep], new_value])
        error = np.concatenate([error[keep], new_error])
        floor = np.concatenate([floor[keep], new_floor])
        stalled = np.concatenate([stalled[keep], stall, stall])
        budget.spend(new_owner.size, offset + value.sum(), error.sum())

    total = float(offset + value.sum())
    total_error = float(error.sum())
    budget.settle(total, total_error)
    return Integral(total, total_error, evaluated, merge_flags(flags))


def adaptive(
    func: Callable,
    breakpoints: Sequence[float],
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    budget: Optional[PanelBudget] = None,
    reference: float = 0.0,
) -> Integral:
    """
    integrate the vectorized func over [breakpoints[0], breakpoints[-1]],
    every breakpoint starts a panel of its own
    """
    segment = Segment(func, breakpoints)
    return integrate([segment], settings, budget, reference=reference)


@dataclass(frozen=True)
class Resonance:
    """zero of D near the real axis, k_c is the Newton estimate of the pole"""

    k0: float
    D: complex
    derivative: complex
    half_width: float

    @property
    def pole(self) -> complex:
        return self.k0 - self.D / self.derivative


def derivative(func: Callable, k0: float, step: float) -> complex:
    return complex((func(k0 + step) - func(k0 - step)) / (2.0 * step))


def _polish(denominator: Callable, k0: float, step: float) -> float:
    """real part of the zero of the local quadratic model of D around k0"""
    value = complex(denominator(k0))
    slope = derivative(denominator, k0, step)
    curvature = 100.0 * step
    second = complex(
        (
            denominator(k0 + curvature)
            - 2.0 * denominator(k0)
            + denominator(k0 - curvature)
        )
        / curvature**2
    )
    root = np.sqrt(slope * slope - 2.0 * second * value)
    below = slope + root if abs(slope + root) >= abs(slope - root) else slope - root
    if below == 0.0:
        return k0
    return k0 + float((-2.0 * value / below).real)


def find_resonances(
    denominator: Callable,
    lower: float,
    upper: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    branch_points: Sequence[float] = (),
) -> List[Resonance]:
    """
    scan |D| on a grid over (lower, upper) and refine each deep local minimum
    to the real part of the nearby zero of D; minima sitting on one of the
    branch_points are dropped
    """
    if not upper > lower:
        return []
    grid = np.linspace(lower, upper, settings.scan_points)
    magnitude = np.abs(denominator(grid))
    inner = np.arange(1, grid.size - 1)
    minima = inner[
        (magnitude[inner] <= magnitude[inner - 1])
        & (magnitude[inner] <= magnitude[inner + 1])
        & (magnitude[inner] < settings.peak_threshold)
    ]

    resonances = []
    spacing = grid[1] - grid[0]
    step = 1e-4 * spacing
    for index in minima:
        bracket = (grid[index - 1], grid[index + 1])
        refined = minimize_scalar(
            lambda k: float(np.abs(denominator(k))),
            bounds=bracket,
            method="bounded",
            options={"xatol": 1e-15 * max(abs(grid[index]), 1.0), "maxiter": 500},
        )
        k0 = float(refined.x)
        for _ in range(2):
            k0 = min(max(_polish(denominator, k0, step), bracket[0]), bracket[1])
        value = complex(denominator(k0))
        slope = derivative(denominator, k0, step)
        if slope == 0.0:
            continue
        half_width = abs(value) / abs(slope)
        if any(abs(k0 - point) < BRANCH_GUARD * half_width for point in branch_points):
            LOG.debug("minimum of |D| at k=%.12g is a branch point", k0)
            continue
        LOG.debug(
            "resonance at k=%.12g, |D|=%.3g, half width %.3g",
            k0,
            abs(value),
            half_width,
        )
        resonances.append(Resonance(k0, value, slope, half_width))
    return resonances


def windows(
    resonances: Sequence[Resonance],
    lower: float,
    upper: float,
    factor: float,
) -> List[Tuple[float, float, Resonance]]:
    """non-overlapping intervals of factor half widths centered on each resonance"""
    ordered = sorted(resonances, key=lambda item: item.k0)
    result = []
    for index, item in enumerate(ordered):
        left = lower if index == 0 else 0.5 * (ordered[index - 1].k0 + item.k0)
        if index == len(ordered) - 1:
            right = upper
        else:
            right = 0.5 * (item.k0 + ordered[index + 1].k0)
        reach = 0.5 * factor * item.half_width
        a = max(item.k0 - reach, 0.5 * (left + item.k0))
        b = min(item.k0 + reach, 0.5 * (item.k0 + right))
        if b > a:
            result.append((a, b, item))
    return result


def pole_integral(residue: complex, pole: complex, a: float, b: float) -> float:
    """Re of the integral of residue/(k - pole) over [a, b]"""
    if pole.imag == 0.0:
        log_ratio = complex(np.log(abs(b - pole) / abs(a - pole)))
        if a < pole.real < b:
            log_ratio += 1j * np.pi
    else:
        log_ratio = complex(np.log(b - pole) - np.log(a - pole))
    return float((residue * log_ratio).real)


def pole_segment(
    integrand: Callable,
    numerator: Callable,
    resonance: Resonance,
    a: float,
    b: float,
    extra: Sequence[float] = (),
) -> Tuple[Segment, float]:
    """
    Re[N/D] over [a, b] split into the remainder segment left after
    removing R/(k - k_c) and the closed-form integral of the pole term;
    integrand returns the real part, numerator the complex N at a point,
    extra adds breakpoints such as kinks of the integrand
    """
    residue = complex(numerator(resonance.k0)) / resonance.derivative
    pole = resonance.pole

    def smooth(k):
        return integrand(k) - (residue / (k - pole)).real

    points = [a, b, *extra] + [
        resonance.k0 + step * resonance.half_width
        for step in (-10.0, -1.0, 0.0, 1.0, 10.0)
    ]
    breakpoints = sorted(k for k in points if a <= k <= b)
    return Segment(smooth, breakpoints), pole_integral(residue, pole, a, b)


def subtracted(
    integrand: Callable,
    numerator: Callable,
    resonance: Resonance,
    a: float,
    b: float,
    settings: QuadratureSettings,
    budget: PanelBudget,
) -> Integral:
    """integrate Re[N/D] over [a, b] by pole subtraction"""
    segment, analytic = pole_segment(integrand, numerator, resonance, a, b)
    return integrate([segment], settings, budget, offset=analytic)


def tail(
    func: Callable,
    start: float,
    settings: QuadratureSettings,
    budget: PanelBudget,
    running: float = 0.0,
) -> Integral:
    """
    integrate func from start outward in panels of fixed length until
    tail_panels consecutive panels are negligible against the running total
    """
    result = ZERO
    quiet = 0
    position = start
    while quiet < settings.tail_panels:
        if position >= settings.u_cap:
            LOG.warning("tail integration stopped at the cap u=%g", settings.u_cap)
            return replace(result, flags=merge_flags(result.flags, ["tail_cap"]))
        scale = abs(running + result.value)
        panel = adaptive(
            func,
            [position, position + settings.tail_panel],
            settings,
            budget,
            reference=scale,
        )
        result = result + panel
        position += settings.tail_panel
        scale = abs(running + result.value)
        if abs(panel.value) <= settings.tail_ratio * scale + settings.abs_tol:
            quiet += 1
        else:
            quiet = 0
    return result


def trapezoid_oracle(
    func: Callable,
    lower: float,
    upper: float,
    points: int = 1_000_000,
    resonances: Sequence[Resonance] = (),
    chunk: int = 100_000,
) -> float:
    """
    brute force trapezoid sum on a uniform grid, refined around each
    resonance with k = k0 + w tan(v) so that the peak is sampled evenly
    """
    points = max(int(points), 2)
    cuts = [lower, upper]
    local: List[Tuple[float, float, Resonance]] = []
    for resonance in resonances:
        reach = 1e4 * resonance.half_width
        a, b = max(lower, resonance.k0 - reach), min(upper, resonance.k0 + reach)
        if b > a:
            local.append((a, b, resonance))
            cuts += [a, b]
    cuts = sorted(set(cuts))

    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        owner = next((item for item in local if item[0] == a and item[1] == b), None)
        count = max(points * (b - a) / (upper - lower), 1001)
        if owner is None:
            grid = np.linspace(a, b, int(count))
            total += _chunked_trapezoid(func, grid, grid, chunk)
        else:
            width = owner[2].half_width
            v = np.linspace(
                np.arctan((a - owner[2].k0) / width),
                np.arctan((b - owner[2].k0) / width),
                max(int(count), points // 10),
            )
            k = owner[2].k0 + width * np.tan(v)
            jacobian = width / np.cos(v) ** 2
            total += _chunked_trapezoid(func, v, k, chunk, jacobian)
    return float(total)


def _chunked_trapezoid(func, variable, k, chunk, jacobian=None):
    values = np.empty(k.size)
    for start in range(0, k.size, chunk):
        values[start : start + chunk] = func(k[start : start + chunk])
    if jacobian is not None:
        values = values * jacobian
    return trapezoid(values, variable)
