#!/usr/bin/env python
# -*- coding: UTF-8 -*-
"""
total and radiative spontaneous decay rates of a dipole inside the emitter
layer, normalized to the free-space rate Gamma_0
"""

import logging
import warnings
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from .dispersion import regularized
from .errors import InvalidParameterError, InvalidSideError
from .quadrature import (
    DEFAULT_SETTINGS,
    Integral,
    PanelBudget,
    QuadratureSettings,
    Resonance,
    Segment,
    find_resonances,
    integrate,
    merge_flags,
    pole_segment,
    tail,
    trapezoid_oracle,
    windows,
)
from .stack import (
    POLARIZATIONS,
    LayerStack,
    coefficients,
    phase_factor,
    wave_numbers,
)

LOG = logging.getLogger(__name__)

ORIENTATIONS = {
    "parallel": (0.0, 1.0),
    "perpendicular": (1.0, 0.0),
    "isotropic": (1.0 / 3.0, 2.0 / 3.0),
}
# upper end of the guided-mode scan relative to the densest layer
SCAN_MARGIN = 1.05
REAL_TOLERANCE = 1e-6
LIGHT_LINE_GAP = 1e-6


@dataclass(frozen=True)
class EmitterConfig:
    omega_A: float
    z_A: float
    orientation: Tuple[float, float] = ORIENTATIONS["parallel"]

    def __post_init__(self):
        if isinstance(self.orientation, str):
            if self.orientation not in ORIENTATIONS:
                raise InvalidParameterError(
                    f"unknown orientation {self.orientation!r}, "
                    f"expected one of {sorted(ORIENTATIONS)}"
                )
            object.__setattr__(self, "orientation", ORIENTATIONS[self.orientation])
        w_z, w_par = (float(value) for value in self.orientation)
        if w_z < 0.0 or w_par < 0.0 or abs(w_z + w_par - 1.0) > 1e-12:
            raise InvalidParameterError(
                f"orientation weights must be non-negative and add up to one, "
                f"got {self.orientation!r}"
            )
        object.__setattr__(self, "orientation", (w_z, w_par))
        if not self.omega_A > 0.0:
            raise InvalidParameterError(
                f"omega_A must be positive, got {self.omega_A!r}"
            )

    @property
    def w_z(self) -> float:
        return self.orientation[0]

    @property
    def w_par(self) -> float:
        return self.orientation[1]

    def mirrored(self, stack: LayerStack) -> "EmitterConfig":
        return replace(self, z_A=stack.emitter_thickness - self.z_A)


@dataclass(frozen=True)
class RateResult:
    gamma_total: float
    gamma_rad: float
    quadrature_error: float
    guided_fraction: float
    flags: Tuple[str, ...] = ()

    @property
    def gamma_ratio(self) -> float:
        return self.gamma_rad / self.gamma_total


def check_position(stack: LayerStack, emitter: EmitterConfig):
    d_j = stack.emitter_thickness
    if not 0.0 < emitter.z_A < d_j:
        raise InvalidParameterError(
            f"emitter position z_A={emitter.z_A!r} lies outside "
            f"the emitter layer (0, {d_j!r})"
        )


def prepare(
    stack: LayerStack, settings: QuadratureSettings = DEFAULT_SETTINGS
) -> LayerStack:
    """lift lossless resonant materials to the linewidth floor"""
    layers = []
    for layer in stack.layers:
        model = regularized(layer.dispersion, settings.gamma_floor)
        if model is not layer.dispersion:
            warnings.warn(
                f"lossless {layer.label or 'layer'} resonance evaluated with "
                f"gamma={settings.gamma_floor:g}",
                RuntimeWarning,
                stacklevel=3,
            )
        layers.append(replace(layer, dispersion=model))
    return replace(stack, layers=tuple(layers))


def polarized_terms(
    stack: LayerStack, emitter: EmitterConfig, k_par, flags: Optional[Set[str]] = None
) -> Dict[str, Tuple[np.ndarray, np.ndarray]]:
    """
    complex integrand contribution T_q and denominator D_q per polarization,
    Gamma~ = Re(T_s + T_p)

    With M^q_+- = +-1 + r_- e^{2i b z} + r_+ e^{2i b (d-z)} +- r_+ r_- e^{2i b d}
    the terms read
        T_s = P w_par M^s_+ / D_s
        T_p = P [w_z (2 k^2/k_j^2) M^p_+ - w_par (b^2/k_j^2) M^p_-] / D_p
    with P = 3 k / (2 k_v) / (2 b), so no growing exponential appears.
    """
    omega = emitter.omega_A
    waves = wave_numbers(stack, omega, k_par)
    k_j = waves.k_layer[stack.emitter_index]
    k_par = np.asarray(k_par, dtype=float)
    z_A = emitter.z_A
    d_j = stack.emitter_thickness

    terms = {}
    for q in POLARIZATIONS:
        coeffs = coefficients(stack, omega, k_par, q, waves=waves)
        beta = np.asarray(coeffs.beta_j)
        lower_phase, deep_lower = phase_factor(beta, 2.0 * z_A)
        upper_phase, deep_upper = phase_factor(beta, 2.0 * (d_j - z_A))
        round_trip, _ = phase_factor(beta, 2.0 * d_j)
        if flags is not None and (coeffs.clamped or deep_lower or deep_upper):
            flags.add("evanescent_clamped")
        r_plus, r_minus = np.asarray(coeffs.r_plus), np.asarray(coeffs.r_minus)
        even = r_minus * lower_phase + r_plus * upper_phase
        product = r_plus * r_minus * round_trip
        m_plus = 1.0 + even + product
        m_minus = -1.0 + even - product

        prefactor = 3.0 * k_par / (2.0 * waves.k_vacuum) / (2.0 * beta)
        if q == "s":
            numerator = prefactor * emitter.w_par * m_plus
        else:
            numerator = prefactor * (
                emitter.w_z * (2.0 * k_par**2 / k_j**2) * m_plus
                - emitter.w_par * (beta**2 / k_j**2) * m_minus
            )
        denominator = np.asarray(coeffs.D)
        terms[q] = (numerator / denominator, denominator)
    return terms


def rate_integrand(stack: LayerStack, emitter: EmitterConfig, k_par):
    """Gamma~(k_par), the spectral density of Gamma/Gamma_0 per unit k_par"""
    terms = polarized_terms(stack, emitter, k_par)
    value = np.real(terms["s"][0] + terms["p"][0])
    return float(value) if np.ndim(value) == 0 else value


def light_lines(stack: LayerStack, omega: float) -> List[float]:
    """the cover, emitter and substrate light lines, branch points of D"""
    k_layer = wave_numbers(stack, omega, 0.0).k_layer
    indices = {0, stack.emitter_index, len(stack.layers) - 1}
    return sorted({float(k_layer[index].real) for index in indices})


class _Layout:
    """
    shared geometry of the k_par integrals: k = k_j sin(t) below the emitter
    light line, k = k_j cosh(u) above, resonances of both denominators
    """

    def __init__(self, stack: LayerStack, emitter: EmitterConfig, settings):
        self.stack = stack
        self.emitter = emitter
        self.settings = settings
        self.flags: Set[str] = set()
        waves = wave_numbers(stack, emitter.omega_A, 0.0)
        self.k_j = float(waves.k_layer[stack.emitter_index].real)
        self.k_layers = waves.k_layer
        self.scan_top = SCAN_MARGIN * float(np.max(waves.k_layer.real))
        self.light_lines = light_lines(stack, emitter.omega_A)

        self.resonances: List[Tuple[str, Resonance]] = []
        for q in POLARIZATIONS:
            found = find_resonances(
                lambda k, q=q: self.denominator(k, q),
                0.0,
                self.scan_top,
                settings,
                branch_points=self.light_lines,
            )
            self.resonances += [(q, item) for item in found]
        LOG.debug(
            "omega_A=%g: %d resonances below k=%g",
            emitter.omega_A,
            len(self.resonances),
            self.scan_top,
        )

    def denominator(self, k, q: str):
        # D depends on k only through k^2
        return coefficients(self.stack, self.emitter.omega_A, np.abs(k), q).D

    def terms(self, k):
        return polarized_terms(self.stack, self.emitter, k, self.flags)

    def integrand(self, k):
        terms = self.terms(k)
        return np.real(terms["s"][0] + terms["p"][0])

    def in_t(self, t):
        return self.integrand(self.k_j * np.sin(t)) * self.k_j * np.cos(t)

    def in_u(self, u):
        return self.integrand(self.k_j * np.cosh(u)) * self.k_j * np.sinh(u)

    def _marks(self, k_start: float, k_stop: float) -> List[float]:
        points = [k_start, k_stop]
        points += [k for k in self.light_lines if k_start < k < k_stop]
        for _, item in self.resonances:
            for step in (0.0, -1.0, 1.0, -10.0, 10.0, -50.0, 50.0):
                k = item.k0 + step * item.half_width
                if k_start < k < k_stop:
                    points.append(k)
        return points

    def propagating_breakpoints(self, k_stop: float) -> List[float]:
        top = min(k_stop, self.k_j)
        return sorted(
            float(np.arcsin(min(k / self.k_j, 1.0))) for k in self._marks(0.0, top)
        )

    def evanescent_breakpoints(self, k_start: float, k_stop: float) -> List[float]:
        return sorted(
            float(np.arccosh(max(k / self.k_j, 1.0)))
            for k in self._marks(k_start, k_stop)
        )

    def evanescent_segments(self, k_stop: float) -> Tuple[List[Segment], float]:
        """
        segments covering (k_j, k_stop) in u, guided modes handled by pole
        subtraction in k, and the sum of the subtracted pole integrals
        """
        segments: List[Segment] = []
        offset = 0.0
        cursor = self.k_j
        for a, b, resonance in self.guided_windows(k_stop):
            if a > cursor:
                segments.append(
                    Segment(self.in_u, self.evanescent_breakpoints(cursor, a))
                )
            segment, analytic = pole_segment(
                self.integrand,
                self.numerator(resonance),
                resonance,
                a,
                b,
                [k for k in self.light_lines if a < k < b],
            )
            segments.append(segment)
            offset += analytic
            cursor = b
        if k_stop > cursor:
            segments.append(
                Segment(self.in_u, self.evanescent_breakpoints(cursor, k_stop))
            )
        return segments, offset

    def guided_windows(self, k_stop: float):
        above = [item for _, item in self.resonances if item.k0 > self.k_j]
        return windows(above, self.k_j, k_stop, self.settings.window_factor)

    def numerator(self, resonance: Resonance):
        q = next(q for q, item in self.resonances if item is resonance)

        def evaluate(k):
            contribution, denominator = self.terms(k)[q]
            return contribution * denominator

        return evaluate


def _guard_half_space(stack: LayerStack, omega: float, side: str = "above"):
    index = -1 if side == "above" else 0
    eps = complex(stack.permittivities(omega)[index])
    if abs(eps.imag) > REAL_TOLERANCE:
        raise InvalidSideError(
            f"half-space {side} is absorbing at omega={omega:g} (eps={eps})"
        )
    return eps


def total_rate(
    stack: LayerStack,
    emitter: EmitterConfig,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> Integral:
    """Gamma/Gamma_0 integrated over all k_par including the evanescent tail"""
    check_position(stack, emitter)
    stack = prepare(stack, settings)
    layout = _Layout(stack, emitter, settings)
    budget = PanelBudget(settings.budget)
    k_j = layout.k_j

    k_body = max(layout.scan_top, k_j)
    evanescent, offset = layout.evanescent_segments(k_body)
    propagating = Segment(layout.in_t, layout.propagating_breakpoints(k_j))
    result = integrate([propagating, *evanescent], settings, budget, offset=offset)

    u_body = float(np.arccosh(k_body / k_j))
    result += tail(layout.in_u, u_body, settings, budget, result.value)
    LOG.debug("Gamma/Gamma_0=%.12g using %d panels", result.value, budget.used)
    return replace(result, flags=merge_flags(result.flags, sorted(layout.flags)))


def radiative_rate(
    stack: LayerStack,
    emitter: EmitterConfig,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> Integral:
    """Gamma_rad/Gamma_0, the same integral cut at the upper light line k_n"""
    check_position(stack, emitter)
    eps_n = _guard_half_space(stack, emitter.omega_A)
    stack = prepare(stack, settings)
    layout = _Layout(stack, emitter, settings)
    budget = PanelBudget(settings.budget)
    k_n = float(np.sqrt(eps_n.real)) * 2.0 * np.pi * emitter.omega_A

    segments = [Segment(layout.in_t, layout.propagating_breakpoints(k_n))]
    if k_n > layout.k_j:
        segments.append(
            Segment(layout.in_u, layout.evanescent_breakpoints(layout.k_j, k_n))
        )
    result = integrate(segments, settings, budget)
    return replace(result, flags=merge_flags(result.flags, sorted(layout.flags)))


@lru_cache(maxsize=1024)
def cached_total_rate(
    stack: LayerStack,
    emitter: EmitterConfig,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> Integral:
    """total_rate memoized on the immutable inputs"""
    return total_rate(stack, emitter, settings)


def decay_rates(
    stack: LayerStack,
    emitter: EmitterConfig,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> RateResult:
    total = cached_total_rate(stack, emitter, settings)
    radiative = radiative_rate(stack, emitter, settings)
    flags = list(
        merge_flags(stack.validate_at(emitter.omega_A), total.flags, radiative.flags)
    )
    if radiative.value > total.value + total.error + radiative.error:
        LOG.warning(
            "radiative rate %.6g exceeds total rate %.6g at omega_A=%g",
            radiative.value,
            total.value,
            emitter.omega_A,
        )
        flags.append("channel_order")
    guided = (total.value - radiative.value) / total.value if total.value else 0.0
    return RateResult(
        gamma_total=total.value,
        gamma_rad=radiative.value,
        quadrature_error=total.error + radiative.error,
        guided_fraction=guided,
        flags=tuple(flags),
    )


def _mapped(resonance: Resonance, k_j: float, evanescent: bool) -> Resonance:
    if evanescent:
        position = float(np.arccosh(resonance.k0 / k_j))
        scale = k_j * np.sinh(position)
    else:
        position = float(np.arcsin(resonance.k0 / k_j))
        scale = k_j * np.cos(position)
    return Resonance(
        position,
        resonance.D,
        resonance.derivative * scale,
        resonance.half_width / scale,
    )


def oracle_rate(
    stack: LayerStack,
    emitter: EmitterConfig,
    points: int = 1_000_000,
    k_stop: Optional[float] = None,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """
    Gamma/Gamma_0 from dense trapezoid sums, used to cross-check the
    adaptive engine; the evanescent range ends where the near field of the
    emitter has decayed by exp(-60)
    """
    check_position(stack, emitter)
    stack = prepare(stack, settings)
    layout = _Layout(stack, emitter, settings)
    k_j = layout.k_j
    if k_stop is None:
        distance = min(emitter.z_A, stack.emitter_thickness - emitter.z_A)
        k_stop = max(layout.scan_top, k_j + 30.0 / distance)

    top = min(k_stop, k_j)
    # beta_j vanishes on the light line, the mapped integrands stay bounded
    upper_t = float(np.arcsin(top / k_j))
    if top >= k_j:
        upper_t -= LIGHT_LINE_GAP
    propagating = [
        _mapped(item, k_j, False)
        for _, item in layout.resonances
        if 0.0 < item.k0 < top
    ]
    total = trapezoid_oracle(
        layout.in_t,
        0.0,
        upper_t,
        points // 2,
        propagating,
    )
    if k_stop > k_j:
        evanescent = [
            _mapped(item, k_j, True)
            for _, item in layout.resonances
            if k_j < item.k0 < k_stop
        ]
        total += trapezoid_oracle(
            layout.in_u,
            LIGHT_LINE_GAP,
            float(np.arccosh(k_stop / k_j)),
            points // 2,
            evanescent,
        )
    return total

