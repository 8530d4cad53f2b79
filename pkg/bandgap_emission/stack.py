#!/usr/bin/env python
# -*- coding: UTF-8 -*-
"""
planar multilayer geometry and its polarized reflection/transmission

Layers are numbered from the lower half-space (0) to the upper one (n), the
z axis points upward. Lengths are given in units of lambda_0 = 2 pi c/omega_0,
wavenumbers in units of 1/lambda_0, so the vacuum wavenumber at omega
(in units of omega_0) is 2 pi omega.
"""

import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .dispersion import VACUUM, DispersionModel, permittivity, refractive_index
from .errors import DomainError, InvalidParameterError

LOG = logging.getLogger(__name__)

POLARIZATIONS = ("s", "p")
SIDES = ("above", "below")
MATERIAL_LABELS = ("low", "high", "emitter", "outer")
# exp(-700) is the last factor that does not underflow to a subnormal
EVANESCENT_LIMIT = 700.0

KPar = Union[float, np.ndarray]


@dataclass(frozen=True)
class Layer:
    dispersion: DispersionModel
    thickness: Optional[float] = None
    label: str = ""


@dataclass(frozen=True)
class LayerStack:
    layers: Tuple[Layer, ...]
    emitter_index: int

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        n = len(self.layers) - 1
        if n < 2:
            raise InvalidParameterError(
                "a stack needs two half-spaces and at least one interior layer"
            )
        if not 1 <= self.emitter_index <= n - 1:
            raise InvalidParameterError(
                f"emitter layer index must lie in [1, {n - 1}], "
                f"got {self.emitter_index}"
            )
        for index in (0, n):
            if self.layers[index].thickness is not None:
                raise InvalidParameterError(f"layer {index} is a half-space")
        for index, layer in enumerate(self.layers[1:-1], start=1):
            if layer.thickness is None or not layer.thickness > 0.0:
                raise InvalidParameterError(
                    f"interior layer {index} needs a positive thickness"
                )

    @property
    def n(self) -> int:
        return len(self.layers) - 1

    @property
    def emitter_layer(self) -> Layer:
        return self.layers[self.emitter_index]

    @property
    def emitter_thickness(self) -> float:
        return float(self.emitter_layer.thickness)  # type: ignore[arg-type]

    def permittivities(self, omega: float) -> np.ndarray:
        return np.array(
            [complex(permittivity(layer.dispersion, omega)) for layer in self.layers]
        )

    def thicknesses(self) -> List[float]:
        return [layer.thickness or 0.0 for layer in self.layers]

    def reversed(self) -> "LayerStack":
        return LayerStack(self.layers[::-1], self.n - self.emitter_index)

    def half_space(self, side: str) -> Layer:
        if side not in SIDES:
            raise InvalidParameterError(f"side must be one of {SIDES}, got {side!r}")
        return self.layers[-1] if side == "above" else self.layers[0]

    def validate_at(self, omega: float) -> List[str]:
        """
        check the regime the emission formulas are valid in, returns the
        diagnostic flags for the given transition frequency
        """
        flags = []
        eps_j = complex(permittivity(self.emitter_layer.dispersion, omega))
        if abs(eps_j.imag) > 1e-3 * abs(eps_j.real):
            LOG.warning(
                "emitter layer is absorbing at omega_A=%g (eps_j=%s)", omega, eps_j
            )
            flags.append("lossy_emitter_layer")
        if abs(eps_j - 1.0) > 1e-6:
            flags.append("emitter_host_not_vacuum")
        eps_0 = complex(permittivity(self.layers[0].dispersion, omega))
        eps_n = complex(permittivity(self.layers[-1].dispersion, omega))
        if abs(eps_0 - eps_n) > 1e-12:
            LOG.warning("outer half-spaces differ: eps_0=%s, eps_n=%s", eps_0, eps_n)
            flags.append("asymmetric_half_spaces")
        return flags


@dataclass(frozen=True)
class WaveNumbers:
    k_vacuum: float
    eps: np.ndarray
    k_layer: np.ndarray
    beta_layer: np.ndarray


@dataclass(frozen=True)
class PolarizedCoefficients:
    q: str
    r_plus: KPar
    r_minus: KPar
    t_up: KPar
    t_down: KPar
    D: KPar
    beta_j: KPar
    d_j: float
    clamped: bool = False


def normal_component(k_medium, k_par):
    """beta = sqrt(k^2 - k_par^2) on the branch Im beta >= 0 (Re beta >= 0 if real)"""
    beta = np.sqrt(np.asarray(k_medium, dtype=complex) ** 2 - np.asarray(k_par) ** 2)
    flip = (beta.imag < 0.0) | ((beta.imag == 0.0) & (beta.real < 0.0))
    return np.where(flip, -beta, beta)


def wave_numbers(stack: LayerStack, omega: float, k_par: KPar) -> WaveNumbers:
    if not omega > 0.0:
        raise DomainError(f"angular frequency must be positive, got {omega!r}")
    if np.any(np.asarray(k_par) < 0.0):
        raise DomainError("in-plane wavenumber must be non-negative")
    eps = stack.permittivities(omega)
    k_vacuum = 2.0 * np.pi * omega
    k_layer = np.sqrt(eps) * k_vacuum
    shape = (-1,) + (1,) * np.ndim(k_par)
    beta = normal_component(k_layer.reshape(shape), k_par)
    return WaveNumbers(k_vacuum, eps, k_layer, beta)


def interface(q: str, beta_a, beta_b, eps_a: complex, eps_b: complex):
    """
    reflection and transmission for a wave incident from medium a onto b in
    the basis e_p = (-/+ beta e_k + k_par e_z)/k, r_ab = -r_ba
    """
    if q == "s":
        numerator = beta_a - beta_b
        denominator = beta_a + beta_b
        transmitted = 2.0 * beta_a
    elif q == "p":
        numerator = eps_b * beta_a - eps_a * beta_b
        denominator = eps_b * beta_a + eps_a * beta_b
        transmitted = 2.0 * np.sqrt(eps_a) * np.sqrt(eps_b) * beta_a
    else:
        raise InvalidParameterError(f"polarization must be 's' or 'p', got {q!r}")
    # identical media at their common light line
    degenerate = denominator == 0.0
    safe = np.where(degenerate, 1.0, denominator)
    r = np.where(degenerate, 0.0, numerator / safe)
    t = np.where(degenerate, 1.0, transmitted / safe)
    return r, t


def phase_factor(beta, thickness: float):
    """exp(i beta d), clamped to zero past the evanescent limit"""
    exponent = 1j * beta * thickness
    deep = -exponent.real > EVANESCENT_LIMIT
    factor = np.exp(np.where(deep, 0.0, exponent))
    return np.where(deep, 0.0, factor), bool(np.any(deep))


def one_sided(q: str, betas: Sequence, eps: Sequence, thickness: Sequence[float]):
    """
    stack seen from the emitter layer (index 0 of the sequences) towards the
    half-space (last index): total reflection at the emitter-layer face and
    transmission from the half-space into the emitter layer, both obtained by
    Airy recursion on interface coefficients so that no growing exponential
    is ever formed
    """
    count = len(betas)
    clamped = False

    r_acc, _ = interface(q, betas[-2], betas[-1], eps[-2], eps[-1])
    for idx in range(count - 2, 0, -1):
        ph2, deep = phase_factor(betas[idx], 2.0 * thickness[idx])
        clamped |= deep
        r_if, _ = interface(q, betas[idx - 1], betas[idx], eps[idx - 1], eps[idx])
        r_acc = (r_if + r_acc * ph2) / (1.0 + r_if * r_acc * ph2)

    rho, tau = interface(q, betas[1], betas[0], eps[1], eps[0])
    for idx in range(2, count):
        ph, deep = phase_factor(betas[idx - 1], thickness[idx - 1])
        clamped |= deep
        ph2 = ph * ph
        r_if, t_if = interface(q, betas[idx], betas[idx - 1], eps[idx], eps[idx - 1])
        denominator = 1.0 + r_if * rho * ph2
        tau = t_if * ph * tau / denominator
        rho = (r_if + rho * ph2) / denominator

    return r_acc, tau, clamped


def _unwrap(value):
    return complex(value) if np.ndim(value) == 0 else value


def coefficients(
    stack: LayerStack,
    omega: float,
    k_par: KPar,
    q: str,
    waves: Optional[WaveNumbers] = None,
) -> PolarizedCoefficients:
    if waves is None:
        waves = wave_numbers(stack, omega, k_par)
    j = stack.emitter_index
    thickness = stack.thicknesses()
    betas = list(waves.beta_layer)
    eps = list(waves.eps)

    upper = slice(j, None)
    r_plus, t_up, clamped_up = one_sided(q, betas[upper], eps[upper], thickness[upper])
    r_minus, t_down, clamped_down = one_sided(
        q, betas[j::-1], eps[j::-1], thickness[j::-1]
    )

    d_j = stack.emitter_thickness
    ph2, clamped_j = phase_factor(betas[j], 2.0 * d_j)
    D = 1.0 - r_plus * r_minus * ph2
    clamped = clamped_up or clamped_down or clamped_j
    if clamped:
        LOG.debug("deep evanescent propagation factors clamped at omega=%g", omega)

    return PolarizedCoefficients(
        q=q,
        r_plus=_unwrap(r_plus),
        r_minus=_unwrap(r_minus),
        t_up=_unwrap(t_up),
        t_down=_unwrap(t_down),
        D=_unwrap(D),
        beta_j=_unwrap(betas[j]),
        d_j=d_j,
        clamped=clamped,
    )


def _matrix_product(q: str, betas, eps, thickness):
    total = np.eye(2, dtype=complex)
    for idx in range(len(betas) - 1):
        if idx:
            ph = np.exp(1j * betas[idx] * thickness[idx])
            total = total @ np.array([[1.0 / ph, 0.0], [0.0, ph]])
        r_if, t_if = interface(q, betas[idx], betas[idx + 1], eps[idx], eps[idx + 1])
        r_if, t_if = complex(r_if), complex(t_if)
        total = total @ (np.array([[1.0, r_if], [r_if, 1.0]]) / t_if)
    return total[1, 0] / total[0, 0], 1.0 / total[0, 0]


def matrix_coefficients(stack: LayerStack, omega: float, k_par: float, q: str):
    """
    plain 2x2 transfer-matrix product of the same stack, only meant for
    shallow stacks as it forms exp(-i beta d) factors explicitly

    returns (r_plus, r_minus, t_up, t_down)
    """
    waves = wave_numbers(stack, omega, float(k_par))
    j = stack.emitter_index
    betas = [complex(beta) for beta in waves.beta_layer]
    eps = list(waves.eps)
    thickness = stack.thicknesses()

    r_plus, _ = _matrix_product(q, betas[j:], eps[j:], thickness[j:])
    r_minus, _ = _matrix_product(q, betas[j::-1], eps[j::-1], thickness[j::-1])
    _, t_up = _matrix_product(q, betas[:j - 1:-1], eps[:j - 1:-1], thickness[:j - 1:-1])
    _, t_down = _matrix_product(q, betas[: j + 1], eps[: j + 1], thickness[: j + 1])
    return r_plus, r_minus, t_up, t_down


def energy_balance(
    stack: LayerStack, omega: float, k_par: KPar, q: str, side: str = "above"
):
    """
    (beta_j/beta_side) |t|^2 + |r|^2 for the stack on the given side, equal to
    one for lossless stacks and propagating waves
    """
    waves = wave_numbers(stack, omega, k_par)
    coeffs = coefficients(stack, omega, k_par, q, waves=waves)
    if side == "above":
        beta_side, t, r = waves.beta_layer[-1], coeffs.t_up, coeffs.r_plus
    else:
        beta_side, t, r = waves.beta_layer[0], coeffs.t_down, coeffs.r_minus
    ratio = np.real(coeffs.beta_j / beta_side)
    return ratio * np.abs(t) ** 2 + np.abs(r) ** 2


def quarter_wave(model: DispersionModel, omega: float = 1.0) -> float:
    """optical quarter-wave thickness lambda_0/(4 Re sqrt(eps(omega_0)))"""
    return 0.25 / (refractive_index(model, omega) * omega)


def build_bragg(
    periods_up: int,
    periods_down: int,
    defect: bool,
    eps_L: DispersionModel,
    eps_H: DispersionModel,
    eps_emitter: DispersionModel = VACUUM,
    *,
    adjacent_material: str = "H",
    eps_outer: DispersionModel = VACUUM,
) -> LayerStack:
    """
    emitter layer sandwiched between two distributed Bragg reflectors,
    every mirror plate is an optical quarter wave at omega_0, the emitter
    layer a quarter wave (no defect) or a half wave (defect)
    """
    for name, periods in (("periods_up", periods_up), ("periods_down", periods_down)):
        if int(periods) != periods or periods < 1:
            raise InvalidParameterError(
                f"{name} must be a positive integer, got {periods!r}"
            )
    if adjacent_material not in ("H", "L"):
        raise InvalidParameterError(
            f"adjacent_material must be 'H' or 'L', got {adjacent_material!r}"
        )

    high = Layer(eps_H, quarter_wave(eps_H), "high")
    low = Layer(eps_L, quarter_wave(eps_L), "low")
    period = (high, low) if adjacent_material == "H" else (low, high)
    emitter_thickness = quarter_wave(eps_emitter) * (2.0 if defect else 1.0)
    emitter = Layer(eps_emitter, emitter_thickness, "emitter")
    outer = Layer(eps_outer, None, "outer")

    upper = list(period) * int(periods_up)
    lower = (list(period) * int(periods_down))[::-1]
    layers = [outer, *lower, emitter, *upper, outer]
    return LayerStack(tuple(layers), 1 + len(lower))


def retune(stack: LayerStack, label: str, model: DispersionModel) -> LayerStack:
    """swap the material of all layers carrying label, thicknesses unchanged"""
    if not any(layer.label == label for layer in stack.layers):
        raise InvalidParameterError(f"no layer is made of material {label!r}")
    layers = tuple(
        replace(layer, dispersion=model) if layer.label == label else layer
        for layer in stack.layers
    )
    return replace(stack, layers=layers)


def uniform_stack(
    model: DispersionModel = VACUUM, thickness: float = 0.5, interior: int = 1
) -> LayerStack:
    """homogeneous medium split into layers, reflections vanish identically"""
    inner = [Layer(model, thickness, "emitter")] * interior
    outer = Layer(model, None, "outer")
    return LayerStack((outer, *inner, outer), 1 + (interior - 1) // 2)
