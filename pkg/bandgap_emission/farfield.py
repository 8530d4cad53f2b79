#!/usr/bin/env python
# -*- coding: UTF-8 -*-
"""
radiation escaping into the outer half-spaces

The stationary-phase far field of the layered Green tensor reduces to one
plane wave per observation angle, so everything follows from the
polarized coefficients at k_par = k_side sin(theta). Energies are given in
units of the photon energy hbar omega_A.
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np
from scipy.integrate import quad

from .decay import (
    EmitterConfig,
    cached_total_rate,
    check_position,
    light_lines,
    radiative_rate,
)
from .errors import InvalidSideError
from .quadrature import (
    DEFAULT_SETTINGS,
    Integral,
    QuadratureSettings,
    adaptive,
    find_resonances,
    merge_flags,
)
from .stack import SIDES, LayerStack, coefficients, phase_factor, wave_numbers

LOG = logging.getLogger(__name__)

DEFAULT_THETA_POINTS = 721
FORM_TOLERANCE = 1e-8
NORMALIZATION_TOLERANCE = 1e-6
REAL_TOLERANCE = 1e-6


@dataclass(frozen=True)
class FarFieldAmplitudes:
    side: str
    p_plus: np.ndarray
    p_minus: np.ndarray
    s_plus: np.ndarray


@dataclass(frozen=True)
class AngularSpectrum:
    side: str
    thetas: np.ndarray
    values: np.ndarray
    omega_A: float
    flags: Tuple[str, ...] = ()

    def peak_angle(self) -> float:
        return float(self.thetas[int(np.argmax(self.values))])

    def half_width(self) -> float:
        """angle from the maximum to where the pattern first drops to one half"""
        peak = int(np.argmax(self.values))
        below = np.nonzero(self.values[peak:] <= 0.5 * self.values[peak])[0]
        if not below.size:
            return float(self.thetas[-1] - self.thetas[peak])
        return float(self.thetas[peak + below[0]] - self.thetas[peak])


@dataclass(frozen=True)
class EnergyResult:
    W_top: float
    W_bottom: float
    lost_fraction: float
    quadrature_error: float = 0.0
    flags: Tuple[str, ...] = field(default=())


def side_permittivity(stack: LayerStack, omega: float, side: str) -> complex:
    if side not in SIDES:
        raise InvalidSideError(f"side must be one of {SIDES}, got {side!r}")
    index = -1 if side == "above" else 0
    eps = complex(stack.permittivities(omega)[index])
    if abs(eps.imag) > REAL_TOLERANCE:
        raise InvalidSideError(
            f"half-space {side} is not transparent at omega={omega:g} (eps={eps})"
        )
    return eps


def side_wavenumber(stack: LayerStack, omega: float, side: str) -> float:
    index = float(np.sqrt(side_permittivity(stack, omega, side).real))
    return index * 2.0 * np.pi * omega


def farfield_amplitudes(
    stack: LayerStack, emitter: EmitterConfig, k_par, side: str = "above"
) -> FarFieldAmplitudes:
    """
    g_{q+-} of the plane wave leaving through the given side, per polarization

    above: t_up e^{i b (d-z)} / D [1 +- r_- e^{2 i b z}]
    below: t_down e^{i b z} / D [1 +- r_+ e^{2 i b (d-z)}]
    """
    side_permittivity(stack, emitter.omega_A, side)
    z_A = emitter.z_A
    d_j = stack.emitter_thickness
    waves = wave_numbers(stack, emitter.omega_A, k_par)

    result = {}
    for q in ("p", "s"):
        coeffs = coefficients(stack, emitter.omega_A, k_par, q, waves=waves)
        beta = np.asarray(coeffs.beta_j)
        if side == "above":
            transmission, near, far = coeffs.t_up, d_j - z_A, z_A
            reflection = coeffs.r_minus
        else:
            transmission, near, far = coeffs.t_down, z_A, d_j - z_A
            reflection = coeffs.r_plus
        travel, _ = phase_factor(beta, near)
        bounce, _ = phase_factor(beta, 2.0 * far)
        common = np.asarray(transmission) * travel / np.asarray(coeffs.D)
        result[f"{q}+"] = common * (1.0 + np.asarray(reflection) * bounce)
        result[f"{q}-"] = common * (1.0 - np.asarray(reflection) * bounce)
    return FarFieldAmplitudes(side, result["p+"], result["p-"], result["s+"])


def _bracket(stack: LayerStack, emitter: EmitterConfig, k_par, side: str):
    """orientation-weighted |g|^2 sum, W(theta) = 3 sqrt(eps) B / (8 Gamma)"""
    k_par = np.asarray(k_par, dtype=float)
    waves = wave_numbers(stack, emitter.omega_A, k_par)
    k_j = waves.k_layer[stack.emitter_index]
    beta_j = waves.beta_layer[stack.emitter_index]
    amplitudes = farfield_amplitudes(stack, emitter, k_par, side)
    k_j_sq = abs(k_j) ** 2
    return emitter.w_z * 2.0 * k_par**2 / k_j_sq * np.abs(amplitudes.p_plus) ** 2 + (
        emitter.w_par
        * (
            np.abs(beta_j) ** 2 / k_j_sq * np.abs(amplitudes.p_minus) ** 2
            + np.abs(amplitudes.s_plus) ** 2
        )
    )


def angular_density(
    stack: LayerStack,
    emitter: EmitterConfig,
    thetas,
    side: str = "above",
    gamma: float = 1.0,
):
    """W(theta)/(hbar omega_A) for a given Gamma/Gamma_0"""
    eps = side_permittivity(stack, emitter.omega_A, side)
    k_side = side_wavenumber(stack, emitter.omega_A, side)
    bracket = _bracket(stack, emitter, k_side * np.sin(thetas), side)
    return 3.0 * np.sqrt(eps.real) / (8.0 * gamma) * bracket


def angular_energy(
    stack: LayerStack,
    emitter: EmitterConfig,
    side: str = "above",
    thetas: Sequence[float] = None,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> AngularSpectrum:
    check_position(stack, emitter)
    if thetas is None:
        thetas = np.linspace(0.0, 0.5 * np.pi, DEFAULT_THETA_POINTS, endpoint=False)
    thetas = np.asarray(thetas, dtype=float)
    gamma = cached_total_rate(stack, emitter, settings)
    values = angular_density(stack, emitter, thetas, side, gamma.value)
    return AngularSpectrum(side, thetas, values, emitter.omega_A, gamma.flags)


def solid_angle_energy(
    stack: LayerStack,
    emitter: EmitterConfig,
    side: str,
    theta,
    phi,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
):
    """
    W(Omega)/(hbar omega_A) for a real dipole (sqrt(w_par), 0, sqrt(w_z)),
    its phi-integral is W(theta)
    """
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    eps = side_permittivity(stack, emitter.omega_A, side)
    k_side = side_wavenumber(stack, emitter.omega_A, side)
    k_par = k_side * np.sin(theta)
    waves = wave_numbers(stack, emitter.omega_A, k_par)
    k_j = waves.k_layer[stack.emitter_index]
    beta_j = waves.beta_layer[stack.emitter_index]
    g = farfield_amplitudes(stack, emitter, k_par, side)
    p_wave = (k_par / k_j) * np.sqrt(emitter.w_z) * g.p_plus - (
        beta_j / k_j
    ) * np.sqrt(emitter.w_par) * np.cos(phi) * g.p_minus
    s_wave = emitter.w_par * np.sin(phi) ** 2 * np.abs(g.s_plus) ** 2
    gamma = cached_total_rate(stack, emitter, settings).value
    prefactor = 3.0 * np.sqrt(eps.real) / (8.0 * np.pi * gamma)
    return prefactor * (np.abs(p_wave) ** 2 + s_wave)


def _theta_breakpoints(stack, emitter, k_side, settings) -> list:
    points = [0.0, 0.5 * np.pi]
    branch = light_lines(stack, emitter.omega_A)
    points += [float(np.arcsin(k / k_side)) for k in branch if 0.0 < k < k_side]
    for q in ("s", "p"):
        for item in find_resonances(
            lambda k, q=q: coefficients(stack, emitter.omega_A, np.abs(k), q).D,
            0.0,
            k_side,
            settings,
            branch_points=branch,
        ):
            for step in (0.0, -1.0, 1.0, -10.0, 10.0):
                k = item.k0 + step * item.half_width
                if 0.0 < k < k_side:
                    points.append(float(np.arcsin(k / k_side)))
    return sorted(points)


def side_energy_theta(
    stack: LayerStack,
    emitter: EmitterConfig,
    side: str,
    gamma: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> Integral:
    """W/(hbar omega_A) through one side as the integral of sin(theta) W(theta)"""
    k_side = side_wavenumber(stack, emitter.omega_A, side)

    def integrand(theta):
        return np.sin(theta) * angular_density(stack, emitter, theta, side, gamma)

    breakpoints = _theta_breakpoints(stack, emitter, k_side, settings)
    return adaptive(integrand, breakpoints, settings)


def side_energy_kpar(
    stack: LayerStack,
    emitter: EmitterConfig,
    side: str,
    gamma: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> Integral:
    """
    the same energy integrated over k_par in [0, k_side], the 1/beta_side
    endpoint singularity is left to the algebraic weight of QUADPACK
    """
    k_side = side_wavenumber(stack, emitter.omega_A, side)
    k_vacuum = 2.0 * np.pi * emitter.omega_A
    scale = 3.0 / (8.0 * gamma * k_vacuum)

    def integrand(k):
        return float(k / np.sqrt(k_side + k) * _bracket(stack, emitter, k, side))

    flags = []
    value, error, info, *message = quad(
        integrand,
        0.0,
        k_side,
        weight="alg",
        wvar=(0.0, -0.5),
        epsabs=settings.abs_tol,
        epsrel=settings.rel_tol,
        limit=200,
        full_output=True,
    )
    if message:
        LOG.warning("k_par form of W on side %s: %s", side, message[0])
        flags.append("quad_roundoff")
    return Integral(scale * value, scale * error, info.get("neval", 0), tuple(flags))


def total_energy(
    stack: LayerStack,
    emitter: EmitterConfig,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    check_forms: bool = True,
) -> EnergyResult:
    """
    W_top and W_bottom in units of hbar omega_A; with check_forms the k_par
    form is evaluated as well and a disagreement is flagged
    """
    check_position(stack, emitter)
    rate = cached_total_rate(stack, emitter, settings)
    flags = list(rate.flags)
    energies = {}
    error = rate.error

    for side in SIDES:
        by_angle = side_energy_theta(stack, emitter, side, rate.value, settings)
        flags = list(merge_flags(flags, by_angle.flags))
        error += by_angle.error
        if check_forms:
            by_kpar = side_energy_kpar(stack, emitter, side, rate.value, settings)
            flags = list(merge_flags(flags, by_kpar.flags))
            scale = max(abs(by_angle.value), abs(by_kpar.value))
            mismatch = abs(by_angle.value - by_kpar.value)
            if mismatch > FORM_TOLERANCE * scale + settings.abs_tol:
                LOG.warning(
                    "theta and k_par forms of W differ on side %s: %.12g vs %.12g",
                    side,
                    by_angle.value,
                    by_kpar.value,
                )
                flags = list(merge_flags(flags, ["form_mismatch"]))
        energies[side] = by_angle.value

    total = energies["above"] + energies["below"]
    if total > 1.0 + NORMALIZATION_TOLERANCE:
        LOG.warning(
            "emitted energy %.9g exceeds one photon at omega_A=%g",
            total,
            emitter.omega_A,
        )
        flags = list(merge_flags(flags, ["normalization"]))
    return EnergyResult(
        W_top=energies["above"],
        W_bottom=energies["below"],
        lost_fraction=1.0 - total,
        quadrature_error=error,
        flags=tuple(flags),
    )


def balance_identity(
    stack: LayerStack,
    emitter: EmitterConfig,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """
    Gamma_rad/(2 Gamma) - W_top/(hbar omega_A), vanishing for a lossless
    mirror-symmetric stack with the emitter at the layer center
    """
    gamma = cached_total_rate(stack, emitter, settings)
    gamma_rad = radiative_rate(stack, emitter, settings)
    w_top = side_energy_theta(stack, emitter, "above", gamma.value, settings)
    return gamma_rad.value / (2.0 * gamma.value) - w_top.value
