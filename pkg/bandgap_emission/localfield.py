#!/usr/bin/env python
# -*- coding: UTF-8 -*-
"""
real-cavity local-field correction for emitters in a dielectric host

The correction is opt-in post-processing. Rates pick up the squared factor
|3 eps/(2 eps + 1)|^2; the angular and total energies are invariant because
the same factor enters the far field and the normalizing total rate.
"""

import logging
from dataclasses import dataclass, replace
from typing import TypeVar, Union

from .decay import RateResult
from .errors import UnsupportedRegimeError
from .farfield import AngularSpectrum, EnergyResult

LOG = logging.getLogger(__name__)

LOSS_TOLERANCE = 1e-3
Energy = TypeVar("Energy", EnergyResult, AngularSpectrum)


@dataclass(frozen=True)
class LocalFieldFactor:
    eps_host: complex
    factor: complex
    factor_sq_abs: float


def local_field_factor(eps_host: Union[complex, float]) -> LocalFieldFactor:
    eps = complex(eps_host)
    if eps.real <= 0.0 or abs(eps.imag) > LOSS_TOLERANCE * abs(eps.real):
        raise UnsupportedRegimeError(
            f"local-field correction needs a transparent host, got eps={eps}"
        )
    if eps == 1.0:
        return LocalFieldFactor(eps, 1.0 + 0.0j, 1.0)
    factor = 3.0 * eps / (2.0 * eps + 1.0)
    return LocalFieldFactor(eps, factor, abs(factor) ** 2)


def corrected_rates(raw: RateResult, eps_host: Union[complex, float]) -> RateResult:
    correction = local_field_factor(eps_host)
    multiplier = correction.factor_sq_abs
    LOG.info(
        "local-field correction of rates by %.12g (eps=%s)",
        multiplier,
        correction.eps_host,
    )
    return replace(
        raw,
        gamma_total=raw.gamma_total * multiplier,
        gamma_rad=raw.gamma_rad * multiplier,
        quadrature_error=raw.quadrature_error * multiplier,
    )


def corrected_energy(raw: Energy, eps_host: Union[complex, float]) -> Energy:
    """energies are invariant, the call only validates and records the host"""
    correction = local_field_factor(eps_host)
    LOG.info(
        "local-field correction considered for %s (eps=%s): energies unchanged",
        type(raw).__name__,
        correction.eps_host,
    )
    return raw
