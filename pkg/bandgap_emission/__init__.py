#!/usr/bin/env python
# -*- coding: UTF-8 -*-
"""spontaneous emission of a dipole inside a planar photonic band-gap multilayer"""

__version__ = "2024.06.1"
PACKAGE_NAME = __name__

# pylint: disable=wrong-import-position
from .decay import (
    ORIENTATIONS,
    EmitterConfig,
    RateResult,
    decay_rates,
    radiative_rate,
    rate_integrand,
    total_rate,
)
from .dispersion import VACUUM, Constant, DrudeLorentz, permittivity
from .errors import (
    DomainError,
    EmissionError,
    InvalidParameterError,
    InvalidSideError,
    QuadratureError,
    ScenarioError,
    SweepError,
    UnsupportedRegimeError,
)
from .farfield import (
    AngularSpectrum,
    EnergyResult,
    angular_energy,
    balance_identity,
    farfield_amplitudes,
    solid_angle_energy,
    total_energy,
)
from .localfield import corrected_energy, corrected_rates, local_field_factor
from .quadrature import QuadratureSettings
from .stack import (
    Layer,
    LayerStack,
    build_bragg,
    coefficients,
    energy_balance,
    retune,
    wave_numbers,
)
