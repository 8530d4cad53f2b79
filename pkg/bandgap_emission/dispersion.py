#!/usr/bin/env python
# -*- coding: UTF-8 -*-
"""
complex relative permittivities of the layer materials

All frequencies are given in units of the design frequency omega_0, so the
models are dimensionless and can be shared between scenarios.
"""

from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from .errors import DomainError

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class Constant:
    eps: complex = 1.0 + 0.0j

    def __post_init__(self):
        object.__setattr__(self, "eps", complex(self.eps))
        if self.eps.imag < 0.0:
            raise DomainError(f"passive medium requires Im eps >= 0, got {self.eps!r}")

    def permittivity(self, omega: ArrayLike):
        if np.ndim(omega):
            return np.full(np.shape(omega), self.eps, dtype=complex)
        return self.eps

    def describe(self) -> str:
        return f"constant eps={self.eps.real:g}{self.eps.imag:+g}j"


@dataclass(frozen=True)
class DrudeLorentz:
    """single resonance eps(w) = 1 + wP^2 / (wT^2 - w^2 - i w gamma)"""

    omega_P: float
    omega_T: float
    gamma: float

    def __post_init__(self):
        for name in ("omega_P", "omega_T", "gamma"):
            value = float(getattr(self, name))
            if not value >= 0.0:
                raise DomainError(f"{name} must be non-negative, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_ratio(cls, omega_P_ratio: float, omega_T: float, gamma: float):
        """omega_P given in units of omega_T, as in the figure captions"""
        return cls(omega_P=omega_P_ratio * omega_T, omega_T=omega_T, gamma=gamma)

    @property
    def omega_P_ratio(self) -> float:
        return self.omega_P / self.omega_T if self.omega_T else float("inf")

    def permittivity(self, omega: ArrayLike):
        omega = np.asarray(omega, dtype=float) if np.ndim(omega) else float(omega)
        denominator = self.omega_T**2 - omega**2 - 1j * omega * self.gamma
        return 1.0 + self.omega_P**2 / denominator

    def with_gamma(self, gamma: float) -> "DrudeLorentz":
        return replace(self, gamma=gamma)

    def describe(self) -> str:
        return (
            f"drude-lorentz wP={self.omega_P_ratio:.6g}*wT "
            f"wT={self.omega_T:g} gamma={self.gamma:g}"
        )


DispersionModel = Union[Constant, DrudeLorentz]
VACUUM = Constant(1.0)


def permittivity(model: DispersionModel, omega: ArrayLike):
    """evaluate eps(omega) of the given model, omega in units of omega_0"""
    if np.any(np.asarray(omega) <= 0.0):
        raise DomainError(f"angular frequency must be positive, got {omega!r}")
    return model.permittivity(omega)


def refractive_index(model: DispersionModel, omega: float = 1.0) -> float:
    """real part of the principal square root, used for optical thicknesses"""
    return float(np.sqrt(complex(permittivity(model, omega))).real)


def regularized(model: DispersionModel, gamma_floor: float) -> DispersionModel:
    """lift an exactly lossless Drude-Lorentz resonance to a finite linewidth"""
    if isinstance(model, DrudeLorentz) and model.gamma == 0.0 and model.omega_P:
        return model.with_gamma(gamma_floor)
    return model
