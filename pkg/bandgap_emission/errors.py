#!/usr/bin/env python
# -*- coding: UTF-8 -*-

from typing import Any, List, Optional, Tuple


class EmissionError(Exception):
    """base class for all errors raised by bandgap_emission"""


class DomainError(EmissionError, ValueError):
    pass


class InvalidParameterError(EmissionError, ValueError):
    pass


class InvalidSideError(EmissionError, ValueError):
    pass


class UnsupportedRegimeError(EmissionError):
    pass


class QuadratureError(EmissionError, ArithmeticError):
    """
    raised when the adaptive quadrature exhausts its subdivision budget,
    the partially converged value is kept for diagnostics
    """

    def __init__(self, message: str, *, value: float, error: float, panels: int):
        super().__init__(message)
        self.value = value
        self.error = error
        self.panels = panels


class ScenarioError(EmissionError, ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class SweepError(EmissionError):
    def __init__(self, message: str, errors: Optional[List[Tuple[Any, Exception]]]):
        super().__init__(message)
        self.errors = list(errors or ())
