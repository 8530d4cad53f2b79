#!/usr/bin/env python
# -*- coding: UTF-8 -*-
"""
scenario documents for the parameter studies of the band-gap device

Every preset is an override of DEFAULT_SCENARIO; the default device is the
5+5 period quarter-wave stack with vacuum low-index layers, vacuum outer
media and a single Drude-Lorentz resonance for the high-index material.
"""

from typing import Any, Dict, Mapping, Optional

from .errors import ScenarioError
from .scenario import Scenario, scenario_from_dict
from .utils import deep_merge

OMEGA_T = 20.0
GAMMA = 1e-7
OMEGA_P_DESIGN = 1.7299
OMEGA_P_TUNED = 1.7529


def high_material(omega_P_ratio=OMEGA_P_DESIGN, gamma=GAMMA) -> Dict[str, Any]:
    return {
        "model": "drude-lorentz",
        "omega_P_ratio": omega_P_ratio,
        "omega_T": OMEGA_T,
        "gamma": gamma,
    }


VACUUM = {"model": "constant", "eps": 1.0}
WORKING_RANGE = {"start": 0.9, "stop": 1.3, "num": 801}
DEFECT_RANGE = {**WORKING_RANGE, "refine": [0.99, 1.01, 10]}

DEFAULT_SCENARIO: Dict[str, Any] = {
    "structure": {
        "periods_up": 5,
        "periods_down": 5,
        "defect": False,
        "adjacent_material": "H",
    },
    "materials": {
        "high": high_material(),
        "low": VACUUM,
        "emitter": VACUUM,
        "outer": VACUUM,
    },
    "emitter": {"omega_A": 1.0, "z_A": 0.5, "orientation": "parallel"},
    "sweep": {"omega_A": WORKING_RANGE},
    "outputs": {"quantities": ["W_top"], "side": "above", "theta_points": 721},
}

_ENERGY = {"outputs": {"quantities": ["W_top", "W_bottom"]}}
_RATES = {"outputs": {"quantities": ["gamma_total", "gamma_rad", "gamma_ratio"]}}
_DEFECT = {"structure": {"defect": True}, "sweep": {"omega_A": DEFECT_RANGE}}
_UNBALANCED = {"structure": {"periods_down": 7}}
_TUNED = {
    "structure": {"design": {"high": high_material()}},
    "materials": {"high": high_material(OMEGA_P_TUNED)},
}

PRESETS: Dict[str, Dict[str, Any]] = {
    "vacuum": {
        "structure": {"periods_up": 1, "periods_down": 1},
        "materials": {"high": VACUUM},
        "sweep": {"omega_A": [0.95, 1.0, 1.05]},
        "outputs": {"quantities": ["gamma_total", "gamma_rad", "W_top", "W_bottom"]},
    },
    "fig2a": deep_merge(_ENERGY, {}),
    "fig2b": deep_merge(_ENERGY, _DEFECT),
    "fig2a_periods": deep_merge(_ENERGY, {"sweep": {"periods_down": [5, 6, 7]}}),
    "fig2b_periods": deep_merge(
        deep_merge(_ENERGY, _DEFECT), {"sweep": {"periods_down": [5, 6, 7]}}
    ),
    "fig2b_inset": deep_merge(
        deep_merge(_DEFECT, _UNBALANCED),
        {
            "sweep": {
                "omega_A": {"start": 0.996, "stop": 0.999, "num": 301, "refine": None},
                "omega_P": [OMEGA_P_DESIGN, OMEGA_P_TUNED],
            },
        },
    ),
    "fig3a": deep_merge(_ENERGY, {"emitter": {"orientation": "perpendicular"}}),
    "fig3b": deep_merge(
        deep_merge(_ENERGY, _DEFECT), {"emitter": {"orientation": "perpendicular"}}
    ),
    "fig4a": deep_merge(_UNBALANCED, {"sweep": {"gamma": [1e-7, 1e-3, 1e-2]}}),
    "fig4b": deep_merge(
        deep_merge(_UNBALANCED, _DEFECT), {"sweep": {"gamma": [1e-7, 1e-3, 1e-2]}}
    ),
    "fig5a": deep_merge(_RATES, {}),
    "fig5b": deep_merge(_RATES, _DEFECT),
    "fig6a": deep_merge(
        _RATES,
        {
            "emitter": {"omega_A": 1.25},
            "sweep": {"omega_A": None, "z_A": {"start": 0.02, "stop": 0.98, "num": 49}},
        },
    ),
    "fig6b": deep_merge(
        _RATES,
        {
            "structure": {"defect": True},
            "emitter": {"omega_A": 1.01},
            "sweep": {"omega_A": None, "z_A": {"start": 0.02, "stop": 0.98, "num": 49}},
        },
    ),
    "fig7a": deep_merge(
        _TUNED,
        {
            "sweep": {"omega_A": {"start": 1.2, "stop": 1.3, "num": 101}},
            "outputs": {"quantities": ["W_top", "W_theta"]},
        },
    ),
    "fig7b": deep_merge(
        deep_merge(_TUNED, {"structure": {"defect": True}}),
        {
            "sweep": {"omega_A": {"start": 0.99, "stop": 1.01, "num": 201}},
            "outputs": {"quantities": ["W_top", "W_theta"]},
        },
    ),
}

DESCRIPTIONS = {
    "vacuum": "homogeneous vacuum, free-space normalization",
    "fig2a": "W_top of a parallel dipole vs omega_A, no defect",
    "fig2b": "W_top of a parallel dipole vs omega_A, defect layer",
    "fig2a_periods": "fig2a for 5, 6 and 7 lower periods",
    "fig2b_periods": "fig2b for 5, 6 and 7 lower periods",
    "fig2b_inset": "W_top switching by omega_P, 5+7 periods with defect",
    "fig3a": "W_top of a perpendicular dipole, no defect",
    "fig3b": "W_top of a perpendicular dipole, defect layer",
    "fig4a": "W_top for three linewidths, 5+7 periods, no defect",
    "fig4b": "W_top for three linewidths, 5+7 periods, defect layer",
    "fig5a": "decay rates vs omega_A, no defect",
    "fig5b": "decay rates vs omega_A, defect layer",
    "fig6a": "decay rates vs position at omega_A=1.25, no defect",
    "fig6b": "decay rates vs position at omega_A=1.01, defect layer",
    "fig7a": "angular distribution vs omega_A, tuned omega_P, no defect",
    "fig7b": "angular distribution vs omega_A, tuned omega_P, defect layer",
}


def get_document(override: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    return deep_merge(DEFAULT_SCENARIO, override or {})


def get_scenario(name: str) -> Scenario:
    if name not in PRESETS:
        raise ScenarioError("preset", f"unknown preset {name!r}, see list-presets")
    return scenario_from_dict(get_document(PRESETS[name]), name=name)
