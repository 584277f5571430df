"""Named experiment configurations and the matrix families they select."""

from __future__ import annotations

import math

from .bargmann import build_disk
from .errors import SchemaError, UnknownPreset
from .sphere import build_sphere, build_sphere_linear
from .symbols import (SphereSymbol, linear_sphere_symbol, model_symbol, scottish_flag,
                      symbol_to_json, twist_demo)
from .torus import build_torus

_TWIST_CENTER = (0.3, 0.35)
_twist_lam = complex(twist_demo()(*_TWIST_CENTER))

PRESETS = {
    "bargmann-mu05": {
        "symbol": symbol_to_json(model_symbol(0.5)),
        "levels": [20, 40, 60, 80, 100, 120, 140, 160],
        "window": [-1.75, 1.75, -0.75, 0.75], "grid": [71, 31],
        "lambda": [0.0, 0.0], "mode": "exact", "width": 1.0, "seed": 0,
    },
    "sphere-linear-t1": {
        "symbol": symbol_to_json(linear_sphere_symbol(1.0)),
        "levels": [32, 64, 128, 256, 512],
        "window": [-0.9, 0.9, -0.7, 0.7], "grid": [37, 29],
        "lambda": [math.cosh(1.0) / 2, 0.0], "mode": "exact", "width": 1.0, "seed": 0,
    },
    "torus-scottish": {
        "symbol": symbol_to_json(scottish_flag()),
        "levels": [16, 32, 64, 128],
        "window": [-2.5, 2.5, -2.5, 2.5], "grid": [41, 41],
        "lambda": [0.0, 0.0], "mode": "leading", "width": 1.0, "seed": 0,
    },
    "torus-twisted": {
        "symbol": symbol_to_json(twist_demo()),
        "levels": [32, 48, 64, 96, 128, 192, 256],
        "window": [-1.6, 1.6, -1.6, 1.6], "grid": [33, 33],
        "lambda": [_twist_lam.real, _twist_lam.imag], "mode": "leading", "width": 1.0,
        "seed": 0,
    },
    "sphere-x3": {
        "symbol": symbol_to_json(SphereSymbol.coordinate(3)),
        "levels": [32, 64, 128, 256],
        "window": [-0.8, 0.8, -0.3, 0.3], "grid": [33, 13],
        "lambda": [0.7, 0.0], "mode": "leading", "width": 1.0, "seed": 0,
    },
}


def preset_registry():
    return {name: dict(cfg) for name, cfg in PRESETS.items()}


def get_preset(name):
    try:
        return dict(PRESETS[name])
    except KeyError:
        raise UnknownPreset(name) from None


def matrix_family(f, mode):
    """``N -> BTMatrix`` for the symbol's space and construction mode."""
    if f.space == "torus":
        return lambda N: build_torus(f, N, mode)
    if f.space == "sphere":
        if mode == "exact":
            if f.degree > 1:
                raise SchemaError("exact mode on the sphere needs a symbol of degree <= 1",
                                  "/mode")
            return lambda N: build_sphere_linear(f, N)
        return lambda N: build_sphere(f, N)
    return lambda N: build_disk(f, N)
