"""Pseudospectra of Berezin-Toeplitz matrices on the torus, the sphere and the cut-off disk."""

from .errors import (BTPSError, BadDimension, BasisMismatch, ConversionFailure, MixedSpaces,
                     NotNormalizable, NumericalFailure, OrderUnbounded, SchemaError,
                     SphereOffShell, UnknownPreset)
from .matrices import BTMatrix
from .symbols import (PlaneSymbol, SphereSymbol, TorusSymbol, bracket_order, evaluate,
                      image_samples, level_set_points, min_distance_to, poisson_bracket)
from .torus import build_torus
from .sphere import build_sphere, linear_hamiltonian
from .bargmann import model_matrix, squeezed_coefficients
from .spectral import numerical_range, pseudospectrum_grid, sigma_min
from .pseudomodes import optimal_pseudomode, residual_decay

__version__ = "0.1.0"

__all__ = [
    "BTPSError", "BadDimension", "BasisMismatch", "ConversionFailure", "MixedSpaces",
    "NotNormalizable", "NumericalFailure", "OrderUnbounded", "SchemaError", "SphereOffShell",
    "UnknownPreset", "BTMatrix", "PlaneSymbol", "SphereSymbol", "TorusSymbol", "bracket_order",
    "evaluate", "image_samples", "level_set_points", "min_distance_to", "poisson_bracket",
    "build_torus", "build_sphere", "linear_hamiltonian", "model_matrix",
    "squeezed_coefficients", "numerical_range", "pseudospectrum_grid", "sigma_min",
    "optimal_pseudomode", "residual_decay",
]
