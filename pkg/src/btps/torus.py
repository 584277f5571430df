"""Berezin-Toeplitz matrices on the torus in the theta basis.

The pairing of ``T theta_j`` with ``theta_{(j+l) mod N}`` is stored at row
``(j + l) mod N``, column ``j``, so a single Fourier mode in ``x`` fills one
wrapped diagonal. Basis vector ``theta_j`` sits over the circle
``y = -j/N``; the sign follows the matrix-coefficient formula verbatim.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .errors import BadDimension
from .matrices import BTMatrix
from .symbols import TorusSymbol

TABLE_POINTS = 1024


def build_torus(f: TorusSymbol, N: int, mode: str = "exact") -> BTMatrix:
    """N x N matrix of the quantized symbol ``f``.

    ``exact``: per mode ``(l, m)`` the closed form
    ``exp(-pi l^2/2N) exp(-pi m^2/2N) exp(-pi i m (2j+l)/N) c``.
    ``leading``: the principal entries ``c exp(-pi i m (2j+l)/N)``, i.e.
    ``h_l(-(2j+l)/2N)`` without the Gaussian damping.
    """
    if N < 1:
        raise BadDimension(f"N must be >= 1, got {N}")
    if mode not in ("exact", "leading"):
        raise ValueError(f"unknown mode {mode!r}")
    j = np.arange(N)
    T = np.zeros((N, N), dtype=complex)
    for (l, m), c in f.terms:
        w = np.exp(-np.pi * (l * l + m * m) / (2 * N)) if mode == "exact" else 1.0
        np.add.at(T, ((j + l) % N, j), c * w * np.exp(-1j * np.pi * m * (2 * j + l) / N))
    return BTMatrix(T, "torus", N, f.symbol_id, mode)


def dft_change_of_basis(N: int) -> np.ndarray:
    """``F[k, j] = exp(-2 pi i k j / N)``, so ``beta_k = sum_j F[k, j] theta_j``."""
    if N < 1:
        raise BadDimension(f"N must be >= 1, got {N}")
    k = np.arange(N)
    return np.exp(-2j * np.pi * np.outer(k, k) / N)


def _as_callable(g):
    if callable(g):
        return g
    table = np.asarray(g, dtype=complex)
    grid = np.arange(table.size) / table.size

    def interp(s):
        s = np.asarray(s, float) % 1.0
        # periodic linear interpolation
        xp = np.concatenate([grid, [1.0]])
        fp = np.concatenate([table, table[:1]])
        return np.interp(s, xp, fp.real) + 1j * np.interp(s, xp, fp.imag)
    return interp


def tabulate(g, points=TABLE_POINTS):
    """Sample a 1-periodic function on the standard table grid."""
    return np.asarray(g(np.arange(points) / points), dtype=complex)


def twisted_toeplitz(coeff_functions: dict, N: int) -> BTMatrix:
    """``T[r, c] = f_{(c - r) mod N}(r / N)`` with indices from 0.

    ``coeff_functions`` maps an offset ``l`` to a callable on ``[0, 1)`` or
    to a table of values on an equispaced grid (linearly interpolated).
    Offsets are reduced mod ``N``.
    """
    if N < 1:
        raise BadDimension(f"N must be >= 1, got {N}")
    r = np.arange(N)
    T = np.zeros((N, N), dtype=complex)
    h = hashlib.sha256()
    for l in sorted(coeff_functions):
        g = _as_callable(coeff_functions[l])
        vals = np.asarray(g(r / N), dtype=complex) * np.ones(N)
        np.add.at(T, (r, (r + l) % N), vals)
        h.update(repr((l, tabulate(g, 64).round(12).tolist())).encode())
    return BTMatrix(T, "torus", N, "twisted:" + h.hexdigest()[:12], "leading")


def leading_coefficient_functions(f: TorusSymbol, N: int) -> dict:
    """Coefficient functions that make :func:`twisted_toeplitz` equal the leading mode.

    The ``x``-mode ``l`` of ``f`` sits at column offset ``-l`` and is read at
    ``h_l(-s + l/2N)``.
    """
    groups = {}
    for (l, m), c in f.terms:
        groups.setdefault(l, []).append((m, c))

    def make(l, modes):
        return lambda s: sum(c * np.exp(2j * np.pi * m * (-np.asarray(s) + l / (2 * N)))
                             for m, c in modes)
    return {-l: make(l, modes) for l, modes in groups.items()}
