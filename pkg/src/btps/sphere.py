"""Berezin-Toeplitz matrices on the sphere in the standard su(2) basis ``|j, N>``."""

from __future__ import annotations

import mpmath
import numpy as np
from numpy.polynomial import polynomial as P

from .errors import BadDimension, ConversionFailure, NumericalFailure
from .matrices import BTMatrix
from .symbols import SphereSymbol, linear_sphere_symbol, to_action_angle


def ladder_matrix(N: int, direction: str) -> np.ndarray:
    """Matrix of ``J_-`` (``"lowering"``) or ``J_+`` (``"raising"``).

    Lowering has ``m_j = sqrt(j (N - j + 1))`` at row ``j - 1``, column ``j``;
    raising is its transpose.
    """
    if N < 0:
        raise BadDimension(f"N must be >= 0, got {N}")
    if direction not in ("raising", "lowering"):
        raise ValueError(f"unknown direction {direction!r}")
    M = np.zeros((N + 1, N + 1))
    j = np.arange(1, N + 1)
    M[j - 1, j] = np.sqrt(j * (N - j + 1.0))
    return M if direction == "lowering" else M.T.copy()


def j3_matrix(N: int) -> np.ndarray:
    """``J_3 = diag(j - N/2)``, the half-commutator ``[J_+, J_-] / 2``."""
    return np.diag(np.arange(N + 1) - N / 2.0)


def diagonal_calculus(g, N: int) -> np.ndarray:
    """``diag(g(j / (N + 1)))`` for ``j = 0..N``.

    ``g`` is a callable or an ascending coefficient array of a polynomial.
    """
    x = np.arange(N + 1) / (N + 1)
    vals = g(x) if callable(g) else P.polyval(x, np.asarray(g, dtype=complex))
    return np.diag(np.asarray(vals, dtype=complex) * np.ones(N + 1))


def build_sphere(f: SphereSymbol, N: int) -> BTMatrix:
    """``sum_l ((1/N) J_sgn(l))^|l| diag(g_l(j/(N+1)))``, ladder power on the left."""
    if N < 1:
        raise BadDimension(f"N must be >= 1, got {N}")
    if not all(np.isfinite(complex(c)) for c in f.coeffs.values()):
        raise ConversionFailure("symbol coefficients must be finite")
    parts = to_action_angle(f)
    lower = ladder_matrix(N, "lowering") / N
    raise_ = ladder_matrix(N, "raising") / N
    T = np.zeros((N + 1, N + 1), dtype=complex)
    for l, g in parts.items():
        D = diagonal_calculus(g, N)
        if l == 0:
            T += D
        else:
            L = lower if l > 0 else raise_
            T += np.linalg.matrix_power(L, abs(l)) @ D
    return BTMatrix(T, "sphere", N, f.symbol_id, "leading")


def linear_hamiltonian(t: float, N: int, mode: str = "exact") -> BTMatrix:
    """Quantization of ``F_A = i sinh(t) x1 + cosh(t) x3``.

    ``exact`` is ``(1/N)(i sinh(t) J_1 + cosh(t) J_3)``, the image of the
    Lie algebra element under the representation. It is conjugate to
    ``J_3 / N`` for every ``t``, so its spectrum is ``{j/N - 1/2, j = 0..N}``.
    ``leading`` runs the symbol through :func:`build_sphere` instead.
    """
    f = linear_sphere_symbol(t)
    if mode == "leading":
        return build_sphere(f, N)
    if N < 1:
        raise BadDimension(f"N must be >= 1, got {N}")
    J1 = (ladder_matrix(N, "lowering") + ladder_matrix(N, "raising")) / 2
    T = (1j * np.sinh(t) * J1 + np.cosh(t) * j3_matrix(N)) / N
    return BTMatrix(T, "sphere", N, f.symbol_id, "exact")


def linear_hamiltonian_tridiagonal(t: float, N: int, dps: int = 50):
    """Diagonal and off-diagonal products of the exact linear Hamiltonian in ``dps`` digits.

    The products are ``-(sinh(t)/2N)^2 j (N - j + 1)``, free of the rounding
    that the double-precision matrix carries.
    """
    with mpmath.workdps(dps):
        t = mpmath.mpf(t)
        diag = [mpmath.cosh(t) * (j - mpmath.mpf(N) / 2) / N for j in range(N + 1)]
        s = mpmath.sinh(t) / (2 * N)
        prod = [-(s ** 2) * j * (N - j + 1) for j in range(1, N + 1)]
    return diag, prod


def linear_hamiltonian_spectrum(t: float, N: int):
    """Certified real eigenvalues of the exact linear Hamiltonian, ascending.

    Precision grows with ``N`` because the eigenvalue condition numbers do.
    """
    from .spectral import tridiagonal_real_eigenvalues

    dps = 40 + N
    roots = tridiagonal_real_eigenvalues(*linear_hamiltonian_tridiagonal(t, N, dps), dps=dps)
    if roots is None:
        raise NumericalFailure("no real-spectrum certificate", t=t, N=N, dps=dps)
    return roots


def build_sphere_linear(f: SphereSymbol, N: int) -> BTMatrix:
    """Exact quantization of a symbol of degree <= 1 through the representation.

    ``x_i -> J_i / N`` with ``J_1 = (J_+ + J_-)/2``, ``J_2 = (J_+ - J_-)/2i``
    and constants mapped to multiples of the identity.
    """
    if f.degree > 1:
        raise ValueError("exact sphere quantization is limited to degree <= 1")
    if N < 1:
        raise BadDimension(f"N must be >= 1, got {N}")
    up, down = ladder_matrix(N, "raising"), ladder_matrix(N, "lowering")
    J = {(1, 0, 0): (up + down) / 2, (0, 1, 0): (up - down) / 2j,
         (0, 0, 1): j3_matrix(N)}
    T = np.zeros((N + 1, N + 1), dtype=complex)
    for key, c in f.terms:
        T += c * (np.eye(N + 1) if key == (0, 0, 0) else J[key] / N)
    return BTMatrix(T, "sphere", N, f.symbol_id, "exact")
