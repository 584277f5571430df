import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy.stats import linregress

from btps.errors import BadDimension
from btps.matrices import BTMatrix
from btps.symbols import TorusSymbol
from btps.torus import (build_torus, dft_change_of_basis, leading_coefficient_functions,
                        twisted_toeplitz)


def test_single_mode_entry():
    T = build_torus(TorusSymbol.from_dict({(1, 0): 1}), 10, "exact").entries
    j = np.arange(10)
    assert_allclose(T[(j + 1) % 10, j], np.exp(-np.pi / 20))
    assert_allclose(np.exp(-np.pi / 20), 0.854636, atol=5e-7)
    mask = np.ones_like(T, bool)
    mask[(j + 1) % 10, j] = False
    assert np.all(T[mask] == 0)


@pytest.mark.parametrize("N", [1, 5, 16])
def test_constant_is_identity(N):
    T = build_torus(TorusSymbol.from_dict({(0, 0): 1}), N, "exact").entries
    assert np.array_equal(T, np.eye(N))


def test_y_only_symbol_is_diagonal():
    a = {1: 0.7, -2: 0.3j, 0: 1.5}
    f = TorusSymbol.from_dict({(0, n): c for n, c in a.items()})
    N = 12
    T = build_torus(f, N, "exact").entries
    j = np.arange(N)
    lam = sum(c * np.exp(-np.pi * n ** 2 / (2 * N)) * np.exp(-2j * np.pi * n * j / N)
              for n, c in a.items())
    assert_allclose(T, np.diag(lam), atol=1e-14)


def test_bad_dimension():
    with pytest.raises(BadDimension):
        build_torus(TorusSymbol.from_dict({(0, 0): 1}), 0)


def test_dft_examples():
    assert_allclose(dft_change_of_basis(1), [[1]])
    assert_allclose(dft_change_of_basis(2), [[1, 1], [1, -1]], atol=1e-15)
    F = dft_change_of_basis(8)
    assert_allclose(F @ F.conj().T / 8, np.eye(8), atol=1e-12)


def test_twisted_examples():
    T = twisted_toeplitz({0: lambda x: x}, 4).entries
    assert_allclose(T, np.diag([0, 0.25, 0.5, 0.75]))
    assert np.all(twisted_toeplitz({0: lambda x: 0 * x, 3: lambda x: 0 * x}, 5).entries == 0)


def test_twisted_scottish_type():
    N = 8
    T = twisted_toeplitz({1: lambda x: np.ones_like(x), N - 1: lambda x: np.ones_like(x),
                          0: lambda x: 2j * np.cos(2 * np.pi * x)}, N).entries
    expected = np.zeros((N, N), complex)
    for r in range(N):
        expected[r, (r + 1) % N] += 1
        expected[r, (r - 1) % N] += 1
        expected[r, r] = 2j * np.cos(2 * np.pi * r / N)
    assert_allclose(T, expected, atol=1e-15)


def test_twisted_table_interpolates():
    table = np.sin(2 * np.pi * np.arange(1024) / 1024)
    T = twisted_toeplitz({0: table}, 16).entries
    assert_allclose(np.diag(T), np.sin(2 * np.pi * np.arange(16) / 16), atol=1e-12)


def test_leading_mode_matches_twisted(twist, scot):
    for f in (twist, scot, TorusSymbol.from_dict({(2, -1): 0.3, (-1, 3): 1j})):
        for N in (7, 16):
            A = build_torus(f, N, "leading").entries
            B = twisted_toeplitz(leading_coefficient_functions(f, N), N).entries
            assert_allclose(A, B, atol=1e-13)


def test_exact_vs_leading_is_order_one_over_N(scot, twist):
    levels = [16, 32, 64, 128]
    for f in (scot, twist):
        d = [np.abs(build_torus(f, N, "exact").entries - build_torus(f, N, "leading").entries).max()
             for N in levels]
        assert linregress(np.log(levels), np.log(d)).slope <= -0.9


def test_real_symbol_hermitian(scot):
    f = scot.real_part() + TorusSymbol.from_dict({(1, 1): 0.4j, (-1, -1): -0.4j})
    T = build_torus(f, 20, "exact").entries
    assert_allclose(T, T.conj().T, atol=1e-12)


def test_x_only_symbol_diagonalized_by_dft():
    N = 16
    f = TorusSymbol.from_dict({(1, 0): 1, (-2, 0): 0.5j, (0, 0): 0.2})
    T = build_torus(f, N, "exact").entries
    F = dft_change_of_basis(N)
    D = F @ T @ F.conj().T / N
    assert np.abs(D - np.diag(np.diag(D))).max() <= 1e-10


@settings(max_examples=25, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(3, 20),
       st.complex_numbers(min_magnitude=0.1, max_magnitude=2))
def test_single_mode_support_and_adjoint(l, m, N, c):
    f = TorusSymbol.from_dict({(l, m): c})
    T = build_torus(f, N, "exact").entries
    j = np.arange(N)
    mask = np.ones((N, N), bool)
    mask[(j + l) % N, j] = False
    assert np.all(T[mask] == 0)
    assert_allclose(build_torus(f.conj(), N, "exact").entries, T.conj().T, atol=1e-12)


def test_btmatrix_validation():
    with pytest.raises(ValueError):
        BTMatrix(np.zeros((2, 3)), "torus", 2)
    with pytest.raises(ValueError):
        BTMatrix(np.array([[np.nan]]), "torus", 1)
    with pytest.raises(ValueError):
        BTMatrix(np.eye(2), "cube", 2)
    M = BTMatrix(np.eye(2), "torus", 2)
    with pytest.raises(ValueError):
        M.entries[0, 0] = 3
