import math

import mpmath
import numpy as np
import pytest
from numpy.testing import assert_allclose

from btps.bargmann import (coherent_state, cutoff_tail_fraction, log_cutoff_bound,
                           log_gamma_ratios, model_matrix, project_theta,
                           residual_identity_check, squeezed_coefficients)
from btps.errors import NotNormalizable
from btps.symbols import image_samples, model_symbol


def test_model_matrix_N2():
    T = model_matrix(0.5, 2).entries
    assert_allclose(np.diag(T, 1), [math.sqrt(0.5), 1])
    assert_allclose(np.diag(T, -1), [0.5 * math.sqrt(0.5), 0.5])
    assert np.all(np.diag(T) == 0)
    assert np.count_nonzero(T) == 4


def test_model_mu0_nilpotent():
    T = model_matrix(0.0, 7).entries
    assert np.all(np.tril(T) == 0)
    assert np.all(np.linalg.matrix_power(T, 8) == 0)


def test_model_symbol_image_is_ellipse():
    z = image_samples(model_symbol(0.5), 200)
    assert np.all((z.real / 1.5) ** 2 + (z.imag / 0.5) ** 2 <= 1 + 1e-12)
    assert_allclose([np.abs(z.real).max(), np.abs(z.imag).max()], [1.5, 0.5], rtol=1e-3)


def test_ground_state_single_coefficient():
    s = squeezed_coefficients(0.0, 0.0, 12)
    c = s.coeffs
    assert_allclose(c[0], 1.0)
    assert np.all(c[1:] == 0)


def _apply_Q(a, mu, N):
    # (1/N) d/dz + mu z on the full stored expansion
    k = np.arange(a.size)
    out = np.zeros_like(a)
    out[:-1] += np.sqrt(k[1:] / N) * a[1:]
    out[1:] += mu * np.sqrt(k[1:] / N) * a[:-1]
    return out


@pytest.mark.parametrize("mu,z0", [(0.5, 0.3 + 0.2j), (-0.4, 0.6j), (0.8, -0.1)])
def test_eigen_relation_below_cutoff(mu, z0):
    N = 30
    s = squeezed_coefficients(mu, z0, N)
    a = s.coeffs
    r = _apply_Q(a, mu, N) - s.eigenvalue * a
    assert np.abs(r[:N]).max() <= 1e-10 * np.abs(a).max()


def test_norm_independent_of_center():
    n0 = squeezed_coefficients(0.5, 0, 40).norm()
    n1 = squeezed_coefficients(0.5, 0.3 + 0.2j, 40).norm()
    assert abs(n0 - n1) <= 1e-8 * n0


def test_norm_independent_of_level():
    norms = [squeezed_coefficients(0.5, 0.4 - 0.1j, N).norm() for N in (20, 80, 320)]
    assert_allclose(norms, norms[0], rtol=1e-6)


def test_not_normalizable():
    for mu in (1.0, -1.2):
        with pytest.raises(NotNormalizable):
            squeezed_coefficients(mu, 0.1, 10)
    with pytest.raises(NotNormalizable):
        residual_identity_check(1.0, 0, 10)


def test_zero_tail():
    p = project_theta(squeezed_coefficients(0.0, 0.0, 10))
    assert p.tail_norm == 0
    assert_allclose(p.head_norm, 1.0)


def test_coherent_tail_matches_incomplete_gamma():
    N, w = 50, 0.6 * np.exp(0.7j)
    s = coherent_state(w, N)
    p = project_theta(s)
    direct = math.exp(p.log_tail_norm2 - s.log_norm2())
    assert_allclose(cutoff_tail_fraction(N, w), direct, rtol=1e-10)
    assert_allclose(direct, float(mpmath.gammainc(N + 1, 0, N * abs(w) ** 2, regularized=True)),
                    rtol=1e-10)


@pytest.mark.parametrize("N", [200, 400])
@pytest.mark.parametrize("r", [0.3, 0.6, 0.9])
def test_cutoff_bound_holds(N, r):
    s = coherent_state(r, N)
    log_tail = project_theta(s).log_tail_norm2
    assert log_tail <= log_cutoff_bound(N, r, 0.1)


def test_residual_identity_examples():
    c = residual_identity_check(0.5, 0, 30)
    assert c.agrees()
    assert c.direct <= 1e-3 and c.formula <= 1e-3
    c = residual_identity_check(0.0, 0, 30)
    assert c.direct == 0 and c.formula == 0


def test_residual_rate_positive():
    from scipy.stats import linregress
    levels = np.arange(20, 161, 20)
    vals = []
    for N in levels:
        c = residual_identity_check(0.5, 0.5, int(N))
        vals.append(c.log_formula - math.log(c.head_norm))
    assert linregress(levels, vals).slope < 0


# ---------------------------------------------------------------- properties

@pytest.mark.parametrize("N", [25, 50, 100])
@pytest.mark.parametrize("r", [0.2, 0.5, 0.8])
def test_incomplete_gamma_vs_mpmath(N, r):
    x = N * r * r
    log_q, log_p = log_gamma_ratios(N + 1, x)
    mpmath.mp.dps = 40
    q = mpmath.gammainc(N + 1, x, mpmath.inf, regularized=True)
    p = mpmath.gammainc(N + 1, 0, x, regularized=True)
    assert_allclose(math.exp(log_q), float(q), rtol=1e-10)
    assert_allclose(math.exp(log_p), float(p), rtol=1e-10)
    # and against direct summation of the coherent-state tail
    s = coherent_state(r, N)
    tail = math.exp(project_theta(s).log_tail_norm2 - s.log_norm2())
    assert_allclose(math.exp(log_p), tail, rtol=1e-10)


@pytest.mark.parametrize("k", range(6))
def test_reproducing_property(rng, k):
    N = 20
    for _ in range(3):
        z = 0.9 * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        phi = coherent_state(z, N).coeffs
        psi = np.zeros(phi.size, complex)
        psi[k] = math.sqrt(math.factorial(k)) / N ** ((k + 1) / 2)
        assert_allclose(np.vdot(phi, psi), z ** k, rtol=1e-9)


@pytest.mark.parametrize("N,w", [(10, 0.3), (100, 0.9j), (300, -0.7 + 0.5j)])
def test_coherent_norm(N, w):
    s = coherent_state(w, N)
    assert_allclose(s.log_norm2(), s.exact_log_norm2(), rtol=1e-10)


def test_pythagoras(rng):
    for mu, z0, N in [(0.5, 0.5, 40), (-0.7, 0.2 + 0.6j, 90)]:
        s = squeezed_coefficients(mu, z0, N)
        p = project_theta(s)
        total = np.logaddexp(p.log_head_norm2, p.log_tail_norm2)
        assert_allclose(total, s.log_norm2(), rtol=1e-12)
    s = coherent_state(0.8, 60)
    p = project_theta(s)
    assert_allclose(np.logaddexp(p.log_head_norm2, p.log_tail_norm2), s.log_norm2(), rtol=1e-12)


def test_residual_identity_random(rng):
    for _ in range(20):
        mu = rng.uniform(-0.8, 0.8)
        z0 = 0.9 * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        N = int(rng.integers(10, 80))
        c = residual_identity_check(mu, z0, N)
        assert c.agrees(), (mu, z0, N, c)
