"""The cut-off Bargmann model: polynomials of degree <= N inside Bargmann space.

Coefficients are taken in the orthonormal basis
``|k> = N^{(k+1)/2} z^k / sqrt(k!)`` and stored as ``(log|a_k|, arg a_k)``
pairs; ``exp(N |w|^2)`` and ``k!`` overflow doubles long before the
levels used here stop being interesting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import BadDimension, NotNormalizable
from .matrices import BTMatrix
from .symbols import PlaneSymbol, model_symbol

LOG_TINY = 14 * math.log(10)     # 1e-14 relative truncation
LOG_TAIL = 42.0                  # ~1e-18 relative, for tail sums
_RESCALE = 1e150


def build_disk(f: PlaneSymbol, N: int) -> BTMatrix:
    """Matrix of ``Theta_N (mu z + nu (1/N) d/dz + kappa) Theta_N``."""
    if N < 1:
        raise BadDimension(f"N must be >= 1, got {N}")
    k = np.arange(1, N + 1)
    s = np.sqrt(k / N)
    T = np.zeros((N + 1, N + 1), dtype=complex)
    T[k - 1, k] = f.nu * s          # (1/N) d/dz |k> = sqrt(k/N) |k-1>
    T[k, k - 1] = f.mu * s          # z |k-1> = sqrt(k/N) |k>
    T += f.kappa * np.eye(N + 1)
    return BTMatrix(T, "plane-disk", N, f.symbol_id, "exact")


def model_matrix(mu: float, N: int) -> BTMatrix:
    """Tridiagonal matrix of ``P_N`` for ``Q = (1/N) d/dz + mu z``.

    Supra-diagonal ``sqrt(k/N)`` and infra-diagonal ``mu sqrt(k/N)``,
    ``k = 1..N``; zero diagonal.
    """
    if isinstance(mu, complex) and mu.imag != 0:
        raise ValueError("model_matrix takes a real mu; use build_disk for complex")
    return build_disk(model_symbol(float(np.real(mu))), N)


@dataclass(frozen=True, eq=False)
class _LogState:
    N: int
    log_abs: np.ndarray
    phase: np.ndarray

    @property
    def K(self):
        """Index of the last stored coefficient."""
        return self.log_abs.size - 1

    @property
    def coeffs(self):
        return np.exp(self.log_abs + 1j * self.phase)

    def log_norm2(self, start=0, stop=None):
        la = self.log_abs[start:stop]
        return float(logsumexp(2 * la)) if la.size else -np.inf

    def norm(self):
        return math.exp(0.5 * self.log_norm2())


@dataclass(frozen=True, eq=False)
class CoherentState(_LogState):
    """``phi_w(z) = N exp(N z conj(w))``; ``a_k = sqrt(N) (sqrt(N) conj(w))^k / sqrt(k!)``."""

    w: complex = 0j

    def exact_log_norm2(self):
        return math.log(self.N) + self.N * abs(self.w) ** 2


@dataclass(frozen=True, eq=False)
class SqueezedState(_LogState):
    """``phi_{mu,z0}(z) = sqrt(N) e^{-N|z0|^2/2} e^{N z conj(z0)} e^{-N mu (z - z0)^2 / 2}``."""

    mu: float = 0.0
    z0: complex = 0j

    @property
    def eigenvalue(self):
        return self.mu * self.z0 + np.conj(self.z0)


def coherent_state(w: complex, N: int) -> CoherentState:
    """Coefficients of ``phi_w`` through the tail where they stop mattering."""
    w = complex(w)
    x = N * abs(w) ** 2
    half_log_N = 0.5 * math.log(N)
    log_w = math.log(abs(w)) if w != 0 else -math.inf

    def log_term(k):
        return half_log_N + k * (half_log_N + log_w) - 0.5 * math.lgamma(k + 1)

    if w == 0:
        K = N + 1
    else:
        # past the peak and past N, stop once terms are negligible
        # relative to the tail accumulated beyond N
        k = N + 1
        tail = 2 * log_term(k)
        while True:
            k += 1
            t = 2 * log_term(k)
            tail = np.logaddexp(tail, t)
            if k > x and t < tail - LOG_TAIL:
                break
        K = k
    k = np.arange(K + 1)
    if w == 0:
        la = np.full(K + 1, -np.inf)
        la[0] = half_log_N
    else:
        la = half_log_N + k * (half_log_N + log_w) - 0.5 * np.array(
            [math.lgamma(i + 1) for i in k])
    ph = -k * np.angle(w)
    return CoherentState(N, la, ph, w)


def squeezed_coefficients(mu: float, z0: complex, N: int) -> SqueezedState:
    """Coefficients ``a_k`` of the squeezed state by the three-term recurrence.

    ``a_0 = exp(-N|z0|^2/2 - N mu z0^2/2)`` and
    ``a_k = sqrt(N/k) (conj(z0) + mu z0) a_{k-1} - mu sqrt((k-1)/k) a_{k-2}``,
    carried as mantissas with a running log scale. The expansion is extended
    until ``k >= N + 1`` and three consecutive coefficients fall below
    ``1e-14`` of the largest.
    """
    mu = float(mu)
    if abs(mu) >= 1:
        raise NotNormalizable(f"|mu| must be < 1, got {mu}")
    if N < 1:
        raise BadDimension(f"N must be >= 1, got {N}")
    z0 = complex(z0)
    log_a0 = -N * abs(z0) ** 2 / 2 - N * mu * z0 ** 2 / 2
    b = np.conj(z0) + mu * z0
    la = [log_a0.real]
    ph = [log_a0.imag]
    m2, m1, scale = 0j, 1 + 0j, 0.0
    peak = la[0]
    small = 0
    k = 0
    while True:
        k += 1
        m = math.sqrt(N / k) * b * m1 - mu * math.sqrt((k - 1) / k) * m2
        am = abs(m)
        if am > _RESCALE or 0 < am < 1 / _RESCALE:
            scale += math.log(am)
            m, m1 = m / am, m1 / am
            am = 1.0
        m2, m1 = m1, m
        lak = log_a0.real + scale + (math.log(am) if am > 0 else -math.inf)
        la.append(lak)
        ph.append(log_a0.imag + (np.angle(m) if am > 0 else 0.0))
        peak = max(peak, lak)
        small = small + 1 if lak < peak - LOG_TINY else 0
        if k >= N + 1 and small >= 3:
            break
    return SqueezedState(N, np.array(la), np.array(ph), mu, z0)


@dataclass(frozen=True)
class Projection:
    head: np.ndarray          # a_0 .. a_N
    log_head_norm2: float
    log_tail_norm2: float

    @property
    def head_norm(self):
        return math.exp(0.5 * self.log_head_norm2)

    @property
    def tail_norm(self):
        return math.exp(0.5 * self.log_tail_norm2)


def project_theta(state) -> Projection:
    """Truncation to degree ``<= N`` (``Theta_N`` in coefficient space)."""
    N = state.N
    if state.K < N + 1:
        raise ValueError("state must be stored beyond index N")
    return Projection(state.coeffs[: N + 1], state.log_norm2(0, N + 1),
                      state.log_norm2(N + 1))


def log_gamma_ratios(n: int, x: float):
    """``(log Q, log P)`` with ``Q = Gamma(n, x)/(n-1)!`` and ``P = 1 - Q``.

    ``Q`` is accumulated by ``Q(k+1, x) = Q(k, x) + x^k e^{-x}/k!`` from
    ``Q(0, x) = 0``; ``P`` is summed from its own series
    ``sum_{k >= n} x^k e^{-x}/k!`` so neither side loses relative accuracy
    to cancellation. Integer ``n >= 1`` only.
    """
    if n < 1 or int(n) != n:
        raise ValueError("n must be a positive integer")
    if x < 0:
        raise ValueError("x must be >= 0")
    if x == 0:
        return 0.0, -math.inf
    lx = math.log(x)

    def lt(k):
        return -x + k * lx - math.lgamma(k + 1)

    log_q = -math.inf
    for k in range(n):
        log_q = np.logaddexp(log_q, lt(k))
    log_p = lt(n)
    k = n
    while True:
        k += 1
        t = lt(k)
        log_p = np.logaddexp(log_p, t)
        if k > x and t < log_p - LOG_TAIL:
            break
    return float(log_q), float(log_p)


def cutoff_tail_fraction(N: int, w: complex) -> float:
    """``||Theta_N^perp phi_w||^2 / ||phi_w||^2 = 1 - Gamma(N+1, N|w|^2)/N!``."""
    return math.exp(log_gamma_ratios(N + 1, N * abs(w) ** 2)[1])


def log_cutoff_bound(N: int, w: complex, delta: float) -> float:
    """Log of ``(1+delta)/sqrt(2 pi) ||phi_w||^2 |w|^2 sqrt(N) e^{-N(1-|w|^2)^2/2}``."""
    r2 = abs(w) ** 2
    return (math.log1p(delta) - 0.5 * math.log(2 * math.pi) + math.log(N) + N * r2
            + math.log(r2) + 0.5 * math.log(N) - N * (1 - r2) ** 2 / 2)


@dataclass(frozen=True)
class ResidualCheck:
    direct: float
    formula: float
    log_formula: float
    lam: complex
    head_norm: float

    def agrees(self, rtol=1e-9, atol=1e-14, small=1e-12):
        if self.direct < small and self.formula < small:
            return abs(self.direct - self.formula) <= atol
        return abs(self.direct - self.formula) <= rtol * max(self.direct, self.formula)


def residual_identity_check(mu: float, z0: complex, N: int) -> ResidualCheck:
    """Both sides of ``(P_N - lam) Theta_N phi = (mu a_{N-1} - lam a_N)|N>``."""
    state = squeezed_coefficients(mu, z0, N)
    lam = complex(state.eigenvalue)
    proj = project_theta(state)
    T = model_matrix(mu, N).entries
    direct = float(np.linalg.norm(T @ proj.head - lam * proj.head))
    la, ph = state.log_abs, state.phase
    s = max(la[N - 1], la[N])
    if not np.isfinite(s):
        log_formula = -math.inf
    else:
        v = (mu * np.exp(la[N - 1] - s + 1j * ph[N - 1])
             - lam * np.exp(la[N] - s + 1j * ph[N]))
        log_formula = s + math.log(abs(v)) if v != 0 else -math.inf
    return ResidualCheck(direct, math.exp(log_formula), log_formula, lam, proj.head_norm)
