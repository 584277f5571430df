"""Explicit pseudomodes, residual decay across levels, and phase-space localization."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BasisMismatch, OrderUnbounded
from .fits import FLOOR, ScalingReport, fit
from .matrices import BTMatrix
from .spectral import sigma_min, smallest_singular_pair
from .symbols import (bracket_order, evaluate, eval_points, level_set_points,
                      min_distance_to, phase_distance, sample_points, sample_spacing)

BASIS_OF_SPACE = {"torus": "theta", "sphere": "su2", "plane-disk": "bargmann"}
SPACE_OF_BASIS = {"theta": "torus", "su2": "sphere", "bargmann": "plane"}


@dataclass(frozen=True, eq=False)
class Pseudomode:
    N: int
    basis: str
    coeffs: np.ndarray
    residual: float
    lam: complex
    center: tuple | None = None
    width_param: float = 1.0
    degenerate: bool = False

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if not np.linalg.norm(c) > 0:
            raise ValueError("pseudomode coefficients must be nonzero")
        object.__setattr__(self, "coeffs", c)

    def to_json(self):
        return {"v": 1, "basis": self.basis, "N": self.N,
                "lambda": [float(np.real(self.lam)), float(np.imag(self.lam))],
                "residual": float(self.residual),
                "coeffs": [[float(z.real), float(z.imag)] for z in self.coeffs]}


def residual_of(T, lam, v) -> float:
    A = T.entries if isinstance(T, BTMatrix) else np.asarray(T)
    v = np.asarray(v, dtype=complex)
    return float(np.linalg.norm(A @ v - lam * v) / np.linalg.norm(v))


# ------------------------------------------------------------------ torus packets

def torus_wavepacket(x0: float, y0: float, N: int, width: float = 1.0) -> np.ndarray:
    """Unit periodized Gaussian ``sum_w e^{2 pi i x0 (j+wN)} e^{-pi (j+wN-N y0)^2 / (width N)}``.

    ``(x0, y0)`` are index coordinates: the packet peaks at ``j = N y0`` and
    its DFT at ``k = N x0``. The phase-space point it sits over is
    ``(-x0, -y0) mod 1``.
    """
    if not np.real(width) > 0:
        raise ValueError("width must have positive real part")
    x0, y0 = x0 % 1.0, y0 % 1.0
    j = np.arange(N)
    a = np.zeros(N, dtype=complex)
    for w in (-1, 0, 1):
        s = j + w * N
        a += np.exp(2j * np.pi * x0 * s) * np.exp(-np.pi * (s - N * y0) ** 2 / (width * N))
    return a / np.linalg.norm(a)


def packet_width(N: int, width: float = 1.0) -> float:
    """Standard deviation of ``|a_j|^2`` in phase units, ``sqrt(width / (4 pi N))``."""
    return math.sqrt(width / (4 * math.pi * N))


def to_index_coords(point):
    """Phase point ``(x, y)`` to the packet's index coordinates ``(-x, -y) mod 1``."""
    return (-point[0]) % 1.0, (-point[1]) % 1.0


def packet_mode(T: BTMatrix, lam, point, width=1.0) -> Pseudomode:
    """Gaussian packet over the phase point ``point``."""
    a = torus_wavepacket(*to_index_coords(point), T.level, width)
    return Pseudomode(T.level, "theta", a, residual_of(T, lam, a), lam, tuple(point), width)


def windowed_pseudomode(T: BTMatrix, lam, point, half_width=0.3) -> Pseudomode:
    """Least-residual vector supported within ``half_width * N`` indices of ``point``'s row.

    The smallest right singular vector of ``T - lam`` restricted to the theta
    columns whose circle ``y = -j/N`` lies within ``half_width`` of ``point``.
    """
    N = T.level
    jc = int(round(to_index_coords(point)[1] * N)) % N
    hw = max(1, min(int(half_width * N), (N - 1) // 2))
    idx = (jc + np.arange(-hw, hw + 1)) % N
    A = (T.entries - lam * np.eye(N))[:, idx]
    _, s, vh = np.linalg.svd(A)
    v = np.zeros(N, dtype=complex)
    v[idx] = vh[-1].conj()
    return Pseudomode(N, "theta", v, float(s[-1]), lam, tuple(point), half_width)


def optimal_pseudomode(T: BTMatrix, lam) -> Pseudomode:
    """Right singular vector of the smallest singular value of ``T - lam``.

    ``degenerate`` is set when the two smallest singular values are within
    ``1e-12``; the solver's vector is returned unchanged in that case.
    """
    s, v, gap = smallest_singular_pair(T, lam)
    return Pseudomode(T.level, BASIS_OF_SPACE[T.space], v, s, complex(lam),
                      degenerate=gap < 1e-12)


# ------------------------------------------------------------------ decay

def superpolynomial_verdict(levels, values, powers=(2, 3, 4), floor=FLOOR):
    """PASS iff ``r_N N^p`` decreases over the top half of levels for every ``p``.

    A value below ``floor`` counts as below everything before it.
    """
    levels = np.asarray(levels, float)
    values = np.asarray(values, float)
    top = slice(len(levels) // 2, None)
    L, V = levels[top], values[top]
    for p in powers:
        seq = V * L ** p
        for i in range(len(seq) - 1):
            if V[i + 1] < floor:
                continue
            if V[i] < floor or not seq[i + 1] < seq[i]:
                return "FAIL"
    return "PASS"


def residual_decay(family, mode_builder, lam, levels, model="loglog") -> ScalingReport:
    """Residuals of ``mode_builder(T_N, lam)`` over ``levels`` with fit and verdict.

    ``family(N)`` returns a matrix; ``mode_builder`` returns a Pseudomode or a
    coefficient vector.
    """
    if len(levels) < 4:
        raise ValueError("need at least 4 levels")
    values = []
    for N in levels:
        T = family(N)
        m = mode_builder(T, lam)
        values.append(m.residual if isinstance(m, Pseudomode) else residual_of(T, lam, m))
    return fit(levels, values, model, verdict=superpolynomial_verdict(levels, values))


# ------------------------------------------------------------------ localization

@dataclass(frozen=True, eq=False)
class Localization:
    profiles: dict
    mass_on_level_set: float
    peak: tuple | float | None = None
    extras: dict = field(default_factory=dict)


def husimi(a: np.ndarray, width=1.0) -> np.ndarray:
    """``H[c, k] = |<packet(k/N, c/N), a>|^2``, normalized to total 1.

    Row ``c`` is the packet's index-``y``, column ``k`` its index-``x``;
    each row is one FFT of the coefficients against a shifted Gaussian.
    """
    N = a.size
    j = np.arange(N)
    H = np.empty((N, N))
    for c in range(N):
        g = sum(np.exp(-np.pi * (j + w * N - c) ** 2 / (width * N)) for w in (-1, 0, 1))
        H[c] = np.abs(np.fft.fft(g * a)) ** 2
    return H / H.sum()


def _level_set_cloud(f, lam):
    """Refined preimages plus samples lying within one grid step of the level set."""
    pts = level_set_points(f, lam)
    res = {"torus": 256, "sphere": 200, "plane": 200}[f.space]
    grid = sample_points(f.space, res)
    d = np.abs(eval_points(f, grid) - lam)
    near = grid[d <= f.lipschitz_bound() * sample_spacing(f.space, res)]
    cloud = [np.asarray(p) for p in pts] + list(near)
    return cloud


def localize(mode: Pseudomode, f, lam=None) -> Localization:
    """Coefficient profiles of ``mode`` and the mass near ``f^{-1}(lam)``."""
    space = SPACE_OF_BASIS.get(mode.basis)
    if space != f.space:
        raise BasisMismatch(f"mode basis {mode.basis!r} does not match a {f.space} symbol")
    lam = mode.lam if lam is None else lam
    a = mode.coeffs / np.linalg.norm(mode.coeffs)
    N = mode.N
    radius = 3 / math.sqrt(N)
    cloud = _level_set_cloud(f, lam)
    if space == "torus":
        y_prof = np.abs(a) ** 2
        x_prof = np.abs(np.fft.fft(a)) ** 2 / N
        H = husimi(a)
        idx = np.arange(N) / N
        # index coordinates -> phase point (-x, -y)
        X, Y = np.meshgrid((-idx) % 1.0, (-idx) % 1.0, indexing="xy")
        P = np.column_stack([X.ravel(), Y.ravel()])
        if cloud:
            C = np.array(cloud, float)
            dist = np.min(np.stack([phase_distance("torus", c, P) for c in C]), axis=0)
            mass = float(H.ravel()[dist <= radius].sum())
        else:
            mass = 0.0
        c, k = np.unravel_index(int(np.argmax(H)), H.shape)
        peak = ((-k / N) % 1.0, (-c / N) % 1.0)
        return Localization({"y": y_prof, "x": x_prof}, mass, peak, {"husimi": H})
    if space == "sphere":
        I = np.arange(N + 1) / (N + 1)
        prof = np.abs(a) ** 2
        targets = np.array([p[2] + 0.5 for p in cloud]) if cloud else np.array([])
        near = (np.min(np.abs(I[:, None] - targets[None, :]), axis=1) <= radius
                if targets.size else np.zeros(N + 1, bool))
        return Localization({"I": prof}, float(prof[near].sum()), float(I[np.argmax(prof)]))
    # plane: |k> concentrates on |z|^2 = k/N
    r = np.sqrt(np.arange(N + 1) / N)
    prof = np.abs(a) ** 2
    targets = np.abs(np.array(cloud, complex)) if cloud else np.array([])
    near = (np.min(np.abs(r[:, None] - targets[None, :]), axis=1) <= radius
            if targets.size else np.zeros(N + 1, bool))
    return Localization({"r": prof}, float(prof[near].sum()), float(r[np.argmax(prof)]))


# ------------------------------------------------------------------ exponents

def boundary_exponent(family, f, lam, levels, max_depth=4) -> ScalingReport:
    """Log-log slope of ``sigma_min(T_N - lam)`` with the admissible window.

    ``k`` is the largest bracket order over the refined points of
    ``f^{-1}(lam)``. If any of them has a nonvanishing first bracket the
    report is flagged ``interior``.
    """
    if len(levels) < 5:
        raise ValueError("need at least 5 levels")
    pts = level_set_points(f, lam)
    if not pts:
        raise ValueError("lambda is not in the image of f")
    orders = [bracket_order(f, p, max_depth) for p in pts]
    if max(orders) > max_depth:
        raise OrderUnbounded(f"bracket order exceeds {max_depth} on f^-1(lambda)")
    k = max(orders)
    bracket = f.real_part().bracket(f.imag_part())
    interior = any(abs(evaluate(bracket, p)) > 1e-9 for p in pts)
    values = [sigma_min(family(N), lam) for N in levels]
    window = [-k / (k + 1) - 0.08, -0.5 + 0.08]
    return fit(levels, values, "loglog",
               flags={"k": k, "window": window, "orders": orders,
                      "kind": "interior" if interior else "boundary"})


def part0_check(family, f, lam, levels, resolution=512) -> ScalingReport:
    """``|sigma_min(T_N - lam) - dist(lam, f(X))|`` across levels."""
    if len(levels) < 4:
        raise ValueError("need at least 4 levels")
    d = min_distance_to(f, lam, resolution)
    values = [abs(sigma_min(family(N), lam) - d) for N in levels]
    return fit(levels, values, "loglog", flags={"distance": d})


def in_window(report: ScalingReport) -> bool:
    lo, hi = report.flags["window"]
    return lo <= report.slope <= hi
