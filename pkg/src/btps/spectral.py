"""Dense spectral computations: sigma_min sweeps, eigenvalues, numerical ranges, traces."""

from __future__ import annotations

import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import NumericalFailure
from .fits import ScalingReport, fit
from .matrices import BTMatrix
from .symbols import image_samples

HULL_TOL = 1e-12


def _entries(T):
    return T.entries if isinstance(T, BTMatrix) else np.asarray(T, dtype=complex)


def _provenance(T):
    return T.matrix_id if isinstance(T, BTMatrix) else "raw"


def sigma_min(T, lam: complex) -> float:
    """Smallest singular value of ``T - lam I``."""
    A = _entries(T)
    A = A - lam * np.eye(A.shape[0])
    try:
        s = np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("SVD did not converge", matrix=_provenance(T),
                               lam=complex(lam)) from exc
    return float(s[-1])


def smallest_singular_pair(T, lam: complex):
    """``(sigma_min, v, gap)`` with ``v`` the matching right singular vector."""
    A = _entries(T)
    A = A - lam * np.eye(A.shape[0])
    try:
        _, s, vh = np.linalg.svd(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("SVD did not converge", matrix=_provenance(T),
                               lam=complex(lam)) from exc
    gap = float(s[-2] - s[-1]) if s.size > 1 else float("inf")
    return float(s[-1]), vh[-1].conj(), gap


def thread_count():
    env = os.environ.get("BTPS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


@dataclass(frozen=True, eq=False)
class PseudospectrumGrid:
    re_range: tuple
    im_range: tuple
    nx: int
    ny: int
    sigma_min: np.ndarray     # shape (ny, nx), row = imaginary part
    matrix_id: str
    N: int

    @property
    def re(self):
        return np.linspace(*self.re_range, self.nx)

    @property
    def im(self):
        return np.linspace(*self.im_range, self.ny)

    def value_at(self, lam):
        """Grid value at the node nearest ``lam``."""
        i = int(np.argmin(np.abs(self.im - lam.imag)))
        j = int(np.argmin(np.abs(self.re - lam.real)))
        return float(self.sigma_min[i, j])

    def to_csv(self):
        out = io.StringIO()
        out.write("re,im,sigma_min\n")
        for i, y in enumerate(self.im):
            for j, x in enumerate(self.re):
                out.write(f"{float(x)!r},{float(y)!r},{float(self.sigma_min[i, j])!r}\n")
        return out.getvalue()

    def to_json(self):
        return {"v": 1, "re_range": list(self.re_range), "im_range": list(self.im_range),
                "nx": self.nx, "ny": self.ny, "matrix_id": self.matrix_id, "N": self.N,
                "sigma_min": self.sigma_min.tolist()}


def pseudospectrum_grid(T, window, nx: int, ny: int, threads=None) -> PseudospectrumGrid:
    """``sigma_min(T - lam)`` on an ``nx x ny`` grid over ``window = (re0, re1, im0, im1)``.

    Rows are farmed out to a thread pool; each row writes its own slice, so
    the result does not depend on scheduling.
    """
    re0, re1, im0, im1 = map(float, window)
    if nx < 2 or ny < 2:
        raise ValueError("grid counts must be >= 2")
    if not (re0 < re1 and im0 < im1):
        raise ValueError("window must be non-empty and well ordered")
    xs = np.linspace(re0, re1, nx)
    ys = np.linspace(im0, im1, ny)
    out = np.empty((ny, nx))

    def row(i):
        for j, x in enumerate(xs):
            lam = complex(x, ys[i])
            try:
                out[i, j] = sigma_min(T, lam)
            except NumericalFailure as exc:
                raise NumericalFailure("SVD did not converge", matrix=_provenance(T),
                                       lam=lam, grid=(i, j)) from exc

    workers = min(threads or thread_count(), ny)
    if workers <= 1:
        for i in range(ny):
            row(i)
    else:
        with ThreadPoolExecutor(workers) as pool:
            list(pool.map(row, range(ny)))
    N = T.level if isinstance(T, BTMatrix) else out.shape[0]
    return PseudospectrumGrid((re0, re1), (im0, im1), nx, ny, out, _provenance(T), N)


def eigenvalues(T, vectors=False, check=True):
    """Dense nonsymmetric eigenvalues, optionally with eigenvectors.

    With ``vectors=True`` and ``check`` set, each pair is required to have
    ``||T v - lam v|| <= 1e-9 ||T||``.
    """
    A = _entries(T)
    try:
        if not vectors:
            return np.linalg.eigvals(A)
        w, V = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("eigensolver did not converge", matrix=_provenance(T)) from exc
    if check:
        res = np.linalg.norm(A @ V - V * w, axis=0) / np.linalg.norm(V, axis=0)
        scale = max(np.linalg.norm(A, 2), 1.0)
        if np.any(res > 1e-9 * scale):
            raise NumericalFailure("eigenpair backward error too large",
                                   matrix=_provenance(T), worst=float(res.max()))
    return w, V


def tridiagonal_data(T):
    """``(diag, products)`` of a tridiagonal matrix with real diagonal and real
    off-diagonal products ``T[k, k+1] T[k+1, k]``."""
    A = _entries(T)
    i, j = np.nonzero(A)
    if np.any(np.abs(i - j) > 1):
        raise ValueError("matrix is not tridiagonal")
    a = np.diag(A)
    prod = np.diag(A, 1) * np.diag(A, -1)
    if np.any(a.imag != 0) or np.any(np.abs(prod.imag) > 1e-14 * np.abs(prod.real)):
        raise ValueError("diagonal and off-diagonal products must be real")
    return list(a.real), list(prod.real)


def tridiagonal_real_eigenvalues(diag, prod, dps=50, grid_factor=8, max_refine=4):
    """Certified real spectrum of a tridiagonal matrix, or ``None``.

    ``diag`` holds the (real) diagonal and ``prod`` the real products
    ``b_k c_k`` of opposite off-diagonal entries; both may be floats, strings
    or mpmath numbers. The characteristic polynomial obeys the real recurrence
    ``p_k = (x - a_k) p_{k-1} - b_k c_k p_{k-2}`` and is evaluated with
    ``dps`` digits on a grid covering every real root. ``n`` strict sign
    changes prove ``n`` distinct real roots, which are then bisected.
    ``None`` means the grid never showed ``n`` sign changes.
    """
    with mpmath.workdps(dps):
        am = [mpmath.mpf(v) for v in diag]
        pm = [mpmath.mpf(v) for v in prod]
        n = len(am)
        if len(pm) != n - 1:
            raise ValueError("need n - 1 off-diagonal products")
        # a real tridiagonal similar matrix has off-diagonals sqrt|p| in magnitude
        r = 2 * max([mpmath.sqrt(abs(p)) for p in pm] or [mpmath.mpf(0)])
        lo, hi = min(am) - r, max(am) + r
        pad = (hi - lo + 1) / 1000
        lo, hi = lo - pad, hi + pad

        def charpoly(x):
            p2, p1 = mpmath.mpf(1), x - am[0]
            for k in range(1, n):
                p2, p1 = p1, (x - am[k]) * p1 - pm[k - 1] * p2
            return p1

        m = grid_factor * n
        for _ in range(max_refine + 1):
            xs = [lo + (hi - lo) * i / m for i in range(m + 1)]
            vals = [charpoly(x) for x in xs]
            brackets = [(xs[i], xs[i + 1], vals[i]) for i in range(m)
                        if vals[i] * vals[i + 1] < 0]
            if len(brackets) == n:
                break
            m *= 2
        else:
            return None
        roots = []
        for left, right, vl in brackets:
            while right - left > mpmath.mpf(2) ** -60 * (1 + abs(left)):
                mid = (left + right) / 2
                vm = charpoly(mid)
                if vm == 0:
                    left = right = mid
                elif (vm < 0) == (vl < 0):
                    left, vl = mid, vm
                else:
                    right = mid
            roots.append(float((left + right) / 2))
    return np.array(roots)


@dataclass(frozen=True, eq=False)
class NumericalRangeBoundary:
    angles: np.ndarray
    support_values: np.ndarray
    boundary_points: np.ndarray

    def to_csv(self):
        out = io.StringIO()
        out.write("theta,support,re,im\n")
        for t, s, z in zip(self.angles, self.support_values, self.boundary_points):
            out.write(f"{float(t)!r},{float(s)!r},{float(z.real)!r},{float(z.imag)!r}\n")
        return out.getvalue()

    def to_json(self):
        return {"v": 1, "angles": self.angles.tolist(),
                "support_values": self.support_values.tolist(),
                "boundary_points": [[float(z.real), float(z.imag)] for z in self.boundary_points]}


def numerical_range(T, M: int = 128) -> NumericalRangeBoundary:
    """Support points of ``W(T)`` in the directions ``theta_m = 2 pi m / M``."""
    if M < 8:
        raise ValueError("M must be >= 8")
    A = _entries(T)
    angles = 2 * np.pi * np.arange(M) / M
    support = np.empty(M)
    points = np.empty(M, dtype=complex)
    for m, th in enumerate(angles):
        B = np.exp(-1j * th) * A
        H = (B + B.conj().T) / 2
        try:
            w, V = np.linalg.eigh(H)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure("Hermitian eigensolver did not converge",
                                   matrix=_provenance(T), theta=float(th)) from exc
        psi = V[:, -1]
        support[m] = w[-1]
        points[m] = np.vdot(psi, A @ psi)
    return NumericalRangeBoundary(angles, support, points)


def convex_hull(points) -> np.ndarray:
    """Counter-clockwise hull vertices of complex ``points`` (monotone chain)."""
    pts = np.unique(np.asarray(points, dtype=complex).ravel())
    P = sorted((float(z.real), float(z.imag)) for z in pts)
    if len(P) <= 2:
        return np.array([complex(*p) for p in P])

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def chain(seq):
        h = []
        for p in seq:
            while len(h) >= 2 and cross(h[-2], h[-1], p) <= HULL_TOL:
                h.pop()
            h.append(p)
        return h

    lower, upper = chain(P), chain(reversed(P))
    return np.array([complex(*p) for p in lower[:-1] + upper[:-1]])


def _point_segment_distance(z, a, b):
    d = b - a
    L = abs(d) ** 2
    t = 0.0 if L == 0 else np.clip(((z - a) * np.conj(d)).real / L, 0.0, 1.0)
    return abs(z - (a + t * d))


def distance_to_hull(z, hull) -> float:
    """Distance from ``z`` to the filled convex polygon ``hull`` (0 inside)."""
    n = len(hull)
    if n == 0:
        raise ValueError("empty hull")
    if n == 1:
        return abs(z - hull[0])
    if n == 2:
        return _point_segment_distance(z, hull[0], hull[1])
    inside = True
    for i in range(n):
        a, b = hull[i], hull[(i + 1) % n]
        if ((b - a).real * (z - a).imag - (b - a).imag * (z - a).real) < -HULL_TOL:
            inside = False
            break
    if inside:
        return 0.0
    return min(_point_segment_distance(z, hull[i], hull[(i + 1) % n]) for i in range(n))


def hausdorff(P, Q) -> float:
    """Hausdorff distance between the convex hulls of two point sets.

    Distance to a convex set is convex, so the supremum over a polygon is
    attained at one of its vertices.
    """
    hp, hq = convex_hull(P), convex_hull(Q)
    return max(max(distance_to_hull(z, hq) for z in hp),
               max(distance_to_hull(z, hp) for z in hq))


def polynomial_of_matrix(coeffs, A):
    """``F(A)`` for ascending ``coeffs`` (Horner)."""
    coeffs = list(coeffs)
    n = A.shape[0]
    R = np.zeros_like(A, dtype=complex)
    for c in reversed(coeffs):
        R = R @ A + c * np.eye(n)
    return R


def phase_average(F, f, points=None):
    """Mean of ``F o f`` over the sampling grid (torus 512^2 lattice, sphere 10^5+ points)."""
    coeffs = np.asarray(F, dtype=complex)
    if points is None:
        res = 512 if f.space == "torus" else 317
        vals = image_samples(f, res)
    else:
        vals = np.asarray(points)
    return complex(np.polynomial.polynomial.polyval(vals, coeffs).mean())


def normalized_trace(F, T) -> complex:
    A = _entries(T)
    return complex(np.trace(polynomial_of_matrix(F, A)) / A.shape[0])


def szego_trace(builder, F, f, levels, resolution=None) -> ScalingReport:
    """Errors ``|tr F(T_N)/dim - avg(F o f)|`` and their log-log slope."""
    if len(F) > 7:
        raise ValueError("F must have degree <= 6")
    if resolution is None:
        avg = phase_average(F, f)
    else:
        avg = complex(np.polynomial.polynomial.polyval(
            image_samples(f, resolution), np.asarray(F, dtype=complex)).mean())
    errs = [abs(normalized_trace(F, builder(N)) - avg) for N in levels]
    return fit(levels, errs, "loglog")


__all__ = ["sigma_min", "smallest_singular_pair", "pseudospectrum_grid", "PseudospectrumGrid",
           "eigenvalues", "tridiagonal_data", "tridiagonal_real_eigenvalues", "numerical_range",
           "NumericalRangeBoundary", "convex_hull", "distance_to_hull", "hausdorff",
           "polynomial_of_matrix", "phase_average", "normalized_trace", "szego_trace",
           "thread_count"]
