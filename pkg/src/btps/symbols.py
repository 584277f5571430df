"""Classical symbols on the torus, the radius-1/2 sphere and the unit disk.

Every symbol is a finite expansion (trigonometric polynomial, polynomial in
the ambient coordinates, or an affine function of ``z``), so evaluation,
conjugation and Poisson brackets stay inside the same class and can be
carried out coefficient by coefficient.

Bracket conventions:

* torus and plane: ``{g, h} = g_x h_y - g_y h_x`` with ``z = x + iy``,
  so ``{x, y} = 1`` (no ``2*pi`` factor);
* sphere: ``{g, h}(x) = x . (grad g  x  grad h)``, giving ``{x1, x2} = x3``
  and its cyclic permutations.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from math import comb, pi, sqrt

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import least_squares

from .errors import MixedSpaces, SchemaError, SphereOffShell

SPHERE_RADIUS = 0.5
SHELL_TOL = 1e-9
ORDER_TOL = 1e-9
GOLDEN_ANGLE = pi * (3.0 - sqrt(5.0))


def _clean(items):
    out = {}
    for key, c in items:
        c = complex(c)
        out[key] = out.get(key, 0j) + c
    return tuple(sorted((k, c) for k, c in out.items() if c != 0))


class _Symbol:
    space = None

    def __add__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.shift(-complex(other))
        _same_space(self, other)
        return type(self)._from_items(
            list(self.coeffs.items()) + list(other.coeffs.items()))

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, _Symbol):
            _same_space(self, scalar)
            return self._product(scalar)
        if not isinstance(scalar, (int, float, complex, np.number)):
            return NotImplemented
        s = complex(scalar)
        return type(self)._from_items((k, s * c) for k, c in self.coeffs.items())

    __rmul__ = __mul__

    def real_part(self):
        return (self + self.conj()) * 0.5

    def imag_part(self):
        return (self - self.conj()) * (-0.5j)

    def is_zero(self, tol=0.0):
        return all(abs(c) <= tol for c in self.coeffs.values())

    def is_real(self, tol=1e-12):
        return (self - self.conj()).is_zero(tol)

    def shift(self, c):
        """Return ``f - c`` for a complex constant ``c``."""
        return type(self)._from_items(
            list(self.coeffs.items()) + [(self._const_key, -complex(c))])

    def max_abs_coeff(self):
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    @property
    def symbol_id(self):
        doc = json.dumps(symbol_to_json(self), sort_keys=True)
        return hashlib.sha256(doc.encode()).hexdigest()[:16]


def _same_space(g, h):
    if type(g) is not type(h):
        raise MixedSpaces(f"cannot combine {g.space} and {h.space} symbols")


# ---------------------------------------------------------------- torus

@dataclass(frozen=True)
class TorusSymbol(_Symbol):
    """``f(x, y) = sum c[l, m] exp(2 pi i (l x + m y))`` on ``[0, 1)^2``."""

    terms: tuple = ()
    space = "torus"
    _const_key = (0, 0)

    @classmethod
    def _from_items(cls, items):
        return cls(_clean(((int(k[0]), int(k[1])), c) for k, c in items))

    @classmethod
    def from_dict(cls, coeffs):
        return cls._from_items(coeffs.items())

    @property
    def coeffs(self):
        return dict(self.terms)

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        for (l, m), c in self.terms:
            out = out + c * np.exp(2j * pi * (l * x + m * y))
        return out

    def _product(self, other):
        return TorusSymbol._from_items(
            ((l1 + l2, m1 + m2), c1 * c2)
            for (l1, m1), c1 in self.terms for (l2, m2), c2 in other.terms)

    def conj(self):
        return TorusSymbol._from_items(
            ((-l, -m), np.conj(c)) for (l, m), c in self.terms)

    def d_x(self):
        return TorusSymbol._from_items(((l, m), 2j * pi * l * c) for (l, m), c in self.terms)

    def d_y(self):
        return TorusSymbol._from_items(((l, m), 2j * pi * m * c) for (l, m), c in self.terms)

    def bracket(self, other):
        _same_space(self, other)
        items = []
        for (l1, m1), c1 in self.terms:
            for (l2, m2), c2 in other.terms:
                w = -4 * pi ** 2 * (l1 * m2 - m1 * l2)
                if w:
                    items.append(((l1 + l2, m1 + m2), w * c1 * c2))
        return TorusSymbol._from_items(items)

    def lipschitz_bound(self):
        return sum(abs(c) * 2 * pi * np.hypot(l, m) for (l, m), c in self.terms)


# ---------------------------------------------------------------- sphere

def _poly_mul(p, q):
    out = {}
    for (a1, b1, c1), u in p.items():
        for (a2, b2, c2), v in q.items():
            key = (a1 + a2, b1 + b2, c1 + c2)
            out[key] = out.get(key, 0j) + u * v
    return out


def _poly_diff(p, axis):
    out = {}
    for key, u in p.items():
        if key[axis]:
            new = list(key)
            new[axis] -= 1
            out[tuple(new)] = out.get(tuple(new), 0j) + key[axis] * u
    return out


def _poly_add(*ps, signs=None):
    out = {}
    signs = signs or [1] * len(ps)
    for s, p in zip(signs, ps):
        for k, u in p.items():
            out[k] = out.get(k, 0j) + s * u
    return out


@dataclass(frozen=True)
class SphereSymbol(_Symbol):
    """Polynomial ``sum amp * x1^a x2^b x3^c`` restricted to ``|x| = 1/2``."""

    terms: tuple = ()
    space = "sphere"
    _const_key = (0, 0, 0)

    @classmethod
    def _from_items(cls, items):
        return cls(_clean((tuple(int(i) for i in k), c) for k, c in items))

    @classmethod
    def from_dict(cls, coeffs):
        return cls._from_items(coeffs.items())

    @classmethod
    def coordinate(cls, i):
        key = [0, 0, 0]
        key[i - 1] = 1
        return cls._from_items([(tuple(key), 1.0)])

    @property
    def coeffs(self):
        return dict(self.terms)

    @property
    def degree(self):
        return max((sum(k) for k, _ in self.terms), default=0)

    def __call__(self, x1, x2, x3, check=True):
        x1, x2, x3 = (np.asarray(v, dtype=float) for v in (x1, x2, x3))
        if check:
            r = np.sqrt(x1 ** 2 + x2 ** 2 + x3 ** 2)
            if np.any(np.abs(r - SPHERE_RADIUS) > SHELL_TOL):
                raise SphereOffShell("point is not on the sphere of radius 1/2")
        out = np.zeros(np.broadcast(x1, x2, x3).shape, dtype=complex)
        for (a, b, c), amp in self.terms:
            out = out + amp * x1 ** a * x2 ** b * x3 ** c
        return out

    def _product(self, other):
        return SphereSymbol._from_items(_poly_mul(self.coeffs, other.coeffs).items())

    def conj(self):
        return SphereSymbol._from_items((k, np.conj(c)) for k, c in self.terms)

    def partial(self, axis):
        return SphereSymbol._from_items(_poly_diff(self.coeffs, axis).items())

    def bracket(self, other):
        _same_space(self, other)
        g = [_poly_diff(self.coeffs, i) for i in range(3)]
        h = [_poly_diff(other.coeffs, i) for i in range(3)]
        cross = [
            _poly_add(_poly_mul(g[1], h[2]), _poly_mul(g[2], h[1]), signs=[1, -1]),
            _poly_add(_poly_mul(g[2], h[0]), _poly_mul(g[0], h[2]), signs=[1, -1]),
            _poly_add(_poly_mul(g[0], h[1]), _poly_mul(g[1], h[0]), signs=[1, -1]),
        ]
        coords = [{(1, 0, 0): 1.0}, {(0, 1, 0): 1.0}, {(0, 0, 1): 1.0}]
        total = _poly_add(*(_poly_mul(coords[i], cross[i]) for i in range(3)))
        return SphereSymbol._from_items(total.items())

    def lipschitz_bound(self):
        return sum(abs(c) * sum(k) * SPHERE_RADIUS ** max(sum(k) - 1, 0)
                   for k, c in self.terms)


def to_action_angle(f):
    """Split a sphere symbol as ``sum_l u_l * g_l(I)``.

    ``u_l = (x1 + i x2)^l`` for ``l >= 0`` and ``(x1 - i x2)^|l|`` for
    ``l < 0``; ``I = x3 + 1/2``. Returns ``{l: coefficients of g_l}`` in
    ascending powers of ``I`` (complex numpy arrays, trailing zeros trimmed).
    """
    if not isinstance(f, SphereSymbol):
        raise MixedSpaces("action-angle form exists only for sphere symbols")
    one_minus = np.array([0.0, 1.0, -1.0])     # I(1 - I)
    x3_in_I = np.array([-0.5, 1.0])            # I - 1/2
    out = {}
    for (a, b, c), amp in f.terms:
        base = amp * 0.5 ** a * (2j) ** (-b)
        for p in range(a + 1):
            for q in range(b + 1):
                coef = base * comb(a, p) * comb(b, q) * (-1) ** (b - q)
                n_u = p + q
                n_ubar = a + b - n_u
                l = n_u - n_ubar
                r = min(n_u, n_ubar)
                poly = P.polymul(P.polypow(one_minus, r), P.polypow(x3_in_I, c)) * coef
                out[l] = P.polyadd(out.get(l, np.zeros(1, complex)), poly)
    cleaned = {}
    for l, poly in out.items():
        poly = np.asarray(poly, dtype=complex)
        nz = np.nonzero(poly)[0]
        if nz.size:
            cleaned[l] = poly[: nz[-1] + 1]
    return dict(sorted(cleaned.items()))


def from_action_angle(parts):
    """Inverse of :func:`to_action_angle`, back to ambient monomials."""
    items = []
    for l, g in parts.items():
        g = np.asarray(g, dtype=complex)
        # g(I) with I = x3 + 1/2, expanded in powers of x3
        g_x3 = np.zeros(1, complex)
        for n, gn in enumerate(g):
            g_x3 = P.polyadd(g_x3, gn * P.polypow(np.array([0.5, 1.0]), n))
        sgn = 1 if l >= 0 else -1
        L = abs(l)
        for p in range(L + 1):
            # (x1 + sgn i x2)^L = sum C(L,p) x1^(L-p) (sgn i)^p x2^p
            w = comb(L, p) * (sgn * 1j) ** p
            for c, coef in enumerate(g_x3):
                if coef != 0:
                    items.append(((L - p, p, c), w * coef))
    return SphereSymbol._from_items(items)


# ---------------------------------------------------------------- plane

@dataclass(frozen=True)
class PlaneSymbol(_Symbol):
    """Affine symbol ``mu z + nu conj(z) + kappa`` on the unit disk."""

    mu: complex = 0j
    nu: complex = 0j
    kappa: complex = 0j
    space = "plane"
    _const_key = "kappa"

    def __post_init__(self):
        for name in ("mu", "nu", "kappa"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @classmethod
    def _from_items(cls, items):
        d = {"mu": 0j, "nu": 0j, "kappa": 0j}
        for k, c in items:
            d[k] += complex(c)
        return cls(**d)

    @property
    def coeffs(self):
        return {k: v for k, v in (("mu", self.mu), ("nu", self.nu),
                                  ("kappa", self.kappa)) if v != 0}

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.mu * z + self.nu * np.conj(z) + self.kappa

    def _product(self, other):
        raise TypeError("products of affine plane symbols leave the affine class")

    def conj(self):
        return PlaneSymbol(np.conj(self.nu), np.conj(self.mu), np.conj(self.kappa))

    def bracket(self, other):
        _same_space(self, other)
        # g = a1 z + b1 zbar: g_x = a1 + b1, g_y = i (a1 - b1)
        value = 2j * (self.nu * other.mu - self.mu * other.nu)
        return PlaneSymbol(0j, 0j, value)

    def lipschitz_bound(self):
        return abs(self.mu) + abs(self.nu)


# ---------------------------------------------------------------- operations

def evaluate(f, point):
    """Value of ``f`` at one phase-space point.

    Torus points are ``(x, y)`` (wrapped mod 1), sphere points ``(x1, x2, x3)``
    with ``|x| = 1/2``, plane points a complex ``z``.
    """
    if isinstance(f, TorusSymbol):
        x, y = point
        return complex(f(x % 1.0, y % 1.0))
    if isinstance(f, SphereSymbol):
        return complex(f(*point))
    return complex(f(point))


def poisson_bracket(g, h):
    return g.bracket(h)


def repeated_brackets(f, depth):
    """All ``f_I`` for ``|I| <= depth`` keyed by the index tuple ``I``.

    ``f_(i1, ..., im) = {f_i1, {f_i2, ... {f_i(m-1), f_im}}}`` with
    ``f_1 = Re f`` and ``f_2 = Im f``.
    """
    base = {1: f.real_part(), 2: f.imag_part()}
    levels = [{(1,): base[1], (2,): base[2]}]
    for _ in range(depth - 1):
        prev = levels[-1]
        levels.append({(i,) + I: base[i].bracket(g) for i in (1, 2) for I, g in prev.items()})
    return levels


def bracket_order(f, point, max_depth):
    """Order ``k`` of ``point`` for the level set of ``f`` through it.

    The brackets are taken for ``f - f(point)``, so the length-one terms
    vanish by construction and ``k >= 1``. Returns ``max_depth + 1`` when
    every bracket up to length ``max_depth + 1`` vanishes.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    g = f.shift(evaluate(f, point))
    for m, level in enumerate(repeated_brackets(g, max_depth + 1), start=1):
        for fI in level.values():
            if abs(evaluate(fI, point)) > ORDER_TOL:
                return m - 1
    return max_depth + 1


def fibonacci_sphere(n):
    i = np.arange(n)
    z = 1.0 - (2 * i + 1) / n
    r = np.sqrt(1.0 - z * z)
    phi = i * GOLDEN_ANGLE
    return SPHERE_RADIUS * np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def sample_points(space, resolution):
    """Deterministic quasi-uniform points of a phase space.

    torus: ``resolution x resolution`` lattice ``(i/res, j/res)``;
    sphere: Fibonacci lattice with ``resolution**2`` points;
    plane: polar grid of the closed unit disk, radii ``i/res`` and
    ``4*res`` angles (nested under doubling of ``resolution``).
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if space == "torus":
        g = np.arange(resolution) / resolution
        X, Y = np.meshgrid(g, g, indexing="ij")
        return np.column_stack([X.ravel(), Y.ravel()])
    if space == "sphere":
        return fibonacci_sphere(resolution * resolution)
    if space == "plane":
        r = np.arange(1, resolution + 1) / resolution
        t = 2 * pi * np.arange(4 * resolution) / (4 * resolution)
        pts = (r[:, None] * np.exp(1j * t[None, :])).ravel()
        return np.concatenate([[0j], pts])
    raise ValueError(f"unknown space {space!r}")


def sample_spacing(space, resolution):
    if space == "torus":
        return np.sqrt(0.5) / resolution
    if space == "sphere":
        return np.sqrt(pi / resolution ** 2)
    return pi / (2 * resolution)


def eval_points(f, pts):
    if isinstance(f, TorusSymbol):
        return f(pts[:, 0], pts[:, 1])
    if isinstance(f, SphereSymbol):
        return f(pts[:, 0], pts[:, 1], pts[:, 2], check=False)
    return f(pts)


def image_samples(f, resolution):
    return eval_points(f, sample_points(f.space, resolution))


def min_distance_to(f, lam, resolution):
    return float(np.min(np.abs(image_samples(f, resolution) - lam)))


def phase_distance(space, p, q):
    """Flat periodic distance on the torus, chordal on the sphere, |z - w| on the plane.

    ``p`` is a single point; ``q`` may be an array of points.
    """
    if space == "torus":
        d = np.abs(np.asarray(q, float) - np.asarray(p, float))
        d = np.minimum(d, 1.0 - d)
        return np.sqrt((d ** 2).sum(axis=-1))
    if space == "sphere":
        return np.linalg.norm(np.asarray(q, float) - np.asarray(p, float), axis=-1)
    return np.abs(np.asarray(q) - p)


def _chart(space, seed):
    """Local coordinates ``(s, t) -> point`` centred at ``seed``."""
    if space == "torus":
        x0, y0 = seed
        return lambda s, t: ((x0 + s) % 1.0, (y0 + t) % 1.0)
    if space == "plane":
        return lambda s, t: seed + s + 1j * t
    n = np.asarray(seed, float) / np.linalg.norm(seed)
    a = np.array([1.0, 0, 0]) if abs(n[0]) < 0.9 else np.array([0, 1.0, 0])
    e1 = a - (a @ n) * n
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)

    def to_point(s, t):
        q = n + s * e1 + t * e2
        return tuple(SPHERE_RADIUS * q / np.linalg.norm(q))
    return to_point


def level_set_points(f, lam, resolution=None, cluster_radius=0.05):
    """Points of ``f^{-1}(lam)``, located on samples and refined.

    Each cluster of near-preimages is refined by least squares on
    ``(Re, Im)(f - lam)``; where the bracket ``{Re f, Im f}`` nearly
    vanishes (fold points, e.g. over the boundary of the image) the bracket
    is appended as a third equation so the solve stays well posed.
    Returns a list of points (tuples for torus/sphere, complex for plane);
    empty if ``lam`` is not in the image.
    """
    space = f.space
    resolution = resolution or {"torus": 256, "sphere": 200, "plane": 200}[space]
    pts = sample_points(space, resolution)
    d = np.abs(eval_points(f, pts) - lam)
    scale = max(f.lipschitz_bound(), 1e-300)
    tol = d.min() + 2 * scale * sample_spacing(space, resolution)
    order = np.argsort(d)
    order = order[d[order] <= tol]
    seeds = []
    for idx in order:
        p = pts[idx]
        if all(phase_distance(space, s, p) > cluster_radius for s in seeds):
            seeds.append(p)
    bracket = f.real_part().bracket(f.imag_part())
    bscale = max(bracket.max_abs_coeff(), 1e-300)
    found = []
    for seed in seeds:
        seed = complex(seed) if space == "plane" else tuple(seed)
        chart = _chart(space, seed)

        def resid(v, augmented):
            p = chart(*v)
            w = evaluate(f, p) - lam
            out = [w.real, w.imag]
            if augmented:
                out.append(evaluate(bracket, p).real / bscale * scale)
            return out

        best = None
        for augmented in (False, True):
            sol = least_squares(resid, [0.0, 0.0], args=(augmented,), xtol=1e-15,
                                ftol=1e-15, gtol=1e-15, method="lm")
            p = chart(*sol.x)
            err = abs(evaluate(f, p) - lam)
            b = abs(evaluate(bracket, p))
            if err <= 1e-10 * max(1.0, scale):
                best = p
                if b > 1e-6 * bscale:
                    break
        if best is not None and all(phase_distance(space, q, best) > 1e-7 for q in found):
            found.append(best)
    return found


# ---------------------------------------------------------------- json

_PLANE_TAGS = ("mu", "nu", "kappa")


def symbol_to_json(f):
    terms = []
    if isinstance(f, PlaneSymbol):
        for i, tag in enumerate(_PLANE_TAGS):
            c = getattr(f, tag)
            if c != 0:
                terms.append({"k": [i], "re": float(c.real), "im": float(c.imag)})
    else:
        for k, c in f.terms:
            terms.append({"k": list(k), "re": float(c.real), "im": float(c.imag)})
    return {"space": f.space, "terms": terms}


def symbol_from_json(doc):
    """Parse the symbol document, rejecting unknown or malformed fields."""
    if not isinstance(doc, dict):
        raise SchemaError("symbol must be an object", "")
    extra = set(doc) - {"space", "terms"}
    if extra:
        raise SchemaError(f"unknown field(s) {sorted(extra)}", f"/{sorted(extra)[0]}")
    space = doc.get("space")
    if space not in ("torus", "sphere", "plane"):
        raise SchemaError("space must be torus, sphere or plane", "/space")
    terms = doc.get("terms")
    if not isinstance(terms, list):
        raise SchemaError("terms must be a list", "/terms")
    width = {"torus": 2, "sphere": 3, "plane": 1}[space]
    items = []
    for i, t in enumerate(terms):
        ptr = f"/terms/{i}"
        if not isinstance(t, dict):
            raise SchemaError("term must be an object", ptr)
        extra = set(t) - {"k", "re", "im"}
        if extra:
            raise SchemaError(f"unknown field(s) {sorted(extra)}", f"{ptr}/{sorted(extra)[0]}")
        k = t.get("k")
        if (not isinstance(k, list) or len(k) != width
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in k)):
            raise SchemaError(f"k must be a list of {width} integers", f"{ptr}/k")
        if space == "sphere" and min(k) < 0:
            raise SchemaError("sphere exponents must be non-negative", f"{ptr}/k")
        if space == "plane" and k[0] not in (0, 1, 2):
            raise SchemaError("plane tag index must be 0 (mu), 1 (nu) or 2 (kappa)", f"{ptr}/k")
        for part in ("re", "im"):
            v = t.get(part, 0.0)
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not np.isfinite(v):
                raise SchemaError(f"{part} must be a finite number", f"{ptr}/{part}")
        c = complex(t.get("re", 0.0), t.get("im", 0.0))
        key = _PLANE_TAGS[k[0]] if space == "plane" else tuple(k)
        items.append((key, c))
    cls = {"torus": TorusSymbol, "sphere": SphereSymbol, "plane": PlaneSymbol}[space]
    return cls._from_items(items)


# ---------------------------------------------------------------- presets

def scottish_flag():
    """``2 cos 2 pi x + 2i cos 2 pi y``; a representative choice, not a printed matrix."""
    return TorusSymbol.from_dict({(1, 0): 1.0, (-1, 0): 1.0, (0, 1): 1j, (0, -1): 1j})


def twist_demo():
    """``exp(2 pi i x) + 0.5 exp(-2 pi i y)``; bracket ``2 pi^2 sin 2 pi (x + y)``."""
    return TorusSymbol.from_dict({(1, 0): 1.0, (0, -1): 0.5})


def linear_sphere_symbol(t):
    """``F_A = i sinh(t) x1 + cosh(t) x3``."""
    return SphereSymbol.from_dict({(1, 0, 0): 1j * np.sinh(t), (0, 0, 1): np.cosh(t)})


def model_symbol(mu):
    """``mu z + conj(z)``."""
    return PlaneSymbol(complex(mu), 1.0 + 0j, 0j)
