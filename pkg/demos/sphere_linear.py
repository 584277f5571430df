# A non-normal matrix with real spectrum: the linear Hamiltonian on the sphere.
#
# T_N = (1/N)(i sinh t J1 + cosh t J3) has the real eigenvalues j/N - 1/2, yet its
# resolvent blows up inside the ellipse traced by the symbol.  At the vertex
# lam = cosh(t)/2 the bracket vanishes to second order and sigma_min decays like
# a power of N between -2/3 and -1/2.

import math

import numpy as np

from btps.pseudomodes import boundary_exponent
from btps.spectral import pseudospectrum_grid, sigma_min
from btps.sphere import linear_hamiltonian, linear_hamiltonian_spectrum
from btps.symbols import linear_sphere_symbol

t = 1.0
f = linear_sphere_symbol(t)

# %% the spectrum, certified real from the exact tridiagonal data
for N in (8, 32):
    w = linear_hamiltonian_spectrum(t, N)
    print("N=%3d  max |eig - (j/N - 1/2)| = %.1e" % (N, np.max(np.abs(w - (np.arange(N + 1) / N - 0.5)))))
w = np.linalg.eigvals(linear_hamiltonian(t, 32).entries)
print("double-precision eig at N=32 gives max |Im| = %.1e (rounding, not physics)" % np.abs(w.imag).max())

# %% sigma_min on a coarse grid over the ellipse
g = pseudospectrum_grid(linear_hamiltonian(t, 64), (-0.8, 0.8, -0.6, 0.6), 9, 7)
print("\nlog10 sigma_min, N=64 (rows: Im lam from -0.6 to 0.6)")
for row in np.log10(g.sigma_min):
    print("  " + " ".join("%6.1f" % v for v in row))
print("sigma_min at 0.3i: %.2e, distance to the spectrum 0.3" % sigma_min(linear_hamiltonian(t, 64), 0.3j))

# %% the boundary exponent at the vertex
lam = math.cosh(t) / 2
rep = boundary_exponent(lambda N: linear_hamiltonian(t, N), f, lam, [32, 64, 128, 256, 512])
print("\nvertex lam = %.4f: k = %d, slope %.3f (window %s), r2 %.4f"
      % (lam, rep.flags["k"], rep.slope, np.round(rep.flags["window"], 3), rep.r2))
