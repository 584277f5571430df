# Two large-N limits: numerical ranges fill the convex hull of the symbol's
# image, and normalized traces of F(T_N) approach phase-space averages.

import numpy as np

from btps.presets import get_preset, matrix_family
from btps.spectral import (convex_hull, hausdorff, normalized_trace, numerical_range,
                           phase_average)
from btps.sphere import build_sphere
from btps.symbols import SphereSymbol, image_samples, symbol_from_json

# %% numerical range of the Scottish flag family
p = get_preset("torus-scottish")
f = symbol_from_json(p["symbol"])
family = matrix_family(f, p["mode"])
hull = convex_hull(image_samples(f, 256))
print("hull of f(T^2) has %d vertices" % len(hull))
for N in (16, 32, 64, 128):
    W = numerical_range(family(N), 256).boundary_points
    print("N=%4d  Hausdorff(W_N, hull) = %.4f" % (N, hausdorff(W, hull)))

# %% trace of T_N^2 for the height function on the sphere
x3 = SphereSymbol.coordinate(3)
F = [0, 0, 1]
avg = phase_average(F, x3).real
print("\naverage of x3^2 over the sphere: %.6f (exact 1/12 = %.6f)" % (avg, 1 / 12))
for N in (16, 32, 64, 128, 256):
    tr = normalized_trace(F, build_sphere(x3, N)).real
    print("N=%4d  tr/dim = %.6f   error %.2e   N*error %.3f" % (N, tr, abs(tr - avg), N * abs(tr - avg)))
