# Residual decay of torus pseudomodes on either side of the twist sign.
#
# f(x, y) = e^{2 pi i x} + 0.5 e^{-2 pi i y}.  The level set of lam = f(0.3, 0.35)
# has two points; the bracket {Re f, Im f} is negative at one and positive at
# the other.  Only the first carries modes with fast decaying residual.

import numpy as np

from btps.presets import get_preset, matrix_family
from btps.pseudomodes import (localize, optimal_pseudomode, packet_width, residual_decay,
                              windowed_pseudomode)
from btps.symbols import phase_distance, poisson_bracket, symbol_from_json

p = get_preset("torus-twisted")
f = symbol_from_json(p["symbol"])
family = matrix_family(f, p["mode"])
levels = p["levels"]

good, bad = (0.3, 0.35), (0.465595, 0.884405)
lam = f(*good)
b = poisson_bracket(f.real_part(), f.imag_part())
print("lambda =", np.round(lam, 6))
print("bracket at good center: %.3f   at bad center: %.3f" % (b(*good).real, b(*bad).real))

# %% residuals of the least-residual vector supported near each center
for name, point in [("good", good), ("bad", bad)]:
    rep = residual_decay(family, lambda T, l: windowed_pseudomode(T, l, point), lam, levels)
    print("\n%s center   verdict %s   log-log slope %.2f" % (name, rep.verdict, rep.slope))
    for N, r in zip(rep.levels, rep.values):
        print("  N=%4d  residual %.3e   residual*N^2 %.3e" % (N, r, r * N ** 2))

# %% where does the optimal pseudomode live?
N = 256
loc = localize(optimal_pseudomode(family(N), lam), f, lam)
d_good = phase_distance("torus", good, np.array(loc.peak)) / packet_width(N)
d_bad = phase_distance("torus", bad, np.array(loc.peak)) / packet_width(N)
print("\nN=%d optimal mode: Husimi peak at (%.3f, %.3f)" % (N, *loc.peak))
print("mass within 3/sqrt(N) of the level set: %.6f" % loc.mass_on_level_set)
print("distance to good / bad center in packet widths: %.1f / %.1f" % (d_good, d_bad))
