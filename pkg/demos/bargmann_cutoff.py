# The cut-off Bargmann model: squeezed states as exponentially good pseudomodes.
#
# P_N is the truncation of (1/N) d/dz + mu z to polynomials of degree <= N.  The
# squeezed state centered at z0 is an exact eigenfunction before truncation, so
# the residual after truncation is one coefficient, |mu a_{N-1} - lam a_N|.

import math

import numpy as np

from btps.bargmann import (coherent_state, cutoff_tail_fraction, log_cutoff_bound,
                           model_matrix, project_theta, residual_identity_check,
                           squeezed_coefficients)
from btps.spectral import sigma_min

mu, z0 = 0.5, 0.5

# %% the state norm does not depend on the center
for c in (0, 0.3 + 0.2j, 0.5):
    print("z0 = %-9s  ||phi|| = %.15f" % (c, squeezed_coefficients(mu, c, 40).norm()))

# %% residual identity: direct product vs the one-coefficient formula
print("\n   N   direct        formula       formula/||head||   sigma_min(P_N - lam)")
for N in (20, 40, 80, 160):
    c = residual_identity_check(mu, z0, N)
    s = sigma_min(model_matrix(mu, N), c.lam)
    print("%4d   %.3e   %.3e   %.3e          %.3e"
          % (N, c.direct, c.formula, c.formula / c.head_norm, s))

# %% how much of a coherent state falls outside the cut-off
print("\n   N  |w|   tail fraction   incomplete gamma   tail/bound")
for N in (200, 400):
    for r in (0.3, 0.6, 0.9):
        s = coherent_state(r, N)
        p = project_theta(s)
        frac = math.exp(p.log_tail_norm2 - s.log_norm2())
        ratio = math.exp(p.log_tail_norm2 - log_cutoff_bound(N, r, 0.1))
        print("%4d  %.1f   %.3e       %.3e          %.2e"
              % (N, r, frac, cutoff_tail_fraction(N, r), ratio))
