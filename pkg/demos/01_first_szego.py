# %% [markdown]
# # Eigenvalues of a Toeplitz matrix follow its symbol
#
# The free tridiagonal matrix has ones beside the diagonal, so its symbol is
# a(t) = 2 cos t.  As n grows, the eigenvalue histogram approaches the law
# of 2 cos t for uniform t, which is the arcsine law on [-2, 2].

# %%
import math

import numpy as np

from szego import CoeffSeq, build_toeplitz, eigenvalues, moment_trace_diagonal
from szego.limitlaw import LimitLaw, arcsine_cdf, ks_distance_sample, nevai_limit, predicted_moment, Phi

coeffs = CoeffSeq.from_dict({-1: 1, 1: 1})

# %% [markdown]
# Even moments of 2 cos t are central binomial coefficients.  The finite
# matrix falls short by exactly (4^k - C(2k, k)) / n, the closed walks that
# would have stepped off the end of the path.

# %%
law = LimitLaw.delta(coeffs)
for n in (64, 512, 2048):
    A = build_toeplitz(coeffs, n)
    row = []
    for k in (1, 2, 3):
        emp = moment_trace_diagonal(A, 2 * k, 0).real
        c = math.comb(2 * k, k)
        row.append(f"m{2 * k}={emp:.6f} (limit {c}, deficit {(4 ** k - c) / n:.2e})")
    print(f"n={n:5d}  " + "  ".join(row))
print("predicted m6 from the law:", predicted_moment(law, 6, 0).real)
print("same via a single t-integral:", nevai_limit(coeffs, Phi.power(6)))

# %% [markdown]
# Weak convergence: the Kolmogorov-Smirnov distance to the arcsine CDF.

# %%
for n in (128, 512, 2048):
    lam = eigenvalues(build_toeplitz(coeffs, n)).eigenvalues
    print(f"n={n:5d}  KS to arcsine = {ks_distance_sample(lam, arcsine_cdf):.5f}")

# %%
grid = np.linspace(-2, 2, 9)
lam = eigenvalues(build_toeplitz(coeffs, 2048)).eigenvalues
print(np.column_stack([grid, np.searchsorted(lam, grid, side="right") / lam.size, arcsine_cdf(grid)]))
