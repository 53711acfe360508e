# %% [markdown]
# # Locally Toeplitz (KMS) matrices
#
# Entry (i, j) of the matrix is a_{j-i}((i + j) / (2n + 2)), so every
# diagonal is a slowly varying sample of a function on [0, 1].  The limit
# law is an average of Toeplitz laws over s.  With a_0(s) = f(s) and ones
# beside the diagonal, the limit has the density
#
#     rho(x) = (1/pi) int dnu(s) / sqrt(4 - (x - f(s))^2).

# %%
import numpy as np

from szego import DiagonalSymbol, Poly, Step, build_kms, eigenvalues, moment_trace_diagonal
from szego.limitlaw import DensityModel, LinearF, Phi, StepF, kms_phi_integral, ks_distance_sample

linear = DiagonalSymbol({0: Poly((0.0, 1.0)), 1: 1.0, -1: 1.0})
step = DiagonalSymbol({0: Step((0.5,), (0.0, 1.0)), 1: 1.0, -1: 1.0})
cases = {"a_0(s) = s": (linear, DensityModel(LinearF(0.0, 1.0))),
         "a_0 jumps from 0 to 1 at s = 1/2": (step, DensityModel(StepF((0.5,), (0.0, 1.0))))}

# %% [markdown]
# The second moment converges to the double integral of a(s, t)^2, and the
# eigenvalue CDF converges to the CDF of rho.  Jumps in a_0 do not matter:
# Riemann integrability is enough.

# %%
for label, (sym, model) in cases.items():
    target = kms_phi_integral(sym, Phi.power(2))
    print(label, " mass of rho:", round(model.total_mass(), 12))
    for n in (256, 1024, 4096):
        A = build_kms(sym, n)
        m2 = moment_trace_diagonal(A, 2, 0).real
        ks = ks_distance_sample(eigenvalues(A).eigenvalues, model.cdf)
        print(f"  n={n:5d}  m2={m2:.5f} (limit {target:.5f})  KS={ks:.5f}")

# %% [markdown]
# A table of the density, e.g. for plotting against a histogram.

# %%
model = cases["a_0(s) = s"][1]
x = np.linspace(*model.support, 13)
print(np.column_stack([x, model.density(x)]))
