# %% [markdown]
# # Sparse perturbations and index shifts
#
# Changing o(n) entries per diagonal leaves the limit law alone, but at a
# fixed n the effect can still be visible.  Perturbing floor(sqrt n)
# entries of each diagonal of the free tridiagonal by +1 moves the second
# moment by about 7 / sqrt(n).

# %%
import itertools
import math

from szego import CoeffSeq, PerturbedToeplitz, build_kms, build_toeplitz, eigenvalues, moment_trace_diagonal
from szego.diagnostics import shift_defect, vmv_variation
from szego.limitlaw import arcsine_cdf, ks_distance_sample
from szego.symbols import DiagonalSymbol, Poly

base = CoeffSeq.from_dict({-1: 1, 1: 1})
for n in (512, 2048, 8192):
    T = build_toeplitz(base, n)
    P = PerturbedToeplitz(base).build(n, seed=0)
    dm = moment_trace_diagonal(P, 2, 0).real - moment_trace_diagonal(T, 2, 0).real
    ks = ks_distance_sample(eigenvalues(P).eigenvalues, arcsine_cdf)
    print(f"n={n:5d}  m2 change={dm:.4f} (7 floor(sqrt n)/n = {7 * math.isqrt(n) / n:.4f})  KS={ks:.4f}")

# %% [markdown]
# The shift lemma: shifting the index of each factor in a product of
# diagonal entries changes the sum by o(n).  The defect below is that
# change divided by n.

# %%
sym = DiagonalSymbol({0: Poly((0.0, 1.0)), 1: 1.0, -1: 1.0})
for n in (256, 1024, 4096):
    A = build_kms(sym, n, "uniform")
    worst = max(shift_defect(A, hs, nus) for hs in itertools.product((-1, 0, 1), repeat=2)
                for nus in itertools.product(range(-2, 3), repeat=2))
    print(f"n={n:5d}  worst defect over p=2, |nu|<=2: {worst:.2e}   V_0(n)/n = {vmv_variation(A, 0) / n:.2e}")
