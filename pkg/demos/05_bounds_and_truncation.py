# %% [markdown]
# # Row-sum bounds and band truncation
#
# M_n = sum_k max_j |a_{k;j}| bounds every eigenvalue and every singular
# value.  Cutting the diagonals |k| > k0 changes A by at most the dropped
# row sums in normalized trace norm, which is what lets the limit theorems
# reduce to banded matrices.

# %%
import numpy as np

from szego import DiagonalSymbol, Poly, band_truncate, build_kms, moment_trace_diagonal, to_dense
from szego.diagnostics import bound_report, gershgorin_bound, trace_norm

sym = DiagonalSymbol({k: Poly((0.5 ** abs(k), 0.5 ** abs(k))) for k in range(-8, 9)})
A = build_kms(sym, 1024, "uniform")

# %%
rep = bound_report(A)
for key, n, value in rep.rows():
    print(f"{key:20s} {value:10.4f}")
print("bounds hold:", rep.holds)

# %%
M = gershgorin_bound(A)
for k0 in (0, 1, 2, 4, 8):
    B = band_truncate(A, k0)
    tail = sum(np.abs(A.diag(k)).max() for k in A.offsets if abs(k) > k0)
    gap = trace_norm(to_dense(A) - to_dense(B)) / A.n
    dm = abs(moment_trace_diagonal(A, 2, 0) - moment_trace_diagonal(B, 2, 0))
    print(f"k0={k0}  (1/n)||A-B||_tr={gap:.4f}  tail={tail:.4f}  |m2 change|={dm:.4f}  4 M tail={4 * M * tail:.3f}")
