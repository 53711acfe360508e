# %% [markdown]
# # Trace moments of non-normal sequences
#
# For non-Hermitian matrices the eigenvalues need not follow the symbol,
# but the mixed moments (1/n) Tr[A^r (A*)^s] still converge to
# (1/2pi) int int P^r conj(P)^s dmu dt.  Two independent computations of
# the left side are available: dense matrix powers and a sum over
# diagonal products.

# %%
import numpy as np

from szego import (BinnedConstants, CoeffSeq, Const, DiagonalSymbol, LimitLaw, Poly, RRule, Toeplitz,
                   eigenvalues, moment_trace_dense, moment_trace_diagonal, predicted_moment)

shift = Toeplitz(CoeffSeq.from_dict({1: 1.0, 0: 0.5, -1: 0.25}))
maps = {0: Poly((0.0, 0.5)), 1: Const(1.0), -1: Const(0.5)}
cases = {"shift-like Toeplitz": (shift, LimitLaw.delta(shift.coeffs)),
         "binned, non-Hermitian": (BinnedConstants(maps, "golden", RRule("log")),
                                   LimitLaw.pushforward(DiagonalSymbol(maps)))}

# %%
A = shift.build(24)
print("dense vs diagonal-sum at n=24:",
      abs(moment_trace_dense(A, 3, 2) - moment_trace_diagonal(A, 3, 2)))

# %%
for label, (spec, law) in cases.items():
    print(label)
    for n in (256, 1024, 2048):
        A = spec.build(n)
        errs = [abs(moment_trace_diagonal(A, r, s) - predicted_moment(law, r, s)) for r, s in
                [(1, 1), (2, 1), (2, 2)]]
        print(f"  n={n:5d}  |error| for (1,1), (2,1), (2,2): " + "  ".join(f"{e:.2e}" for e in errs))

# %% [markdown]
# The eigenvalues themselves are another matter: the shift-like matrix is
# similar to a symmetric one, so its spectrum is real, while the symbol
# traces an ellipse in the complex plane.

# %%
lam = eigenvalues(shift.build(400)).eigenvalues
print("max |imag| of eigenvalues:", float(np.abs(np.imag(lam)).max()))
t = np.linspace(-np.pi, np.pi, 5)
print("symbol values:", np.round(0.5 + np.exp(1j * t) + 0.25 * np.exp(-1j * t), 3))
