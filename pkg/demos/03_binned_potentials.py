# %% [markdown]
# # Diagonals built from bins of constants
#
# Take constants c_1, c_2, ... in [0, 1] and place each one on a run of
# r_n consecutive diagonal positions.  With r_n -> infinity and r_n = o(n)
# the diagonals still have vanishing mean variation, and the limit law is
# the pushforward of the distribution of the constants.

# %%
from szego import BinnedConstants, Const, Poly, eigenvalues
from szego.diagnostics import empirical_diag_discrepancy, vmv_profile
from szego.limitlaw import Beta, DensityModel, LinearF, ks_distance_sample

maps = {0: Poly((0.0, 1.0)), 1: Const(1.0), -1: Const(1.0)}
specs = {"golden-ratio constants": (BinnedConstants(maps, "golden", hermitian=True), None),
         "Beta(2, 5) constants": (BinnedConstants(maps, "beta", beta_params=(2.0, 5.0), hermitian=True),
                                  Beta(2.0, 5.0))}

# %% [markdown]
# Variation per diagonal, normalized by n: one jump per bin boundary.

# %%
for label, (spec, _) in specs.items():
    rep = vmv_profile(spec, [256, 1024, 4096], seed=1)
    print(label, [f"{v:.4f}" for v in rep.normalized(0)], rep.verdict(0))

# %% [markdown]
# Moment discrepancy of the diagonal cross sections against the target law,
# then the spectrum against the density model with the same nu.

# %%
for label, (spec, nu) in specs.items():
    model = DensityModel(LinearF(0.0, 1.0), nu) if nu is not None else DensityModel(LinearF(0.0, 1.0))
    law = model.to_law()
    for n in (256, 1024, 4096):
        A = spec.build(n, seed=1)
        d = empirical_diag_discrepancy(A, 1, law)
        ks = ks_distance_sample(eigenvalues(A).eigenvalues, model.cdf)
        print(f"{label:24s} n={n:5d}  discrepancy={d:.4f}  KS={ks:.4f}")
