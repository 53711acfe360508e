"""Szego-type limit theorems for structured matrix sequences, checked numerically."""

from .symbols import (CoeffSeq, Const, Cos, DiagonalSymbol, Grid, Poly, Step, eval_fourier_series,
                      fourier_coeffs_of_symbol, sup_norm_sum, symbol_value, wiener_norm)
from .ensembles import (KMS, BinnedConstants, BinnedFunctions, DiagMatrix, Explicit, Jacobi,
                        PerturbedToeplitz, RRule, Toeplitz, band_truncate, build, build_kms, build_toeplitz,
                        diag_get, from_dense, to_dense)
from .spectral import (SpectralSample, eigenvalues, empirical_cdf, moment_trace_dense,
                       moment_trace_diagonal, test_functional_trace)
from .limitlaw import (Atoms, DensityModel, LimitLaw, LinearF, Phi, PiecewiseUniform, StepF, Uniform,
                       kms_phi_integral, nevai_limit, predicted_cdf, predicted_moment,
                       predicted_phi_integral, schrodinger_density)
from .diagnostics import (gershgorin_bound, shift_defect, spectral_norm, trace_norm, vmv_profile,
                          vmv_variation)

__version__ = "0.1.0"
