import numpy as np
import pytest

from szego import (KMS, BinnedConstants, BinnedFunctions, CoeffSeq, Const, DiagMatrix, DiagonalSymbol,
                   Explicit, Jacobi, PerturbedToeplitz, Poly, RRule, Step, Toeplitz)


def free_coeffs():
    return CoeffSeq.from_dict({-1: 1, 1: 1})


def linear_symbol():
    return DiagonalSymbol({0: Poly((0.0, 1.0)), 1: 1.0, -1: 1.0})


def step_symbol():
    return DiagonalSymbol({0: Step((0.5,), (0.0, 1.0)), 1: 1.0, -1: 1.0})


def alternating(n):
    return DiagMatrix(n, {0: (-1.0) ** np.arange(n)}, hermitian=True)


def nan_matrix(n):
    return DiagMatrix(n, {0: np.full(n, np.nan), 1: np.ones(n - 1)})


def family_suite():
    """One instance of every built-in family, keyed by a readable name."""
    return {
        "toeplitz_free": Toeplitz(free_coeffs()),
        "toeplitz_shiftlike": Toeplitz(CoeffSeq.from_dict({1: 1.0, 0: 0.5, -1: 0.25})),
        "toeplitz_complex": Toeplitz(CoeffSeq.from_dict({-2: 0.3 - 0.2j, 0: 1.0, 2: 0.3 + 0.2j})),
        "kms_midpoint": KMS(linear_symbol(), "midpoint"),
        "kms_uniform": KMS(linear_symbol(), "uniform"),
        "kms_step": KMS(step_symbol(), "midpoint"),
        "binned_golden": BinnedConstants({0: Poly((0.0, 1.0)), 1: Const(1.0), -1: Const(1.0)}, "golden",
                                         hermitian=True),
        "binned_uniform": BinnedConstants({0: Poly((0.0, 1.0)), 1: Const(1.0), -1: Const(1.0)}, "uniform",
                                          hermitian=True),
        "binned_nonherm": BinnedConstants({0: Poly((0.0, 0.5)), 1: Const(1.0), -1: Const(0.5)}, "golden",
                                          RRule("log")),
        "binned_functions": BinnedFunctions({0: [Poly((0.0, 1.0)), Poly((1.0, -1.0))], 1: [Const(1.0)],
                                             -1: [Const(1.0)]}, hermitian=True),
        "jacobi": Jacobi(lambda k: 1 + 1 / (k + 1), lambda k: 0.0),
        "perturbed": PerturbedToeplitz(free_coeffs(), 1.0),
        "explicit_alternating": Explicit(alternating, hermitian=True),
    }


VMV_FAMILIES = [k for k in family_suite() if k != "explicit_alternating"]


@pytest.fixture(scope="session")
def suite():
    return family_suite()
