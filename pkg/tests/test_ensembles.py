import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import family_suite, free_coeffs, linear_symbol
from szego import diagnostics, spectral
from szego.ensembles import (KMS, BinnedConstants, BinnedFunctions, DiagMatrix, Jacobi, PerturbedToeplitz,
                             RRule, Toeplitz, band_truncate, build, build_binned_constants,
                             build_binned_functions, build_jacobi, build_kms, build_toeplitz, diag_get,
                             from_dense, perturb_density_one, read_dense_csv, to_dense, write_dense_csv)
from szego.symbols import CoeffSeq, Const, DiagonalSymbol, Poly


def test_toeplitz_examples():
    A = build_toeplitz(CoeffSeq.from_dict({0: 1}), 3)
    assert A.offsets == [0] and np.array_equal(A.diag(0), [1, 1, 1])
    B = build_toeplitz(free_coeffs(), 4)
    assert B.offsets == [-1, 1] and B.hermitian
    np.testing.assert_array_equal(to_dense(B).real, np.eye(4, k=1) + np.eye(4, k=-1))
    C = build_toeplitz(CoeffSeq.from_dict({1: 1}), 3)
    assert not C.hermitian
    np.testing.assert_array_equal(to_dense(C), np.eye(3, k=1))


def test_kms_examples():
    A = build_kms(linear_symbol(), 4, "uniform")
    np.testing.assert_allclose(A.diag(0), [0, 0.25, 0.5, 0.75])
    np.testing.assert_allclose(A.diag(1), 1)
    np.testing.assert_allclose(A.diag(-1), 1)
    B = build_kms(DiagonalSymbol({0: Poly((0, 1))}), 2, "midpoint")
    np.testing.assert_allclose(B.diag(0), [0, 1 / 3])
    consts = CoeffSeq.from_dict({-2: 0.5j, 0: 2, 1: 3})
    sym = DiagonalSymbol({k: Const(z) for k, z in consts.nonzero().items()})
    for sampling in ("midpoint", "uniform"):
        np.testing.assert_array_equal(to_dense(build_kms(sym, 7, sampling)), to_dense(build_toeplitz(consts, 7)))


def test_kms_midpoint_matches_dense_formula():
    # entry (i, j) = a_{j-i}((i + j) / (2n + 2)), checked entrywise on the dense form
    sym = DiagonalSymbol({0: Poly((0, 1)), 1: Poly((1, 2)), -1: Poly((1, 2)), 2: Poly((0, 0, 1)),
                          -2: Poly((0, 0, 1))})
    n = 6
    M = to_dense(build_kms(sym, n, "midpoint"))
    for i in range(n):
        for j in range(n):
            k = j - i
            expected = sym.coeff(k, (i + j) / (2 * n + 2)) if abs(k) <= 2 else 0
            assert M[i, j] == pytest.approx(expected)


def test_binned_constants_examples():
    c = np.arange(1, 10) / 10
    A = build_binned_constants(c, {0: lambda x: x}, RRule("sqrt").width(9), 9)
    np.testing.assert_allclose(A.diag(0), [0.1] * 3 + [0.2] * 3 + [0.3] * 3)
    spec = BinnedConstants({0: Poly((0, 1)), 1: Const(1.0), -1: Const(1.0)}, "uniform", hermitian=True)
    B = spec.build(100, seed=3)
    np.testing.assert_allclose(B.diag(1), 1)
    np.testing.assert_allclose(B.diag(-1), 1)


@pytest.mark.parametrize("n", [4, 9, 10, 50, 101, 1000])
def test_binned_jump_count(n):
    spec = BinnedConstants({0: Poly((0, 1))}, "uniform")
    d = spec.build(n, seed=1).diag(0)
    jumps = int(np.count_nonzero(np.diff(d)))
    w = math.isqrt(n - 1) + 1
    assert jumps <= math.ceil(n / w) - 1


def test_binned_tail_repeats_last_constant():
    A = build_binned_constants(np.array([0.1, 0.2, 0.3]), {0: lambda x: x}, 3, 11)
    np.testing.assert_allclose(A.diag(0), [0.1] * 3 + [0.2] * 3 + [0.3] * 5)


def test_explicit_constants_are_cycled():
    spec = BinnedConstants({0: Poly((0, 1))}, [0.25, 0.75], RRule("power", 0.5))
    np.testing.assert_allclose(spec.build(16).diag(0), [0.25] * 4 + [0.75] * 4 + [0.25] * 4 + [0.75] * 4)


def test_rrule_values():
    assert RRule("sqrt")(9) == 3 and RRule("sqrt")(10) == 4
    assert RRule("log")(100) == math.ceil(math.log(100))
    assert RRule("power", 0.25)(16) == 2
    with pytest.raises(ValueError):
        RRule("power", 1.5)
    with pytest.raises(ValueError):
        build_binned_constants(np.ones(3), {0: lambda x: x}, 0, 9)


def test_binned_functions_examples():
    A = build_binned_functions({0: [Poly((0, 1))]}, RRule().width(9), 9)
    np.testing.assert_allclose(A.diag(0), [0, 0.5, 1] * 3)
    B = build_binned_functions({0: [Const(0.3)], 2: [Const(0.7)]}, 5, 40)
    np.testing.assert_allclose(B.diag(0), 0.3)
    np.testing.assert_allclose(B.diag(2), 0.7)


def test_binned_function_bin_means_converge():
    funcs = [Poly((0, 1)), Poly((0, 0, 1)), Poly((1, -1))]
    integrals = [0.5, 1 / 3, 0.5]
    n = 4096
    w = RRule().width(n)
    d = build_binned_functions({0: funcs}, w, n).diag(0).real
    for b in range(n // w):
        mean = d[b * w:(b + 1) * w].mean()
        # trapezoid-free Riemann sum on w points: error at most one endpoint weight
        assert abs(mean - integrals[b % 3]) <= 1.0 / w


def test_jacobi_examples():
    A = build_jacobi(lambda k: 1.0, lambda k: 0.0, 4)
    np.testing.assert_array_equal(to_dense(A), to_dense(build_toeplitz(free_coeffs(), 4)))
    B = build_jacobi(np.ones(9), [0, 0, 0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5], 10)
    np.testing.assert_allclose(B.diag(0)[3:], 0.5)
    C = Jacobi(lambda k: 1 + 1 / (k + 1), lambda k: 0.0).build(500)
    assert diagnostics.vmv_variation(C, 1) <= 1
    assert diagnostics.vmv_variation(C, 1) == pytest.approx(1 - 1 / 499)
    with pytest.raises(ValueError):
        build_jacobi([1j, 1j, 1j], np.zeros(4), 4)


def test_perturbation_examples():
    base = free_coeffs()
    T = build_toeplitz(base, 64)
    assert perturb_density_one(base, lambda n: 0, 1.0, 5, 64) == T
    fractions = []
    for n in (64, 256, 1024, 4096):
        P = PerturbedToeplitz(base).build(n, seed=2)
        changed = sum(int(np.count_nonzero(P.diag(k) != (T.diag(k) if n == 64 else base[k])))
                      for k in (-1, 0, 1))
        assert changed == 3 * math.isqrt(n)
        fractions.append(changed / (3 * n))
    assert fractions == sorted(fractions, reverse=True)
    P = PerturbedToeplitz(base).build(64, seed=2)
    assert P.hermitian
    np.testing.assert_array_equal(P.diag(1), P.diag(-1))


def test_perturbation_moves_spectrum_little():
    base = free_coeffs()
    lam0 = spectral.eigenvalues(build_toeplitz(base, 2048)).eigenvalues
    lam1 = spectral.eigenvalues(PerturbedToeplitz(base).build(2048, seed=0)).eigenvalues
    grid = np.sort(np.concatenate([lam0, lam1]))
    F0 = np.searchsorted(lam0, grid, side="right") / lam0.size
    F1 = np.searchsorted(lam1, grid, side="right") / lam1.size
    assert np.abs(F0 - F1).max() <= 0.05


def test_band_truncate_examples():
    A = build_kms(linear_symbol(), 10)
    assert band_truncate(A, 1) == A and band_truncate(A, 5) == A
    D = band_truncate(A, 0)
    assert D.offsets == [0]
    np.testing.assert_array_equal(to_dense(D), np.diag(A.diag(0)))


def test_band_truncate_trace_norm_bound():
    # oracle: singular values of the dense difference
    sym = DiagonalSymbol({k: Poly((0.5 ** abs(k), 0.5 ** abs(k))) for k in range(-6, 7)})
    A = build_kms(sym, 200, "uniform")
    for k0 in range(0, 6):
        B = band_truncate(A, k0)
        tail = sum(np.abs(A.diag(k)).max() for k in A.offsets if abs(k) > k0)
        sv = np.linalg.svd(to_dense(A) - to_dense(B), compute_uv=False)
        assert sv.sum() / A.n <= tail + 1e-12


def test_dense_plumbing():
    A = build_kms(linear_symbol(), 5)
    assert diag_get(A, 0, -1) == 0 and diag_get(A, 1, 4) == 0 and diag_get(A, 7, 0) == 0
    assert diag_get(A, 0, 4) == A.diag(0)[4]
    assert from_dense(to_dense(A)) == A
    M = to_dense(A)
    for k in (-1, 0, 1):
        for j in range(5 - abs(k)):
            assert M[j + max(0, -k), j + max(0, k)] == diag_get(A, k, j)


def test_dense_csv_round_trip(tmp_path):
    A = build_toeplitz(CoeffSeq.from_dict({-1: 0.1 + 0.2j, 0: 1 / 3, 2: -2.5}), 6)
    write_dense_csv(A, tmp_path / "a.csv")
    np.testing.assert_array_equal(read_dense_csv(tmp_path / "a.csv"), to_dense(A))


def test_diagmatrix_validation():
    with pytest.raises(ValueError):
        DiagMatrix(3, {0: [1, 2]})
    with pytest.raises(ValueError):
        DiagMatrix(3, {1: [1, 1], -1: [1, 2]}, hermitian=True)
    with pytest.raises(ValueError):
        DiagMatrix(3, {0: [1j, 0, 0]}, hermitian=True)
    A = DiagMatrix(3, {0: [1, 2, 3]})
    with pytest.raises(ValueError):
        A.diag(0)[0] = 5


@pytest.mark.parametrize("name", list(family_suite()))
@pytest.mark.parametrize("n", [16, 64, 256])
def test_hermitian_flag_matches_dense(name, n):
    spec = family_suite()[name]
    A = build(spec, n, seed=7)
    M = to_dense(A)
    assert A.hermitian == spec.hermitian
    assert (np.abs(M - M.conj().T).max() <= 1e-12) == A.hermitian


@pytest.mark.parametrize("name", list(family_suite()))
def test_build_is_deterministic(name):
    spec = family_suite()[name]
    A, B = build(spec, 300, seed=11), build(spec, 300, seed=11)
    assert A == B
    for k in A.offsets:
        assert A.diag(k).tobytes() == B.diag(k).tobytes()


def test_toeplitz_diagonals_have_zero_variation():
    A = build_toeplitz(CoeffSeq.from_dict({-3: 1j, 0: 2, 1: np.pi}), 50)
    assert all(diagnostics.vmv_variation(A, k) == 0.0 for k in A.offsets)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 5), st.integers(5, 40))
def test_band_truncate_idempotent(k0, n):
    sym = DiagonalSymbol({k: Poly((1.0 / (1 + abs(k)), 1.0)) for k in range(-6, 7)})
    A = build_kms(sym, n)
    assert band_truncate(band_truncate(A, k0), k0) == band_truncate(A, k0)


def test_uniform_kms_increments_shrink():
    sym = DiagonalSymbol({0: Poly((0, 0, 3)), 1: Poly((1, 1)), -1: Poly((1, 1))})
    steps = [max(np.abs(np.diff(build_kms(sym, n, "uniform").diag(k))).max() for k in (-1, 0, 1))
             for n in (64, 256, 1024, 4096)]
    assert all(b < a for a, b in zip(steps, steps[1:]))


def test_entries_uniformly_bounded(suite):
    for name, spec in suite.items():
        sizes = [diagnostics.gershgorin_bound(build(spec, n)) for n in (16, 256, 4096)]
        assert max(sizes) <= 2 * sizes[-1] + 3, name


def test_explicit_generator_is_checked():
    from szego.ensembles import Explicit
    bad = Explicit(lambda n: DiagMatrix(n + 1, {0: np.ones(n + 1)}))
    with pytest.raises(ValueError):
        bad.build(4)
    with pytest.raises(ValueError):
        KMS(linear_symbol(), "chebyshev")
    with pytest.raises(ValueError):
        BinnedConstants({0: Const(1j), 1: Const(1.0)}, hermitian=True)
    assert Toeplitz(free_coeffs()).build(2) == build_toeplitz(free_coeffs(), 2)
    assert BinnedFunctions({0: [Const(1.0)]}).build(9).offsets == [0]
