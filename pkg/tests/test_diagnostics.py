import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import alternating, family_suite, free_coeffs, linear_symbol
from szego.diagnostics import (bound_report, cond_szego_sup, diagonal_vectors, empirical_diag_discrepancy,
                               gershgorin_bound, shift_defect, singular_values, spectral_norm, trace_norm,
                               vmv_profile, vmv_variation)
from szego.ensembles import (KMS, BinnedConstants, DiagMatrix, Explicit, Toeplitz, build, build_kms,
                             build_toeplitz, from_dense, to_dense)
from szego.limitlaw import LimitLaw
from szego.spectral import eigenvalues
from szego.symbols import CoeffSeq, Const, DiagonalSymbol, Poly


def test_vmv_examples():
    A = build_toeplitz(CoeffSeq.from_dict({-2: 1j, 0: 3, 1: -1}), 40)
    assert all(vmv_variation(A, k) == 0 for k in A.offsets)
    for n in (4, 33, 500):
        B = build_kms(linear_symbol(), n, "uniform")
        assert vmv_variation(B, 0) == pytest.approx((n - 1) / n, abs=1e-12)
    spec = BinnedConstants({0: Poly((0, 1))}, "uniform")
    for n in (16, 100, 1000):
        w = math.isqrt(n - 1) + 1
        assert vmv_variation(spec.build(n, seed=4), 0) <= math.ceil(n / w)
    with pytest.raises(ValueError):
        vmv_variation(A, 40)


def test_vmv_profile_examples():
    rep = vmv_profile(Toeplitz(free_coeffs()), [256, 1024, 4096])
    assert rep.passed and all(v == 0 for vals in rep.variation.values() for v in vals)
    rep = vmv_profile(KMS(linear_symbol(), "uniform"), [256, 1024, 4096])
    np.testing.assert_allclose(rep.normalized(0), [255 / 256 ** 2, 1023 / 1024 ** 2, 4095 / 4096 ** 2],
                               rtol=1e-12)
    assert rep.verdict(0) == "nonincreasing tail"
    rep = vmv_profile(Explicit(alternating, hermitian=True), [256, 1024, 4096])
    np.testing.assert_allclose(rep.normalized(0), [2 * (n - 1) / n for n in (256, 1024, 4096)])
    assert rep.verdict(0) == "fail" and not rep.passed
    with pytest.raises(ValueError):
        vmv_profile(Toeplitz(free_coeffs()), [256, 1024])


def test_vmv_csv(tmp_path):
    rep = vmv_profile(KMS(linear_symbol(), "uniform"), [8, 16, 32])
    rep.to_csv(tmp_path / "v.csv")
    lines = (tmp_path / "v.csv").read_text().splitlines()
    assert lines[0] == "k,n,value"
    assert len(lines) == 1 + 3 * 3
    assert "0,8,0.875" in lines


def test_shift_defect_examples():
    T = build_toeplitz(CoeffSeq.from_dict({-1: 1, 0: 0.5, 1: 1}), 300)
    bound = gershgorin_bound(T)
    for offs, shifts in [((0,), (1,)), ((1, -1), (2, 0)), ((1, 0, -1), (-2, 1, 2))]:
        d = shift_defect(T, offs, shifts)
        assert d <= max(map(abs, shifts)) * len(offs) * bound ** len(offs) / T.n
    assert shift_defect(T, (1, 0), (0, 0)) == 0
    K = build_kms(linear_symbol(), 300, "uniform")
    assert shift_defect(K, (0,), (1,)) <= (vmv_variation(K, 0) + 1.0) / K.n
    with pytest.raises(ValueError):
        shift_defect(K, (0, 1), (1,))


def test_shift_defect_matches_loop_oracle():
    A = build(family_suite()["binned_nonherm"], 37)
    rng = np.random.default_rng(0)
    for _ in range(20):
        p = int(rng.integers(1, 4))
        offs = rng.integers(-1, 2, p)
        nus = rng.integers(-2, 3, p)

        def get(h, j):
            v = A.diagonals.get(int(h))
            return v[j] if v is not None and 0 <= j < v.size else 0

        moved = sum(np.prod([get(h, nu + j) for h, nu in zip(offs, nus)]) for j in range(A.n))
        fixed = sum(np.prod([get(h, j) for h in offs]) for j in range(A.n))
        assert shift_defect(A, offs, nus) == pytest.approx(abs(moved - fixed) / A.n, abs=1e-14)


def test_gershgorin_examples():
    A = build_kms(linear_symbol(), 50)
    assert gershgorin_bound(A) == pytest.approx(1 + 1 + A.diag(0).real.max())
    assert gershgorin_bound(build_kms(linear_symbol(), 50, "uniform")) <= 3
    sym = DiagonalSymbol({0: Grid_one(), 1: 1.0, -1: 1.0})
    assert gershgorin_bound(build_kms(sym, 9, "uniform")) == 3
    assert gershgorin_bound(build_toeplitz(CoeffSeq.from_dict({0: 1}), 6)) == 1
    assert gershgorin_bound(build_toeplitz(CoeffSeq.from_dict({0: 3 - 4j}), 6)) == pytest.approx(5)
    assert cond_szego_sup(KMS(linear_symbol(), "uniform"), [4, 8, 16]) == pytest.approx(2 + 15 / 16)


def Grid_one():
    return Poly((1.0,))


def test_norm_examples():
    I = build_toeplitz(CoeffSeq.from_dict({0: 1}), 5)
    assert trace_norm(I) == pytest.approx(5) and spectral_norm(I) == pytest.approx(1)
    E = np.zeros((6, 6), dtype=complex)
    E[0, 0] = -2 + 1j
    assert trace_norm(E) == pytest.approx(abs(-2 + 1j))
    assert spectral_norm(from_dense(E)) == pytest.approx(abs(-2 + 1j))
    for n in (8, 64, 200):
        T = build_toeplitz(CoeffSeq.from_dict({-1: 1, 0: 2, 1: 1}), n)
        assert trace_norm(T) == pytest.approx(2 * n, rel=1e-12)


def test_bound_report_holds(suite):
    for name, spec in suite.items():
        rep = bound_report(build(spec, 64, seed=1))
        assert rep.holds, name
        d = rep.to_dict()
        assert set(d) >= {"row_sum_bound", "spectral_norm", "trace_norm", "max_abs_eigenvalue", "holds"}
        assert len(list(rep.rows())) == 5


def _random_diag(rng, n, band, hermitian):
    M = np.zeros((n, n), dtype=complex)
    for k in range(-min(band, n - 1), min(band, n - 1) + 1):
        m = n - abs(k)
        M += np.diag(rng.normal(size=m) + 1j * rng.normal(size=m), k)
    if hermitian:
        M = (M + M.conj().T) / 2
    return M


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 20), st.integers(0, 3))
def test_norm_inequalities(seed, n, band):
    rng = np.random.default_rng(seed)
    A, B = _random_diag(rng, n, band, False), _random_diag(rng, n, band, False)
    assert trace_norm(A + B) <= trace_norm(A) + trace_norm(B) + 1e-9
    assert spectral_norm(A @ B) <= spectral_norm(A) * spectral_norm(B) + 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 24), st.integers(0, 3), st.booleans())
def test_gershgorin_and_qi(seed, n, band, hermitian):
    A = from_dense(_random_diag(np.random.default_rng(seed), n, band, hermitian), hermitian=hermitian)
    M = gershgorin_bound(A)
    assert singular_values(A).max() <= M + 1e-9
    assert np.abs(eigenvalues(A).eigenvalues).max() <= M + 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 24), st.integers(0, 3))
def test_trace_functional_lipschitz(seed, n, band):
    rng = np.random.default_rng(seed)
    MA = _random_diag(rng, n, band, True)
    MB = MA + 0.1 * _random_diag(rng, n, band, True)
    A, B = from_dense(MA, hermitian=True), from_dense(MB, hermitian=True)
    la, lb = eigenvalues(A).eigenvalues, eigenvalues(B).eigenvalues
    gap = trace_norm(MA - MB)
    bound = max(gershgorin_bound(A), gershgorin_bound(B))
    assert abs(la.sum() - lb.sum()) <= gap + 1e-8
    assert abs((la ** 2).sum() - (lb ** 2).sum()) <= 2 * bound * gap + 1e-8


def test_diagonal_vectors_zero_extension():
    A = build_toeplitz(CoeffSeq.from_dict({-1: 2, 0: 1, 1: 3}), 4)
    V = diagonal_vectors(A, 2)
    assert V.shape == (4, 5)
    np.testing.assert_array_equal(V[0], [0, 2, 1, 3, 0])
    np.testing.assert_array_equal(V[3], [0, 0, 1, 0, 0])


def test_discrepancy_examples():
    coeffs = CoeffSeq.from_dict({-1: 1, 0: 0.5, 1: 1})
    law = LimitLaw.delta(coeffs)
    for n in (50, 500):
        A = build_toeplitz(coeffs, n)
        assert empirical_diag_discrepancy(A, 1, law) <= 2 * 1 / n + 1e-12
    sym = linear_symbol()
    for n in (100, 1000):
        A = build_kms(sym, n, "uniform")
        mean0 = diagonal_vectors(A, 1)[:, 1].mean()
        assert abs(mean0 - 0.5) <= 1 / n
    spec = BinnedConstants({0: Poly((0, 1)), 1: Const(1.0), -1: Const(1.0)}, "golden", hermitian=True)
    for n in (256, 1024, 4096):
        w = math.isqrt(n - 1) + 1
        c = np.sort(spec.constants(n // w))
        i = np.arange(1, c.size + 1)
        # exact star discrepancy of the constants; Koksma bounds the mean error of x -> x by it
        star = max((i / c.size - c).max(), (c - (i - 1) / c.size).max())
        err = abs(diagonal_vectors(spec.build(n), 1)[:, 1].mean() - 0.5)
        assert err <= w / n + star
    with pytest.raises(ValueError):
        empirical_diag_discrepancy(build_toeplitz(coeffs, 10), 2, law)
