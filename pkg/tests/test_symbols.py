import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from szego.symbols import (CoeffSeq, Const, Cos, DiagonalSymbol, Grid, Poly, Step, as_complex,
                           eval_fourier_series, fourier_coeffs_of_symbol, func_from_dict, sup_norm_sum,
                           symbol_value, wiener_norm)

finite = st.floats(-3, 3, allow_nan=False)


@st.composite
def coeff_seqs(draw, max_band=4):
    k0 = draw(st.integers(0, max_band))
    re = draw(st.lists(finite, min_size=2 * k0 + 1, max_size=2 * k0 + 1))
    im = draw(st.lists(finite, min_size=2 * k0 + 1, max_size=2 * k0 + 1))
    return CoeffSeq(np.array(re) + 1j * np.array(im))


def test_fourier_series_examples():
    assert eval_fourier_series(CoeffSeq.from_dict({0: 1}), 0.7) == pytest.approx(1)
    two_cos = CoeffSeq.from_dict({1: 1, -1: 1})
    assert eval_fourier_series(two_cos, 0.0) == pytest.approx(2)
    assert eval_fourier_series(two_cos, 1.1) == pytest.approx(2 * np.cos(1.1))
    assert eval_fourier_series(CoeffSeq.from_dict({1: 1}), np.pi / 2) == pytest.approx(1j)


def test_symbol_value_examples():
    lin = DiagonalSymbol({0: Poly((0, 1)), 1: 1, -1: 1})
    assert symbol_value(lin, 0.5, 0.0) == pytest.approx(2.5)
    free = DiagonalSymbol({0: 0.0, 1: 1, -1: 1})
    assert symbol_value(free, 0.3, np.pi) == pytest.approx(-2)
    step = DiagonalSymbol({0: Step((0.5,), (0, 1)), 1: 1, -1: 1})
    assert symbol_value(step, 0.75, np.pi / 2) == pytest.approx(1)


def test_fourier_coeffs_examples():
    z = fourier_coeffs_of_symbol(lambda s, t: 2 * np.cos(t), 0.3, 1, 8)
    np.testing.assert_allclose(z.entries, [1, 0, 1], atol=1e-14)
    z = fourier_coeffs_of_symbol(lambda s, t: s + 0 * t, 0.4, 1, 8)
    np.testing.assert_allclose(z.entries, [0, 0.4, 0], atol=1e-14)
    z = fourier_coeffs_of_symbol(lambda s, t: np.exp(2j * t), 0.0, 3, 32)
    np.testing.assert_allclose(z.entries, [0, 0, 0, 0, 0, 1, 0], atol=1e-12)


def test_fourier_coeffs_match_quadrature():
    # smooth non-polynomial symbol: compare with adaptive quadrature of the defining integral
    a = lambda s, t: np.exp(np.cos(t)) * (1 + s)
    z = fourier_coeffs_of_symbol(a, 0.25, 3, 64)
    for k in range(-3, 4):
        re = integrate.quad(lambda t: (a(0.25, t) * np.exp(-1j * k * t)).real, -np.pi, np.pi)[0]
        im = integrate.quad(lambda t: (a(0.25, t) * np.exp(-1j * k * t)).imag, -np.pi, np.pi)[0]
        assert z[k] == pytest.approx((re + 1j * im) / (2 * np.pi), abs=1e-12)


def test_fourier_coeffs_rejects_coarse_grid():
    with pytest.raises(ValueError):
        fourier_coeffs_of_symbol(lambda s, t: np.cos(t), 0.0, 2, 11)


def test_norm_examples():
    assert wiener_norm(CoeffSeq.from_dict({-1: 1, 0: 0, 1: 1})) == 2
    assert wiener_norm(CoeffSeq.from_dict({0: 3 - 4j})) == pytest.approx(5)
    lin = DiagonalSymbol({0: Poly((0, 1)), 1: 1, -1: 1})
    assert sup_norm_sum(lin, 101) == pytest.approx(3)


def test_sup_norm_includes_breakpoints():
    # peak of the step sits strictly between grid points; breakpoints make it visible
    sym = DiagonalSymbol({0: Step((0.3001, 0.3002), (0, 7, 0))})
    assert sup_norm_sum(sym, 11) == pytest.approx(7)


@given(coeff_seqs(), st.floats(-np.pi, np.pi))
def test_two_evaluation_paths_agree(z, t):
    direct = sum(zk * (np.cos(k * t) + 1j * np.sin(k * t)) for k, zk in zip(z.offsets, z.entries))
    assert abs(eval_fourier_series(z, t) - direct) <= 1e-12 * max(1.0, wiener_norm(z))


@given(coeff_seqs(), st.floats(-np.pi, np.pi))
def test_fourier_series_bounded_by_wiener_norm(z, t):
    assert abs(eval_fourier_series(z, t)) <= wiener_norm(z) + 1e-12


@settings(max_examples=50)
@given(coeff_seqs())
def test_coefficient_round_trip(z):
    back = fourier_coeffs_of_symbol(lambda s, t: eval_fourier_series(z, t), 0.0, z.band, 4 * z.band + 4)
    np.testing.assert_allclose(back.entries, z.entries, atol=1e-12)


@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=3), finite,
       st.floats(0, 1), st.floats(-np.pi, np.pi))
def test_hermitian_pair_symbol_is_real(offdiag, c0, s, t):
    funcs = {0: Poly((c0, 1.0))}
    for k, (re, im) in enumerate(offdiag, start=1):
        funcs[k] = Cos(re, 3.0, 0.0, im)
        funcs[-k] = Cos(re, 3.0, 0.0, im)
    sym = DiagonalSymbol(funcs)
    assert sym.hermitian_pair
    assert abs(np.imag(symbol_value(sym, s, t))) <= 1e-12


def test_hermitian_flag_is_validated():
    with pytest.raises(ValueError):
        DiagonalSymbol({1: Const(1j), -1: Const(1j)}, hermitian_pair=True)
    assert not DiagonalSymbol({1: Const(1j), -1: Const(1j)}).hermitian_pair
    assert DiagonalSymbol({1: Const(1j), -1: Const(-1j)}).hermitian_pair


def test_function_descriptors_round_trip():
    descs = [
        {"kind": "const", "value": [1.0, -2.0]},
        {"kind": "poly", "coeffs": [0, 1, 2]},
        {"kind": "cos", "amplitude": 2.0, "omega": 3.0, "phase": 0.1, "offset": 1.0},
        {"kind": "step", "breakpoints": [0.25, 0.5], "values": [0, 1, 2]},
        {"kind": "grid", "values": [0, 1, 0]},
    ]
    s = np.linspace(0, 1, 17)
    for d in descs:
        f = func_from_dict(d)
        g = func_from_dict(f.to_dict())
        np.testing.assert_allclose(f(s), g(s))
    assert func_from_dict({"kind": "grid", "values": [0, 1, 0]})(0.25) == pytest.approx(0.5)
    assert func_from_dict(3)(0.2) == 3
    with pytest.raises(ValueError):
        func_from_dict({"kind": "bessel"})


def test_as_complex_forms():
    assert as_complex([1, 2]) == 1 + 2j
    assert as_complex("3-4j") == 3 - 4j
    assert as_complex("3-4i") == 3 - 4j
    assert as_complex(2) == 2


def test_coeffseq_indexing():
    z = CoeffSeq.from_dict({-1: 2, 2: 5})
    assert z.band == 2
    assert z[2] == 5 and z[-1] == 2 and z[0] == 0 and z[7] == 0
    assert z == CoeffSeq.from_dict({-1: 2, 2: 5}, band=4)
    with pytest.raises(ValueError):
        z.entries[0] = 1
