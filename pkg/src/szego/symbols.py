"""Coefficient sequences, diagonal symbols and their Fourier series.

A :class:`CoeffSeq` is a finitely supported two-sided sequence ``z_k``,
``-k0 <= k <= k0``.  A :class:`DiagonalSymbol` attaches a function of
``s in [0, 1]`` to every diagonal offset ``k``; evaluated at fixed ``s`` it
gives a :class:`CoeffSeq`, and summed against ``e^{ikt}`` it gives the
symbol ``a(s, t)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

__all__ = [
    "CoeffSeq",
    "Const",
    "Poly",
    "Cos",
    "Step",
    "Grid",
    "DiagonalSymbol",
    "as_complex",
    "func_from_dict",
    "eval_fourier_series",
    "symbol_value",
    "fourier_coeffs_of_symbol",
    "wiener_norm",
    "sup_norm_sum",
]


def as_complex(value) -> complex:
    """Parse a number, a ``[re, im]`` pair or a string such as ``"3-4j"``."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex pair must have two entries, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", "").replace("i", "j"))
    return complex(value)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class CoeffSeq:
    """Coefficients ``z_{-k0}, ..., z_{k0}``; everything outside the band is zero."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex).reshape(-1)
        if e.size % 2 != 1:
            raise ValueError("a CoeffSeq needs 2*k0 + 1 entries")
        object.__setattr__(self, "entries", _readonly(e))

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, object], band: int | None = None) -> "CoeffSeq":
        coeffs = {int(k): as_complex(v) for k, v in coeffs.items()}
        k0 = max((abs(k) for k in coeffs), default=0)
        if band is not None:
            if band < k0:
                raise ValueError(f"band {band} is smaller than the largest offset {k0}")
            k0 = band
        e = np.zeros(2 * k0 + 1, dtype=complex)
        for k, v in coeffs.items():
            e[k + k0] = v
        return cls(e)

    @property
    def band(self) -> int:
        return (self.entries.size - 1) // 2

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-self.band, self.band + 1)

    def __getitem__(self, k: int) -> complex:
        if abs(k) > self.band:
            return 0j
        return complex(self.entries[k + self.band])

    def nonzero(self) -> dict[int, complex]:
        return {int(k): complex(z) for k, z in zip(self.offsets, self.entries) if z != 0}

    def padded(self, band: int) -> np.ndarray:
        """Entries zero-padded (or truncated) to ``2*band + 1`` slots."""
        out = np.zeros(2 * band + 1, dtype=complex)
        m = min(band, self.band)
        out[band - m: band + m + 1] = self.entries[self.band - m: self.band + m + 1]
        return out

    @property
    def is_hermitian(self) -> bool:
        e = self.entries
        return bool(np.allclose(e, np.conj(e[::-1]), rtol=0, atol=1e-12))

    def __call__(self, t):
        return eval_fourier_series(self, t)

    def __eq__(self, other):
        if not isinstance(other, CoeffSeq):
            return NotImplemented
        m = max(self.band, other.band)
        return bool(np.array_equal(self.padded(m), other.padded(m)))

    def __repr__(self):
        return f"CoeffSeq({self.nonzero()})"

    def to_dict(self) -> dict[str, list[float]]:
        return {str(k): [v.real, v.imag] for k, v in self.nonzero().items()}


def eval_fourier_series(coeffs: CoeffSeq, t):
    """Return ``sum_k z_k exp(i k t)``; ``t`` may be a scalar or an array."""
    t = np.asarray(t, dtype=float)
    k = coeffs.offsets
    out = np.exp(1j * np.multiply.outer(t, k)) @ coeffs.entries
    return complex(out) if out.ndim == 0 else out


def wiener_norm(coeffs: CoeffSeq) -> float:
    return float(np.abs(coeffs.entries).sum())


def fourier_coeffs_of_symbol(a: Callable, s: float, band: int, nodes: int) -> CoeffSeq:
    """Fourier coefficients of ``t -> a(s, t)`` by the periodic trapezoid rule.

    Exact to rounding when ``a(s, .)`` is a trigonometric polynomial of degree
    at most ``nodes - band - 1``.
    """
    if band < 0:
        raise ValueError("band must be non-negative")
    if nodes < 4 * band + 4:
        raise ValueError(f"nodes={nodes} cannot resolve frequency {band}; need >= {4 * band + 4}")
    t = -np.pi + 2 * np.pi * np.arange(nodes) / nodes
    vals = np.asarray(a(s, t), dtype=complex) * np.ones(nodes)
    k = np.arange(-band, band + 1)
    z = np.exp(-1j * np.multiply.outer(k, t)) @ vals / nodes
    return CoeffSeq(z)


# -- functions of s on [0, 1] ------------------------------------------------
#
# Each backend is a vectorised callable with a ``breakpoints`` tuple (used by
# the sup-norm grid) and a ``to_dict`` for the config round trip.


@dataclass(frozen=True)
class Const:
    value: complex = 0.0
    breakpoints = ()

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return np.full(s.shape, as_complex(self.value)) if s.ndim else as_complex(self.value)

    def to_dict(self):
        v = as_complex(self.value)
        return {"kind": "const", "value": [v.real, v.imag]}


@dataclass(frozen=True)
class Poly:
    """Polynomial ``sum_i coeffs[i] * s**i``."""

    coeffs: tuple
    breakpoints = ()

    def __call__(self, s):
        c = np.array([as_complex(v) for v in self.coeffs][::-1])
        return np.polyval(c, np.asarray(s, dtype=float))

    def to_dict(self):
        return {"kind": "poly", "coeffs": [[as_complex(v).real, as_complex(v).imag] for v in self.coeffs]}


@dataclass(frozen=True)
class Cos:
    """``amplitude * cos(omega * s + phase) + offset``; ``phase=-pi/2`` gives a sine."""

    amplitude: float = 1.0
    omega: float = 2 * np.pi
    phase: float = 0.0
    offset: float = 0.0
    breakpoints = ()

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return self.amplitude * np.cos(self.omega * s + self.phase) + self.offset

    def to_dict(self):
        return {"kind": "cos", "amplitude": self.amplitude, "omega": self.omega,
                "phase": self.phase, "offset": self.offset}


@dataclass(frozen=True)
class Step:
    """Right-continuous step function.

    ``values[i]`` holds on ``[breakpoints[i-1], breakpoints[i])`` with the
    outer pieces extended to 0 and 1; the last piece includes ``s = 1``.
    """

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError("a step function needs len(values) == len(breakpoints) + 1")
        if list(self.breakpoints) != sorted(self.breakpoints):
            raise ValueError("step breakpoints must be sorted")

    def __call__(self, s):
        vals = np.array([as_complex(v) for v in self.values])
        idx = np.searchsorted(np.asarray(self.breakpoints, dtype=float), s, side="right")
        return vals[idx]

    def to_dict(self):
        return {"kind": "step", "breakpoints": list(self.breakpoints),
                "values": [[as_complex(v).real, as_complex(v).imag] for v in self.values]}


@dataclass(frozen=True)
class Grid:
    """Linear interpolation of ``values`` given on a uniform grid of [0, 1]."""

    values: tuple
    breakpoints = ()

    def __post_init__(self):
        if len(self.values) < 2:
            raise ValueError("grid interpolation needs at least two values")

    def __call__(self, s):
        vals = np.array([as_complex(v) for v in self.values])
        x = np.linspace(0.0, 1.0, vals.size)
        s = np.asarray(s, dtype=float)
        return np.interp(s, x, vals.real) + 1j * np.interp(s, x, vals.imag)

    def to_dict(self):
        return {"kind": "grid", "values": [[as_complex(v).real, as_complex(v).imag] for v in self.values]}


def func_from_dict(desc) -> Callable:
    """Build a function backend from a config descriptor ``{kind: ..., ...}``.

    A bare number is shorthand for a constant.
    """
    if not isinstance(desc, Mapping):
        return Const(as_complex(desc))
    kind = desc.get("kind")
    if kind == "const":
        return Const(as_complex(desc["value"]))
    if kind == "poly":
        return Poly(tuple(as_complex(c) for c in desc["coeffs"]))
    if kind == "cos":
        return Cos(float(desc.get("amplitude", 1.0)), float(desc.get("omega", 2 * np.pi)),
                   float(desc.get("phase", 0.0)), float(desc.get("offset", 0.0)))
    if kind == "step":
        return Step(tuple(float(b) for b in desc["breakpoints"]),
                    tuple(as_complex(v) for v in desc["values"]))
    if kind == "grid":
        return Grid(tuple(as_complex(v) for v in desc["values"]))
    raise ValueError(f"unknown function kind {kind!r}")


@dataclass(frozen=True, eq=False)
class DiagonalSymbol:
    """Per-diagonal coefficient functions ``s -> a_k(s)`` on [0, 1].

    ``hermitian_pair`` asserts ``a_{-k}(s) = conj(a_k(s))``.  When left as
    ``None`` it is detected on the sup-norm grid; an explicit ``True`` is
    checked on that grid and rejected if it does not hold.
    """

    funcs: Mapping[int, Callable]
    hermitian_pair: bool | None = None
    grid: int = 1025

    def __post_init__(self):
        funcs = {int(k): (f if callable(f) else Const(as_complex(f))) for k, f in self.funcs.items()}
        object.__setattr__(self, "funcs", dict(sorted(funcs.items())))
        detected = self._detect_hermitian()
        if self.hermitian_pair is None:
            object.__setattr__(self, "hermitian_pair", detected)
        elif self.hermitian_pair and not detected:
            raise ValueError("symbol is flagged hermitian_pair but a_{-k} != conj(a_k)")

    @classmethod
    def from_dict(cls, desc: Mapping) -> "DiagonalSymbol":
        funcs = {int(d["k"]): func_from_dict(d["func"]) for d in desc["diagonals"]}
        return cls(funcs, desc.get("hermitian_pair"), int(desc.get("grid", 1025)))

    def to_dict(self) -> dict:
        out = {"diagonals": [{"k": k, "func": f.to_dict()} for k, f in self.funcs.items()
                             if hasattr(f, "to_dict")]}
        out["hermitian_pair"] = bool(self.hermitian_pair)
        return out

    @property
    def band(self) -> int:
        return max((abs(k) for k in self.funcs), default=0)

    def sample_points(self, grid: int | None = None) -> np.ndarray:
        """Uniform grid on [0, 1] plus all declared breakpoints."""
        pts = [np.linspace(0.0, 1.0, grid or self.grid)]
        for f in self.funcs.values():
            bps = getattr(f, "breakpoints", ())
            if len(bps):
                bps = np.asarray(bps, dtype=float)
                pts.append(np.clip(np.concatenate([bps, np.nextafter(bps, -np.inf)]), 0.0, 1.0))
        return np.unique(np.concatenate(pts))

    def func(self, k: int) -> Callable:
        return self.funcs.get(k, Const(0.0))

    def coeff(self, k: int, s):
        """``a_k(s)`` as a complex array (or scalar)."""
        s = np.asarray(s, dtype=float)
        out = np.asarray(self.func(k)(s), dtype=complex) * np.ones(s.shape)
        return complex(out) if out.ndim == 0 else out

    def coeffs_at(self, s) -> np.ndarray:
        """Coefficient vectors ``alpha(s)``, shape ``s.shape + (2*band+1,)``."""
        s = np.asarray(s, dtype=float)
        k0 = self.band
        out = np.zeros(s.shape + (2 * k0 + 1,), dtype=complex)
        for k in self.funcs:
            out[..., k + k0] = self.coeff(k, s)
        return out

    def coeffseq(self, s: float) -> CoeffSeq:
        return CoeffSeq(self.coeffs_at(float(s)))

    def _detect_hermitian(self) -> bool:
        s = self.sample_points()
        for k in set(self.funcs) | {-k for k in self.funcs}:
            if not np.allclose(self.coeff(-k, s), np.conj(self.coeff(k, s)), rtol=0, atol=1e-12):
                return False
        return True


def symbol_value(sym: DiagonalSymbol, s, t):
    """``a(s, t) = sum_k a_k(s) exp(i k t)`` (broadcasting over ``s`` and ``t``)."""
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    out = np.zeros(s.shape, dtype=complex)
    for k in sym.funcs:
        out = out + sym.coeff(k, s) * np.exp(1j * k * t)
    return complex(out) if out.ndim == 0 else out


def sup_norm_sum(sym: DiagonalSymbol, grid: int = 1025) -> float:
    """Grid estimate of ``sum_k sup_s |a_k(s)|``.

    Exact for constants and step functions, whose breakpoints are sampled on
    both sides; a lower bound in general since the supremum is only taken
    over sample points.
    """
    if grid < 2:
        raise ValueError("grid must have at least two points")
    s = sym.sample_points(grid)
    return float(sum(np.abs(sym.coeff(k, s)).max() for k in sym.funcs))
