"""Predicted limit objects: laws on coefficient space and their integrals.

A :class:`LimitLaw` is a discrete probability measure on coefficient
vectors ``z = (z_{-K}, ..., z_K)`` together with a periodic trapezoid rule
in ``t``.  The predicted limit of ``(1/n) sum phi(lambda_k)`` is the
average of ``phi(P(z, t))`` over both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, optimize, special

from .symbols import CoeffSeq, DiagonalSymbol, symbol_value

__all__ = [
    "Phi",
    "Uniform",
    "PiecewiseUniform",
    "Atoms",
    "Beta",
    "LimitLaw",
    "DensityModel",
    "LinearF",
    "StepF",
    "GeneralF",
    "predicted_moment",
    "predicted_phi_integral",
    "kms_phi_integral",
    "schrodinger_density",
    "arcsine_cdf",
    "arcsine_density",
    "predicted_cdf",
    "ks_distance",
    "ks_distance_sample",
    "nevai_limit",
]

DEFAULT_NT = 512
DEFAULT_NT_NONPOLY = 4096


# -- test functions -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Phi:
    """A test function with optional polynomial structure.

    ``poly`` holds ascending coefficients when ``phi`` is a polynomial; only
    those may be integrated against non-hermitian laws.
    """

    func: Callable
    poly: tuple | None = None
    name: str = "phi"

    def __call__(self, x):
        return self.func(x)

    @classmethod
    def power(cls, m: int) -> "Phi":
        return cls(lambda x: np.asarray(x) ** m, tuple([0.0] * m + [1.0]), f"x^{m}")

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> "Phi":
        c = tuple(coeffs)
        return cls(lambda x: np.polynomial.polynomial.polyval(np.asarray(x), c), c, "poly")

    @classmethod
    def bump(cls, center: float, width: float) -> "Phi":
        """Smooth compactly supported bump ``exp(-1 / (1 - u^2))``, ``u = (x - center) / width``."""
        def f(x):
            u = (np.asarray(x, dtype=float) - center) / width
            out = np.zeros(u.shape)
            inside = np.abs(u) < 1
            out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
            return out
        return cls(f, None, f"bump({center},{width})")

    @classmethod
    def cdf_probe(cls, x0: float, eps: float = 0.05) -> "Phi":
        """Indicator of ``x <= x0`` smoothed linearly over ``[x0 - eps, x0 + eps]``."""
        return cls(lambda x: np.clip((x0 + eps - np.asarray(x, dtype=float)) / (2 * eps), 0.0, 1.0),
                   None, f"cdf_probe({x0},{eps})")

    @classmethod
    def from_dict(cls, desc) -> "Phi":
        kind = desc["kind"]
        if kind == "power":
            return cls.power(int(desc["m"]))
        if kind == "poly":
            return cls.polynomial([float(c) for c in desc["coeffs"]])
        if kind == "bump":
            return cls.bump(float(desc["center"]), float(desc["width"]))
        if kind == "cdf_probe":
            return cls.cdf_probe(float(desc["x0"]), float(desc.get("eps", 0.05)))
        raise ValueError(f"unknown test function kind {kind!r}")


# -- measures on [0, 1] ---------------------------------------------------------


@dataclass(frozen=True)
class Uniform:
    def discretize(self, n_s: int):
        return (np.arange(n_s) + 0.5) / n_s, np.full(n_s, 1.0 / n_s)

    def pieces(self):
        return [(0.0, 1.0, 1.0)]


@dataclass(frozen=True)
class PiecewiseUniform:
    """Density constant on each ``[edges[i], edges[i+1])`` carrying mass ``masses[i]``."""

    edges: tuple
    masses: tuple

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=float)
        m = np.asarray(self.masses, dtype=float)
        if e.size != m.size + 1 or e[0] != 0.0 or e[-1] != 1.0 or np.any(np.diff(e) <= 0):
            raise ValueError("edges must increase from 0 to 1 with one more entry than masses")
        if np.any(m < 0) or not math.isclose(m.sum(), 1.0, abs_tol=1e-12):
            raise ValueError("masses must be non-negative and sum to 1")

    def discretize(self, n_s: int):
        pts, wts = [], []
        for a, b, mass in self.pieces():
            m = max(1, int(round(n_s * (b - a))))
            pts.append(a + (b - a) * (np.arange(m) + 0.5) / m)
            wts.append(np.full(m, mass / m))
        return np.concatenate(pts), np.concatenate(wts)

    def pieces(self):
        return [(float(a), float(b), float(m))
                for a, b, m in zip(self.edges[:-1], self.edges[1:], self.masses)]


@dataclass(frozen=True)
class Atoms:
    points: tuple
    weights: tuple | None = None

    def __post_init__(self):
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.size != len(self.points) or np.any(w < 0) or not math.isclose(w.sum(), 1.0, abs_tol=1e-12):
                raise ValueError("atom weights must be non-negative, one per point, summing to 1")

    def discretize(self, n_s: int = 0):
        p = np.asarray(self.points, dtype=float)
        w = np.full(p.size, 1.0 / p.size) if self.weights is None else np.asarray(self.weights, dtype=float)
        return p, w


@dataclass(frozen=True)
class Beta:
    a: float = 2.0
    b: float = 2.0

    def discretize(self, n_s: int):
        edges = np.linspace(0.0, 1.0, n_s + 1)
        w = np.diff(special.betainc(self.a, self.b, edges))
        return (edges[:-1] + edges[1:]) / 2, w / w.sum()


def nu_from_dict(desc):
    if desc is None or desc == "uniform":
        return Uniform()
    kind = desc["kind"]
    if kind == "uniform":
        return Uniform()
    if kind == "piecewise":
        return PiecewiseUniform(tuple(map(float, desc["edges"])), tuple(map(float, desc["masses"])))
    if kind == "atoms":
        w = desc.get("weights")
        return Atoms(tuple(map(float, desc["points"])), None if w is None else tuple(map(float, w)))
    if kind == "beta":
        return Beta(float(desc.get("a", 2.0)), float(desc.get("b", 2.0)))
    raise ValueError(f"unknown measure kind {kind!r}")


def nu_to_dict(nu) -> dict:
    if isinstance(nu, Uniform):
        return {"kind": "uniform"}
    if isinstance(nu, PiecewiseUniform):
        return {"kind": "piecewise", "edges": list(nu.edges), "masses": list(nu.masses)}
    if isinstance(nu, Atoms):
        return {"kind": "atoms", "points": list(nu.points),
                "weights": None if nu.weights is None else list(nu.weights)}
    return {"kind": "beta", "a": nu.a, "b": nu.b}


# -- laws on coefficient space -------------------------------------------------


def _t_nodes(n_t: int) -> np.ndarray:
    return -np.pi + 2 * np.pi * np.arange(n_t) / n_t


@dataclass(frozen=True, eq=False)
class LimitLaw:
    """Weighted coefficient vectors ``Z[i]`` (shape ``(m, 2K+1)``) and a t-rule with ``n_t`` nodes."""

    Z: np.ndarray
    weights: np.ndarray
    n_t: int = DEFAULT_NT
    kind: str = "atoms"

    def __post_init__(self):
        Z = np.atleast_2d(np.array(self.Z, dtype=complex))
        w = np.array(self.weights, dtype=float).reshape(-1)
        if Z.shape[0] != w.size or Z.shape[1] % 2 != 1:
            raise ValueError("need one weight per coefficient vector and 2K+1 coefficients each")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("law weights must be non-negative and sum to 1")
        K = (Z.shape[1] - 1) // 2
        if self.n_t < 4 * K + 4:
            raise ValueError(f"n_t = {self.n_t} is below 4 * band + 4 = {4 * K + 4}")
        Z.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "weights", w)

    @property
    def band(self) -> int:
        return (self.Z.shape[1] - 1) // 2

    @property
    def hermitian(self) -> bool:
        return bool(np.allclose(self.Z, np.conj(self.Z[:, ::-1]), rtol=0, atol=1e-12))

    @classmethod
    def delta(cls, coeffs: CoeffSeq, n_t: int = DEFAULT_NT) -> "LimitLaw":
        return cls(coeffs.entries[None, :], np.ones(1), n_t, "delta")

    @classmethod
    def atoms(cls, seqs: Sequence[CoeffSeq], weights: Sequence[float], n_t: int = DEFAULT_NT) -> "LimitLaw":
        K = max(c.band for c in seqs)
        return cls(np.array([c.padded(K) for c in seqs]), np.asarray(weights, dtype=float), n_t, "atoms")

    @classmethod
    def pushforward(cls, sym: DiagonalSymbol, nu=None, n_s: int = 4096, n_t: int = DEFAULT_NT) -> "LimitLaw":
        """Image of ``nu`` (default uniform) under ``s -> (a_{-K}(s), ..., a_K(s))``, on an ``n_s`` grid."""
        s, w = (nu or Uniform()).discretize(n_s)
        return cls(sym.coeffs_at(s), w / w.sum(), n_t, "pushforward")

    @classmethod
    def mixture(cls, laws: Sequence["LimitLaw"], weights: Sequence[float]) -> "LimitLaw":
        K = max(law.band for law in laws)
        Zs, ws = [], []
        for law, c in zip(laws, weights):
            Z = np.zeros((law.Z.shape[0], 2 * K + 1), dtype=complex)
            Z[:, K - law.band: K + law.band + 1] = law.Z
            Zs.append(Z)
            ws.append(c * law.weights)
        w = np.concatenate(ws)
        return cls(np.vstack(Zs), w / w.sum(), max(law.n_t for law in laws), "mixture")

    def with_nt(self, n_t: int) -> "LimitLaw":
        return LimitLaw(self.Z, self.weights, n_t, self.kind)

    def values(self, n_t: int | None = None) -> np.ndarray:
        """``P(z_i, t_j)`` on the law's atoms and t-nodes, shape ``(m, n_t)``."""
        t = _t_nodes(n_t or self.n_t)
        k = np.arange(-self.band, self.band + 1)
        return self.Z @ np.exp(1j * np.multiply.outer(k, t))

    def coefficient_moments(self, window: int):
        """Integrals of ``z_k`` and ``z_k conj(z_l)`` for ``|k|, |l| <= window``."""
        K = self.band
        sub = np.zeros((self.Z.shape[0], 2 * window + 1), dtype=complex)
        m = min(K, window)
        sub[:, window - m: window + m + 1] = self.Z[:, K - m: K + m + 1]
        first = self.weights @ sub
        second = np.einsum("i,ik,il->kl", self.weights, sub, np.conj(sub))
        return first, second


def predicted_moment(law: LimitLaw, r: int, s: int, max_order: int = 12) -> complex:
    """``(1/2pi) int int P^r conj(P)^s dmu dt``, exact for trigonometric integrands."""
    if r < 0 or s < 0 or r + s > max_order:
        raise ValueError(f"moment order ({r}, {s}) outside 0 <= r + s <= {max_order}")
    need = 2 * (r + s) * law.band
    if law.n_t <= need:
        raise ValueError(f"n_t = {law.n_t} must exceed 2 (r + s) band = {need} for an exact t-rule")
    P = law.values()
    vals = P ** r * np.conj(P) ** s
    return complex(law.weights @ vals.mean(axis=1))


def predicted_phi_integral(law: LimitLaw, phi, n_t: int | None = None) -> float:
    """``(1/2pi) int int phi(F(z, t)) dmu dt``.

    A non-polynomial ``phi`` needs a hermitian law (real ``F``) and is
    integrated on ``n_t`` nodes, ``4096`` by default.
    """
    poly = getattr(phi, "poly", None)
    if poly is None:
        if not law.hermitian:
            raise ValueError("non-polynomial test functions need a hermitian law")
        n_t = n_t or max(law.n_t, DEFAULT_NT_NONPOLY)
    else:
        n_t = n_t or max(law.n_t, 2 * len(poly) * law.band + 1)
    P = law.values(n_t)
    if law.hermitian:
        P = P.real
    vals = np.asarray(phi(P)) * np.ones(P.shape)
    out = complex(law.weights @ vals.mean(axis=1))
    return out.real if law.hermitian or abs(out.imag) == 0 else out


def kms_phi_integral(sym: DiagonalSymbol, phi, s_nodes: int = 2048, t_nodes: int = 1024) -> float:
    """``(1/2pi) int_0^1 int phi(a(s, t)) dt ds``: midpoint rule in ``s``, trapezoid in ``t``."""
    if getattr(phi, "poly", None) is None and not sym.hermitian_pair:
        raise ValueError("non-polynomial test functions need a hermitian symbol")
    s = (np.arange(s_nodes) + 0.5) / s_nodes
    t = _t_nodes(t_nodes)
    a = symbol_value(sym, s[:, None], t[None, :])
    if sym.hermitian_pair:
        a = a.real
    out = complex(np.mean(np.asarray(phi(a)) * np.ones(a.shape)))
    return out.real if sym.hermitian_pair or out.imag == 0 else out


def nevai_limit(coeffs: CoeffSeq, phi, n_t: int | None = None) -> float:
    """``(1/2pi) int phi(a(t)) dt`` for ``a(t) = sum a_k e^{ikt}``."""
    return predicted_phi_integral(LimitLaw.delta(coeffs, max(DEFAULT_NT, 4 * coeffs.band + 4)), phi, n_t)


# -- arcsine law and the discrete Schrodinger density -------------------------


def arcsine_density(x, center: float = 0.0):
    """``1 / (pi sqrt(4 - (x - center)^2))`` on ``(center - 2, center + 2)``, zero outside."""
    u = np.asarray(x, dtype=float) - center
    out = np.zeros(u.shape)
    inside = np.abs(u) < 2
    out[inside] = 1.0 / (np.pi * np.sqrt(4.0 - u[inside] ** 2))
    return out if out.ndim else float(out)


def arcsine_cdf(x, center: float = 0.0):
    u = np.clip((np.asarray(x, dtype=float) - center) / 2.0, -1.0, 1.0)
    out = 0.5 + np.arcsin(u) / np.pi
    return out if np.ndim(out) else float(out)


_GAUSS = np.polynomial.legendre.leggauss(8)


def _arcsin_diff(p, q):
    """``arcsin(p) - arcsin(q)`` for ``p, q`` in [-1, 1] without cancellation."""
    p = np.clip(p, -1.0, 1.0)
    q = np.clip(q, -1.0, 1.0)
    cp, cq = np.sqrt(1 - p * p), np.sqrt(1 - q * q)
    return np.arctan2(p * cq - q * cp, cp * cq + p * q)


@dataclass(frozen=True)
class LinearF:
    """``f(s) = a + b s`` with ``b >= 0``."""

    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if self.b < 0:
            raise ValueError("f must be nondecreasing")

    def __call__(self, s):
        return self.a + self.b * np.asarray(s, dtype=float)

    def inverse(self, y):
        return (y - self.a) / self.b


@dataclass(frozen=True)
class StepF:
    """Nondecreasing step function (same layout as :class:`szego.symbols.Step`)."""

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.breakpoints) + 1 or list(self.values) != sorted(self.values):
            raise ValueError("StepF needs nondecreasing values, one more than breakpoints")

    def __call__(self, s):
        return np.asarray(self.values, dtype=float)[np.searchsorted(self.breakpoints, s, side="right")]


@dataclass(frozen=True, eq=False)
class GeneralF:
    """Any strictly increasing differentiable ``f`` (derivative estimated if not given)."""

    f: Callable
    fprime: Callable | None = None

    def __call__(self, s):
        return self.f(s)

    def derivative(self, s):
        if self.fprime is not None:
            return self.fprime(s)
        h = 1e-6
        lo, hi = max(s - h, 0.0), min(s + h, 1.0)
        return (self.f(hi) - self.f(lo)) / (hi - lo)

    def inverse(self, y):
        return optimize.brentq(lambda s: self.f(s) - y, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)


@dataclass(frozen=True, eq=False)
class DensityModel:
    """Discrete Schrodinger model: diagonal ``f(s)``, off-diagonals 1, ``s ~ nu``.

    The spectral density is
    ``rho(x) = (1/pi) int_{|x - f(s)| < 2} dnu(s) / sqrt(4 - (x - f(s))^2)``
    supported on ``[f(0) - 2, f(1) + 2]``.
    """

    f: object = LinearF()
    nu: object = Uniform()
    eps: float = 1e-12

    def __post_init__(self):
        lo, hi = float(self.f(0.0)), float(self.f(1.0))
        if not hi - lo < 4:
            raise ValueError("need f(1) - f(0) < 4")
        if hi < lo:
            raise ValueError("f must be nondecreasing")
        if isinstance(self.f, StepF) and not isinstance(self.nu, (Uniform, PiecewiseUniform)):
            raise ValueError("a step f needs a uniform or piecewise-uniform nu")

    @property
    def support(self) -> tuple[float, float]:
        return float(self.f(0.0)) - 2.0, float(self.f(1.0)) + 2.0

    @property
    def breakpoints(self) -> list[float]:
        f0, f1 = float(self.f(0.0)), float(self.f(1.0))
        pts = {f0 - 2, f1 - 2, f0 + 2, f1 + 2}
        for c, _ in self._value_atoms():
            pts |= {c - 2, c + 2}
        return sorted(pts)

    def _value_atoms(self):
        """``(value, mass)`` pairs when the image of ``nu`` under ``f`` is discrete, else ``[]``."""
        if isinstance(self.nu, Atoms):
            p, w = self.nu.discretize()
            return [(float(self.f(s)), float(m)) for s, m in zip(p, w)]
        if isinstance(self.f, StepF):
            out = {}
            edges = [0.0, *self.f.breakpoints, 1.0]
            for a, b, v in zip(edges[:-1], edges[1:], self.f.values):
                out[float(v)] = out.get(float(v), 0.0) + _nu_mass(self.nu, a, b)
            return sorted(out.items())
        if isinstance(self.f, LinearF) and self.f.b == 0:
            return [(float(self.f.a), 1.0)]
        return []

    def density(self, x, method: str = "auto"):
        x = np.asarray(x, dtype=float)
        out = np.array([self._density_point(float(v), method) for v in x.reshape(-1)]).reshape(x.shape)
        return out if out.ndim else float(out)

    def _density_point(self, x: float, method: str) -> float:
        lo, hi = self.support
        if not lo < x < hi:
            return 0.0
        atoms = self._value_atoms()
        if atoms:
            return float(sum(m * arcsine_density(x, c) for c, m in atoms))
        if method == "clip":
            return self._density_clip(x)
        if isinstance(self.f, LinearF) and isinstance(self.nu, (Uniform, PiecewiseUniform)):
            return self._density_linear(x)
        return self._density_substitution(x)

    def _density_linear(self, x: float) -> float:
        # u = x - a - b s turns each piece into an arcsine antiderivative
        a, b = self.f.a, self.f.b
        total = 0.0
        for s0, s1, mass in self.nu.pieces():
            g = mass / (s1 - s0)
            p, q = (x - a - b * s0) / 2, (x - a - b * s1) / 2
            if abs(p - q) < 1e-3 * (1 - max(abs(p), abs(q))):
                # narrow window away from +-2: the difference of arcsines cancels, so
                # integrate the smooth integrand with Gauss-Legendre instead
                nodes, weights = _GAUSS
                u = (p + q) / 2 + (p - q) / 2 * nodes
                total += g * (s1 - s0) / 4 * float(weights @ (1 / np.sqrt(1 - u * u)))
            else:
                total += g / b * _arcsin_diff(p, q)
        return max(total, 0.0) / np.pi

    def _s_window(self, x: float) -> tuple[float, float]:
        f0, f1 = float(self.f(0.0)), float(self.f(1.0))
        s_lo = 0.0 if x - 2 <= f0 else float(self.f.inverse(x - 2))
        s_hi = 1.0 if x + 2 >= f1 else float(self.f.inverse(x + 2))
        return s_lo, s_hi

    def _nu_density(self, s):
        if isinstance(self.nu, Uniform):
            return 1.0
        if isinstance(self.nu, PiecewiseUniform):
            for a, b, m in self.nu.pieces():
                if a <= s < b or (s == 1.0 and b == 1.0):
                    return m / (b - a)
            return 0.0
        if isinstance(self.nu, Beta):
            return float(np.exp((self.nu.a - 1) * np.log(max(s, 1e-300)) + (self.nu.b - 1) * np.log(max(1 - s, 1e-300))
                                - special.betaln(self.nu.a, self.nu.b)))
        raise ValueError("unsupported nu for a continuous f")

    def _density_substitution(self, x: float) -> float:
        # s = f^{-1}(x - 2 sin theta) removes the inverse square root
        s_lo, s_hi = self._s_window(x)
        th_a = math.asin(np.clip((x - float(self.f(s_hi))) / 2, -1, 1))
        th_b = math.asin(np.clip((x - float(self.f(s_lo))) / 2, -1, 1))

        def integrand(th):
            s = float(np.clip(self.f.inverse(x - 2 * math.sin(th)), 0.0, 1.0))
            d = self.f.derivative(s) if hasattr(self.f, "derivative") else self.f.b
            return self._nu_density(s) / d

        pts = self._nu_breaks_theta(x, th_a, th_b)
        val, _ = integrate.quad(integrand, th_a, th_b, points=pts or None, limit=200, epsabs=1e-12, epsrel=1e-10)
        return max(val, 0.0) / np.pi

    def _nu_breaks_theta(self, x, th_a, th_b):
        if not isinstance(self.nu, PiecewiseUniform):
            return []
        out = []
        for e in self.nu.edges[1:-1]:
            u = (x - float(self.f(e))) / 2
            if -1 < u < 1:
                th = math.asin(u)
                if th_a < th < th_b:
                    out.append(th)
        return out

    def _density_clip(self, x: float) -> float:
        s_lo, s_hi = self._s_window(x)

        def integrand(s):
            u = x - float(self.f(s))
            return self._nu_density(s) / math.sqrt(max(self.eps, 4 - u * u))

        val, _ = integrate.quad(integrand, s_lo, s_hi, limit=400)
        return val / np.pi

    def cdf(self, x):
        """``int_{-inf}^x rho``, computed as ``int G(x - f(s)) dnu(s)`` with ``G`` the arcsine CDF."""
        x = np.asarray(x, dtype=float)
        out = np.array([self._cdf_point(float(v)) for v in x.reshape(-1)]).reshape(x.shape)
        return out if out.ndim else float(out)

    def _cdf_point(self, x: float) -> float:
        atoms = self._value_atoms()
        if atoms:
            return float(sum(m * arcsine_cdf(x, c) for c, m in atoms))
        if isinstance(self.nu, Beta):
            val, _ = integrate.quad(lambda s: self._nu_density(s) * arcsine_cdf(x - float(self.f(s))), 0, 1, limit=200)
            return min(max(val, 0.0), 1.0)
        total = 0.0
        for a, b, mass in (self.nu.pieces() if hasattr(self.nu, "pieces") else [(0.0, 1.0, 1.0)]):
            val, _ = integrate.quad(lambda s: arcsine_cdf(x - float(self.f(s))), a, b,
                                    limit=200, epsabs=1e-13, epsrel=1e-12)
            total += mass / (b - a) * val
        return min(max(total, 0.0), 1.0)

    def total_mass(self) -> float:
        lo, hi = self.support
        pts = [p for p in self.breakpoints if lo < p < hi]
        val, _ = integrate.quad(self.density, lo, hi, points=pts or None, limit=400, epsabs=1e-9, epsrel=1e-9)
        return float(val)

    def to_law(self, n_s: int = 4096, n_t: int = DEFAULT_NT) -> LimitLaw:
        """The same model as a law on ``(1, f(s), 1)`` coefficient vectors."""
        atoms = self._value_atoms()
        if atoms:
            vals = np.array([c for c, _ in atoms])
            w = np.array([m for _, m in atoms])
        else:
            s, w = self.nu.discretize(n_s)
            vals = np.asarray(self.f(s), dtype=float)
        Z = np.stack([np.ones_like(vals), vals, np.ones_like(vals)], axis=1)
        return LimitLaw(Z, w / w.sum(), n_t, "density")


def _nu_mass(nu, a: float, b: float) -> float:
    if isinstance(nu, Uniform):
        return b - a
    total = 0.0
    for p, q, m in nu.pieces():
        overlap = max(0.0, min(b, q) - max(a, p))
        total += m * overlap / (q - p)
    return total


def schrodinger_density(model: DensityModel, x, method: str = "auto"):
    """Evaluate the spectral density ``rho`` of ``model`` at ``x`` (zero off the support)."""
    return model.density(x, method)


def predicted_cdf(model_or_law, grid) -> np.ndarray:
    """Predicted eigenvalue CDF on ``grid``.

    A :class:`DensityModel` is integrated exactly.  For a hermitian
    :class:`LimitLaw` the values ``F(z, t)`` on the full quadrature grid are
    sorted and their weights accumulated.
    """
    grid = np.asarray(grid, dtype=float)
    if isinstance(model_or_law, DensityModel):
        return np.atleast_1d(model_or_law.cdf(grid))
    law = model_or_law
    if not law.hermitian:
        raise ValueError("predicted CDF needs a hermitian law")
    n_t = max(law.n_t, DEFAULT_NT_NONPOLY)
    vals = law.values(n_t).real.reshape(-1)
    w = np.repeat(law.weights / n_t, n_t)
    order = np.argsort(vals, kind="stable")
    vals, cum = vals[order], np.cumsum(w[order])
    idx = np.searchsorted(vals, grid, side="right")
    out = np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0.0)
    return np.minimum(out, 1.0)


def ks_distance(empirical, predicted) -> float:
    """Largest absolute gap between two CDFs tabulated on a common grid."""
    e, p = np.asarray(empirical, dtype=float), np.asarray(predicted, dtype=float)
    if e.shape != p.shape:
        raise ValueError("CDFs must share a grid")
    return float(np.max(np.abs(e - p))) if e.size else 0.0


def ks_distance_sample(eigs, cdf: Callable) -> float:
    """Exact Kolmogorov-Smirnov statistic of a real sample against a continuous CDF."""
    lam = np.sort(np.asarray(eigs, dtype=float))
    n = lam.size
    F = np.asarray(cdf(lam), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))
