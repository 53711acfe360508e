"""Matrix families stored diagonal by diagonal.

Entry ``j`` of diagonal ``k`` (written ``a_{k;j}``) sits at row ``j``,
column ``j + k`` when ``k >= 0`` and at row ``j + |k|``, column ``j`` when
``k < 0``, so ``j`` always counts along the diagonal from its first entry.
Out-of-range positions read as zero.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .symbols import CoeffSeq, DiagonalSymbol

__all__ = [
    "DiagMatrix",
    "RRule",
    "Toeplitz",
    "KMS",
    "BinnedConstants",
    "BinnedFunctions",
    "Jacobi",
    "PerturbedToeplitz",
    "Explicit",
    "build",
    "build_toeplitz",
    "build_kms",
    "build_binned_constants",
    "build_binned_functions",
    "build_jacobi",
    "perturb_density_one",
    "band_truncate",
    "to_dense",
    "from_dense",
    "diag_get",
    "write_dense_csv",
    "read_dense_csv",
]

_HERM_TOL = 1e-12


class DiagMatrix:
    """An ``n x n`` matrix held as a map ``offset -> entries along that diagonal``.

    Diagonals are copied and frozen on construction.  A ``hermitian=True``
    flag is checked against the stored entries.
    """

    __slots__ = ("n", "diagonals", "hermitian")

    def __init__(self, n: int, diagonals: Mapping[int, Sequence], hermitian: bool = False):
        if n < 1:
            raise ValueError("matrix dimension must be positive")
        diags = {}
        for k, v in sorted(diagonals.items()):
            k = int(k)
            if abs(k) >= n:
                raise ValueError(f"offset {k} does not fit an {n} x {n} matrix")
            v = np.array(v, dtype=complex).reshape(-1)
            if v.size != n - abs(k):
                raise ValueError(f"diagonal {k} needs {n - abs(k)} entries, got {v.size}")
            v.flags.writeable = False
            diags[k] = v
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "diagonals", diags)
        object.__setattr__(self, "hermitian", bool(hermitian))
        if hermitian:
            self._check_hermitian()

    def __setattr__(self, name, value):
        raise AttributeError("DiagMatrix is immutable")

    def _check_hermitian(self):
        zero = np.zeros(0)
        for k, v in self.diagonals.items():
            w = self.diagonals.get(-k, zero)
            if w.size == 0:
                w = np.zeros(v.size)
            if not np.allclose(v, np.conj(w), rtol=0, atol=_HERM_TOL):
                raise ValueError(f"diagonals {k} and {-k} are not conjugate; matrix is not hermitian")

    @property
    def offsets(self) -> list[int]:
        return list(self.diagonals)

    @property
    def band(self) -> int:
        return max((abs(k) for k in self.diagonals), default=0)

    def diag(self, k: int) -> np.ndarray:
        """Stored entries of diagonal ``k`` (zeros if the offset is not stored)."""
        if k in self.diagonals:
            return self.diagonals[k]
        return np.zeros(max(self.n - abs(k), 0), dtype=complex)

    def __repr__(self):
        return f"DiagMatrix(n={self.n}, offsets={self.offsets}, hermitian={self.hermitian})"

    def __eq__(self, other):
        if not isinstance(other, DiagMatrix):
            return NotImplemented
        if self.n != other.n or self.hermitian != other.hermitian:
            return False
        keys = set(self.diagonals) | set(other.diagonals)
        return all(np.array_equal(self.diag(k), other.diag(k)) for k in keys)

    __hash__ = None

    def max_abs_entry(self) -> float:
        return max((float(np.abs(v).max()) for v in self.diagonals.values() if v.size), default=0.0)


def diag_get(A: DiagMatrix, k: int, j: int) -> complex:
    """``a_{k;j}`` with zero outside ``0 <= j <= n - |k| - 1``."""
    if abs(k) >= A.n or j < 0 or j > A.n - abs(k) - 1 or k not in A.diagonals:
        return 0j
    return complex(A.diagonals[k][j])


def to_dense(A: DiagMatrix) -> np.ndarray:
    M = np.zeros((A.n, A.n), dtype=complex)
    for k, v in A.diagonals.items():
        j = np.arange(v.size)
        if k >= 0:
            M[j, j + k] = v
        else:
            M[j - k, j] = v
    return M


def from_dense(M, hermitian: bool | None = None, tol: float = 0.0) -> DiagMatrix:
    """Split a dense square array into diagonals, dropping those with all ``|entry| <= tol``."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("expected a square matrix")
    diags = {}
    for k in range(-(n - 1), n):
        v = np.diagonal(M, offset=k)
        if np.any(np.abs(v) > tol):
            diags[k] = v
    if hermitian is None:
        hermitian = bool(np.allclose(M, M.conj().T, rtol=0, atol=_HERM_TOL))
    return DiagMatrix(n, diags, hermitian)


def band_truncate(A: DiagMatrix, k0: int) -> DiagMatrix:
    """Copy of ``A`` keeping only the diagonals with ``|k| <= k0``."""
    if k0 < 0:
        raise ValueError("k0 must be non-negative")
    return DiagMatrix(A.n, {k: v for k, v in A.diagonals.items() if abs(k) <= k0}, A.hermitian)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_dense_csv(A: DiagMatrix, path) -> None:
    """Row-major dense export: one line per row, ``re,im`` pairs per entry."""
    M = to_dense(A)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in M:
            w.writerow([s for z in row for s in (_fmt(z.real), _fmt(z.imag))])


def read_dense_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = [[float(x) for x in r] for r in csv.reader(fh) if r]
    a = np.array(rows)
    return a[:, 0::2] + 1j * a[:, 1::2]


# -- bin-width rules ---------------------------------------------------------


@dataclass(frozen=True)
class RRule:
    """Bin width rule ``n -> r_n`` with ``r_n -> inf`` and ``r_n = o(n)``.

    ``kind`` is ``"sqrt"`` (ceil sqrt n), ``"log"`` (ceil log n) or
    ``"power"`` (ceil n**alpha, ``0 < alpha < 1``).
    """

    kind: str = "sqrt"
    alpha: float = 0.5

    def __post_init__(self):
        if self.kind not in ("sqrt", "log", "power"):
            raise ValueError(f"unknown r_rule {self.kind!r}")
        if self.kind == "power" and not 0 < self.alpha < 1:
            raise ValueError("power r_rule needs 0 < alpha < 1")

    def __call__(self, n: int) -> float:
        if self.kind == "sqrt":
            return float(math.isqrt(n - 1) + 1) if n > 0 else 0.0
        if self.kind == "log":
            return float(math.ceil(math.log(n)))
        return float(math.ceil(n ** self.alpha))

    def width(self, n: int) -> int:
        r = self(n)
        if r < 1:
            raise ValueError(f"r_rule gives r_n = {r} < 1 at n = {n}")
        return int(math.floor(r))

    def to_dict(self):
        return {"kind": self.kind, "alpha": self.alpha}


# -- builders ----------------------------------------------------------------


def build_toeplitz(coeffs: CoeffSeq, n: int) -> DiagMatrix:
    if n < 1:
        raise ValueError("n must be positive")
    diags = {k: np.full(n - abs(k), z) for k, z in coeffs.nonzero().items() if abs(k) < n}
    return DiagMatrix(n, diags, coeffs.is_hermitian)


def _kms_points(n: int, k: int, sampling: str) -> np.ndarray:
    j = np.arange(n - abs(k))
    if sampling == "midpoint":
        return (2 * j + abs(k)) / (2 * n + 2)
    if sampling == "uniform":
        return j / n
    raise ValueError(f"unknown KMS sampling {sampling!r}")


def build_kms(sym: DiagonalSymbol, n: int, sampling: str = "midpoint") -> DiagMatrix:
    """Generalized Toeplitz matrix with diagonals sampled from ``sym``.

    ``"midpoint"`` puts ``a_{j-i}((i + j) / (2n + 2))`` at row ``i``,
    column ``j``; ``"uniform"`` puts ``a_k(j / n)`` at position ``j`` of
    diagonal ``k``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    diags = {k: sym.coeff(k, _kms_points(n, k, sampling)) for k in sym.funcs if abs(k) < n}
    return DiagMatrix(n, diags, sym.hermitian_pair)


def _stepped_sequence(consts: np.ndarray, width: int, n: int) -> np.ndarray:
    """``c_1`` repeated ``width`` times, then ``c_2``, ...; the tail repeats the last full bin's constant."""
    nbins = n // width
    idx = np.minimum(np.arange(n) // width, nbins - 1)
    return consts[idx]


def build_binned_constants(consts: np.ndarray, maps: Mapping[int, Callable], width: int, n: int,
                           hermitian: bool = False) -> DiagMatrix:
    """Diagonal ``k`` holds ``maps[k]`` applied entrywise to the stepped sequence of ``consts``."""
    if width < 1:
        raise ValueError("bin width must be at least 1")
    if n < 4:
        raise ValueError("n must be at least 4")
    a = _stepped_sequence(np.asarray(consts, dtype=float), width, n)
    diags = {k: np.asarray(f(a[: n - abs(k)]), dtype=complex) * np.ones(n - abs(k))
             for k, f in maps.items() if abs(k) < n}
    return DiagMatrix(n, diags, hermitian)


def build_binned_functions(funcs: Mapping[int, Sequence[Callable]], width: int, n: int,
                           hermitian: bool = False) -> DiagMatrix:
    """Diagonal ``k`` is a run of blocks; block ``b`` samples ``funcs[k][b mod len]`` on
    a uniform ``width``-point partition of [0, 1]."""
    if width < 1:
        raise ValueError("bin width must be at least 1")
    if n < 4:
        raise ValueError("n must be at least 4")
    part = np.linspace(0.0, 1.0, width) if width > 1 else np.zeros(1)
    diags = {}
    for k, table in funcs.items():
        if abs(k) >= n:
            continue
        m = n - abs(k)
        p = np.arange(m)
        block, pos = p // width, p % width
        out = np.empty(m, dtype=complex)
        for b in np.unique(block):
            sel = block == b
            out[sel] = np.asarray(table[b % len(table)](part[pos[sel]]), dtype=complex)
        diags[k] = out
    return DiagMatrix(n, diags, hermitian)


def build_jacobi(a_seq, b_seq, n: int) -> DiagMatrix:
    """Symmetric tridiagonal matrix: ``b_0..b_{n-1}`` on the diagonal, ``a_0..a_{n-2}`` beside it.

    The sequences may be arrays (at least ``n`` resp. ``n - 1`` long) or callables ``k -> value``.
    """
    def take(seq, m):
        if callable(seq):
            v = np.array([seq(k) for k in range(m)])
        else:
            v = np.asarray(seq)[:m]
            if v.size < m:
                raise ValueError(f"sequence has {v.size} entries, need {m}")
        if np.iscomplexobj(v) and np.any(v.imag != 0):
            raise ValueError("Jacobi sequences must be real")
        return np.asarray(v.real if np.iscomplexobj(v) else v, dtype=float)

    b = take(b_seq, n)
    diags = {0: b}
    if n > 1:
        a = take(a_seq, n - 1)
        diags[1] = a
        diags[-1] = a
    return DiagMatrix(n, diags, True)


def perturb_density_one(base: CoeffSeq, rate: Callable[[int], int], magnitude: float,
                        seed: int, n: int) -> DiagMatrix:
    """Toeplitz matrix with ``rate(n)`` seeded positions per in-band diagonal shifted by ``magnitude``.

    For a hermitian base the positions chosen on diagonal ``k > 0`` are
    mirrored onto ``-k`` (with ``conj(magnitude)``).
    """
    T = build_toeplitz(base, n)
    m = int(rate(n))
    if m < 0 or m > n:
        raise ValueError(f"rate(n) = {m} must lie in [0, n]")
    rng = np.random.default_rng(seed)
    herm = base.is_hermitian and complex(magnitude).imag == 0
    diags = {k: np.array(T.diag(k)) for k in range(-min(base.band, n - 1), min(base.band, n - 1) + 1)}
    for k in sorted(diags, key=lambda k: (abs(k), -k)):
        if herm and k < 0:
            continue
        length = n - abs(k)
        pos = rng.choice(length, size=min(m, length), replace=False)
        diags[k][pos] += magnitude
        if herm and k > 0:
            diags[-k][pos] += np.conj(magnitude)
    diags = {k: v for k, v in diags.items() if np.any(v != 0)}
    return DiagMatrix(n, diags, herm)


# -- matrix sequence recipes -------------------------------------------------


def _floor_sqrt(n: int) -> int:
    return math.isqrt(n)


@dataclass(frozen=True)
class Toeplitz:
    coeffs: CoeffSeq

    @property
    def hermitian(self) -> bool:
        return self.coeffs.is_hermitian

    def build(self, n: int, seed: int = 0) -> DiagMatrix:
        return build_toeplitz(self.coeffs, n)


@dataclass(frozen=True)
class KMS:
    sym: DiagonalSymbol
    sampling: str = "midpoint"

    def __post_init__(self):
        if self.sampling not in ("midpoint", "uniform"):
            raise ValueError(f"unknown KMS sampling {self.sampling!r}")

    @property
    def hermitian(self) -> bool:
        return bool(self.sym.hermitian_pair)

    def build(self, n: int, seed: int = 0) -> DiagMatrix:
        return build_kms(self.sym, n, self.sampling)


_SAMPLERS = ("uniform", "beta", "golden")


@dataclass(frozen=True, eq=False)
class BinnedConstants:
    """Stepped diagonals built from constants ``c_1, c_2, ...`` in [0, 1].

    ``csource`` is either an explicit sequence (cycled if a run needs more
    bins than it has) or a sampler name: ``"uniform"`` and ``"beta"`` draw
    from ``numpy.random.default_rng(seed)``; ``"golden"`` is the deterministic
    Kronecker sequence ``frac(k * (sqrt(5) - 1) / 2)``.
    """

    maps: Mapping[int, Callable]
    csource: object = "golden"
    r_rule: RRule = field(default_factory=RRule)
    beta_params: tuple = (2.0, 2.0)
    hermitian: bool = False

    def __post_init__(self):
        if isinstance(self.csource, str):
            if self.csource not in _SAMPLERS:
                raise ValueError(f"unknown constant sampler {self.csource!r}")
        else:
            c = np.asarray(self.csource, dtype=float)
            if c.size == 0 or np.any((c < 0) | (c > 1)):
                raise ValueError("explicit constants must be a non-empty list in [0, 1]")
        if self.hermitian:
            s = np.linspace(0, 1, 257)
            for k, f in self.maps.items():
                g = self.maps.get(-k)
                if g is None or not np.allclose(np.asarray(f(s)), np.conj(np.asarray(g(s))), atol=_HERM_TOL):
                    raise ValueError("hermitian binned spec needs maps[-k] = conj(maps[k])")

    def constants(self, count: int, seed: int = 0) -> np.ndarray:
        if not isinstance(self.csource, str):
            c = np.asarray(self.csource, dtype=float)
            return np.resize(c, count)
        if self.csource == "golden":
            return np.mod(np.arange(1, count + 1) * ((math.sqrt(5) - 1) / 2), 1.0)
        rng = np.random.default_rng(seed)
        if self.csource == "uniform":
            return rng.random(count)
        return rng.beta(*self.beta_params, size=count)

    def build(self, n: int, seed: int = 0) -> DiagMatrix:
        w = self.r_rule.width(n)
        return build_binned_constants(self.constants(n // w, seed), self.maps, w, n, self.hermitian)


@dataclass(frozen=True, eq=False)
class BinnedFunctions:
    """Diagonals modelled bin by bin; ``funcs[k]`` lists the functions used by successive bins (cycled)."""

    funcs: Mapping[int, Sequence[Callable]]
    r_rule: RRule = field(default_factory=RRule)
    hermitian: bool = False

    def build(self, n: int, seed: int = 0) -> DiagMatrix:
        return build_binned_functions(self.funcs, self.r_rule.width(n), n, self.hermitian)


@dataclass(frozen=True, eq=False)
class Jacobi:
    a_seq: object
    b_seq: object
    hermitian = True

    def build(self, n: int, seed: int = 0) -> DiagMatrix:
        return build_jacobi(self.a_seq, self.b_seq, n)


@dataclass(frozen=True, eq=False)
class PerturbedToeplitz:
    """Toeplitz base plus ``rate(n)`` seeded point perturbations per diagonal.

    ``rate`` defaults to ``floor(sqrt(n))``.
    """

    base: CoeffSeq
    magnitude: float = 1.0
    rate: Callable[[int], int] = _floor_sqrt

    @property
    def hermitian(self) -> bool:
        return self.base.is_hermitian and complex(self.magnitude).imag == 0

    def build(self, n: int, seed: int = 0) -> DiagMatrix:
        return perturb_density_one(self.base, self.rate, self.magnitude, seed, n)


@dataclass(frozen=True, eq=False)
class Explicit:
    generator: Callable[[int], DiagMatrix]
    hermitian: bool = False

    def build(self, n: int, seed: int = 0) -> DiagMatrix:
        A = self.generator(n)
        if A.n != n:
            raise ValueError(f"generator returned a {A.n} x {A.n} matrix for n = {n}")
        if A.hermitian != self.hermitian:
            raise ValueError("generator output disagrees with the declared hermitian flag")
        return A


def build(spec, n: int, seed: int = 0) -> DiagMatrix:
    """Build ``A_n`` for any matrix sequence recipe."""
    return spec.build(n, seed)
