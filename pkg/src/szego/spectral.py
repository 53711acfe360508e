"""Eigenvalues, empirical spectral statistics and normalized trace moments.

The mixed moments ``(1/n) Tr[A^r (A^*)^s]`` are computed two ways:
:func:`moment_trace_dense` multiplies dense matrices, and
:func:`moment_trace_diagonal` sums products of diagonal entries over all
offset tuples whose offsets add up to zero.  The two must agree to
rounding, which makes each an oracle for the other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from .ensembles import DiagMatrix, to_dense

__all__ = [
    "SolverError",
    "SpectralSample",
    "MomentRow",
    "MomentReport",
    "eigenvalues",
    "moment_trace_dense",
    "moment_trace_diagonal",
    "count_offset_tuples",
    "test_functional_trace",
    "empirical_cdf",
    "MAX_MOMENT_ORDER",
]

MAX_MOMENT_ORDER = 12
TUPLE_BUDGET = 500_000


class SolverError(RuntimeError):
    """Raised when an eigensolver fails or returns an inaccurate result."""


@dataclass(frozen=True, eq=False)
class SpectralSample:
    n: int
    eigenvalues: np.ndarray
    hermitian: bool

    def to_csv(self, path) -> None:
        lam = np.asarray(self.eigenvalues, dtype=complex)
        with open(path, "w") as fh:
            fh.write("re,im\n")
            for z in lam:
                fh.write(f"{format(z.real, '.17g')},{format(z.imag, '.17g')}\n")


def _is_real(A: DiagMatrix) -> bool:
    return all(not np.any(v.imag) for v in A.diagonals.values())


def _dense(A: DiagMatrix) -> np.ndarray:
    M = to_dense(A)
    return M.real if _is_real(A) else M


def eigenvalues(A: DiagMatrix, tol: float = 1e-8) -> SpectralSample:
    """All ``n`` eigenvalues of ``A``.

    Hermitian input goes through a LAPACK banded (or dense) symmetric
    solver and comes back real and ascending.  Otherwise the general dense
    solver is used and every eigenpair residual ``|A v - lam v|`` is checked
    against ``tol * ||A||_2``.
    """
    n = A.n
    try:
        if A.hermitian:
            k0 = A.band
            if 4 * k0 < n:
                # upper band storage: row k0 - k holds superdiagonal k
                ab = np.zeros((k0 + 1, n), dtype=complex)
                for k in range(k0 + 1):
                    ab[k0 - k, k:] = A.diag(k)
                if not np.any(ab.imag):
                    ab = ab.real
                lam = scipy.linalg.eigvals_banded(ab, lower=False)
            else:
                lam = scipy.linalg.eigvalsh(_dense(A))
            lam = np.sort(np.asarray(lam, dtype=float))
        else:
            M = _dense(A)
            lam, V = scipy.linalg.eig(M)
            scale = max(np.linalg.norm(M, 2), np.finfo(float).tiny)
            res = np.linalg.norm(M @ V - V * lam, axis=0) / np.maximum(np.linalg.norm(V, axis=0), 1e-300)
            if np.any(res > tol * scale):
                raise SolverError(f"eigenpair residual {res.max():.3e} exceeds {tol:g} * ||A||")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SolverError(f"eigensolver failed: {exc}") from exc
    if not np.all(np.isfinite(lam)) or lam.size != n:
        raise SolverError("eigensolver returned non-finite or missing eigenvalues")
    return SpectralSample(n, lam, A.hermitian)


def _check_order(r: int, s: int, max_order: int):
    if r < 0 or s < 0 or r + s < 1:
        raise ValueError("need r, s >= 0 and r + s >= 1")
    if r + s > max_order:
        raise ValueError(f"moment order r + s = {r + s} exceeds the maximum {max_order}")


def moment_trace_dense(A: DiagMatrix, r: int, s: int, max_order: int = MAX_MOMENT_ORDER) -> complex:
    """``(1/n) Tr[A^r (A^*)^s]`` by repeated dense multiplication."""
    _check_order(r, s, max_order)
    M = _dense(A)
    P = np.linalg.matrix_power(M, r) if r else np.eye(A.n)
    if s:
        P = P @ np.linalg.matrix_power(M.conj().T, s)
    return complex(np.trace(P) / A.n)


def count_offset_tuples(k0: int, length: int) -> int:
    """Number of tuples in ``[-k0, k0]^length`` summing to zero."""
    counts = np.zeros(2 * k0 * length + 1, dtype=object)
    counts[k0 * length] = 1
    for _ in range(length):
        nxt = np.zeros_like(counts)
        for h in range(-k0, k0 + 1):
            nxt += np.roll(counts, h)
        counts = nxt
    return int(counts[k0 * length])


def moment_trace_diagonal(A: DiagMatrix, r: int, s: int, max_order: int = MAX_MOMENT_ORDER,
                          budget: int = TUPLE_BUDGET) -> complex:
    """``(1/n) Tr[A^r (A^*)^s]`` as a sum of products of diagonal entries.

    Factor ``m`` of a product term is a single diagonal ``D_{h_m}`` of ``A``
    (first ``r`` factors) or of ``A^*`` (last ``s``; diagonal ``h`` of ``A^*``
    holds ``conj(a_{-h;.})``).  Only tuples with ``h_1 + ... + h_{r+s} = 0``
    reach the main diagonal, and the ``i``-th diagonal entry of the product is
    ``prod_m a_{h_m; i + nu_m}`` with ``nu_m = h_1 + ... + h_{m-1} + min(h_m, 0)``.
    Zero extension of ``a_{k;j}`` takes care of paths leaving the matrix.
    """
    _check_order(r, s, max_order)
    n, k0 = A.n, A.band
    L = r + s
    total = count_offset_tuples(k0, L)
    if total > budget:
        raise ValueError(f"{total} offset tuples exceed the enumeration budget {budget}")

    # zero-padded diagonals so that a_{k; i + nu} is a plain slice for every reachable nu
    pad = L * k0
    width = n + 2 * pad

    def padded(v):
        out = np.zeros(width, dtype=complex)
        out[pad: pad + v.size] = v
        return out

    fwd = {k: padded(v) for k, v in A.diagonals.items()}
    adj = {-k: padded(np.conj(v)) for k, v in A.diagonals.items()}
    tables = [fwd] * r + [adj] * s
    i0 = pad
    acc = np.zeros(n, dtype=complex)

    # depth-first over offset tuples; partial sums that cannot return to 0 are pruned
    def walk(m: int, partial: int, prod: np.ndarray):
        nonlocal acc
        if m == L:
            if partial == 0:
                acc = acc + prod
            return
        remaining = L - m - 1
        for h, diag in tables[m].items():
            if abs(partial + h) > remaining * k0:
                continue
            nu = partial + min(h, 0)
            walk(m + 1, partial + h, prod * diag[i0 + nu: i0 + nu + n])

    walk(0, 0, np.ones(n, dtype=complex))
    return complex(acc.sum() / n)


@dataclass(frozen=True)
class MomentRow:
    r: int
    s: int
    empirical: complex
    predicted: complex

    @property
    def abs_err(self) -> float:
        return abs(self.empirical - self.predicted)

    def to_dict(self) -> dict:
        return {"r": self.r, "s": self.s,
                "empirical_re": self.empirical.real, "empirical_im": self.empirical.imag,
                "predicted_re": self.predicted.real, "predicted_im": self.predicted.imag,
                "abs_err": self.abs_err}


@dataclass
class MomentReport:
    n: int
    method: str
    rows: list[MomentRow] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"n": self.n, "method": self.method, "rows": [row.to_dict() for row in self.rows]}

    @property
    def max_abs_err(self) -> float:
        return max((row.abs_err for row in self.rows), default=0.0)


def test_functional_trace(A: DiagMatrix, phi: Callable, sample: SpectralSample | None = None) -> float:
    """``(1/n) sum_k phi(lambda_k)`` for hermitian ``A``."""
    if not A.hermitian:
        raise ValueError("test_functional_trace needs a hermitian matrix")
    sample = sample or eigenvalues(A)
    vals = np.asarray(phi(sample.eigenvalues), dtype=float) * np.ones(sample.n)
    return float(vals.mean())


# keep pytest from collecting the function above as a test
test_functional_trace.__test__ = False


def empirical_cdf(sample: SpectralSample, grid) -> np.ndarray:
    """``#{lambda_k <= x} / n`` at every grid point."""
    if not sample.hermitian:
        raise ValueError("empirical CDF is only defined for real spectra")
    lam = np.sort(np.asarray(sample.eigenvalues, dtype=float))
    return np.searchsorted(lam, np.asarray(grid, dtype=float), side="right") / sample.n
