"""Numerical checks of the hypotheses behind the limit theorems.

Per-diagonal variation (vanishing mean variation), moment discrepancies of
the diagonal cross-sections against a target law, the row-sum constant
that bounds eigenvalues and singular values, norms, and the index-shift
defect.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .ensembles import DiagMatrix, build, to_dense
from .limitlaw import LimitLaw
from .spectral import eigenvalues

__all__ = [
    "VmvReport",
    "BoundReport",
    "vmv_variation",
    "vmv_profile",
    "shift_defect",
    "gershgorin_bound",
    "cond_szego_sup",
    "trace_norm",
    "spectral_norm",
    "singular_values",
    "bound_report",
    "diagonal_vectors",
    "empirical_diag_discrepancy",
]

TREND_SLACK = 1e-9


def vmv_variation(A: DiagMatrix, k: int) -> float:
    """``sum_j |a_{k;j+1} - a_{k;j}|`` along diagonal ``k``."""
    if abs(k) >= A.n:
        raise ValueError(f"offset {k} is outside an {A.n} x {A.n} matrix")
    v = A.diagonals.get(k)
    if v is None or v.size < 2:
        return 0.0
    return float(np.abs(np.diff(v)).sum())


@dataclass
class VmvReport:
    """``V_k(n)`` and ``V_k(n) / n`` for every stored offset ``k`` over an n-grid."""

    n_grid: list[int]
    variation: dict[int, list[float]] = field(default_factory=dict)

    def normalized(self, k: int) -> list[float]:
        return [v / n for v, n in zip(self.variation[k], self.n_grid)]

    def verdict(self, k: int) -> str:
        tail = self.normalized(k)[-3:]
        steps = list(zip(tail, tail[1:]))
        if all(b <= a + TREND_SLACK for a, b in steps):
            return "nonincreasing tail"
        # a tail that grows at every step is evidence against o(n) variation
        if all(b > a + TREND_SLACK for a, b in steps):
            return "fail"
        return "inconclusive"

    @property
    def passed(self) -> bool:
        return all(self.verdict(k) == "nonincreasing tail" for k in self.variation)

    def rows(self):
        for k, vals in self.variation.items():
            for n, v in zip(self.n_grid, vals):
                yield k, n, v

    def to_dict(self) -> dict:
        return {
            "n_grid": list(self.n_grid),
            "diagonals": {str(k): {"variation": vals, "normalized": self.normalized(k),
                                   "verdict": self.verdict(k)} for k, vals in self.variation.items()},
            "passed": self.passed,
        }

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["k", "n", "value"])
            for k, n, v in self.rows():
                w.writerow([k, n, format(v, ".17g")])


def vmv_profile(spec, n_grid, seed: int = 0) -> VmvReport:
    n_grid = [int(n) for n in n_grid]
    if len(n_grid) < 3 or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ValueError("n_grid must be strictly increasing with at least three entries")
    mats = [build(spec, n, seed) for n in n_grid]
    offsets = sorted(set().union(*(A.offsets for A in mats)))
    report = VmvReport(n_grid)
    for k in offsets:
        report.variation[k] = [vmv_variation(A, k) if abs(k) < A.n else 0.0 for A in mats]
    return report


def _shifted(v: np.ndarray, shift: int, n: int) -> np.ndarray:
    """``v[shift + j]`` for ``j = 0..n-1`` with zeros outside ``v``."""
    out = np.zeros(n, dtype=complex)
    lo, hi = max(0, -shift), min(n, v.size - shift)
    if hi > lo:
        out[lo:hi] = v[lo + shift: hi + shift]
    return out


def shift_defect(A: DiagMatrix, offsets, shifts) -> float:
    """``(1/n) |sum_j prod_m a_{h_m; nu_m + j} - sum_j prod_m a_{h_m; j}|``, ``j = 0..n-1``."""
    offsets, shifts = list(offsets), list(shifts)
    if not offsets or len(offsets) != len(shifts):
        raise ValueError("need p >= 1 offsets and one shift per offset")
    n = A.n
    moved = np.ones(n, dtype=complex)
    fixed = np.ones(n, dtype=complex)
    for h, nu in zip(offsets, shifts):
        v = A.diag(h)
        moved *= _shifted(v, nu, n)
        fixed *= _shifted(v, 0, n)
    return float(abs(moved.sum() - fixed.sum()) / n)


def gershgorin_bound(A: DiagMatrix) -> float:
    """``sum_k max_j |a_{k;j}|``; dominates every row sum of ``|A|``."""
    return float(sum(np.abs(v).max() for v in A.diagonals.values() if v.size))


def cond_szego_sup(spec, n_grid, seed: int = 0) -> float:
    return max(gershgorin_bound(build(spec, int(n), seed)) for n in n_grid)


def singular_values(A: DiagMatrix) -> np.ndarray:
    M = to_dense(A)
    if not np.any(M.imag):
        M = M.real
    return np.linalg.svd(M, compute_uv=False)


def trace_norm(A) -> float:
    """Sum of singular values (``A`` may be a DiagMatrix or a dense array)."""
    s = singular_values(A) if isinstance(A, DiagMatrix) else np.linalg.svd(np.asarray(A), compute_uv=False)
    return float(s.sum())


def spectral_norm(A) -> float:
    s = singular_values(A) if isinstance(A, DiagMatrix) else np.linalg.svd(np.asarray(A), compute_uv=False)
    return float(s.max()) if s.size else 0.0


@dataclass(frozen=True)
class BoundReport:
    n: int
    row_sum_bound: float
    spectral_norm: float
    trace_norm: float
    max_abs_eigenvalue: float
    max_singular_value: float

    @property
    def holds(self) -> bool:
        return (self.max_abs_eigenvalue <= self.row_sum_bound + 1e-9
                and self.max_singular_value <= self.row_sum_bound + 1e-9)

    def to_dict(self) -> dict:
        return {"n": self.n, "row_sum_bound": self.row_sum_bound, "spectral_norm": self.spectral_norm,
                "trace_norm": self.trace_norm, "max_abs_eigenvalue": self.max_abs_eigenvalue,
                "max_singular_value": self.max_singular_value, "holds": self.holds}

    def rows(self):
        for key in ("row_sum_bound", "spectral_norm", "trace_norm", "max_abs_eigenvalue", "max_singular_value"):
            yield key, self.n, getattr(self, key)


def bound_report(A: DiagMatrix, sample=None) -> BoundReport:
    s = singular_values(A)
    lam = (sample or eigenvalues(A)).eigenvalues
    return BoundReport(A.n, gershgorin_bound(A), float(s.max()), float(s.sum()),
                       float(np.abs(lam).max()), float(s.max()))


def diagonal_vectors(A: DiagMatrix, window: int) -> np.ndarray:
    """Cross-sections ``(a_{-w;j}, ..., a_{w;j})`` for ``j = 0..n-1``, zero-extended."""
    n = A.n
    out = np.zeros((n, 2 * window + 1), dtype=complex)
    for k in range(-window, window + 1):
        if abs(k) < n:
            v = A.diag(k)
            out[: v.size, k + window] = v
    return out


def empirical_diag_discrepancy(A: DiagMatrix, window: int, target: LimitLaw) -> float:
    """Max gap between empirical and target averages of ``z_k`` and ``z_k conj(z_l)``, ``|k|, |l| <= window``."""
    if window > target.band:
        raise ValueError(f"window {window} exceeds the target band {target.band}")
    vecs = diagonal_vectors(A, window)
    first = vecs.mean(axis=0)
    second = np.einsum("jk,jl->kl", vecs, np.conj(vecs)) / A.n
    t1, t2 = target.coefficient_moments(window)
    return float(max(np.abs(first - t1).max(), np.abs(second - t2).max()))
