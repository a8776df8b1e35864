"""Dense direct solves and conditioning diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla


@dataclass
class DenseFactorization:
    """Pivoted LU factors of a square matrix."""

    lu: np.ndarray
    piv: np.ndarray
    size: int

    def solve(self, b: np.ndarray) -> np.ndarray:
        return sla.lu_solve((self.lu, self.piv), b)


def factorize(A: np.ndarray) -> DenseFactorization:
    A = np.asarray(A, dtype=float)
    n, m = A.shape
    if n != m:
        raise ValueError(f"factorize: matrix is {n}x{m}, not square")
    lu, piv = sla.lu_factor(A)
    d = np.abs(np.diag(lu))
    if not np.all(np.isfinite(lu)) or d.min() == 0.0:
        raise np.linalg.LinAlgError("numerically singular matrix")
    return DenseFactorization(lu=lu, piv=piv, size=n)


def lu_solve(A: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    return factorize(A).solve(np.asarray(rhs, dtype=float))


def condition_number(A: np.ndarray) -> float:
    """sigma_max / sigma_min by full SVD."""
    s = sla.svdvals(np.asarray(A, dtype=float))
    if s[-1] < np.finfo(float).tiny:
        return np.inf
    return s[0] / s[-1]
