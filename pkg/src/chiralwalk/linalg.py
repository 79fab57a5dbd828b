"""Dense complex-matrix kernel shared by the operator-level modules.

Matrices are plain 2-D ``numpy.ndarray`` values of dtype ``complex128`` in
row-major order.  Everything here is a pure function of its inputs and
deterministic for a fixed input: products go through BLAS with a fixed
summation schedule, and the SVD is LAPACK ``gesdd`` (converged to machine
precision, ~1e-12 relative).  Storage is dense throughout; truncation sizes
stay small enough (<= ~5000) that sparsity tricks are not worth the loss of
auditability.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


def as_matrix(values) -> np.ndarray:
    """Coerce to a 2-D complex128 array, validating the shape."""
    m = np.asarray(values, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    return m


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product with an explicit dimension check."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def adjoint(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose, returned as a fresh array."""
    return as_matrix(m).conj().T.copy()


def trace(m: np.ndarray) -> complex:
    """Sum of diagonal entries of a square matrix."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"trace needs a square matrix, got {m.shape}")
    return complex(np.trace(m))


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(as_matrix(m)))


class RankProfile(NamedTuple):
    kernel_dim: int
    cokernel_dim: int
    singular_values: np.ndarray


def svd_rank_profile(m: np.ndarray, tol: float) -> RankProfile:
    """Numerical kernel and cokernel dimensions at an explicit tolerance.

    ``kernel_dim = cols - #{s_i > tol}`` and ``cokernel_dim = rows - rank``;
    singular values are returned in nonincreasing order.  The tolerance is
    always an explicit argument, never an internal default.
    """
    m = as_matrix(m)
    if not (tol > 0):
        raise ValueError(f"tolerance must be positive, got {tol}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    s = np.linalg.svd(m, compute_uv=False)
    rank = int(np.count_nonzero(s > tol))
    rows, cols = m.shape
    return RankProfile(cols - rank, rows - rank, s)


# ---------------------------------------------------------------------------
# 2x2 block matrices whose blocks are diagonal.
#
# Coin-type operators on H (+) H have the form [[D11, D12], [D21, D22]] with
# every block a diagonal matrix.  Multiplying by such an operator only ever
# combines two scaled copies of each row or column, so the products below are
# entrywise identical to a dense matmul (each output entry is the same 2-term
# sum) at O(n^2) cost instead of O(n^3).


def block2(b11, b12, b21, b22) -> np.ndarray:
    """Assemble a dense 2x2 block matrix."""
    return np.block([[as_matrix(b11), as_matrix(b12)],
                     [as_matrix(b21), as_matrix(b22)]])


def diag_block2(d11, d12, d21, d22) -> np.ndarray:
    """Dense 2x2 block matrix with diagonal blocks given as 1-D arrays."""
    d11, d12, d21, d22 = (np.asarray(v, dtype=np.complex128) for v in (d11, d12, d21, d22))
    n = len(d11)
    out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    idx = np.arange(n)
    out[idx, idx] = d11
    out[idx, idx + n] = d12
    out[idx + n, idx] = d21
    out[idx + n, idx + n] = d22
    return out


def mul_diag_block_left(d, x: np.ndarray) -> np.ndarray:
    """D @ x for D the 2x2 diagonal-block matrix with blocks d = (d11, d12, d21, d22)."""
    d11, d12, d21, d22 = (np.asarray(v) for v in d)
    n = x.shape[0] // 2
    if x.shape[0] != 2 * n:
        raise ValueError("row count must be even")
    top, bot = x[:n], x[n:]
    return np.vstack([d11[:, None] * top + d12[:, None] * bot,
                      d21[:, None] * top + d22[:, None] * bot])


def mul_diag_block_right(x: np.ndarray, d) -> np.ndarray:
    """x @ D for D the 2x2 diagonal-block matrix with blocks d = (d11, d12, d21, d22)."""
    d11, d12, d21, d22 = (np.asarray(v) for v in d)
    n = x.shape[1] // 2
    if x.shape[1] != 2 * n:
        raise ValueError("column count must be even")
    left, right = x[:, :n], x[:, n:]
    return np.hstack([left * d11 + right * d21, left * d12 + right * d22])


def diag_block_product(d, e):
    """Blocks of D @ E when both factors are 2x2 diagonal-block matrices."""
    d11, d12, d21, d22 = (np.asarray(v) for v in d)
    e11, e12, e21, e22 = (np.asarray(v) for v in e)
    return (d11 * e11 + d12 * e21, d11 * e12 + d12 * e22,
            d21 * e11 + d22 * e21, d21 * e12 + d22 * e22)
