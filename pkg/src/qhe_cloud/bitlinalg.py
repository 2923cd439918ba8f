"""Dense linear algebra over GF(2).

Matrices and vectors are plain ``numpy`` arrays of dtype ``uint8`` holding
0/1 entries, row-major. Randomness always comes from a caller-supplied
:class:`numpy.random.Generator` so key generation is reproducible.
"""
from __future__ import annotations

import numpy as np

from . import HEError, ShapeError


class SingularMatrixError(HEError, ArithmeticError):
    """Raised when a GF(2) matrix has no inverse."""


def as_bits(m) -> np.ndarray:
    """Coerce ``m`` to a uint8 0/1 array, rejecting any other entry value."""
    arr = np.asarray(m)
    if arr.size == 0:
        raise ShapeError("empty bit array")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("bit arrays may only contain 0 and 1")
    return arr.astype(np.uint8)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def gf2_matmul(a, b) -> np.ndarray:
    """Matrix (or row-vector) product over GF(2): AND-multiply, XOR-accumulate."""
    a = as_bits(a)
    b = as_bits(b)
    if b.ndim != 2 or a.ndim not in (1, 2) or a.shape[-1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape} over GF(2)")
    # integer product counts the ones; parity is the XOR-sum
    return (a.astype(np.int64) @ b.astype(np.int64) & 1).astype(np.uint8)


def gf2_invert(m) -> np.ndarray:
    """Inverse of a square GF(2) matrix by Gauss-Jordan elimination.

    Raises :class:`SingularMatrixError` when ``m`` has rank < n.
    """
    m = as_bits(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"only square matrices are invertible, got {m.shape}")
    n = m.shape[0]
    aug = np.concatenate([m, identity(n)], axis=1)
    for col in range(n):
        pivots = np.nonzero(aug[col:, col])[0]
        if pivots.size == 0:
            raise SingularMatrixError(f"matrix is singular (no pivot in column {col})")
        piv = col + pivots[0]
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        rows = np.nonzero(aug[:, col])[0]
        rows = rows[rows != col]
        aug[rows] ^= aug[col]
    return aug[:, n:].copy()


def random_invertible(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random invertible n x n matrix, by rejection sampling."""
    if n < 1:
        raise ValueError("n must be >= 1")
    while True:
        m = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
        try:
            gf2_invert(m)
        except SingularMatrixError:
            continue
        return m


def random_permutation(n: int, rng: np.random.Generator) -> np.ndarray:
    """n x n identity matrix with its columns shuffled."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return identity(n)[:, rng.permutation(n)]
