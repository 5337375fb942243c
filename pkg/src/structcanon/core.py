"""Dense complex matrix helpers shared by every algorithm module.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Public
functions take and return new arrays; the only in-place path is
:func:`structcanon.transform.rotate_inplace`, used inside Jacobi sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class StructCanonError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(StructCanonError, ValueError):
    """Raised on shape mismatches and out-of-range indices."""


def as_matrix(a, name="a"):
    """Return ``a`` as a 2-D complex128 array, rejecting NaN/Inf."""
    m = np.array(a, dtype=np.complex128, copy=True)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def require_square(a, name="a"):
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")


def require_even(a, name="a"):
    require_square(a, name)
    if a.shape[0] % 2:
        raise DimensionError(f"{name} must have even dimension, got {a.shape[0]}")


def mat_mul(a, b):
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a):
    """Conjugate transpose."""
    return as_matrix(a).conj().T.copy()


def frobenius_norm(a):
    return float(np.linalg.norm(np.asarray(a, dtype=np.complex128), "fro"))


def off_diagonal_norm(a):
    """Frobenius norm of ``a`` with its diagonal zeroed."""
    a = np.asarray(a, dtype=np.complex128)
    require_square(a)
    off = a.copy()
    np.fill_diagonal(off, 0)
    return float(np.linalg.norm(off, "fro"))


def j_matrix(n):
    """The 2n x 2n matrix [[0, I], [-I, 0]]."""
    if n < 1:
        raise ValueError("n must be positive")
    j = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


def f_matrix(m):
    """The m x m flip matrix (ones on the antidiagonal)."""
    if m < 1:
        raise ValueError("m must be positive")
    return np.fliplr(np.eye(m)).astype(np.complex128)


@dataclass(frozen=True)
class BlockIndex:
    """Half-open, 0-based row and column ranges of a sub-block."""

    row_start: int
    row_end: int
    col_start: int
    col_end: int

    @classmethod
    def square(cls, start, stop):
        return cls(start, stop, start, stop)

    def check(self, shape):
        rows, cols = shape
        if not (0 <= self.row_start < self.row_end <= rows
                and 0 <= self.col_start < self.col_end <= cols):
            raise DimensionError(f"{self} out of range for shape {shape}")

    @property
    def shape(self):
        return (self.row_end - self.row_start, self.col_end - self.col_start)

    @property
    def slices(self):
        return (slice(self.row_start, self.row_end), slice(self.col_start, self.col_end))


def block_get(a, idx):
    a = np.asarray(a, dtype=np.complex128)
    idx.check(a.shape)
    return a[idx.slices].copy()


def block_set(a, idx, b):
    """Return a copy of ``a`` with the block at ``idx`` replaced by ``b``."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    idx.check(a.shape)
    if b.shape != idx.shape:
        raise DimensionError(f"block shape {b.shape} does not match {idx.shape}")
    out = a.copy()
    out[idx.slices] = b
    return out


def eig_sort_key(z):
    """Repository-wide eigenvalue order: real part descending, then imaginary part descending."""
    z = complex(z)
    return (-z.real, -z.imag)


def sort_order(values):
    """Stable permutation placing ``values`` in :func:`eig_sort_key` order."""
    values = np.asarray(values)
    return sorted(range(len(values)), key=lambda i: eig_sort_key(values[i]))
