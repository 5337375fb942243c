"""Spectrum comparison helpers."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment


def match_spectra(a, b):
    """Optimal one-to-one matching of two eigenvalue lists.

    Returns the largest matched distance and the permutation ``perm`` with
    ``b[perm[i]]`` paired to ``a[i]``.
    """
    a = np.asarray(a, dtype=np.complex128).ravel()
    b = np.asarray(b, dtype=np.complex128).ravel()
    if a.shape != b.shape:
        raise ValueError(f"spectra differ in length: {len(a)} vs {len(b)}")
    if a.size == 0:
        return 0.0, np.zeros(0, dtype=int)
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty_like(cols)
    perm[rows] = cols
    return float(cost[rows, cols].max()), perm


def spectrum_distance(a, b):
    return match_spectra(a, b)[0]


def pairing_defect(values, pair):
    """How far ``values`` is from being closed under ``pair`` (a map on eigenvalues)."""
    values = np.asarray(values, dtype=np.complex128)
    return spectrum_distance(values, pair(values))
