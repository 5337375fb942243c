"""Unitary building blocks: Givens rotations, symplectic embeddings, permutations.

A rotation acting in the plane ``(k, j)`` is the identity except for::

    G[k, k] = c      G[k, j] = -s
    G[j, k] = conj(s) G[j, j] = c

with ``c`` real and nonnegative and the phase carried by ``s``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import DimensionError, as_matrix, eig_sort_key, j_matrix
from .structure import StructureError


@dataclass(frozen=True)
class GivensRotation:
    k: int
    j: int
    c: float
    s: complex

    def __post_init__(self):
        if not 0 <= self.k < self.j:
            raise DimensionError(f"need 0 <= k < j, got k={self.k}, j={self.j}")
        if self.c < 0:
            raise ValueError("c must be nonnegative")
        if abs(self.c ** 2 + abs(self.s) ** 2 - 1) > 1e-14:
            raise ValueError("c^2 + |s|^2 must equal 1")

    @classmethod
    def identity(cls, k=0, j=1):
        return cls(k, j, 1.0, 0j)

    def block(self):
        """The active 2 x 2 part ``[[c, -s], [conj(s), c]]``."""
        return np.array([[self.c, -self.s], [np.conj(self.s), self.c]], dtype=np.complex128)

    def matrix(self, n):
        if self.j >= n:
            raise DimensionError(f"rotation plane ({self.k}, {self.j}) outside dimension {n}")
        g = np.eye(n, dtype=np.complex128)
        idx = np.ix_([self.k, self.j], [self.k, self.j])
        g[idx] = self.block()
        return g


class Side(str, enum.Enum):
    LEFT_ADJOINT = "left_adjoint"
    RIGHT = "right"
    SIMILARITY = "similarity"


def rotate_inplace(a, g, side=Side.SIMILARITY):
    """Overwrite ``a`` with ``G^H a``, ``a G`` or ``G^H a G``; only rows/columns k, j change."""
    side = Side(side)
    k, j, c, s = g.k, g.j, g.c, g.s
    sc = np.conj(s)
    if side in (Side.RIGHT, Side.SIMILARITY):
        ck = a[:, k].copy()
        cj = a[:, j]
        a[:, k] = c * ck + sc * cj
        a[:, j] = c * cj - s * ck
    if side in (Side.LEFT_ADJOINT, Side.SIMILARITY):
        rk = a[k, :].copy()
        rj = a[j, :]
        a[k, :] = c * rk + s * rj
        a[j, :] = c * rj - sc * rk
    return a


def givens_apply(a, g, side=Side.SIMILARITY):
    a = as_matrix(a)
    n = a.shape[1] if Side(side) is Side.RIGHT else a.shape[0]
    if g.j >= n or (Side(side) is Side.SIMILARITY and a.shape[0] != a.shape[1]):
        raise DimensionError(f"rotation plane ({g.k}, {g.j}) does not fit shape {a.shape}")
    if Side(side) is Side.LEFT_ADJOINT and g.j >= a.shape[0]:
        raise DimensionError("rotation rows out of range")
    return rotate_inplace(a, g, side)


def rotation_from_column(v, k=0, j=1):
    """Rotation whose k-th column is the unit vector ``(v[0], v[1])`` up to a phase."""
    v = np.asarray(v, dtype=np.complex128)
    v = v / np.linalg.norm(v)
    if abs(v[0]) > 0:
        v = v * (abs(v[0]) / v[0])
    c = float(min(1.0, abs(v[0])))
    s = complex(np.conj(v[1]))
    # renormalise so that c^2 + |s|^2 == 1 to the last bit we can manage
    r = math.hypot(c, abs(s))
    return GivensRotation(k, j, c / r, s / r)


def symplectic_embed(g, n):
    """The direct sum ``G (+) G`` of an n x n rotation, a 2n x 2n unitary symplectic matrix."""
    gm = g.matrix(n)
    out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    out[:n, :n] = gm
    out[n:, n:] = gm
    return out


def q_block_map(m):
    """``Q = [[I, iI], [iI, I]] / sqrt(2)`` of size 2m."""
    eye = np.eye(m)
    return np.block([[eye, 1j * eye], [1j * eye, eye]]) / math.sqrt(2)


def symplectic_from_blockdiag(v1, v2, tol=1e-10):
    """Return ``Q diag(V1, V2) Q^H = [[V1+V2, i(V2-V1)], [-i(V2-V1), V1+V2]] / 2``.

    Unitary ``V1``, ``V2`` give a unitary symplectic result.
    """
    v1 = as_matrix(v1, "v1")
    v2 = as_matrix(v2, "v2")
    if v1.shape != v2.shape or v1.shape[0] != v1.shape[1]:
        raise DimensionError(f"need equal square blocks, got {v1.shape} and {v2.shape}")
    m = v1.shape[0]
    for name, v in (("v1", v1), ("v2", v2)):
        if np.linalg.norm(v.conj().T @ v - np.eye(m)) > tol * math.sqrt(m):
            raise ValueError(f"{name} is not unitary")
    s1 = (v1 + v2) / 2
    s2 = 1j * (v2 - v1) / 2
    return np.block([[s1, s2], [-s2, s1]])


def hermitian_2x2_rotation(app, aqq, apq, k=0, j=1):
    """Smaller-angle rotation annihilating ``apq`` of the Hermitian block [[app, apq], [conj(apq), aqq]].

    Returns the rotation and the two new diagonal entries.
    """
    r = abs(apq)
    if r == 0:
        return GivensRotation(k, j, 1.0, 0j), app, aqq
    phase = apq / r
    theta = (aqq - app) / (2 * r)
    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
    if theta > 0:
        t = -t
    c = 1.0 / math.sqrt(1.0 + t * t)
    sig = t * c
    return GivensRotation(k, j, c, sig * phase), app + t * r, aqq - t * r


def _spread(h):
    return math.hypot(abs(h[0, 0] - h[1, 1]) / 2, abs(h[0, 1]))


def diagonalize_normal_2x2(a, tol=1e-10):
    """Unitarily diagonalize a normal 2 x 2 matrix with one rotation.

    The rotation comes from whichever of the Hermitian part and ``-i`` times
    the skew-Hermitian part is further from a multiple of the identity; by
    normality it then diagonalizes the other part as well.

    Returns
    -------
    g : GivensRotation
        ``G^H a G = diag(eig1, eig2)``.
    eig1, eig2 : complex
        ``eig1`` has the larger real part, ties broken by larger imaginary part.
    """
    a = as_matrix(a)
    if a.shape != (2, 2):
        raise DimensionError("expected a 2 x 2 matrix")
    nrm = float(np.linalg.norm(a))
    ah = a.conj().T
    if np.linalg.norm(a @ ah - ah @ a) > tol * max(nrm, 1e-300) ** 2:
        raise StructureError("2 x 2 input is not normal")
    b = (a + ah) / 2
    f = -1j * (a - ah) / 2
    # rotate by whichever Hermitian matrix is further from a multiple of I
    h = b if _spread(b) >= _spread(f) else f
    g0, _, _ = hermitian_2x2_rotation(h[0, 0].real, h[1, 1].real, h[0, 1])
    vecs = g0.block()
    mu = [complex(vecs[:, i].conj() @ a @ vecs[:, i]) for i in range(2)]
    first = 0 if eig_sort_key(mu[0]) <= eig_sort_key(mu[1]) else 1
    g = rotation_from_column(vecs[:, first])
    d = g.block().conj().T @ a @ g.block()
    return g, complex(d[0, 0]), complex(d[1, 1])


@dataclass(frozen=True)
class PermutationSpec:
    """``image[i]`` is the source index that lands in position ``i``."""

    image: tuple

    def __post_init__(self):
        img = tuple(int(i) for i in self.image)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation: {img}")
        object.__setattr__(self, "image", img)

    def __len__(self):
        return len(self.image)

    @classmethod
    def identity(cls, m):
        return cls(tuple(range(m)))

    def then(self, other):
        """Permutation equivalent to applying ``self`` first and ``other`` second (``P_self P_other``)."""
        if len(other) != len(self):
            raise DimensionError("permutation sizes differ")
        return PermutationSpec(tuple(self.image[i] for i in other.image))

    def inverse(self):
        inv = [0] * len(self)
        for i, src in enumerate(self.image):
            inv[src] = i
        return PermutationSpec(tuple(inv))


def permutation_matrix(p):
    """``P`` with ``P[p.image[i], i] = 1`` so that ``A P`` reorders columns by ``image``."""
    m = len(p)
    out = np.zeros((m, m))
    out[list(p.image), list(range(m))] = 1.0
    return out


def apply_permutation_similarity(a, p):
    """``P^T a P`` computed by indexing."""
    a = as_matrix(a)
    if a.shape != (len(p), len(p)):
        raise DimensionError(f"permutation of size {len(p)} does not fit {a.shape}")
    idx = list(p.image)
    return a[np.ix_(idx, idx)]


def sign_pair_to_flip():
    """``Z = [[1, 1], [1, -1]] / sqrt(2)`` with ``Z^H diag(1, -1) Z = F_2``."""
    return np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)


def symplectic_residual(s):
    s = np.asarray(s)
    j = j_matrix(s.shape[0] // 2)
    return float(np.linalg.norm(s.conj().T @ j @ s - j))
