"""Canonical form of normal per-Hermitian matrices under unitary perplectic similarity.

For a normal per-Hermitian ``M`` of size 2n there is a unitary ``U`` with
``U^H F U = F`` and::

    U^H M U = diag(D, X, F D^H F)

``D`` is diagonal and carries one member of every conjugate pair of
non-real eigenvalues, ``X`` (2r x 2r) is real, symmetric and persymmetric
with ``a_k`` at positions ``(k, k)`` and ``(2r-1-k, 2r-1-k)`` and ``b_k`` at
``(k, 2r-1-k)`` and ``(2r-1-k, k)``. Its eigenvalues ``a_k +- b_k`` are the
real eigenvalues of ``M``.

The construction starts from any unitary diagonalization of ``M``. Because
``F M = M^H F``, eigenvectors of ``M`` are F-orthogonal unless their
eigenvalues are conjugate, so ``U^H F U`` is block sparse. Its blocks are
removed stage by stage with unitary transformations that keep ``U^H M U``
diagonal or X-shaped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .core import DimensionError, as_matrix, f_matrix, require_even
from .jacobi import (
    DEFAULT_MAX_SWEEPS,
    DEFAULT_TOL,
    ConvergenceError,
    cluster_values,
    hermitian_jacobi,
    normal_diagonalize_gh,
)
from .structure import Structure, StructureError, require_normal, require_structure
from .transform import PermutationSpec, sign_pair_to_flip

RESIDUAL_FACTOR = 50
#: eigenvalues of the Hermitian unitary blocks S(mu) must be this close to +-1
SNAP_TOL = 1e-6


@dataclass(frozen=True)
class EigenGrouping:
    """Spectrum split into conjugate pairs and real clusters.

    ``complex_pairs`` holds ``(lambda, multiplicity)`` with ``Im(lambda) > 0``
    ordered by real part then imaginary part, both descending; ``reals``
    holds ``(mu, multiplicity)`` in descending order. ``column_order`` sends
    the original eigenvalue positions to the layout
    ``lambda_1, conj(lambda_1), ..., lambda_t, conj(lambda_t), mu_1, ..., mu_s``.
    """

    complex_pairs: tuple
    reals: tuple
    column_order: PermutationSpec

    @property
    def t(self):
        return len(self.complex_pairs)

    @property
    def r(self):
        return sum(m for _, m in self.reals) // 2

    @property
    def c(self):
        return sum(m for _, m in self.complex_pairs)

    def lambda_slices(self):
        """Column ranges (in grouped order) of each ``(lambda_j, conj(lambda_j))`` pair."""
        out = []
        pos = 0
        for _, m in self.complex_pairs:
            out.append((slice(pos, pos + m), slice(pos + m, pos + 2 * m)))
            pos += 2 * m
        return out

    def mu_slices(self):
        out = []
        pos = 2 * self.c
        for _, m in self.reals:
            out.append(slice(pos, pos + m))
            pos += m
        return out


def group_spectrum(eigs, tol_cluster, tol_real, scale=1.0):
    """Group eigenvalues into conjugate pairs and real clusters.

    Values with ``|Im| <= tol_real * scale`` are real. The others are
    clustered (single linkage, ``tol_cluster``) and each cluster in the upper
    half plane is matched with the cluster holding the conjugates.

    Raises
    ------
    StructureError
        A complex cluster has no conjugate partner of equal multiplicity, or
        the number of real eigenvalues is odd.
    """
    if tol_cluster <= 0 or tol_real <= 0:
        raise ValueError("tolerances must be positive")
    eigs = np.asarray(eigs, dtype=np.complex128).ravel()
    real_idx = [i for i in range(len(eigs)) if abs(eigs[i].imag) <= tol_real * scale]
    upper = [i for i in range(len(eigs)) if eigs[i].imag > tol_real * scale]
    lower = [i for i in range(len(eigs)) if eigs[i].imag < -tol_real * scale]

    def clusters(idx, vals):
        if not idx:
            return []
        cl = cluster_values(vals, tol_cluster)
        return [[idx[k] for k in grp] for grp in cl.groups()]

    up = clusters(upper, eigs[upper])
    low = clusters(lower, eigs[lower])
    low_means = [eigs[g].mean() for g in low]
    used = set()
    pairs = []
    for grp in up:
        target = eigs[grp].mean().conjugate()
        cand = [k for k in range(len(low)) if k not in used]
        if not cand:
            raise StructureError(f"eigenvalue {eigs[grp[0]]:.6g} has no conjugate partner")
        k = min(cand, key=lambda k: abs(low_means[k] - target))
        reach = tol_cluster * max(len(grp), len(low[k]))
        if abs(low_means[k] - target) > reach or len(low[k]) != len(grp):
            raise StructureError(
                f"eigenvalue {eigs[grp[0]]:.6g} (multiplicity {len(grp)}) has no matching "
                "conjugate cluster")
        used.add(k)
        lam = (eigs[grp].sum() + eigs[low[k]].conj().sum()) / (2 * len(grp))
        pairs.append((complex(lam), grp, low[k]))
    if len(used) != len(low):
        raise StructureError("unpaired eigenvalue in the lower half plane")
    if len(real_idx) % 2:
        raise StructureError(f"odd number ({len(real_idx)}) of real eigenvalues")
    reals = []
    for grp in clusters(real_idx, eigs[real_idx].real):
        reals.append((float(eigs[grp].real.mean()), grp))

    pairs.sort(key=lambda p: (-p[0].real, -p[0].imag))
    reals.sort(key=lambda p: -p[0])
    image = []
    for _, g_up, g_low in pairs:
        image.extend(g_up)
        image.extend(g_low)
    for _, grp in reals:
        image.extend(grp)
    return EigenGrouping(
        complex_pairs=tuple((lam, len(g)) for lam, g, _ in pairs),
        reals=tuple((mu, len(g)) for mu, g in reals),
        column_order=PermutationSpec(tuple(image)),
    )


def _f_pattern_mask(grouping, size):
    mask = np.zeros((size, size), dtype=bool)
    for lam, lamb in grouping.lambda_slices():
        mask[lam, lamb] = True
        mask[lamb, lam] = True
    for mu in grouping.mu_slices():
        mask[mu, mu] = True
    return mask


def extract_f_blocks(u, grouping, tol):
    """Blocks ``S(lambda_j)`` and ``S(mu_j)`` of ``G = u^H F u``.

    ``u`` must be unitary with columns in ``grouping`` order. ``G`` is
    nonzero only between conjugate eigenvalue groups; the mass outside that
    pattern and the deviation of each block from unitarity (and, for the
    real blocks, Hermitian symmetry) are checked against ``tol * ||G||_F``.
    """
    u = as_matrix(u, "u")
    size = u.shape[0]
    if u.shape[1] != size or len(grouping.column_order) != size:
        raise DimensionError("u and grouping sizes differ")
    g = u.conj().T @ f_matrix(size) @ u
    bound = tol * max(1.0, math.sqrt(size))
    off = float(np.linalg.norm(g[~_f_pattern_mask(grouping, size)]))
    if off > bound:
        raise StructureError(
            f"U^H F U has {off:.3e} outside the conjugate-pair pattern; "
            "eigenvalue grouping does not fit the tolerance")
    s_lambda = []
    for lam, lamb in grouping.lambda_slices():
        s = g[lam, lamb]
        _check_unitary(s, bound, "S(lambda)")
        s_lambda.append(s.copy())
    s_mu = []
    for mu in grouping.mu_slices():
        s = g[mu, mu]
        if np.linalg.norm(s - s.conj().T) > bound:
            raise StructureError("S(mu) block is not Hermitian")
        _check_unitary(s, bound, "S(mu)")
        s_mu.append((s + s.conj().T) / 2)
    return s_lambda, s_mu


def _check_unitary(s, bound, what):
    if np.linalg.norm(s.conj().T @ s - np.eye(s.shape[0])) > bound:
        raise StructureError(f"{what} block is not unitary")


def assemble_perh_canonical(d, x_a, x_b):
    """``diag(D, X, F D^H F)`` from the diagonal of ``D`` and the X data."""
    d = np.asarray(d, dtype=np.complex128).ravel()
    x_a = np.asarray(x_a, dtype=float).ravel()
    x_b = np.asarray(x_b, dtype=float).ravel()
    if len(x_a) != len(x_b):
        raise ValueError("x_a and x_b must have equal length")
    c, r = len(d), len(x_a)
    size = 2 * (c + r)
    out = np.zeros((size, size), dtype=np.complex128)
    idx = np.arange(c)
    out[idx, idx] = d
    out[size - 1 - idx, size - 1 - idx] = d.conj()
    k = np.arange(r)
    lo = c + k
    hi = c + 2 * r - 1 - k
    out[lo, lo] = x_a
    out[hi, hi] = x_a
    out[lo, hi] = x_b
    out[hi, lo] = x_b
    return out


@dataclass
class PerHCanonicalForm:
    """Canonical data for ``diag(D, X, F D^H F)`` plus the unitary perplectic ``u``.

    ``d`` lists the diagonal of ``D`` entry by entry; ``complex_eigs`` groups
    it into ``(value, multiplicity)``. ``factor`` is ``1`` for per-Hermitian
    input and ``1j`` when the form belongs to a perskew-Hermitian ``K = i M``;
    then ``u^H K u == factor * pattern``.
    """

    n: int
    t: int
    complex_eigs: list
    x_a: np.ndarray
    x_b: np.ndarray
    u: np.ndarray
    residual_canonical: float
    d: np.ndarray = field(default=None)
    factor: complex = 1.0
    sweeps: int = 0

    def __post_init__(self):
        if self.d is None:
            self.d = np.array([v for v, m in self.complex_eigs for _ in range(m)],
                              dtype=np.complex128)

    @property
    def r(self):
        return len(self.x_a)

    def x_matrix(self):
        return assemble_perh_canonical([], self.x_a, self.x_b)

    def pattern(self):
        return assemble_perh_canonical(self.d, self.x_a, self.x_b)

    def canonical_matrix(self):
        return self.factor * self.pattern()

    def real_eigenvalues(self):
        return np.concatenate([self.x_a + self.x_b, self.x_a - self.x_b])

    def per_hermitian_eigenvalues(self):
        d = np.asarray(self.d, dtype=np.complex128)
        return np.concatenate([d, d.conj(), self.real_eigenvalues()])

    def eigenvalues(self):
        """Spectrum of the matrix the form was computed for."""
        return self.factor * self.per_hermitian_eigenvalues()

    def scaled_data(self):
        return (self.factor * np.asarray(self.d), self.factor * np.asarray(self.x_a),
                self.factor * np.asarray(self.x_b))

    def to_dict(self, include_transform=False):
        out = {
            "class": "perskewh" if self.factor != 1 else "perh",
            "n": self.n,
            "t": self.t,
            "r": self.r,
            "complex_eigs": [[float(v.real), float(v.imag), int(m)] for v, m in self.complex_eigs],
            "d": [[float(v.real), float(v.imag)] for v in np.asarray(self.d, dtype=complex)],
            "x_a": [float(v) for v in self.x_a],
            "x_b": [float(v) for v in self.x_b],
            "factor": [float(np.real(self.factor)), float(np.imag(self.factor))],
            "residual_canonical": self.residual_canonical,
            "sweeps": self.sweeps,
        }
        if include_transform:
            out["u_re"] = self.u.real.tolist()
            out["u_im"] = self.u.imag.tolist()
        return out

    @classmethod
    def from_dict(cls, data):
        u = None
        if "u_re" in data:
            u = np.array(data["u_re"]) + 1j * np.array(data["u_im"])
        fac = complex(*data.get("factor", (1.0, 0.0)))
        return cls(
            n=int(data["n"]), t=int(data["t"]),
            complex_eigs=[(complex(re, im), int(m)) for re, im, m in data["complex_eigs"]],
            x_a=np.array(data["x_a"], dtype=float), x_b=np.array(data["x_b"], dtype=float),
            u=u, residual_canonical=float(data.get("residual_canonical", 0.0)),
            d=np.array([complex(re, im) for re, im in data["d"]], dtype=np.complex128)
            if "d" in data else None,
            factor=fac if fac.imag else fac.real,
            sweeps=int(data.get("sweeps", 0)),
        )


def absorb_lambda_blocks(u, grouping, s_lambda):
    """Stage T: right-multiply each ``lambda_j`` column group by ``S(lambda_j)``.

    Afterwards the F-Gram matrix has identity blocks between conjugate groups.
    """
    u = np.array(u, dtype=np.complex128)
    for (lam, _), s in zip(grouping.lambda_slices(), s_lambda):
        u[:, lam] = u[:, lam] @ s
    return u


def _sign_split(s_mu, tol, max_sweeps):
    """Diagonalize every ``S(mu_j)``; returns the eigenvector blocks and the snapped signs."""
    blocks, signs, sweeps = [], [], 0
    for s in s_mu:
        res = hermitian_jacobi(s, tol, max_sweeps)
        sweeps += res.sweeps
        dev = np.abs(np.abs(res.eigenvalues) - 1)
        if np.any(dev > SNAP_TOL):
            raise StructureError(
                f"S(mu) eigenvalue off +-1 by {dev.max():.3e}; upstream diagonalization failed")
        blocks.append(res.u)
        signs.extend(np.where(res.eigenvalues > 0, 1, -1))
    return blocks, np.array(signs, dtype=int), sweeps


def _alternating_order(signs):
    """Stable permutation putting the k-th +1 at position 2k and the k-th -1 at 2k+1."""
    plus = [i for i, s in enumerate(signs) if s > 0]
    minus = [i for i, s in enumerate(signs) if s < 0]
    if len(plus) != len(minus):
        raise StructureError(
            f"sign balance violated: {len(plus)} entries +1 against {len(minus)} entries -1")
    order = []
    for p, m in zip(plus, minus):
        order.extend((p, m))
    return order


def _final_layout(grouping):
    """Column order ``[lambda side, X, reversed conj(lambda) side]`` in stage-four indices.

    Stage-four columns are ``lambda_1, conj(lambda_1), ..., W-pairs``; the
    W-pair ``k`` occupies columns ``2c + 2k`` and ``2c + 2k + 1`` and is split
    to positions ``k`` and ``2r - 1 - k`` of the X block.
    """
    lam_cols, bar_cols = [], []
    for lam, lamb in grouping.lambda_slices():
        lam_cols.extend(range(lam.start, lam.stop))
        bar_cols.extend(range(lamb.start, lamb.stop))
    c, r = grouping.c, grouping.r
    x_cols = [0] * (2 * r)
    for k in range(r):
        x_cols[k] = 2 * c + 2 * k
        x_cols[2 * r - 1 - k] = 2 * c + 2 * k + 1
    return lam_cols + x_cols + bar_cols[::-1]


def _polish_perplectic(u):
    f = f_matrix(u.shape[0])
    return scipy.linalg.polar((u + f @ u @ f) / 2)[0]


def canon_normal_per_hermitian(m, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS):
    """Canonical form of a normal per-Hermitian matrix.

    Parameters
    ----------
    m : array_like, shape (2n, 2n)
        Normal per-Hermitian matrix.
    tol : float
        Jacobi tolerance; classification and clustering use ``1e3 * tol``
        relative to ``max(1, ||m||_F)``.
    max_sweeps : int
        Sweep budget per Jacobi run.

    Returns
    -------
    PerHCanonicalForm

    Raises
    ------
    StructureError
        Input not normal/per-Hermitian, ambiguous eigenvalue grouping, or a
        failed sign split of the real part.
    ConvergenceError
        Canonical residual above ``50 * tol * max(1, ||m||_F)``.
    """
    m = as_matrix(m)
    require_even(m)
    require_normal(m, 1e-8)
    require_structure(m, Structure.PER_HERMITIAN, tol)
    size = m.shape[0]
    n = size // 2
    scale = max(1.0, float(np.linalg.norm(m)))

    gh = normal_diagonalize_gh(m, tol, max_sweeps)
    sweeps = gh.sweeps
    grouping = group_spectrum(gh.eigenvalues, 1e3 * tol * scale, 1e3 * tol, scale)
    u = gh.u[:, list(grouping.column_order.image)]
    s_lambda, s_mu = extract_f_blocks(u, grouping, 1e3 * tol)
    u = absorb_lambda_blocks(u, grouping, s_lambda)

    c, r = grouping.c, grouping.r
    real = u[:, 2 * c:]
    blocks, signs, extra = _sign_split(s_mu, tol, max_sweeps)
    sweeps += extra
    for sl, v in zip(grouping.mu_slices(), blocks):
        real[:, sl.start - 2 * c:sl.stop - 2 * c] = real[:, sl.start - 2 * c:sl.stop - 2 * c] @ v
    real = real[:, _alternating_order(signs)]
    z = sign_pair_to_flip()
    for k in range(r):
        real[:, 2 * k:2 * k + 2] = real[:, 2 * k:2 * k + 2] @ z
    u[:, 2 * c:] = real
    u = u[:, _final_layout(grouping)]
    u = _polish_perplectic(u)

    tr = u.conj().T @ m @ u
    diag = tr.diagonal()
    d = (diag[:c] + diag[size - 1 - np.arange(c)].conj()) / 2
    k = np.arange(r)
    lo, hi = c + k, c + 2 * r - 1 - k
    x_a = ((tr[lo, lo] + tr[hi, hi]) / 2).real
    x_b = ((tr[lo, hi] + tr[hi, lo]) / 2).real
    residual = float(np.linalg.norm(tr - assemble_perh_canonical(d, x_a, x_b)))

    complex_eigs = []
    pos = 0
    for lam, mult in grouping.complex_pairs:
        complex_eigs.append((complex(np.mean(d[pos:pos + mult])), mult))
        pos += mult
    form = PerHCanonicalForm(n=n, t=grouping.t, complex_eigs=complex_eigs, x_a=x_a, x_b=x_b,
                             u=u, residual_canonical=residual, d=d, sweeps=sweeps)
    if residual > RESIDUAL_FACTOR * tol * scale:
        raise ConvergenceError(f"per-Hermitian canonical residual {residual:.3e}", form)
    return form


def canon_normal_perskew_hermitian(k, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS):
    """Canonical form of a normal perskew-Hermitian ``k`` via ``M = -i k``.

    The returned form has ``factor == 1j``: ``u^H k u == 1j * pattern``.
    """
    k = as_matrix(k)
    require_even(k)
    require_structure(k, Structure.PERSKEW_HERMITIAN, tol)
    try:
        form = canon_normal_per_hermitian(-1j * k, tol, max_sweeps)
    except ConvergenceError as exc:
        if exc.partial is not None:
            exc.partial.factor = 1j
        raise
    form.factor = 1j
    return form
