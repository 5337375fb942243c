"""Canonical form of normal Hamiltonian matrices under unitary symplectic similarity.

For a normal Hamiltonian ``H`` of size 2n the target is::

    Z^H H Z = [[D1,  0,   0,     0 ],
               [0,   D2,  0,     D3],
               [0,   0,  -D1^H,  0 ],
               [0,  -D3,  0,     D2]]

with ``D1`` (n1 x n1) carrying the eigenvalues off the imaginary axis,
``D2`` purely imaginary and ``D3`` real. ``Z`` is built in two phases:

1. the Hermitian part ``B`` is diagonalized by a unitary symplectic ``S``
   into ``diag(Lambda, 0, -Lambda, 0)``;
2. the transformed skew-Hermitian part is finished off: inside clusters of
   equal ``Lambda`` by a block rotation ``diag(S3, I, S3, I)``, and on the
   kernel of ``B`` through the block map ``Q diag(V1, V2) Q^H``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .core import as_matrix, j_matrix, off_diagonal_norm, require_even
from .jacobi import (
    DEFAULT_MAX_SWEEPS,
    DEFAULT_TOL,
    ConvergenceError,
    JacobiResult,
    cluster_values,
    hermitian_jacobi,
    skew_hermitian_diagonalize,
)
from .structure import Structure, StructureError, require_normal, require_structure
from .transform import symplectic_from_blockdiag

log = logging.getLogger(__name__)

#: canonical-pattern residual accepted on success, in units of ``tol * max(1, ||H||_F)``
RESIDUAL_FACTOR = 50


def _polar_unitary(a):
    return scipy.linalg.polar(a)[0]


def split_hamiltonian(h):
    """Hermitian and skew-Hermitian parts of ``h``, each projected onto the Hamiltonian matrices.

    ``B = [[A, G], [G, -A]]`` and ``C = [[T, X], [-X, T]]`` exactly, with
    ``A, G`` Hermitian, ``T`` skew-Hermitian and ``X`` Hermitian.
    """
    h = as_matrix(h)
    require_even(h)
    n = h.shape[0] // 2
    b = (h + h.conj().T) / 2
    c = (h - h.conj().T) / 2
    a_ = (b[:n, :n] - b[n:, n:]) / 2
    g_ = (b[:n, n:] + b[n:, :n]) / 2
    t_ = (c[:n, :n] + c[n:, n:]) / 2
    x_ = (c[:n, n:] - c[n:, :n]) / 2
    b = np.block([[a_, g_], [g_, -a_]])
    c = np.block([[t_, x_], [-x_, t_]])
    return (b + b.conj().T) / 2, (c - c.conj().T) / 2


def assemble_ham_canonical(d1, d2, d3, n):
    """The 2n x 2n canonical pattern built from its diagonal data."""
    d1 = np.asarray(d1, dtype=np.complex128)
    d2 = np.asarray(d2, dtype=np.complex128)
    d3 = np.asarray(d3, dtype=np.complex128)
    n1 = len(d1)
    if len(d2) != n - n1 or len(d3) != n - n1:
        raise ValueError("canonical data sizes do not add up to n")
    out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    i1 = np.arange(n1)
    k = np.arange(n1, n)
    out[i1, i1] = d1
    out[n + i1, n + i1] = -d1.conj()
    out[k, k] = d2
    out[n + k, n + k] = d2
    out[k, n + k] = d3
    out[n + k, k] = -d3
    return out


@dataclass
class HamCanonicalForm:
    """Canonical data plus the accumulated unitary symplectic ``z``.

    ``d1``, ``d2``, ``d3`` always describe a Hamiltonian pattern; ``factor``
    is ``1`` for Hamiltonian input and ``1j`` when the form was computed for a
    skew-Hamiltonian ``W = i H``, in which case ``z^H W z == factor * pattern``.
    """

    n: int
    n1: int
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray
    z: np.ndarray
    residual_canonical: float
    sweeps_phase1: int = 0
    sweeps_phase2: int = 0
    factor: complex = 1.0
    escalations: int = 0

    @property
    def n2(self):
        return self.n - self.n1

    def pattern(self):
        return assemble_ham_canonical(self.d1, self.d2, self.d3, self.n)

    def canonical_matrix(self):
        return self.factor * self.pattern()

    def hamiltonian_eigenvalues(self):
        d1 = np.asarray(self.d1, dtype=np.complex128)
        d2 = np.asarray(self.d2, dtype=np.complex128)
        d3 = np.asarray(self.d3, dtype=np.complex128)
        return np.concatenate([d1, -d1.conj(), d2 + 1j * d3, d2 - 1j * d3])

    def eigenvalues(self):
        """Spectrum of the matrix the form was computed for."""
        return self.factor * self.hamiltonian_eigenvalues()

    def scaled_data(self):
        return (self.factor * np.asarray(self.d1), self.factor * np.asarray(self.d2),
                self.factor * np.asarray(self.d3))

    def to_dict(self, include_transform=False):
        out = {
            "class": "skewham" if self.factor != 1 else "ham",
            "n": self.n,
            "n1": self.n1,
            "d1": [[float(v.real), float(v.imag)] for v in np.asarray(self.d1, dtype=complex)],
            "d2_imag": [float(v.imag) for v in np.asarray(self.d2, dtype=complex)],
            "d3": [float(np.real(v)) for v in self.d3],
            "factor": [float(np.real(self.factor)), float(np.imag(self.factor))],
            "residual_canonical": self.residual_canonical,
            "sweeps_phase1": self.sweeps_phase1,
            "sweeps_phase2": self.sweeps_phase2,
            "escalations": self.escalations,
        }
        if include_transform:
            out["z_re"] = self.z.real.tolist()
            out["z_im"] = self.z.imag.tolist()
        return out

    @classmethod
    def from_dict(cls, data):
        d1 = np.array([complex(re, im) for re, im in data["d1"]], dtype=np.complex128)
        z = None
        if "z_re" in data:
            z = np.array(data["z_re"]) + 1j * np.array(data["z_im"])
        fac = complex(*data.get("factor", (1.0, 0.0)))
        return cls(
            n=int(data["n"]), n1=int(data["n1"]), d1=d1,
            d2=1j * np.array(data["d2_imag"], dtype=float),
            d3=np.array(data["d3"], dtype=float), z=z,
            residual_canonical=float(data.get("residual_canonical", 0.0)),
            sweeps_phase1=int(data.get("sweeps_phase1", 0)),
            sweeps_phase2=int(data.get("sweeps_phase2", 0)),
            factor=fac if fac.imag else fac.real,
            escalations=int(data.get("escalations", 0)),
        )


@dataclass
class Phase1Result:
    s: np.ndarray
    lambdas: np.ndarray
    n1: int
    kernel_dim_check: int
    sweeps: int = 0
    jacobi: JacobiResult | None = field(default=None, repr=False)


def _isotropic_kernel_basis(kernel, n):
    """Orthonormal ``q_1..q_m`` spanning half of a J-invariant subspace with ``q^H J q' = 0``.

    ``kernel`` is an orthonormal basis (2n x 2m) of a subspace mapped to
    itself by ``J``. The vectors are ``(p+ + p-) / sqrt(2)`` with ``p+`` and
    ``p-`` orthonormal in the ``+1`` and ``-1`` eigenspaces of ``iJ``,
    aligned with the first m kernel columns.
    """
    two_m = kernel.shape[1]
    m = two_m // 2
    jk = kernel.conj().T @ j_matrix(n) @ kernel
    ij = 1j * jk
    ij = (ij + ij.conj().T) / 2
    eig = hermitian_jacobi(ij, 1e-14, DEFAULT_MAX_SWEEPS)
    plus = int(np.sum(eig.eigenvalues > 0))
    if two_m % 2 or plus != m:
        raise StructureError(
            f"kernel of the Hermitian part has unbalanced signature ({plus} vs {two_m - plus})")
    target = np.eye(two_m)[:, :m]
    ep = eig.u[:, :m]
    em = eig.u[:, m:]
    basis_p = ep @ _polar_unitary(ep.conj().T @ target)
    basis_m = em @ _polar_unitary(em.conj().T @ target)
    return kernel @ ((basis_p + basis_m) / math.sqrt(2))


def _symplectic_from_eigvecs(u, beta, n, tol_zero):
    pos = beta > tol_zero
    neg = beta < -tol_zero
    n1 = int(pos.sum())
    if int(neg.sum()) != n1:
        raise StructureError(
            f"{n1} positive vs {int(neg.sum())} negative eigenvalues of the Hermitian part "
            f"at zero threshold {tol_zero:.2e}; rank is ill-determined")
    kernel = u[:, ~pos & ~neg]
    cols = [u[:, pos]]
    if kernel.shape[1]:
        cols.append(_isotropic_kernel_basis(kernel, n))
    x = np.hstack(cols)
    s1 = x[:n]
    s2 = -x[n:]
    # snap to the nearest unitary symplectic matrix through its Q-map blocks
    v1 = _polar_unitary(s1 + 1j * s2)
    v2 = _polar_unitary(s1 - 1j * s2)
    s = symplectic_from_blockdiag(v1, v2, tol=1e-6)
    return s, beta[pos].copy(), n1, kernel.shape[1] // 2


def phase1_diagonalize_hermitian_hamiltonian(b, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS,
                                             tol_zero=None, stop="relative", callback=None):
    """Unitary symplectic ``S`` with ``S^H B S = diag(Lambda, 0, -Lambda, 0)``.

    ``B`` must be Hermitian and Hamiltonian. Jacobi sweeps diagonalize ``B``;
    because ``JB = -BJ`` the eigenvectors ``u`` of positive eigenvalues have
    partners ``-Ju`` for the negative ones, and the kernel receives an
    isotropic orthonormal basis. Eigenvalues with modulus at most
    ``tol_zero`` (default ``1e3 * tol * max(1, ||B||_F)``) count as zero.
    """
    b = as_matrix(b)
    require_even(b)
    scale = max(1.0, float(np.linalg.norm(b)))
    if np.linalg.norm(b - b.conj().T) > tol * scale:
        raise StructureError("Hermitian part is not Hermitian")
    require_structure(b, Structure.HAMILTONIAN, tol, "Hermitian part")
    n = b.shape[0] // 2
    if tol_zero is None:
        tol_zero = 1e3 * tol * scale
    res = hermitian_jacobi(b, tol, max_sweeps, stop=stop, callback=callback)
    s, lambdas, n1, m = _symplectic_from_eigvecs(res.u, res.eigenvalues, n, tol_zero)
    return Phase1Result(s=s, lambdas=lambdas, n1=n1, kernel_dim_check=m, sweeps=res.sweeps,
                        jacobi=res)


class Phase2Result(NamedTuple):
    t: np.ndarray
    d1_im: np.ndarray
    d2: np.ndarray
    d3: np.ndarray
    sweeps: int


def _c_pattern_mask(n, n1, clusters):
    """Positions allowed to be nonzero in the transformed skew part after Phase 1."""
    mask = np.zeros((2 * n, 2 * n), dtype=bool)
    for grp in clusters.groups():
        g = np.array(grp)
        mask[np.ix_(g, g)] = True
        mask[np.ix_(n + g, n + g)] = True
    kern = np.r_[n1:n, n + n1:2 * n]
    mask[np.ix_(kern, kern)] = True
    return mask


def phase2_reduce_skew_part(c_transformed, lambdas, n1, tol=DEFAULT_TOL,
                            max_sweeps=DEFAULT_MAX_SWEEPS, tol_cluster=None, scale=None):
    """Finish the reduction of ``C' = S^H C S`` after Phase 1.

    Returns the unitary symplectic ``T``, ``Im(D1)``, ``D2`` and ``D3``
    (plus the Jacobi sweeps spent), so that ``T^H C' T`` is the skew part of
    the canonical pattern.
    """
    c = as_matrix(c_transformed)
    require_even(c)
    c = (c - c.conj().T) / 2
    n = c.shape[0] // 2
    m = n - n1
    lambdas = np.asarray(lambdas, dtype=float)
    if len(lambdas) != n1:
        raise ValueError("lambdas must have length n1")
    if scale is None:
        scale = max(1.0, float(np.linalg.norm(c)))
    if tol_cluster is None:
        tol_cluster = 1e3 * tol * max(1.0, math.sqrt(2 * float(np.sum(lambdas ** 2))))
    clusters = cluster_values(lambdas, tol_cluster) if n1 else None

    if clusters is not None:
        mask = _c_pattern_mask(n, n1, clusters)
    else:
        mask = np.ones((2 * n, 2 * n), dtype=bool)
    off = float(np.linalg.norm(c[~mask]))
    if off > 10 * tol * scale:
        raise ConvergenceError(
            f"transformed skew part is {off:.3e} off its block pattern; "
            "the Hermitian part is not diagonal enough")

    t = np.eye(2 * n, dtype=np.complex128)
    sweeps = 0
    d2 = np.zeros(m, dtype=np.complex128)
    d3 = np.zeros(m)
    if m:
        k1 = np.arange(n1, n)
        k2 = n + k1
        c2 = (c[np.ix_(k1, k1)] + c[np.ix_(k2, k2)]) / 2
        c3 = (c[np.ix_(k1, k2)] - c[np.ix_(k2, k1)]) / 2
        plus = skew_hermitian_diagonalize(c2 + 1j * c3, tol, max_sweeps)
        minus = skew_hermitian_diagonalize(c2 - 1j * c3, tol, max_sweeps)
        sweeps += plus.sweeps + minus.sweeps
        s_hat = symplectic_from_blockdiag(plus.u, minus.u, tol=1e-8)
        kern = np.r_[k1, k2]
        t[np.ix_(kern, kern)] = s_hat
        d2 = (plus.eigenvalues + minus.eigenvalues) / 2
        d3 = (1j * (minus.eigenvalues - plus.eigenvalues) / 2).real

    d1_im = np.zeros(n1)
    if n1:
        c1 = (c[:n1, :n1] + c[n:n + n1, n:n + n1]) / 2
        s3 = np.eye(n1, dtype=np.complex128)
        for grp in clusters.groups():
            if len(grp) < 2:
                continue
            res = skew_hermitian_diagonalize(c1[np.ix_(grp, grp)], tol, max_sweeps)
            sweeps += res.sweeps
            s3[np.ix_(grp, grp)] = res.u
        t[:n1, :n1] = s3
        t[n:n + n1, n:n + n1] = s3
        d1_im = np.diagonal(s3.conj().T @ c1 @ s3).imag.copy()
    return Phase2Result(t, d1_im, d2, d3, sweeps)


@dataclass(frozen=True)
class TraceEntry:
    """One monitoring row: residuals of the transformed Hermitian part (``e``),
    skew part (``f``) and whole matrix (``g``) against their target patterns."""

    sweep: int
    e_norm: float
    f_norm: float
    g_norm: float


def _read_form(h, z, n1, tol, scale):
    n = h.shape[0] // 2
    tr = z.conj().T @ h @ z
    diag = tr.diagonal()
    k = np.arange(n1, n)
    d1 = diag[:n1].copy()
    d2_raw = diag[n1:n]
    d3_raw = tr[k, n + k]
    limit = 10 * tol * scale
    if np.any(np.abs(d2_raw.real) > limit) or np.any(np.abs(d3_raw.imag) > limit):
        raise StructureError(
            "purely imaginary part of the spectrum is contaminated: "
            f"max |Re D2| = {np.max(np.abs(d2_raw.real), initial=0):.3e}, "
            f"max |Im D3| = {np.max(np.abs(d3_raw.imag), initial=0):.3e}")
    d2 = 1j * d2_raw.imag
    d3 = d3_raw.real.copy()
    residual = float(np.linalg.norm(tr - assemble_ham_canonical(d1, d2, d3, n)))
    return d1, d2, d3, residual


def canon_normal_hamiltonian(h, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS, *,
                             tol_cluster=None, max_escalations=3, trace=None):
    """Canonical form of a normal Hamiltonian matrix.

    Parameters
    ----------
    h : array_like, shape (2n, 2n)
        Normal Hamiltonian matrix.
    tol : float
        Jacobi stopping tolerance on the Hermitian part (relative Frobenius).
    max_sweeps : int
        Sweep budget per Jacobi run.
    tol_cluster : float, optional
        Clustering tolerance for equal eigenvalues of the Hermitian part;
        defaults to ``1e3 * tol * max(1, ||B||_F)``.
    max_escalations : int
        How often the iteration on ``B`` may be tightened (and the cluster
        tolerance widened tenfold) when the full canonical residual exceeds
        ``50 * tol * max(1, ||h||_F)``.
    trace : list, optional
        Receives :class:`TraceEntry` rows, one per Phase-1 sweep; the final
        row's ``g_norm`` is the canonical residual after Phase 2.

    Returns
    -------
    HamCanonicalForm

    Raises
    ------
    StructureError
        Input is not normal/Hamiltonian, or the spectrum splits ambiguously.
    ConvergenceError
        Residual bound not met; ``partial`` holds the last form computed.
    """
    h = as_matrix(h)
    require_even(h)
    require_normal(h, 1e-8)
    require_structure(h, Structure.HAMILTONIAN, tol)
    n = h.shape[0] // 2
    scale = max(1.0, float(np.linalg.norm(h)))
    b, c = split_hamiltonian(h)
    nb = max(1.0, float(np.linalg.norm(b)))
    tol_zero = 1e3 * tol * nb
    if tol_cluster is None:
        tol_cluster = 1e3 * tol * nb

    s_acc = np.eye(2 * n, dtype=np.complex128)
    b_cur = b
    tol_b = tol
    sweeps1 = sweeps2 = 0
    last = None
    failure = None
    for escalation in range(max_escalations + 1):
        callback = None
        if trace is not None:
            callback = _trace_callback(trace, h, b, c, s_acc, tol_cluster, sweeps1,
                                       skip_initial=escalation > 0)
        p1 = phase1_diagonalize_hermitian_hamiltonian(b_cur, tol_b, max_sweeps,
                                                      tol_zero=tol_zero, callback=callback)
        sweeps1 += p1.sweeps
        s_acc = s_acc @ p1.s
        try:
            p2 = phase2_reduce_skew_part(s_acc.conj().T @ c @ s_acc, p1.lambdas, p1.n1, tol,
                                         max_sweeps, tol_cluster=tol_cluster, scale=scale)
            sweeps2 += p2.sweeps
            z = s_acc @ p2.t
            d1, d2, d3, residual = _read_form(h, z, p1.n1, tol, scale)
            last = HamCanonicalForm(n=n, n1=p1.n1, d1=d1, d2=d2, d3=d3, z=z,
                                    residual_canonical=residual, sweeps_phase1=sweeps1,
                                    sweeps_phase2=sweeps2, escalations=escalation)
            if trace is not None and trace:
                row = trace[-1]
                trace[-1] = TraceEntry(row.sweep, row.e_norm, row.f_norm, residual)
            if residual <= RESIDUAL_FACTOR * tol * scale:
                return last
            failure = f"canonical residual {residual:.3e}"
        except ConvergenceError as exc:
            failure = str(exc)
        if escalation == max_escalations:
            break
        log.info("escalation %d: %s", escalation + 1, failure)
        tol_b = max(tol_b * 1e-2, 1e-13)
        tol_cluster *= 10
        b_cur = s_acc.conj().T @ b @ s_acc
        b_cur = split_hamiltonian(b_cur)[0]
    raise ConvergenceError(f"canonical form not reached: {failure}", last)


def _trace_callback(trace, h, b, c, s_acc, tol_cluster, offset, skip_initial):
    def record(sweep, iterate, u):
        if skip_initial and sweep == 0:
            return
        w = s_acc @ u
        beta = iterate.diagonal().real
        allowed = np.abs(beta[:, None] - beta[None, :]) <= tol_cluster
        cu = w.conj().T @ c @ w
        hu = w.conj().T @ h @ w
        trace.append(TraceEntry(
            sweep=offset + sweep,
            e_norm=off_diagonal_norm(iterate),
            f_norm=float(np.linalg.norm(cu[~allowed])),
            g_norm=float(np.linalg.norm(hu[~allowed])),
        ))
    return record


def convergence_trace(h, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS):
    """Per-sweep residual history of :func:`canon_normal_hamiltonian` on ``h``."""
    rows = []
    canon_normal_hamiltonian(h, tol, max_sweeps, trace=rows)
    return rows


def canon_normal_skew_hamiltonian(w, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS, **kwargs):
    """Canonical form of a normal skew-Hamiltonian ``w`` via ``H = -i w``.

    The returned form has ``factor == 1j``: ``z^H w z == 1j * pattern``.
    """
    w = as_matrix(w)
    require_even(w)
    require_structure(w, Structure.SKEW_HAMILTONIAN, tol)
    try:
        form = canon_normal_hamiltonian(-1j * w, tol, max_sweeps, **kwargs)
    except ConvergenceError as exc:
        if exc.partial is not None:
            exc.partial.factor = 1j
        raise
    form.factor = 1j
    return form
