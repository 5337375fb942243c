"""Cyclic Jacobi for Hermitian matrices and the Goldstine-Horwitz normal diagonalizer."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .core import StructCanonError, as_matrix, off_diagonal_norm, require_square
from .structure import StructureError, hermitian_part, require_normal, skew_hermitian_part
from .transform import hermitian_2x2_rotation, rotate_inplace

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_SWEEPS = 30


class ConvergenceError(StructCanonError, RuntimeError):
    """Iteration budget exhausted; ``partial`` holds the state reached."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


@dataclass
class JacobiResult:
    u: np.ndarray
    eigenvalues: np.ndarray
    sweeps: int
    final_off_relative: float
    converged: bool = True
    off_history: list = field(default_factory=list)
    escalations: int = 0


@dataclass(frozen=True)
class EigenClustering:
    cluster_of: tuple
    representatives: tuple
    tol_cluster: float

    @property
    def count(self):
        return len(self.representatives)

    def members(self, cid):
        return [i for i, c in enumerate(self.cluster_of) if c == cid]

    def groups(self):
        return [self.members(c) for c in range(self.count)]


def _off_measure(a, stop):
    if stop == "entrywise":
        off = a.copy()
        np.fill_diagonal(off, 0)
        return float(np.max(np.abs(off))) if off.size else 0.0
    return off_diagonal_norm(a)


def hermitian_jacobi(a, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS, stop="relative",
                     callback=None):
    """Diagonalize a Hermitian matrix by cyclic-by-rows Jacobi sweeps.

    Parameters
    ----------
    a : array_like, shape (m, m)
        Hermitian matrix.
    tol : float
        ``stop="relative"`` ends when ``off(A_k) / max(1, ||a||_F) <= tol``;
        ``stop="entrywise"`` ends when every off-diagonal modulus is below ``tol``.
    max_sweeps : int
        Sweep budget; exhausting it raises :class:`ConvergenceError`.
    callback : callable, optional
        Called as ``callback(sweep, iterate, u)`` before the first sweep and
        after each sweep. Must not modify its arguments.

    Returns
    -------
    JacobiResult
        Eigenvalues in descending order with the columns of ``u`` to match.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if stop not in ("relative", "entrywise"):
        raise ValueError(f"unknown stopping rule {stop!r}")
    a = as_matrix(a)
    require_square(a)
    nrm = float(np.linalg.norm(a))
    if np.linalg.norm(a - a.conj().T) > 1e-12 * max(1.0, nrm):
        raise StructureError("hermitian_jacobi needs a Hermitian matrix")
    m = a.shape[0]
    work = (a + a.conj().T) / 2
    u = np.eye(m, dtype=np.complex128)
    scale = max(1.0, nrm)
    if stop == "relative":
        threshold = tol * scale
        skip = 0.1 * tol * nrm / m
    else:
        threshold = tol
        skip = 0.1 * tol

    history = [off_diagonal_norm(work)]
    if callback is not None:
        callback(0, work, u)
    sweeps = 0
    while _off_measure(work, stop) > threshold:
        if sweeps >= max_sweeps:
            partial = _finish(work, u, sweeps, scale, history, converged=False)
            raise ConvergenceError(
                f"Hermitian Jacobi did not converge in {max_sweeps} sweeps "
                f"(relative off-norm {partial.final_off_relative:.3e})", partial)
        sweeps += 1
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = work[p, q]
                if abs(apq) <= skip:
                    continue
                g, dp, dq = hermitian_2x2_rotation(work[p, p].real, work[q, q].real, apq, p, q)
                rotate_inplace(work, g)
                rotate_inplace(u, g, "right")
                work[p, q] = work[q, p] = 0
                work[p, p] = dp
                work[q, q] = dq
        work = (work + work.conj().T) / 2
        history.append(off_diagonal_norm(work))
        log.debug("jacobi sweep %d: off=%.3e", sweeps, history[-1])
        if callback is not None:
            callback(sweeps, work, u)
    return _finish(work, u, sweeps, scale, history, converged=True)


def _finish(work, u, sweeps, scale, history, converged):
    diag = work.diagonal().real
    order = np.argsort(-diag, kind="stable")
    return JacobiResult(
        u=u[:, order].copy(),
        eigenvalues=diag[order].copy(),
        sweeps=sweeps,
        final_off_relative=off_diagonal_norm(work) / scale,
        converged=converged,
        off_history=history,
    )


def skew_hermitian_diagonalize(a, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS):
    """Diagonalize a skew-Hermitian ``a`` through the Hermitian matrix ``-i a``.

    Eigenvalues are purely imaginary, ordered by imaginary part descending.
    """
    a = as_matrix(a)
    require_square(a)
    if np.linalg.norm(a + a.conj().T) > 1e-12 * max(1.0, float(np.linalg.norm(a))):
        raise StructureError("skew_hermitian_diagonalize needs a skew-Hermitian matrix")
    res = hermitian_jacobi(-1j * a, tol, max_sweeps)
    res.eigenvalues = 1j * res.eigenvalues
    return res


def cluster_values(values, tol_cluster):
    """Single-linkage clustering: values closer than ``tol_cluster`` share a cluster.

    Cluster ids follow the first appearance in ``values``; each representative
    is the member closest to the cluster mean.
    """
    if tol_cluster <= 0:
        raise ValueError("tol_cluster must be positive")
    vals = np.asarray(values, dtype=np.complex128).ravel()
    m = len(vals)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        close = np.nonzero(np.abs(vals[i + 1:] - vals[i]) <= tol_cluster)[0]
        for j in close + i + 1:
            ri, rj = find(i), find(int(j))
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    ids = {}
    cluster_of = []
    for i in range(m):
        cluster_of.append(ids.setdefault(find(i), len(ids)))
    reps = []
    for cid in range(len(ids)):
        members = [i for i in range(m) if cluster_of[i] == cid]
        mean = vals[members].mean()
        best = min(members, key=lambda i: abs(vals[i] - mean))
        v = vals[best]
        reps.append(float(v.real) if np.isrealobj(values) or v.imag == 0 else complex(v))
    return EigenClustering(tuple(cluster_of), tuple(reps), float(tol_cluster))


def _diagonalize_clusters(u, c, beta, tol_cluster, tol, max_sweeps):
    """Diagonalize the within-cluster blocks of ``u^H c u``; returns the updated ``u``."""
    clusters = cluster_values(beta, tol_cluster)
    cp = u.conj().T @ c @ u
    cp = (cp - cp.conj().T) / 2
    for idx in clusters.groups():
        if len(idx) < 2:
            continue
        res = skew_hermitian_diagonalize(cp[np.ix_(idx, idx)], tol, max_sweeps)
        u[:, idx] = u[:, idx] @ res.u
    return u, clusters


def normal_diagonalize_gh(a, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS, tol_cluster=None,
                          stop="relative", max_escalations=3):
    """Diagonalize a normal matrix by the Goldstine-Horwitz route.

    The Hermitian part ``B`` is diagonalized by :func:`hermitian_jacobi`; then
    inside each cluster of equal eigenvalues of ``B`` the transformed
    skew-Hermitian part is diagonalized. If the full transformed matrix is
    still not diagonal to ``tol``, the iteration on ``B`` is tightened, the
    cluster tolerance widened tenfold, and the cluster step repeated (at most
    ``max_escalations`` times).

    Eigenvalues come out grouped by descending Hermitian-part eigenvalue and,
    inside a cluster, by descending imaginary part.
    """
    a = as_matrix(a)
    require_square(a)
    require_normal(a, 1e-8)
    b = hermitian_part(a)
    c = skew_hermitian_part(a)
    scale = max(1.0, float(np.linalg.norm(a)))
    if tol_cluster is None:
        tol_cluster = 1e3 * tol * max(1.0, float(np.linalg.norm(b)))

    res = hermitian_jacobi(b, tol, max_sweeps, stop=stop)
    u, beta, sweeps = res.u, res.eigenvalues, res.sweeps
    history = list(res.off_history)
    tol_b = tol
    for escalation in range(max_escalations + 1):
        u, _ = _diagonalize_clusters(u, c, beta, tol_cluster, tol, max_sweeps)
        t = u.conj().T @ a @ u
        off = off_diagonal_norm(t) / scale
        if off <= tol:
            return JacobiResult(u=u, eigenvalues=t.diagonal().copy(), sweeps=sweeps,
                                final_off_relative=off, off_history=history,
                                escalations=escalation)
        if escalation == max_escalations:
            break
        log.info("GH escalation %d: off=%.3e, widening clusters", escalation + 1, off)
        tol_b = max(tol_b * 1e-2, 1e-13)
        tol_cluster *= 10
        bt = u.conj().T @ b @ u
        refine = hermitian_jacobi((bt + bt.conj().T) / 2, tol_b, max_sweeps)
        u = u @ refine.u
        beta = refine.eigenvalues
        sweeps += refine.sweeps
        history.extend(refine.off_history[1:])
    partial = JacobiResult(u=u, eigenvalues=t.diagonal().copy(), sweeps=sweeps,
                           final_off_relative=off, converged=False, off_history=history,
                           escalations=max_escalations)
    raise ConvergenceError(f"normal diagonalization stalled at relative off-norm {off:.3e}", partial)
