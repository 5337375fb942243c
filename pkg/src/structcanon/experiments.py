"""Structured versus unstructured diagonalization of the Hermitian part.

Both paths only iterate on ``B = (H + H^H) / 2`` and then look at what is
left of the skew-Hermitian part ``C`` in the computed basis. The structured
path is Phase 1 of the Hamiltonian algorithm (unitary symplectic ``S``), the
unstructured path is plain Jacobi on ``B`` (unitary ``U``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import phase1_diagonalize_hermitian_hamiltonian, split_hamiltonian
from .jacobi import DEFAULT_MAX_SWEEPS, DEFAULT_TOL, hermitian_jacobi
from .report import SpyGrid
from .structure import Structure, require_normal, require_structure


@dataclass
class Comparison:
    structured_sweeps: int
    unstructured_sweeps: int
    structured_skew: np.ndarray
    unstructured_skew: np.ndarray
    structured_eigs: np.ndarray
    unstructured_eigs: np.ndarray
    n1: int
    thresholds: tuple

    @property
    def n(self):
        return self.structured_skew.shape[0] // 2

    def spy(self, which="structured"):
        a = self.structured_skew if which == "structured" else self.unstructured_skew
        return SpyGrid.of(a, self.thresholds)

    def structured_violations(self, k=0):
        """Structured survivors outside the allowed positions at threshold ``k``."""
        allowed = allowed_structured_positions(self.n, self.n1)
        return [(p, q) for p, q in self.spy().survivors(k) if not allowed[p, q]]


def allowed_structured_positions(n, n1):
    """Where the structured path may leave skew-part entries.

    The diagonal, the diagonals of the off-diagonal n x n blocks
    (``|p - q| == n``), and every coupling among the ``2(n - n1)`` indices
    belonging to the kernel of ``B``.
    """
    p, q = np.indices((2 * n, 2 * n))
    kern = np.zeros(2 * n, dtype=bool)
    kern[n1:n] = True
    kern[n + n1:] = True
    return (p == q) | (np.abs(p - q) == n) | (kern[:, None] & kern[None, :])


def compare_structured_unstructured(h, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS,
                                    stop_structured="relative", stop_unstructured="entrywise"):
    """Run both Hermitian-part diagonalizations on a normal Hamiltonian ``h``.

    Spy thresholds are ``100 * tol`` and ``10 * tol``.
    """
    require_normal(h, 1e-8)
    require_structure(h, Structure.HAMILTONIAN, tol)
    b, c = split_hamiltonian(h)
    p1 = phase1_diagonalize_hermitian_hamiltonian(b, tol, max_sweeps, stop=stop_structured)
    s = p1.s
    res = hermitian_jacobi(b, tol, max_sweeps, stop=stop_unstructured)
    u = res.u
    return Comparison(
        structured_sweeps=p1.sweeps,
        unstructured_sweeps=res.sweeps,
        structured_skew=s.conj().T @ c @ s,
        unstructured_skew=u.conj().T @ c @ u,
        structured_eigs=(s.conj().T @ h @ s).diagonal(),
        unstructured_eigs=(u.conj().T @ h @ u).diagonal(),
        n1=p1.n1,
        thresholds=(100 * tol, 10 * tol),
    )
