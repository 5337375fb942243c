"""Canonical form of a normal per-Hermitian matrix under perplectic unitaries.

Per-Hermitian means F M is Hermitian, where F is the flip (ones on the
anti-diagonal). The eigenvalues come in conjugate pairs plus a real part, and
the real part collapses into an "X" shaped block.
"""

import numpy as np

from structcanon import (
    GenSpec,
    canon_normal_per_hermitian,
    f_matrix,
    rand_normal_per_hermitian,
    spectrum_distance,
)

np.set_printoptions(precision=4, suppress=True, linewidth=110)

m, planted = rand_normal_per_hermitian(GenSpec(n=5, r=2, seed=3))
size = m.shape[0]
F = f_matrix(size)
print("||(F M)^H - F M|| =", np.linalg.norm((F @ m).conj().T - F @ m))

form = canon_normal_per_hermitian(m, tol=1e-10)
print("\nconjugate-pair eigenvalues:", form.complex_eigs)
print("X block anti-diagonal:", form.x_a)
print("X block diagonal:     ", form.x_b)

u = form.u
print("\n||U^H U - I|| =", np.linalg.norm(u.conj().T @ u - np.eye(size)))
print("||U^H F U - F|| =", np.linalg.norm(u.conj().T @ F @ u - F))
print("||U^H M U - canonical|| =", np.linalg.norm(u.conj().T @ m @ u - form.canonical_matrix()))
print("eigenvalue error against the planted form:",
      spectrum_distance(form.eigenvalues(), planted.eigenvalues()))

# the X block is real symmetric in effect: its eigenvalues are real
x = form.x_matrix()
print("\nX =\n", x.real)
print("eigenvalues of X:", np.linalg.eigvals(x))

print("\nsparsity pattern of the canonical matrix:")
for row in np.abs(form.canonical_matrix()) > 0:
    print("  " + "".join("x" if v else "." for v in row))
