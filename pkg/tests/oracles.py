"""Independent eigenvalue oracles used to validate the Jacobi-based code.

Nothing here touches the package's own algorithms.

* ``bisection_eigvalsh``: Sylvester inertia counts from an LDL^H
  factorization of ``A - x I``, bisected to find each eigenvalue.
* ``charpoly_eigvals``: characteristic polynomial by Faddeev-LeVerrier in
  50-digit arithmetic, then ``mpmath.polyroots``. Only for tiny matrices.
"""

import mpmath
import numpy as np
import scipy.linalg


def count_below(a, x):
    """Number of eigenvalues of the Hermitian ``a`` strictly below ``x`` (Sylvester inertia)."""
    m = a.shape[0]
    _, d, _ = scipy.linalg.ldl(a - x * np.eye(m), hermitian=True)
    count = 0
    i = 0
    while i < m:
        if i + 1 < m and d[i + 1, i] != 0:
            count += int(np.sum(np.linalg.eigvalsh(d[i:i + 2, i:i + 2]) < 0))
            i += 2
        else:
            count += int(d[i, i].real < 0)
            i += 1
    return count


def bisection_eigvalsh(a, tol=1e-13):
    """All eigenvalues of a Hermitian matrix, descending, by inertia bisection."""
    a = np.asarray(a, dtype=np.complex128)
    m = a.shape[0]
    radius = float(np.max(np.sum(np.abs(a), axis=1))) + 1.0  # Gershgorin bound
    out = []
    for k in range(m):
        # eigenvalue with exactly m-1-k eigenvalues above it
        lo, hi = -radius, radius
        while hi - lo > tol * max(1.0, radius):
            mid = (lo + hi) / 2
            if count_below(a, mid) > m - 1 - k:
                hi = mid
            else:
                lo = mid
        out.append((lo + hi) / 2)
    return np.array(out)


def charpoly_eigvals(a, dps=50):
    """Eigenvalues via the characteristic polynomial in extended precision."""
    a = np.asarray(a, dtype=np.complex128)
    m = a.shape[0]
    with mpmath.workdps(dps):
        am = mpmath.matrix([[mpmath.mpc(complex(a[i, j])) for j in range(m)] for i in range(m)])
        coeffs = [mpmath.mpc(1)]
        mk = mpmath.zeros(m, m)
        ident = mpmath.eye(m)
        for k in range(1, m + 1):
            mk = am * mk + coeffs[-1] * ident
            ck = -sum((am * mk)[i, i] for i in range(m)) / k
            coeffs.append(ck)
        roots = mpmath.polyroots(coeffs, maxsteps=500, extraprec=4 * dps)
        return np.array([complex(r) for r in roots])
