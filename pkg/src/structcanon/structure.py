"""Structure predicates, residuals and the i-multiplication dualities.

The four matrix classes are defined through the skew form ``J`` and the flip
``F``::

    Hamiltonian          (J A)^H =  J A
    skew-Hamiltonian     (J A)^H = -J A
    per-Hermitian        (F A)^H =  F A
    perskew-Hermitian    (F A)^H = -F A

and the two transformation groups by ``S^H J S = J`` (symplectic) and
``P^H F P = F`` (perplectic).
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass

import numpy as np

from .core import StructCanonError, as_matrix, f_matrix, j_matrix, require_square


class StructureError(StructCanonError, ValueError):
    """Input violates a structural precondition (class membership, normality)."""


class Structure(str, enum.Enum):
    NORMAL = "normal"
    HAMILTONIAN = "hamiltonian"
    SKEW_HAMILTONIAN = "skew_hamiltonian"
    PER_HERMITIAN = "per_hermitian"
    PERSKEW_HERMITIAN = "perskew_hermitian"
    UNITARY = "unitary"
    SYMPLECTIC = "symplectic"
    PERPLECTIC = "perplectic"


def hermitian_part(a):
    """``(A + A^H) / 2``."""
    a = as_matrix(a)
    require_square(a)
    return (a + a.conj().T) / 2


def skew_hermitian_part(a):
    """``(A - A^H) / 2``."""
    a = as_matrix(a)
    require_square(a)
    return (a - a.conj().T) / 2


@dataclass(frozen=True)
class StructureReport:
    """Absolute Frobenius residuals of a square matrix against each class.

    Residuals that need an even dimension are ``None`` for odd sizes.
    """

    size: int
    norm: float
    residual_normal: float
    residual_unitary: float
    residual_hamiltonian: float | None = None
    residual_skew_hamiltonian: float | None = None
    residual_per_hermitian: float | None = None
    residual_perskew_hermitian: float | None = None
    residual_symplectic: float | None = None
    residual_perplectic: float | None = None

    def residual(self, cls):
        return getattr(self, "residual_" + Structure(cls).value)

    def holds(self, cls, tol):
        res = self.residual(cls)
        if res is None:
            return False
        return res <= tol * max(1.0, self.norm)

    def classify(self, tol):
        return {s.value: self.holds(s, tol) for s in Structure}

    def to_dict(self):
        return asdict(self)


def structure_report(a):
    a = as_matrix(a)
    require_square(a)
    size = a.shape[0]
    ah = a.conj().T
    eye = np.eye(size)
    fro = np.linalg.norm
    fields = dict(
        size=size,
        norm=float(fro(a)),
        residual_normal=float(fro(a @ ah - ah @ a)),
        residual_unitary=float(fro(ah @ a - eye)),
    )
    if size % 2 == 0:
        j = j_matrix(size // 2)
        f = f_matrix(size)
        ja = j @ a
        fa = f @ a
        fields.update(
            residual_hamiltonian=float(fro(ja - ja.conj().T)) / 2,
            residual_skew_hamiltonian=float(fro(ja + ja.conj().T)) / 2,
            residual_per_hermitian=float(fro(fa - fa.conj().T)) / 2,
            residual_perskew_hermitian=float(fro(fa + fa.conj().T)) / 2,
            residual_symplectic=float(fro(ah @ j @ a - j)),
            residual_perplectic=float(fro(ah @ f @ a - f)),
        )
    return StructureReport(**fields)


def is_structure(a, cls, tol):
    """True iff the class residual is at most ``tol * max(1, ||a||_F)``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return structure_report(a).holds(cls, tol)


def _residual(a, cls):
    a = as_matrix(a)
    require_square(a)
    if a.shape[0] % 2:
        raise StructureError(f"{Structure(cls).value} requires an even dimension")
    if cls in (Structure.HAMILTONIAN, Structure.SKEW_HAMILTONIAN):
        x = j_matrix(a.shape[0] // 2) @ a
    else:
        x = f_matrix(a.shape[0]) @ a
    sign = 1 if cls in (Structure.HAMILTONIAN, Structure.PER_HERMITIAN) else -1
    return float(np.linalg.norm(x - sign * x.conj().T)) / 2


def require_structure(a, cls, tol, what="input"):
    a = as_matrix(a)
    res = _residual(a, cls)
    if res > tol * max(1.0, float(np.linalg.norm(a))):
        raise StructureError(f"{what} is not {Structure(cls).value}: residual {res:.3e}")
    return a


def require_normal(a, tol, what="input"):
    """Normality check; the residual is quadratic in ``a`` so the bound scales with ``||a||^2``."""
    a = as_matrix(a)
    ah = a.conj().T
    res = float(np.linalg.norm(a @ ah - ah @ a))
    if res > tol * max(1.0, float(np.linalg.norm(a))) ** 2:
        raise StructureError(f"{what} is not normal: residual {res:.3e}")
    return a


def skewham_from_ham(h, tol=1e-10):
    """``W = i H``."""
    h = require_structure(h, Structure.HAMILTONIAN, tol)
    return 1j * h


def ham_from_skewham(w, tol=1e-10):
    """``H = -i W``."""
    w = require_structure(w, Structure.SKEW_HAMILTONIAN, tol)
    return -1j * w


def perskewh_from_perh(m, tol=1e-10):
    """``K = i M``."""
    m = require_structure(m, Structure.PER_HERMITIAN, tol)
    return 1j * m


def perh_from_perskewh(k, tol=1e-10):
    """``M = -i K``."""
    k = require_structure(k, Structure.PERSKEW_HERMITIAN, tol)
    return -1j * k
