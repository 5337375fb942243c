"""Seeded generators for structured normal matrices with a planted canonical form.

Randomness comes from numpy's PCG64 bit generator. A seed is turned into a
``numpy.random.SeedSequence`` and every independent block of a construction
draws from its own child stream, in a fixed order:

* :func:`rand_unitary_symplectic` and :func:`rand_unitary_perplectic` spawn
  two children, one per unitary block;
* the class generators spawn two children, the first for the spectrum and
  the second for the structured unitary similarity.

Identical seeds therefore give bit-identical matrices on any platform with
the same numpy major version.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hamiltonian import HamCanonicalForm, assemble_ham_canonical
from .perplectic import PerHCanonicalForm, assemble_perh_canonical
from .transform import symplectic_from_blockdiag

#: smallest allowed |Re d1| (Hamiltonian) and Im d (per-Hermitian)
MIN_OFFSET = 0.1
#: smallest distance between distinct planted eigenvalues
MIN_GAP = 0.05


def _seq(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed) & ((1 << 64) - 1) if seed is not None else 0)


def _rng(seed):
    return np.random.Generator(np.random.PCG64(_seq(seed)))


@dataclass
class GenSpec:
    """Generator request.

    ``n`` is half the matrix size. Hamiltonian classes use ``n1`` (number of
    eigenvalue pairs off the imaginary axis); per-Hermitian classes use ``r``
    (number of 2 x 2 real blocks in X), the rest being conjugate pairs.
    ``spectrum`` may fix the canonical data: ``d1``, ``d2`` (imaginary parts)
    and ``d3`` for Hamiltonian classes, ``d``, ``x_a`` and ``x_b`` for
    per-Hermitian classes.
    """

    n: int
    seed: int = 0
    n1: int | None = None
    r: int | None = None
    spectrum: dict | None = None
    degenerate: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.n1 is not None and not 0 <= self.n1 <= self.n:
            raise ValueError(f"n1 must lie in 0..{self.n}")
        if self.r is not None and not 0 <= self.r <= self.n:
            raise ValueError(f"r must lie in 0..{self.n}")


def rand_unitary(m, seed=0):
    """Unitary matrix from the QR factorization of a seeded complex Gaussian matrix.

    The phases of ``R``'s diagonal are moved into ``Q`` so the result is a
    deterministic function of the Gaussian draw.
    """
    if m < 1:
        raise ValueError("m must be positive")
    rng = _rng(seed)
    g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    q, r = np.linalg.qr(g)
    d = r.diagonal()
    return q * (d / np.abs(d))


def rand_unitary_symplectic(n, seed=0):
    s1, s2 = _seq(seed).spawn(2)
    return symplectic_from_blockdiag(rand_unitary(n, s1), rand_unitary(n, s2), tol=1e-12)


def flip_eigenbasis(n):
    """Orthonormal ``E`` whose first n columns span the +1 and last n the -1 eigenspace of F."""
    e = np.zeros((2 * n, 2 * n))
    h = 1 / math.sqrt(2)
    for i in range(n):
        e[i, i] = e[2 * n - 1 - i, i] = h
        e[i, n + i] = h
        e[2 * n - 1 - i, n + i] = -h
    return e


def perplectic_from_blocks(q_plus, q_minus):
    """``E diag(Q+, Q-) E^H``, unitary and commuting with F when ``Q+-`` are unitary."""
    q_plus = np.asarray(q_plus, dtype=np.complex128)
    q_minus = np.asarray(q_minus, dtype=np.complex128)
    n = q_plus.shape[0]
    if q_plus.shape != (n, n) or q_minus.shape != (n, n):
        raise ValueError("Q+ and Q- must be square of equal size")
    e = flip_eigenbasis(n)
    mid = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    mid[:n, :n] = q_plus
    mid[n:, n:] = q_minus
    return e @ mid @ e.T


def rand_unitary_perplectic(n, seed=0):
    s1, s2 = _seq(seed).spawn(2)
    return perplectic_from_blocks(rand_unitary(n, s1), rand_unitary(n, s2))


def _separated(new, old):
    return all(abs(a - b) >= MIN_GAP for a in new for b in old)


def _draw(rng, count, sample, taken, degenerate, taken_b=None):
    """Draw ``count`` values whose eigenvalue images keep the gap to all earlier ones.

    ``sample`` returns ``(value, images, b_images)``; ``b_images`` are the
    induced eigenvalues of the Hermitian part, kept apart in ``taken_b``
    when that list is given.
    """
    out = []
    while len(out) < count:
        if degenerate and out and rng.random() < 0.5:
            out.append(out[-1])
            continue
        v, images, b_images = sample(rng)
        if not _separated(images, taken):
            continue
        if any(not _separated([a], images[i + 1:]) for i, a in enumerate(images)):
            continue
        if taken_b is not None and not (_separated(b_images, taken_b)
                                        and _separated(b_images[:1], b_images[1:])):
            continue
        out.append(v)
        taken.extend(images)
        if taken_b is not None:
            taken_b.extend(b_images)
    return out


def _ham_data(spec, rng):
    n = spec.n
    n1 = n if spec.n1 is None else spec.n1
    if spec.spectrum is not None:
        d1 = np.asarray(spec.spectrum.get("d1", []), dtype=np.complex128)
        d2 = 1j * np.asarray(spec.spectrum.get("d2", []), dtype=float)
        d3 = np.asarray(spec.spectrum.get("d3", []), dtype=float)
        if spec.n1 is not None and len(d1) != spec.n1:
            raise ValueError("explicit d1 does not match n1")
        if len(d2) != n - len(d1) or len(d3) != len(d2):
            raise ValueError("explicit spectrum does not match n and n1")
        if np.any(d3 < 0):
            raise ValueError("d3 must be nonnegative")
        return d1, d2, d3
    taken = []

    def off_axis(g):
        re = g.standard_normal()
        re = math.copysign(max(abs(re), MIN_OFFSET), re)
        v = complex(re, g.standard_normal())
        return v, [v, -v.conjugate()], [re, -re]

    def on_axis(g):
        y = g.standard_normal()
        d3 = max(abs(g.standard_normal()), MIN_GAP)
        return (y, d3), [1j * (y + d3), 1j * (y - d3)], []

    # distinct eigenvalues of the Hermitian part too, unless degeneracy is requested
    taken_b = None
    if not spec.degenerate:
        taken_b = [0.0] if n1 < n else []
    d1 = np.array(_draw(rng, n1, off_axis, taken, spec.degenerate, taken_b),
                  dtype=np.complex128)
    imag = _draw(rng, n - n1, on_axis, taken, spec.degenerate)
    d2 = 1j * np.array([y for y, _ in imag], dtype=float)
    d3 = np.array([t for _, t in imag], dtype=float)
    return d1, d2, d3


def rand_normal_hamiltonian(spec):
    """Normal Hamiltonian ``S P S^H`` with ``P`` the planted canonical pattern.

    Returns the matrix and the planted :class:`HamCanonicalForm` whose ``z``
    is the generating unitary symplectic ``S`` (so ``z^H H z = P``).
    """
    s_spec, s_tr = _seq(spec.seed).spawn(2)
    d1, d2, d3 = _ham_data(spec, _rng(s_spec))
    n = spec.n
    p = assemble_ham_canonical(d1, d2, d3, n)
    s = rand_unitary_symplectic(n, s_tr)
    h = s @ p @ s.conj().T
    planted = HamCanonicalForm(n=n, n1=len(d1), d1=d1, d2=d2, d3=d3, z=s, residual_canonical=0.0)
    return h, planted


def rand_normal_skew_hamiltonian(spec):
    """``W = i H`` for ``H`` from :func:`rand_normal_hamiltonian`; planted factor ``1j``."""
    h, planted = rand_normal_hamiltonian(spec)
    planted.factor = 1j
    return 1j * h, planted


def _perh_data(spec, rng):
    n = spec.n
    r = spec.r if spec.r is not None else n // 2
    if spec.spectrum is not None:
        d = np.asarray(spec.spectrum.get("d", []), dtype=np.complex128)
        x_a = np.asarray(spec.spectrum.get("x_a", []), dtype=float)
        x_b = np.asarray(spec.spectrum.get("x_b", []), dtype=float)
        if len(d) + len(x_a) != n or len(x_a) != len(x_b):
            raise ValueError("explicit spectrum does not match n")
        if np.any(d.imag <= 0):
            raise ValueError("entries of d need positive imaginary part")
        return d, x_a, x_b
    taken = []

    def upper(g):
        v = complex(g.standard_normal(), max(abs(g.standard_normal()), MIN_OFFSET))
        return v, [v, v.conjugate()], []

    def real_pair(g):
        a, b = g.standard_normal(), g.standard_normal()
        return (a, b), [complex(a + b), complex(a - b)], []

    d = np.array(_draw(rng, n - r, upper, taken, spec.degenerate), dtype=np.complex128)
    x = _draw(rng, r, real_pair, taken, spec.degenerate)
    x_a = np.array([a for a, _ in x], dtype=float)
    x_b = np.array([b for _, b in x], dtype=float)
    return d, x_a, x_b


def _group(d):
    out = []
    for v in d:
        if out and out[-1][0] == v:
            out[-1] = (v, out[-1][1] + 1)
        else:
            out.append((complex(v), 1))
    return out


def rand_normal_per_hermitian(spec):
    """Normal per-Hermitian ``P diag(D, X, F D^H F) P^H`` with ``P`` unitary perplectic.

    Returns the matrix and the planted :class:`PerHCanonicalForm` with ``u = P``.
    """
    s_spec, s_tr = _seq(spec.seed).spawn(2)
    d, x_a, x_b = _perh_data(spec, _rng(s_spec))
    pattern = assemble_perh_canonical(d, x_a, x_b)
    p = rand_unitary_perplectic(spec.n, s_tr)
    m = p @ pattern @ p.conj().T
    groups = _group(d)
    planted = PerHCanonicalForm(n=spec.n, t=len(groups), complex_eigs=groups, x_a=x_a, x_b=x_b,
                                u=p, residual_canonical=0.0, d=d)
    return m, planted


def rand_normal_perskew_hermitian(spec):
    """``K = i M`` for ``M`` from :func:`rand_normal_per_hermitian`; planted factor ``1j``."""
    m, planted = rand_normal_per_hermitian(spec)
    planted.factor = 1j
    return 1j * m, planted


def rand_normal(m, seed=0, eigenvalues=None):
    """Unstructured normal ``U diag(eigs) U^H``; returns the matrix and the eigenvalues."""
    s_spec, s_tr = _seq(seed).spawn(2)
    if eigenvalues is None:
        rng = _rng(s_spec)
        eigenvalues = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    eigenvalues = np.asarray(eigenvalues, dtype=np.complex128)
    if len(eigenvalues) != m:
        raise ValueError("need m eigenvalues")
    u = rand_unitary(m, s_tr)
    return (u * eigenvalues) @ u.conj().T, eigenvalues


def rand_hermitian(m, seed=0):
    rng = _rng(seed)
    g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return (g + g.conj().T) / 2


GENERATORS = {
    "ham": rand_normal_hamiltonian,
    "skewham": rand_normal_skew_hamiltonian,
    "perh": rand_normal_per_hermitian,
    "perskewh": rand_normal_perskew_hermitian,
}


def generate(cls, spec):
    """Dispatch on the class name ``ham``, ``skewham``, ``perh`` or ``perskewh``."""
    try:
        gen = GENERATORS[cls]
    except KeyError:
        raise ValueError(f"unknown class {cls!r}") from None
    return gen(spec)


__all__ = [
    "GenSpec", "rand_unitary", "rand_unitary_symplectic", "rand_unitary_perplectic",
    "perplectic_from_blocks", "flip_eigenbasis", "rand_normal_hamiltonian",
    "rand_normal_skew_hamiltonian", "rand_normal_per_hermitian",
    "rand_normal_perskew_hermitian", "rand_normal", "rand_hermitian", "generate", "GENERATORS",
]
