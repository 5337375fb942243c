import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F2, J2, crandn
from structcanon.core import j_matrix
from structcanon.structure import (
    Structure,
    StructureError,
    ham_from_skewham,
    hermitian_part,
    is_structure,
    perh_from_perskewh,
    perskewh_from_perh,
    require_normal,
    skew_hermitian_part,
    skewham_from_ham,
    structure_report,
)


def test_parts_examples():
    a = np.array([[1, 2], [0, -1]], dtype=complex)
    assert np.array_equal(hermitian_part(a), [[1, 1], [1, -1]])
    assert np.array_equal(skew_hermitian_part(a), [[0, 1], [-1, 0]])
    h = np.array([[2, 1j], [-1j, 0]])
    assert np.array_equal(hermitian_part(h), h)
    assert np.array_equal(skew_hermitian_part(h), np.zeros((2, 2)))
    assert np.array_equal(hermitian_part(J2), np.zeros((2, 2)))
    assert np.array_equal(skew_hermitian_part(J2), J2)


def test_parts_sum(rng):
    a = crandn(rng, 5, 5)
    b, c = hermitian_part(a), skew_hermitian_part(a)
    assert np.max(np.abs(b + c - a)) <= 1e-15 * np.linalg.norm(a)
    assert np.array_equal(b, b.conj().T)
    assert np.array_equal(c, -c.conj().T)


def test_report_j2():
    rep = structure_report(J2)
    assert rep.residual_hamiltonian == 0
    assert rep.residual_normal == 0
    assert rep.residual_symplectic == 0
    assert rep.residual_unitary == 0


def test_report_f2_and_diag():
    rep = structure_report(F2)
    assert rep.residual_per_hermitian == 0
    assert rep.residual_perplectic == 0
    assert rep.residual_normal == 0
    assert structure_report(np.diag([1, -1])).residual_hamiltonian == 0


def test_report_odd_size():
    rep = structure_report(np.eye(3))
    assert rep.residual_hamiltonian is None
    assert not rep.holds(Structure.HAMILTONIAN, 1e-10)
    assert rep.holds(Structure.UNITARY, 1e-10)


def test_is_structure_examples():
    assert is_structure(J2, Structure.HAMILTONIAN, 1e-12)
    assert not is_structure(np.eye(2), Structure.HAMILTONIAN, 1e-12)
    assert not is_structure(F2 * (1 + 1e-6), Structure.PERPLECTIC, 1e-12)
    assert is_structure(F2, Structure.PERPLECTIC, 1e-12)
    with pytest.raises(ValueError):
        is_structure(J2, Structure.HAMILTONIAN, 0)


def test_dualities():
    w = skewham_from_ham(J2)
    assert np.array_equal(w, [[0, 1j], [-1j, 0]])
    assert is_structure(w, Structure.SKEW_HAMILTONIAN, 1e-14)
    assert np.array_equal(w, w.conj().T)
    assert np.array_equal(ham_from_skewham(w), J2)
    k = perskewh_from_perh(F2)
    assert is_structure(k, Structure.PERSKEW_HERMITIAN, 1e-14)
    assert np.array_equal(perh_from_perskewh(k), F2)
    with pytest.raises(StructureError):
        skewham_from_ham(np.eye(2))
    with pytest.raises(StructureError):
        perskewh_from_perh(np.diag([1.0, 2.0]))


def test_duality_preserves_residual(rng):
    a = crandn(rng, 4, 4)
    r1 = structure_report(a)
    r2 = structure_report(1j * a)
    assert r2.residual_skew_hamiltonian == pytest.approx(r1.residual_hamiltonian)
    assert r2.residual_perskew_hermitian == pytest.approx(r1.residual_per_hermitian)


def test_require_normal():
    require_normal(J2, 1e-14)
    with pytest.raises(StructureError):
        require_normal(np.array([[1, 1], [0, 1]]), 1e-8)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_parts_of_ja_add_up(n, seed):
    # the Hermitian and skew-Hermitian parts of JA are orthogonal and sum to JA
    rng = np.random.default_rng(seed)
    a = crandn(rng, 2 * n, 2 * n)
    rep = structure_report(a)
    total = np.linalg.norm(j_matrix(n) @ a) ** 2
    got = rep.residual_hamiltonian ** 2 + rep.residual_skew_hamiltonian ** 2
    assert abs(got - total) <= 1e-12 * total
    for v in rep.to_dict().values():
        if isinstance(v, float):
            assert v >= 0 and np.isfinite(v)
