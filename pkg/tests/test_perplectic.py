import math

import numpy as np
import pytest

from conftest import F2
from structcanon.core import f_matrix
from structcanon.genmat import GenSpec, rand_normal_per_hermitian, rand_unitary_perplectic
from structcanon.jacobi import normal_diagonalize_gh
from structcanon.perplectic import (
    PerHCanonicalForm,
    absorb_lambda_blocks,
    assemble_perh_canonical,
    canon_normal_per_hermitian,
    canon_normal_perskew_hermitian,
    extract_f_blocks,
    group_spectrum,
)
from structcanon.spectrum import spectrum_distance
from structcanon.structure import Structure, StructureError, is_structure


def _check_form(m, form, tol=1e-10):
    u = form.u
    size = m.shape[0]
    f = f_matrix(size)
    assert np.linalg.norm(u.conj().T @ u - np.eye(size)) <= 1e-11 * math.sqrt(size)
    assert np.linalg.norm(u.conj().T @ f @ u - f) <= 1e-11 * math.sqrt(size)
    target = form.canonical_matrix()
    assert np.linalg.norm(u.conj().T @ m @ u - target) == pytest.approx(
        form.residual_canonical, rel=1e-6, abs=1e-15)
    assert form.residual_canonical <= 50 * tol * max(1, np.linalg.norm(m))
    x = form.x_matrix()
    fx = f_matrix(x.shape[0]) if x.size else x
    assert np.array_equal(x, x.T)
    if x.size:
        assert np.array_equal(x, fx @ x @ fx)
    assert 2 * sum(mult for _, mult in form.complex_eigs) + 2 * form.r == size


def test_group_spectrum_examples():
    g = group_spectrum([1 + 1j, 1 - 1j], 1e-8, 1e-8)
    assert g.complex_pairs == ((1 + 1j, 1),) and g.reals == ()
    g = group_spectrum([2, 2, 5, 5], 1e-8, 1e-8)
    assert g.reals == ((5.0, 2), (2.0, 2)) and g.r == 2
    g = group_spectrum([1 + 1j, 1 - 1j, 1 + 1j, 1 - 1j, 3, 3], 1e-8, 1e-8)
    assert g.complex_pairs == ((1 + 1j, 2),) and g.reals == ((3.0, 2),)
    assert g.column_order.image == (0, 2, 1, 3, 4, 5)


def test_group_spectrum_errors():
    with pytest.raises(StructureError):
        group_spectrum([1 + 1j, 2 - 1j], 1e-8, 1e-8)
    with pytest.raises(StructureError):
        group_spectrum([1 + 1j, 1 - 1j, 1 + 1j, 3, 4, 5], 1e-8, 1e-8)
    with pytest.raises(StructureError):
        group_spectrum([1.0, 2.0, 3.0], 1e-8, 1e-8)
    with pytest.raises(ValueError):
        group_spectrum([1.0, 2.0], 0, 1e-8)


def test_group_spectrum_order():
    g = group_spectrum([1 - 2j, 3 + 1j, 1 + 2j, 3 - 1j, 1 + 1j, 1 - 1j], 1e-8, 1e-8)
    assert [lam for lam, _ in g.complex_pairs] == [3 + 1j, 1 + 2j, 1 + 1j]


def test_extract_f_blocks_examples():
    m = np.diag([1 + 1j, 1 - 1j])
    g = group_spectrum(np.diag(m), 1e-8, 1e-8)
    s_lam, s_mu = extract_f_blocks(np.eye(2), g, 1e-12)
    assert np.allclose(s_lam[0], [[1]]) and s_mu == []
    g = group_spectrum([2, 2], 1e-8, 1e-8)
    s_lam, s_mu = extract_f_blocks(np.eye(2), g, 1e-12)
    assert s_lam == [] and np.allclose(s_mu[0], F2)


def test_extract_f_blocks_planted_and_stage_t():
    m, _ = rand_normal_per_hermitian(GenSpec(n=4, r=2, seed=5))
    gh = normal_diagonalize_gh(m)
    g = group_spectrum(gh.eigenvalues, 1e-7, 1e-7, np.linalg.norm(m))
    u = gh.u[:, list(g.column_order.image)]
    s_lam, s_mu = extract_f_blocks(u, g, 1e-7)
    for s in s_mu:
        assert np.allclose(s, s.conj().T, atol=1e-12)
    u1 = absorb_lambda_blocks(u, g, s_lam)
    gram = u1.conj().T @ f_matrix(8) @ u1
    for lam, lamb in g.lambda_slices():
        k = lam.stop - lam.start
        assert np.linalg.norm(gram[lam, lamb] - np.eye(k)) <= 1e-10
        assert np.linalg.norm(gram[lam, lam]) <= 1e-10
    assert np.linalg.norm(u1.conj().T @ m @ u1 - u.conj().T @ m @ u) <= 1e-9


def test_extract_f_blocks_bad_grouping():
    g = group_spectrum([1.0, 1.0 + 1e-3], 1e-8, 1e-8)
    with pytest.raises(StructureError):
        extract_f_blocks(np.eye(2), g, 1e-12)


def test_pattern():
    p = assemble_perh_canonical([1 + 2j], [0.5, 2.0], [1.0, -3.0])
    assert is_structure(p, Structure.PER_HERMITIAN, 1e-15)
    assert p[1, 4] == 1.0 and p[2, 3] == -3.0 and p[5, 5] == 1 - 2j


def test_canon_f2_fixed_point():
    form = canon_normal_per_hermitian(F2)
    assert form.r == 1 and form.t == 0
    assert form.x_a == pytest.approx([0]) and form.x_b == pytest.approx([1])
    assert form.residual_canonical <= 1e-13
    assert spectrum_distance(form.eigenvalues(), [1, -1]) < 1e-15


def test_canon_examples():
    form = canon_normal_per_hermitian(np.diag([1 + 1j, 1 - 1j]))
    assert form.r == 0 and form.complex_eigs[0][0] == pytest.approx(1 + 1j)
    assert np.allclose(np.abs(form.u), np.eye(2), atol=1e-15)
    form = canon_normal_per_hermitian(2 * np.eye(2))
    assert form.x_a == pytest.approx([2]) and form.x_b == pytest.approx([0])


@pytest.mark.parametrize("n,r,seed", [(5, 2, 0), (5, 0, 1), (5, 5, 2), (8, 3, 3), (1, 1, 4)])
def test_canon_planted(n, r, seed):
    m, planted = rand_normal_per_hermitian(GenSpec(n=n, r=r, seed=seed))
    form = canon_normal_per_hermitian(m)
    _check_form(m, form)
    assert spectrum_distance(form.eigenvalues(), planted.eigenvalues()) <= 1e-10
    assert np.max(np.abs(np.linalg.eigvals(form.x_matrix()).imag), initial=0) <= 1e-10


@pytest.mark.parametrize("seed", range(3))
def test_canon_degenerate(seed):
    m, planted = rand_normal_per_hermitian(GenSpec(n=7, r=3, seed=seed, degenerate=True))
    form = canon_normal_per_hermitian(m)
    _check_form(m, form)
    assert spectrum_distance(form.eigenvalues(), planted.eigenvalues()) <= 1e-9


def test_canon_rejects():
    with pytest.raises(StructureError):
        canon_normal_per_hermitian(np.diag([1.0, 2.0]))
    with pytest.raises(StructureError):
        canon_normal_per_hermitian(np.array([[1, 0], [1, 1]]))


def test_perskew_wrapper():
    form = canon_normal_perskew_hermitian(1j * F2)
    base = canon_normal_per_hermitian(F2)
    assert np.array_equal(form.u, base.u)
    assert np.allclose(form.u.conj().T @ (1j * F2) @ form.u, 1j * base.pattern())
    k = 1j * np.diag([1 + 1j, 1 - 1j])
    assert np.allclose(k, np.diag([-1 + 1j, 1 + 1j]))
    assert is_structure(k, Structure.PERSKEW_HERMITIAN, 1e-15)
    form = canon_normal_perskew_hermitian(k)
    assert spectrum_distance(form.eigenvalues(), np.diag(k)) <= 1e-14


@pytest.mark.parametrize("seed", range(3))
def test_perskew_planted(seed):
    m, planted = rand_normal_per_hermitian(GenSpec(n=5, r=2, seed=seed))
    k = 1j * m
    form = canon_normal_perskew_hermitian(k)
    assert spectrum_distance(form.eigenvalues(), 1j * planted.per_hermitian_eigenvalues()) <= 1e-10


def test_perplectic_invariance():
    m, _ = rand_normal_per_hermitian(GenSpec(n=4, r=2, seed=8))
    p = rand_unitary_perplectic(4, 77)
    f1 = canon_normal_per_hermitian(m)
    f2 = canon_normal_per_hermitian(p @ m @ p.conj().T)
    assert spectrum_distance(f1.eigenvalues(), f2.eigenvalues()) <= 1e-10


def test_form_dict_round_trip():
    m, _ = rand_normal_per_hermitian(GenSpec(n=4, r=2, seed=6))
    form = canon_normal_per_hermitian(m)
    back = PerHCanonicalForm.from_dict(form.to_dict(include_transform=True))
    assert back.to_dict() == form.to_dict()
    assert np.array_equal(back.u, form.u)
