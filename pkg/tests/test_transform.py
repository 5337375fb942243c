import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F2, J2, crandn, random_hermitian
from structcanon.core import DimensionError, f_matrix, j_matrix
from structcanon.genmat import rand_unitary
from structcanon.structure import StructureError, structure_report
from structcanon.transform import (
    GivensRotation,
    PermutationSpec,
    apply_permutation_similarity,
    diagonalize_normal_2x2,
    givens_apply,
    hermitian_2x2_rotation,
    permutation_matrix,
    q_block_map,
    rotation_from_column,
    sign_pair_to_flip,
    symplectic_embed,
    symplectic_from_blockdiag,
    symplectic_residual,
)


def test_rotation_validation():
    with pytest.raises(DimensionError):
        GivensRotation(1, 1, 1.0, 0j)
    with pytest.raises(ValueError):
        GivensRotation(0, 1, -0.5, 0j)
    with pytest.raises(ValueError):
        GivensRotation(0, 1, 0.5, 0.5)


def test_rotation_embedding_layout():
    g = GivensRotation(1, 3, 0.6, 0.8j)
    m = g.matrix(4)
    assert m[1, 1] == m[3, 3] == 0.6
    assert m[1, 3] == -0.8j
    assert m[3, 1] == np.conj(0.8j)
    assert np.allclose(m.conj().T @ m, np.eye(4), atol=1e-15)


def test_givens_identity_and_swap():
    a = np.arange(9).reshape(3, 3).astype(complex)
    assert np.array_equal(givens_apply(a, GivensRotation.identity(0, 2)), a)
    d = np.diag([2.0, 7.0]).astype(complex)
    assert np.allclose(givens_apply(d, GivensRotation(0, 1, 0.0, 1.0)), np.diag([7.0, 2.0]))


@pytest.mark.parametrize("side", ["left_adjoint", "right", "similarity"])
def test_givens_against_full_product(rng, side):
    a = crandn(rng, 4, 4)
    s = complex(crandn(rng, 1)[0])
    s /= abs(s) * math.sqrt(2)
    g = GivensRotation(1, 3, 1 / math.sqrt(2), s)
    gm = g.matrix(4)
    ref = {"left_adjoint": gm.conj().T @ a, "right": a @ gm,
           "similarity": gm.conj().T @ a @ gm}[side]
    got = givens_apply(a, g, side)
    assert np.max(np.abs(got - ref)) < 1e-14 * np.linalg.norm(a)
    if side == "similarity":
        assert abs(np.linalg.norm(got) - np.linalg.norm(a)) < 1e-14 * np.linalg.norm(a)
    if side == "right":
        assert np.array_equal(got[:, [0, 2]], a[:, [0, 2]])
    if side == "left_adjoint":
        assert np.array_equal(got[[0, 2], :], a[[0, 2], :])


def test_givens_out_of_range():
    with pytest.raises(DimensionError):
        givens_apply(np.eye(2), GivensRotation(0, 2, 1.0, 0j))


def test_symplectic_embed():
    assert np.array_equal(symplectic_embed(GivensRotation.identity(), 2), np.eye(4))
    swap = symplectic_embed(GivensRotation(0, 1, 0.0, 1.0), 2)
    rep = structure_report(swap)
    assert rep.residual_symplectic <= 1e-14 and rep.residual_unitary <= 1e-14
    expected = np.zeros((4, 4))
    expected[0, 1], expected[1, 0], expected[2, 3], expected[3, 2] = -1, 1, -1, 1
    assert np.array_equal(swap, expected)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 1), st.floats(-math.pi, math.pi), st.integers(2, 5))
def test_symplectic_embed_any_rotation(c, phi, n):
    s = math.sqrt(1 - c * c) * complex(math.cos(phi), math.sin(phi))
    g = GivensRotation(0, n - 1, c, s)
    assert symplectic_residual(symplectic_embed(g, n)) <= 1e-14


def test_q_block_map(rng):
    q = q_block_map(1)
    assert np.allclose(q, np.array([[1, 1j], [1j, 1]]) / math.sqrt(2), atol=0)
    for m in (1, 2, 4):
        q = q_block_map(m)
        assert np.linalg.norm(q @ q.conj().T - np.eye(2 * m)) <= 1e-15 * 2 * m
        x = random_hermitian(rng, m)
        t = 1j * random_hermitian(rng, m)
        full = q.conj().T @ np.block([[t, x], [-x, t]]) @ q
        assert np.linalg.norm(full[:m, m:]) <= 1e-13
        assert np.linalg.norm(full[:m, :m] - (t + 1j * x)) <= 1e-13
        assert np.linalg.norm(full[m:, m:] - (t - 1j * x)) <= 1e-13


def test_symplectic_from_blockdiag(rng):
    assert np.allclose(symplectic_from_blockdiag(np.eye(2), np.eye(2)), np.eye(4), atol=0)
    s = symplectic_from_blockdiag([[1]], [[-1]])
    assert np.array_equal(s, [[0, -1j], [1j, 0]])
    v1, v2 = rand_unitary(3, 1), rand_unitary(3, 2)
    s = symplectic_from_blockdiag(v1, v2)
    assert symplectic_residual(s) <= 1e-13
    q = q_block_map(3)
    mid = np.zeros((6, 6), dtype=complex)
    mid[:3, :3], mid[3:, 3:] = v1, v2
    assert np.linalg.norm(s - q @ mid @ q.conj().T) <= 1e-14
    with pytest.raises(ValueError):
        symplectic_from_blockdiag(2 * np.eye(2), np.eye(2))
    with pytest.raises(DimensionError):
        symplectic_from_blockdiag(np.eye(2), np.eye(3))


def test_hermitian_rotation_textbook():
    g, d1, d2 = hermitian_2x2_rotation(2.0, 2.0, 1.0)
    a = np.array([[2, 1], [1, 2]], dtype=complex)
    out = g.block().conj().T @ a @ g.block()
    assert abs(out[0, 1]) < 1e-15
    assert np.allclose([out[0, 0], out[1, 1]], [d1, d2])
    assert sorted([d1, d2]) == pytest.approx([1, 3])


def test_hermitian_rotation_complex(rng):
    for _ in range(20):
        h = random_hermitian(rng, 2)
        g, d1, d2 = hermitian_2x2_rotation(h[0, 0].real, h[1, 1].real, h[0, 1])
        out = g.block().conj().T @ h @ g.block()
        assert abs(out[0, 1]) < 1e-14 * np.linalg.norm(h)
        assert out[0, 0].real == pytest.approx(d1)
        # smaller rotation angle: c >= 1/sqrt(2)
        assert g.c >= 1 / math.sqrt(2) - 1e-15


def test_diagonalize_normal_2x2_examples():
    g, e1, e2 = diagonalize_normal_2x2(J2)
    assert (e1, e2) == pytest.approx((1j, -1j))
    b = 2.5
    g, e1, e2 = diagonalize_normal_2x2([[0, b], [-b, 0]])
    assert g.c == pytest.approx(1 / math.sqrt(2))
    assert abs(g.s) == pytest.approx(1 / math.sqrt(2))
    assert (e1, e2) == pytest.approx((1j * b, -1j * b))
    g, e1, e2 = diagonalize_normal_2x2(np.diag([1, 3]))
    assert (e1, e2) == pytest.approx((3, 1))
    g, e1, e2 = diagonalize_normal_2x2(np.diag([3, 1]))
    assert g.c == 1 and (e1, e2) == (3, 1)
    with pytest.raises(StructureError):
        diagonalize_normal_2x2([[1, 1], [0, 1]])


def test_diagonalize_normal_2x2_random(rng):
    for seed in range(20):
        u = rand_unitary(2, seed)
        lam = crandn(rng, 2)
        a = (u * lam) @ u.conj().T
        g, e1, e2 = diagonalize_normal_2x2(a)
        out = g.block().conj().T @ a @ g.block()
        assert abs(out[0, 1]) + abs(out[1, 0]) <= 1e-13 * np.linalg.norm(a)
        assert (-e1.real, -e1.imag) <= (-e2.real, -e2.imag)


def test_rotation_from_column():
    v = np.array([1j, 1]) / math.sqrt(2)
    g = rotation_from_column(v)
    col = g.block()[:, 0]
    assert abs(abs(np.vdot(col, v)) - 1) < 1e-15


def test_permutations():
    p = PermutationSpec.identity(3)
    a = np.arange(9).reshape(3, 3)
    assert np.array_equal(apply_permutation_similarity(a, p), a)
    swap = PermutationSpec((1, 0))
    assert np.array_equal(apply_permutation_similarity(np.diag([1, 2]), swap), np.diag([2, 1]))
    alt = PermutationSpec((0, 2, 1, 3))
    d = np.diag([1, 1, -1, -1])
    assert np.array_equal(apply_permutation_similarity(d, alt), np.diag([1, -1, 1, -1]))
    pm = permutation_matrix(alt)
    assert np.array_equal(pm.T @ d @ pm, np.diag([1, -1, 1, -1]))
    with pytest.raises(ValueError):
        PermutationSpec((0, 0))
    with pytest.raises(DimensionError):
        apply_permutation_similarity(np.eye(3), swap)


def test_permutation_algebra():
    p = PermutationSpec((2, 0, 1))
    q = PermutationSpec((1, 2, 0))
    assert np.array_equal(permutation_matrix(p.then(q)), permutation_matrix(p) @ permutation_matrix(q))
    assert p.then(p.inverse()) == PermutationSpec.identity(3)


def test_sign_pair_to_flip():
    z = sign_pair_to_flip()
    assert np.linalg.norm(z.conj().T @ np.diag([1, -1]) @ z - F2) <= 1e-15
    assert np.allclose(z, z.conj().T, atol=0)
    assert np.linalg.norm(z @ z.conj().T - np.eye(2)) <= 1e-15
    m1, m2 = 3.0, -1.5
    got = z.conj().T @ np.diag([m1, m2]) @ z
    a, b = (m1 + m2) / 2, (m1 - m2) / 2
    assert np.allclose(got, [[a, b], [b, a]], atol=1e-15)


def test_group_matrices():
    assert symplectic_residual(j_matrix(2)) == 0
    f = f_matrix(4)
    assert np.array_equal(f.conj().T @ f @ f, f)
