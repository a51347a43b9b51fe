import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from conftest import I2, X, Y, Z
from dfakit.linalg import (
    MatrixSubspace,
    RankPolicy,
    compare_subspaces,
    hermitian_basis,
    hermitian_parts,
    hs_inner,
    is_psd,
    nullspace,
    orthonormalize,
    stacked_nullspace,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def complex_matrices(n):
    return st.tuples(arrays(float, (n, n), elements=finite),
                     arrays(float, (n, n), elements=finite)).map(lambda p: p[0] + 1j * p[1])


def test_hs_inner_examples():
    assert hs_inner(I2, I2) == 2
    assert hs_inner(X, Z) == 0
    assert hs_inner(np.diag([1, 2]), np.diag([3, 4])) == 11


def test_hs_inner_conjugate_symmetric_and_positive(rng):
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.isclose(hs_inner(a, b), np.conj(hs_inner(b, a)))
    assert hs_inner(a, a).real > 0 and abs(hs_inner(a, a).imag) < 1e-14
    # Tr(a^* b) written out
    assert np.isclose(hs_inner(a, b), np.trace(a.conj().T @ b))


def test_hs_inner_shape_mismatch():
    with pytest.raises(ValueError):
        hs_inner(I2, np.eye(3))


def test_hermitian_parts_examples():
    x1, x2 = hermitian_parts(I2)
    assert np.allclose(x1, I2) and np.allclose(x2, 0)
    x1, x2 = hermitian_parts(1j * Z)
    assert np.allclose(x1, 0) and np.allclose(x2, Z)


def test_hermitian_parts_of_raising_operator():
    e01 = np.array([[0, 1], [0, 0]], dtype=complex)
    x1, x2 = hermitian_parts(e01)
    # entrywise: (E01 - E10) / 2i = (-i E01 + i E10) / 2 = Y / 2
    assert np.allclose(x1, X / 2)
    assert np.allclose(x2, Y / 2)
    assert np.allclose(x1 + 1j * x2, e01)


def test_hermitian_parts_rejects_non_square():
    with pytest.raises(ValueError):
        hermitian_parts(np.zeros((2, 3)))


@given(complex_matrices(3))
def test_hermitian_parts_recompose(x):
    x1, x2 = hermitian_parts(x)
    assert np.allclose(x1, x1.conj().T, atol=0) and np.allclose(x2, x2.conj().T)
    assert np.linalg.norm(x - (x1 + 1j * x2)) <= 1e-14 * max(1.0, np.linalg.norm(x))


def test_is_psd_examples():
    assert is_psd(np.zeros((2, 2)))
    assert not is_psd(np.diag([1.0, -1.0]))
    assert is_psd(np.array([[2.0, 1.0], [1.0, 2.0]]))


def test_is_psd_rejects_non_hermitian():
    with pytest.raises(ValueError):
        is_psd(np.array([[0, 1], [0, 0]]))


def test_nullspace_examples():
    assert nullspace(np.eye(3)).shape == (3, 0)
    ns = nullspace(np.zeros((2, 2)))
    assert ns.shape == (2, 2) and np.allclose(ns.conj().T @ ns, np.eye(2))
    ns = nullspace(np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert ns.shape == (2, 1)
    v = ns[:, 0] * np.sign(ns[0, 0])
    assert np.allclose(v, np.array([1, -1]) / np.sqrt(2))


def test_nullspace_residual_bound(rng):
    a = rng.standard_normal((6, 3)) @ rng.standard_normal((3, 8))
    policy = RankPolicy()
    ns = nullspace(a, policy)
    assert ns.shape == (8, 5)
    s = np.linalg.svd(a, compute_uv=False)
    tau = policy.threshold(s[0], a.shape)
    for v in ns.T:
        assert np.linalg.norm(a @ v) <= 10 * tau


def test_nullspace_scale_floor_treats_noise_as_zero():
    noise = 1e-17 * np.array([[1.0, 2.0], [3.0, 4.0]])
    assert nullspace(noise).shape[1] == 0
    assert nullspace(noise, scale=1.0).shape[1] == 2


def test_stacked_nullspace_matches_direct(rng):
    blocks = [rng.standard_normal((7, 5)) @ np.diag([1, 1, 1, 0, 0]) for _ in range(6)]
    direct = nullspace(np.vstack(blocks))
    folded = stacked_nullspace(blocks, 5)
    assert direct.shape == folded.shape == (5, 2)
    p1 = direct @ direct.conj().T
    p2 = folded @ folded.conj().T
    assert np.linalg.norm(p1 - p2) < 1e-12


def test_orthonormalize_examples():
    assert orthonormalize([I2, 2 * I2]).dim == 1
    assert orthonormalize([I2, X, Y, Z]).dim == 4
    assert orthonormalize([X, X + 1e-16 * Y], tol=1e-12).dim == 1


def test_orthonormalize_empty():
    s = orthonormalize([], n=3)
    assert s.dim == 0 and s.n == 3
    assert s.projector().shape == (9, 9)


def test_orthonormalize_idempotent(rng):
    vs = [rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(4)]
    vs.append(vs[0] + 2j * vs[1])
    s = orthonormalize(vs)
    assert s.dim == 4
    assert s.orthonormality_error() < 1e-12
    again = orthonormalize(list(s.basis))
    assert np.linalg.norm(again.projector() - s.projector()) < 1e-12


def test_nullspace_then_orthonormalize_is_stable(rng):
    a = rng.standard_normal((4, 9)) + 1j * rng.standard_normal((4, 9))
    ns = nullspace(a)
    s = MatrixSubspace(3, ns.T.reshape(-1, 3, 3))
    again = orthonormalize(list(s.basis))
    assert again.dim == s.dim
    assert np.linalg.norm(again.projector() - s.projector()) < 1e-12


def test_projector_idempotent_hermitian(rng):
    vs = [rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(3)]
    p = orthonormalize(vs).projector()
    assert np.linalg.norm(p @ p - p) < 1e-10
    assert np.linalg.norm(p - p.conj().T) < 1e-10


def test_compare_subspaces_examples():
    one = orthonormalize([I2])
    diag = orthonormalize([I2, Z])
    c = compare_subspaces(one, diag)
    assert c.s1_in_s2 and not c.s2_in_s1 and not c.equal

    xs = orthonormalize([X])
    c = compare_subspaces(xs, xs)
    assert c.equal and c.distance < 1e-15

    e00 = np.diag([1.0, 0.0])
    e11 = np.diag([0.0, 1.0])
    c = compare_subspaces(orthonormalize([e00, e11]), orthonormalize([I2, X]))
    assert not c.s1_in_s2 and not c.s2_in_s1
    # E00 = (1 + Z)/2 keeps its Z/2 part outside span{1, X}: residual norm 1/sqrt2 per element
    assert np.isclose(c.residual_12, 1.0)


def test_compare_subspaces_basis_independent(rng):
    vs = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(2)]
    s1 = orthonormalize(vs)
    s2 = orthonormalize([vs[0] + vs[1], vs[0] - 3 * vs[1]])
    c = compare_subspaces(s1, s2)
    assert c.equal and c.distance < 1e-12


def test_compare_subspaces_reflexive_antisymmetric(rng):
    a = orthonormalize([rng.standard_normal((3, 3)) for _ in range(3)])
    b = orthonormalize(list(a.basis[:2]))
    assert compare_subspaces(a, a).equal
    assert compare_subspaces(b, a).s1_in_s2
    assert not compare_subspaces(a, b).s1_in_s2
    assert compare_subspaces(a, b).equal == compare_subspaces(b, a).equal


def test_compare_subspaces_ambient_mismatch():
    with pytest.raises(ValueError):
        compare_subspaces(orthonormalize([I2]), orthonormalize([np.eye(3)]))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_hermitian_basis_is_orthonormal_real_form(n):
    h = hermitian_basis(n)
    assert h.shape == (n * n, n, n)
    assert all(np.allclose(b, b.conj().T) for b in h)
    g = np.einsum("aij,bij->ab", h.conj(), h)
    assert np.allclose(g, np.eye(n * n))


@settings(max_examples=30)
@given(complex_matrices(2))
def test_project_is_hs_orthogonal(x):
    s = orthonormalize([I2, X])
    r = x - s.project(x)
    for b in s.basis:
        assert abs(hs_inner(b, r)) < 1e-12 * max(1.0, np.linalg.norm(x))
