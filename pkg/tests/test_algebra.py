import numpy as np
import pytest

from conftest import I2, X, Z
from dfakit.algebra import GeneratorSet, algebra_closure, commutant, contains
from dfakit.linalg import compare_subspaces, orthonormalize


def rand_c(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def brute_commutant_dim(gens, n):
    """Dimension of {x : [x, G] = [x, G^*] = 0} from the Gram operator's eigenvalues."""
    eye = np.eye(n)
    gram = np.zeros((n * n, n * n), dtype=complex)
    for g in gens:
        for h in (g, g.conj().T):
            m = np.kron(h, eye) - np.kron(eye, h.T)
            gram += m.conj().T @ m
    w = np.linalg.eigvalsh(gram)
    return int(np.sum(w < 1e-8 * max(1.0, w[-1])))


def assert_star_algebra(s, tol=1e-10):
    n = s.n
    assert contains(s, np.eye(n), tol)
    for a in s.basis:
        assert contains(s, a.conj().T, tol)
        for b in s.basis:
            assert contains(s, a @ b, tol)


def test_generator_set_validation():
    with pytest.raises(ValueError):
        GeneratorSet([])
    with pytest.raises(ValueError):
        GeneratorSet([I2, np.eye(3)])


def test_commutant_examples():
    assert commutant([I2]).dim == 4
    assert commutant([X, Z]).dim == 1
    diag = commutant([Z])
    assert diag.dim == 2
    e00 = np.diag([1.0, 0.0])
    e11 = np.diag([0.0, 1.0])
    assert compare_subspaces(diag, orthonormalize([e00, e11])).equal


def test_commutant_of_scalar_noise_is_everything():
    # a generator equal to 1 up to rounding must not cut the commutant down
    u = np.linalg.qr(np.random.default_rng(3).standard_normal((3, 3)))[0]
    assert commutant([u @ u.T]).dim == 9


def test_commutant_shape_mismatch():
    with pytest.raises(ValueError):
        commutant([I2, np.eye(3)])


@pytest.mark.parametrize("n,count", [(2, 1), (3, 2), (4, 1), (4, 3)])
def test_commutant_matches_brute_force(rng, n, count):
    gens = [rand_c(rng, n) for _ in range(count)]
    s = commutant(gens)
    assert s.dim == brute_commutant_dim(gens, n)
    for x in s.basis:
        for g in gens:
            assert np.linalg.norm(x @ g - g @ x) < 1e-10
            assert np.linalg.norm(x @ g.conj().T - g.conj().T @ x) < 1e-10
    assert_star_algebra(s)


def test_commutant_of_block_structure(rng):
    # generators in M_1 (+) M_2 inside M_3: commutant is span{P_1, P_2}
    gens = []
    for _ in range(2):
        g = np.zeros((3, 3), dtype=complex)
        g[0, 0] = rng.standard_normal()
        g[1:, 1:] = rand_c(rng, 2)
        gens.append(g)
    s = commutant(gens)
    assert s.dim == 2
    assert contains(s, np.diag([1.0, 0.0, 0.0]))
    assert_star_algebra(s)


def test_commutant_of_tensor_factor(rng):
    gens = [np.kron(rand_c(rng, 2), I2) for _ in range(2)]
    s = commutant(gens)
    assert s.dim == 4
    for b in [I2, X, Z]:
        assert contains(s, np.kron(I2, b))
    assert not contains(s, np.kron(X, I2))


def test_algebra_closure_examples():
    s = algebra_closure([X])
    assert s.dim == 2 and contains(s, I2) and contains(s, X)
    e01 = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert algebra_closure([e01]).dim == 4
    assert algebra_closure([I2]).dim == 1


def test_algebra_closure_no_identity_added():
    e00 = np.diag([1.0, 0.0, 0.0])
    s = algebra_closure([e00])
    assert s.dim == 1 and not contains(s, np.eye(3))


@pytest.mark.parametrize("n", [2, 3])
def test_bicommutant(rng, n):
    for _ in range(3):
        gens = [rand_c(rng, n) for _ in range(2)]
        lhs = commutant(commutant(gens))
        rhs = algebra_closure(gens + [np.eye(n)])
        assert compare_subspaces(lhs, rhs).distance < 1e-8


def test_bicommutant_structured(rng):
    gens = [np.kron(rand_c(rng, 2), I2), np.kron(rand_c(rng, 2), I2)]
    lhs = commutant(commutant(gens))
    rhs = algebra_closure(gens + [np.eye(4)])
    assert lhs.dim == rhs.dim == 4
    assert compare_subspaces(lhs, rhs).distance < 1e-8


def test_closure_inside_bicommutant(rng):
    gens = [np.kron(np.diag([1.0, 0.0]), rand_c(rng, 2))]
    closure = algebra_closure(gens)
    assert compare_subspaces(closure, commutant(commutant(gens))).s1_in_s2


def test_commutant_of_closure_equals_commutant(rng):
    gens = [np.kron(rand_c(rng, 2), I2)]
    a = commutant(gens)
    b = commutant(algebra_closure(gens))
    assert compare_subspaces(a, b).distance < 1e-8


def test_contains_examples():
    diag = commutant([Z])
    assert contains(diag, Z)
    assert not contains(diag, X)
    assert contains(orthonormalize([I2, X]), X + 3 * I2)
    with pytest.raises(ValueError):
        contains(diag, np.eye(3))
