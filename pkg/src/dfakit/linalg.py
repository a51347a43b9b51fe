"""Dense complex matrix helpers and subspaces of M_n.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Subspaces of
M_n are stored as a stack of matrices that are orthonormal under the
Hilbert-Schmidt inner product ``<a, b> = Tr(a^* b)``.  Vectorization is
row-major throughout, so ``vec(a) = a.reshape(-1)`` and
``vec(a x b) = kron(a, b.T) @ vec(x)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

DEFAULT_RANK_RTOL = 1e-12
DEFAULT_SUBSPACE_TOL = 1e-8


@dataclass(frozen=True)
class RankPolicy:
    """Singular values below ``rel_tol * max(sigma_max, scale) * max(rows, cols)`` count as zero.

    ``scale`` is a caller-known magnitude of the operator; it keeps a
    matrix that is zero up to rounding from being declared full rank.
    """

    rel_tol: float = DEFAULT_RANK_RTOL

    def threshold(self, sigma_max: float, shape: tuple[int, int], scale: float = 0.0) -> float:
        return self.rel_tol * max(sigma_max, scale) * max(shape)


@dataclass(frozen=True)
class MatrixSubspace:
    """Complex-linear subspace of n x n matrices with an HS-orthonormal basis.

    ``basis`` has shape ``(dim, n, n)``.
    """

    n: int
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=complex).reshape(-1, self.n, self.n)
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def vectors(self) -> np.ndarray:
        """Basis as the columns of an ``(n*n, dim)`` matrix."""
        return self.basis.reshape(self.dim, self.n * self.n).T

    def projector(self) -> np.ndarray:
        q = self.vectors
        return q @ q.conj().T

    def project(self, x: np.ndarray) -> np.ndarray:
        """HS-orthogonal projection of ``x`` onto the subspace."""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.n, self.n):
            raise ValueError(f"expected a {self.n}x{self.n} matrix, got {x.shape}")
        coeffs = np.einsum("pij,ij->p", self.basis.conj(), x)
        return np.einsum("p,pij->ij", coeffs, self.basis)

    def orthonormality_error(self) -> float:
        q = self.vectors
        return float(np.linalg.norm(q.conj().T @ q - np.eye(self.dim)))

    @classmethod
    def empty(cls, n: int) -> "MatrixSubspace":
        return cls(n, np.zeros((0, n, n), dtype=complex))


@dataclass(frozen=True)
class SubspaceComparison:
    equal: bool
    s1_in_s2: bool
    s2_in_s1: bool
    distance: float
    residual_12: float
    residual_21: float


def _square(x: np.ndarray, name: str = "matrix") -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"{name} must be square, got shape {x.shape}")
    return x


def dagger(x: np.ndarray) -> np.ndarray:
    return np.conj(x).T


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product ``Tr(a^* b)``."""
    a = _square(a, "a")
    b = _square(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a.reshape(-1), b.reshape(-1)))


def hermitian_parts(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split ``x = x1 + 1j * x2`` with ``x1``, ``x2`` hermitian."""
    x = _square(x, "x")
    xh = dagger(x)
    return (x + xh) / 2, (x - xh) / 2j


def is_hermitian(a: np.ndarray, tol: float = 1e-10) -> bool:
    a = _square(a, "a")
    return bool(np.linalg.norm(a - dagger(a)) <= tol * max(1.0, np.linalg.norm(a)))


def is_psd(a: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff ``lambda_min(a) >= -tol * max(1, lambda_max(a))``.

    Raises ``ValueError`` if ``a`` is not hermitian within ``tol``.
    """
    a = _square(a, "a")
    if not is_hermitian(a, tol):
        raise ValueError("is_psd requires a hermitian matrix")
    w = np.linalg.eigvalsh((a + dagger(a)) / 2)
    return bool(w[0] >= -tol * max(1.0, w[-1]))


def _null_from_svd(m: np.ndarray, policy: RankPolicy, shape: tuple[int, int],
                   scale: float) -> np.ndarray:
    cols = m.shape[1]
    if m.shape[0] == 0 or cols == 0:
        return np.eye(cols, dtype=m.dtype)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    if s.size == 0 or max(s[0], scale) == 0.0:
        return np.eye(cols, dtype=m.dtype)
    tau = policy.threshold(s[0], shape, scale)
    rank = int(np.count_nonzero(s >= tau))
    return vh[rank:].conj().T


def nullspace(m: np.ndarray, policy: RankPolicy = RankPolicy(), scale: float = 0.0) -> np.ndarray:
    """Orthonormal basis (as columns) of ``{v : m v = 0}``."""
    m = np.asarray(m)
    if m.ndim != 2:
        raise ValueError(f"nullspace needs a 2-d array, got shape {m.shape}")
    return _null_from_svd(m, policy, m.shape, scale)


def stacked_nullspace(blocks: Iterable[np.ndarray], cols: int,
                      policy: RankPolicy = RankPolicy(), scale: float = 0.0) -> np.ndarray:
    """Joint nullspace of row blocks sharing ``cols`` columns.

    Tall stacks are folded through a running QR so memory stays O(cols^2);
    the R factor has the singular values of the full stack, and the rank
    cut uses the full stacked shape.
    """
    rows = 0
    acc = np.zeros((0, cols), dtype=complex)
    for b in blocks:
        b = np.asarray(b, dtype=complex)
        if b.shape[1] != cols:
            raise ValueError(f"block has {b.shape[1]} columns, expected {cols}")
        rows += b.shape[0]
        acc = np.vstack([acc, b])
        if acc.shape[0] > 2 * cols:
            acc = np.linalg.qr(acc, mode="r")
    return _null_from_svd(acc, policy, (rows, cols), scale)


def orthonormalize(vs: Iterable[np.ndarray] | np.ndarray, tol: float = 1e-12,
                   n: int | None = None) -> MatrixSubspace:
    """HS-orthonormal basis of ``span(vs)`` via Gram-Schmidt with re-orthogonalization.

    A vector is dropped when its residual after projection is below
    ``tol * max_input_norm``.  ``n`` is only needed for empty input.
    """
    mats = [np.asarray(v, dtype=complex) for v in vs]
    if not mats:
        if n is None:
            raise ValueError("ambient dimension needed for an empty family")
        return MatrixSubspace.empty(n)
    shape = mats[0].shape
    if any(v.shape != shape for v in mats):
        raise ValueError("all matrices must share one shape")
    if len(shape) != 2 or shape[0] != shape[1]:
        raise ValueError(f"expected square matrices, got {shape}")
    flat = np.stack([v.reshape(-1) for v in mats])
    cut = tol * float(np.max(np.linalg.norm(flat, axis=1)))
    q: list[np.ndarray] = []
    for v in flat:
        r = v.copy()
        for _ in range(2):
            for u in q:
                r -= np.vdot(u, r) * u
        norm = np.linalg.norm(r)
        if norm > cut and norm > 0.0:
            q.append(r / norm)
    basis = np.stack(q).reshape(-1, *shape) if q else np.zeros((0, *shape), dtype=complex)
    return MatrixSubspace(shape[0], basis)


def subspace_from_columns(cols: np.ndarray, n: int) -> MatrixSubspace:
    """Wrap orthonormal columns of an ``(n*n, d)`` array as a subspace."""
    return MatrixSubspace(n, np.asarray(cols).T.reshape(-1, n, n))


def compare_subspaces(s1: MatrixSubspace, s2: MatrixSubspace,
                      tol: float = DEFAULT_SUBSPACE_TOL) -> SubspaceComparison:
    if s1.n != s2.n:
        raise ValueError(f"ambient mismatch: M_{s1.n} vs M_{s2.n}")
    p1 = s1.projector()
    p2 = s2.projector()
    r12 = float(np.linalg.norm(p1 - p2 @ p1))
    r21 = float(np.linalg.norm(p2 - p1 @ p2))
    distance = float(np.linalg.norm(p1 - p2))
    in12 = r12 < tol
    in21 = r21 < tol
    return SubspaceComparison(in12 and in21, in12, in21, distance, r12, r21)


def left_mult(a: np.ndarray) -> np.ndarray:
    """Matrix of ``x -> a x`` on row-major vec."""
    return np.kron(a, np.eye(a.shape[0]))


def right_mult(b: np.ndarray) -> np.ndarray:
    """Matrix of ``x -> x b`` on row-major vec."""
    return np.kron(np.eye(b.shape[0]), b.T)


def matrix_units(n: int) -> np.ndarray:
    """All E_kl as an ``(n*n, n, n)`` stack, row-major in (k, l)."""
    return np.eye(n * n, dtype=complex).reshape(n * n, n, n)


def hermitian_basis(n: int) -> np.ndarray:
    """HS-orthonormal basis of hermitian n x n matrices, ``(n*n, n, n)``."""
    out = []
    for k in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[k, k] = 1.0
        out.append(e)
    s = 1 / np.sqrt(2)
    for k in range(n):
        for l in range(k + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[k, l] = e[l, k] = s
            out.append(e)
            f = np.zeros((n, n), dtype=complex)
            f[k, l] = 1j * s
            f[l, k] = -1j * s
            out.append(f)
    return np.stack(out)


def random_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
