"""Commutants and generated *-algebras of finite families of matrices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (
    MatrixSubspace,
    RankPolicy,
    dagger,
    left_mult,
    orthonormalize,
    right_mult,
    stacked_nullspace,
    subspace_from_columns,
)


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    n: int
    gens: tuple

    def __init__(self, gens: Sequence[np.ndarray]):
        mats = [np.asarray(g, dtype=complex) for g in gens]
        if not mats:
            raise ValueError("generator set must be non-empty")
        n = mats[0].shape[0] if mats[0].ndim == 2 else -1
        for g in mats:
            if g.shape != (n, n):
                raise ValueError(f"generators must all be {n}x{n}, got {g.shape}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "gens", tuple(mats))

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)


def _as_generators(g) -> GeneratorSet:
    if isinstance(g, GeneratorSet):
        return g
    if isinstance(g, MatrixSubspace):
        return GeneratorSet(list(g.basis))
    return GeneratorSet(list(g))


def commutant(g, policy: RankPolicy = RankPolicy()) -> MatrixSubspace:
    """All x with x G = G x and x G^* = G^* x for every generator G.

    Solved as the joint nullspace of x -> G x - x G over the generators and
    their adjoints.  Accepts a ``GeneratorSet``, a ``MatrixSubspace`` (its
    basis is used) or any sequence of square matrices.
    """
    g = _as_generators(g)
    n = g.n

    def blocks():
        for a in g:
            for b in (a, dagger(a)):
                yield left_mult(b) - right_mult(b)

    # ||G x - x G|| <= 2 ||G||_2 ||x||, so generator norms set the scale
    scale = max(float(np.linalg.norm(a, 2)) for a in g)
    null = stacked_nullspace(blocks(), n * n, policy, scale)
    return subspace_from_columns(null, n)


def algebra_closure(g, tol: float = 1e-10) -> MatrixSubspace:
    """Smallest product-closed subspace containing the generators and their adjoints.

    The identity is not adjoined.  Raises ``RuntimeError`` if the iteration
    does not settle within n^2 dimensions.
    """
    g = _as_generators(g)
    n = g.n
    gens = list(g.gens) + [dagger(a) for a in g.gens]
    current = orthonormalize(gens, tol)
    while True:
        basis = list(current.basis)
        products = [a @ b for a in basis for b in basis]
        grown = orthonormalize(basis + products, tol)
        if grown.dim > n * n:
            raise RuntimeError(f"closure exceeded dimension {n * n}")
        if grown.dim == current.dim:
            return current
        current = grown


def contains(s: MatrixSubspace, x: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff ``||x - proj_s(x)||_F < tol * max(1, ||x||_F)``."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (s.n, s.n):
        raise ValueError(f"expected a {s.n}x{s.n} matrix, got {x.shape}")
    return bool(np.linalg.norm(x - s.project(x)) < tol * max(1.0, np.linalg.norm(x)))
