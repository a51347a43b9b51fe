"""Decoherence-free algebra of a unital channel and the algebras around it.

``decoherence_free_algebra`` computes N_phi as the commutant of the
products A_i A_j^*.  ``dfa_oracle`` recomputes it straight from the
definition (hermitian x with phi(x^2) = phi(x)^2) and shares no code path
with the commutant solver beyond the SVD rank cut.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .algebra import GeneratorSet, algebra_closure, commutant
from .channel import (
    ChannelError,
    KrausChannel,
    apply_many,
    superoperator,
    validate,
)
from .linalg import (
    DEFAULT_SUBSPACE_TOL,
    MatrixSubspace,
    RankPolicy,
    compare_subspaces,
    dagger,
    hermitian_basis,
    is_hermitian,
    is_psd,
    nullspace,
    orthonormalize,
    random_matrix,
    subspace_from_columns,
)

ORACLE_PSD_TOL = 1e-9
POSITIVITY_TOL = 1e-10


@dataclass
class AlgebraReport:
    dim_A_comm: int
    dim_fixed: int
    dim_dfa: int
    dim_B_comm: int
    chain_ok: bool
    oracle_distance: float
    luders_applicable: bool
    luders_ok: Optional[bool]
    residuals: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class AlgebraSet:
    """The four subspaces of the inclusion chain plus the oracle's N_phi."""

    A_comm: MatrixSubspace
    fixed: MatrixSubspace
    dfa: MatrixSubspace
    B_comm: MatrixSubspace
    oracle: MatrixSubspace


def _require_unital(ch: KrausChannel, tol: float):
    flags = validate(ch, tol)
    if not flags.unital:
        raise ChannelError(f"channel is not unital (residual {flags.unital_residual:.3e})")
    return flags


def generator_products(ch: KrausChannel) -> GeneratorSet:
    return GeneratorSet([a @ dagger(b) for a in ch.kraus for b in ch.kraus])


def decoherence_free_algebra(ch: KrausChannel, policy: RankPolicy = RankPolicy(),
                             channel_tol: float = 1e-10) -> MatrixSubspace:
    """N_phi = {A_i A_j^*}'.  Only unitality of phi is required."""
    _require_unital(ch, channel_tol)
    return commutant(generator_products(ch), policy)


def dissipation_form(ch: KrausChannel, basis: Optional[np.ndarray] = None) -> np.ndarray:
    """Real symmetric Q_ab = Tr[phi(h_a o h_b) - phi(h_a) o phi(h_b)] over hermitian h_a.

    ``o`` is the Jordan product; q(x) = x^T Q x is Tr D(x) for the
    hermitian matrix with coordinates x.
    """
    h = hermitian_basis(ch.dim) if basis is None else basis
    fh = apply_many(ch, h)
    # Tr phi(y) = Tr(y sum_i A_i A_i^*) by cyclicity
    t = np.einsum("kij,klj->il", ch.stack(), ch.stack().conj())
    th = np.einsum("ij,ajk->aik", t, h)
    first = np.einsum("aij,bji->ab", th, h)
    first = (first + first.T) / 2
    second = np.einsum("aij,bji->ab", fh, fh)
    q = (first - second).real
    return (q + q.T) / 2


def dfa_oracle(ch: KrausChannel, policy: RankPolicy = RankPolicy(),
               channel_tol: float = 1e-10) -> MatrixSubspace:
    """N_phi from its definition, via the kernel of the dissipation form.

    Tr D(x) >= 0 with equality iff D(x) = 0, so the real kernel of Q is
    exactly the hermitian part of N_phi; its complex span is N_phi.
    Raises ``ChannelError`` if Q is not PSD.
    """
    _require_unital(ch, channel_tol)
    h = hermitian_basis(ch.dim)
    q = dissipation_form(ch, h)
    w = np.linalg.eigvalsh(q)
    if w[0] < -ORACLE_PSD_TOL * max(1.0, w[-1]):
        raise ChannelError(f"dissipation form is not PSD (min eigenvalue {w[0]:.3e})")
    # Q is O(1) for a unital channel; floor the cut at that scale
    kernel = nullspace(q, policy, scale=1.0)
    herm = np.einsum("ak,aij->kij", kernel, h)
    return orthonormalize(herm, 1e-8, n=ch.dim)


def oracle_min_eigenvalue_ratio(ch: KrausChannel) -> float:
    """lambda_min(Q) / max(1, lambda_max(Q)); non-negative up to rounding."""
    w = np.linalg.eigvalsh(dissipation_form(ch))
    return float(w[0] / max(1.0, w[-1]))


def fixed_point_algebra(ch: KrausChannel, policy: RankPolicy = RankPolicy()) -> MatrixSubspace:
    n = ch.dim
    null = nullspace(superoperator(ch) - np.eye(n * n), policy, scale=1.0)
    return subspace_from_columns(null, n)


def choi_multiplicativity_check(ch: KrausChannel, nphi: MatrixSubspace, trials: int = 20,
                                seed: int = 0) -> float:
    """Largest of ||phi(ba) - phi(b)phi(a)||_F and ||phi(ab) - phi(a)phi(b)||_F.

    Runs over every basis element a of ``nphi`` and ``trials`` random b of
    unit Frobenius norm.
    """
    rng = np.random.default_rng(seed)
    bs = np.stack([random_matrix(rng, ch.dim) for _ in range(trials)])
    bs /= np.linalg.norm(bs, axis=(1, 2), keepdims=True)
    fb = apply_many(ch, bs)
    worst = 0.0
    for a in nphi.basis:
        fa = apply_many(ch, a[None])[0]
        left = apply_many(ch, bs @ a) - fb @ fa
        right = apply_many(ch, a @ bs) - fa @ fb
        worst = max(worst,
                    float(np.max(np.linalg.norm(left, axis=(1, 2)))),
                    float(np.max(np.linalg.norm(right, axis=(1, 2)))))
    return worst


def has_positive_kraus(ch: KrausChannel, tol: float = POSITIVITY_TOL) -> bool:
    return all(is_hermitian(a, tol) and is_psd(a, tol) for a in ch.kraus)


def compute_algebras(ch: KrausChannel, policy: RankPolicy = RankPolicy()) -> AlgebraSet:
    """A', M_phi, N_phi, B' and the oracle, with A and B closed as *-algebras first."""
    a_alg = algebra_closure(GeneratorSet(list(ch.kraus)))
    b_alg = algebra_closure(generator_products(ch))
    return AlgebraSet(
        A_comm=commutant(a_alg, policy),
        fixed=fixed_point_algebra(ch, policy),
        dfa=decoherence_free_algebra(ch, policy),
        B_comm=commutant(b_alg, policy),
        oracle=dfa_oracle(ch, policy),
    )


def inclusion_report(ch: KrausChannel, policy: RankPolicy = RankPolicy(),
                     tol: float = DEFAULT_SUBSPACE_TOL, channel_tol: float = 1e-10,
                     algebras: Optional[AlgebraSet] = None) -> AlgebraReport:
    """Check A' <= M_phi <= N_phi = B' and, for positive Kraus operators, equality of all four.

    Refuses (``ChannelError``) channels that are not both unital and trace
    preserving; the inclusion M_phi <= N_phi relies on both.
    """
    flags = validate(ch, channel_tol)
    if not (flags.unital and flags.trace_preserving):
        raise ChannelError(
            "inclusion report needs a unital trace-preserving channel "
            f"(unital residual {flags.unital_residual:.3e}, "
            f"trace residual {flags.tp_residual:.3e})")
    alg = algebras if algebras is not None else compute_algebras(ch, policy)

    a_in_fixed = compare_subspaces(alg.A_comm, alg.fixed, tol)
    fixed_in_dfa = compare_subspaces(alg.fixed, alg.dfa, tol)
    dfa_vs_b = compare_subspaces(alg.dfa, alg.B_comm, tol)
    dfa_vs_oracle = compare_subspaces(alg.dfa, alg.oracle, tol)
    chain_ok = a_in_fixed.s1_in_s2 and fixed_in_dfa.s1_in_s2 and dfa_vs_b.equal

    residuals = {
        "A_comm_in_fixed": a_in_fixed.residual_12,
        "fixed_in_dfa": fixed_in_dfa.residual_12,
        "dfa_vs_B_comm": dfa_vs_b.distance,
        "dfa_vs_oracle": dfa_vs_oracle.distance,
    }
    luders_applicable = has_positive_kraus(ch)
    luders_ok = None
    if luders_applicable:
        spaces = [alg.A_comm, alg.fixed, alg.dfa, alg.B_comm]
        pairs = [compare_subspaces(s, t, tol) for s, t in combinations(spaces, 2)]
        residuals["luders_max_distance"] = max(c.distance for c in pairs)
        luders_ok = all(c.equal for c in pairs)
    return AlgebraReport(
        dim_A_comm=alg.A_comm.dim,
        dim_fixed=alg.fixed.dim,
        dim_dfa=alg.dfa.dim,
        dim_B_comm=alg.B_comm.dim,
        chain_ok=chain_ok,
        oracle_distance=dfa_vs_oracle.distance,
        luders_applicable=luders_applicable,
        luders_ok=luders_ok,
        residuals=residuals,
    )
