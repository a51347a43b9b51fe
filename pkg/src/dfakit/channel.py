"""Kraus channels in the Heisenberg picture, phi(x) = sum_i A_i^* x A_i.

Tensor order for dilations is system (x) environment, so ``x (x) 1`` is
``np.kron(x, np.eye(m))`` and environment component i of a vector in
H (x) h_m sits at indices ``s * m + i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import RankPolicy, dagger, matrix_units, nullspace, random_matrix

KINDS = ("mixed_unitary", "luders", "padded")


class ChannelError(ValueError):
    """A channel fails a hypothesis required by the requested computation."""


class FactorizationError(RuntimeError):
    """The range projector of a dilation is not of the form 1 (x) P."""


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus: tuple

    def __init__(self, kraus: Sequence[np.ndarray]):
        ops = [np.array(a, dtype=complex) for a in kraus]
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        n = ops[0].shape[0] if ops[0].ndim == 2 else -1
        for a in ops:
            if a.shape != (n, n):
                raise ValueError(f"Kraus operators must all be {n}x{n}, got {a.shape}")
            if not np.all(np.isfinite(a)):
                raise ValueError("Kraus operators must have finite entries")
            a.setflags(write=False)
        object.__setattr__(self, "kraus", tuple(ops))

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def m(self) -> int:
        return len(self.kraus)

    def stack(self) -> np.ndarray:
        return np.stack(self.kraus)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return apply(self, x)


@dataclass(frozen=True)
class ChannelFlags:
    unital: bool
    trace_preserving: bool
    unital_residual: float
    tp_residual: float


@dataclass(frozen=True)
class StinespringDilation:
    n: int
    m: int
    V: np.ndarray

    def block(self, i: int) -> np.ndarray:
        """Environment component i of V, i.e. (1 (x) <e_i|) V = A_i."""
        return self.V.reshape(self.n, self.m, self.n)[:, i, :]

    def compress(self, x: np.ndarray) -> np.ndarray:
        """V^* (x (x) 1_m) V."""
        return dagger(self.V) @ np.kron(x, np.eye(self.m)) @ self.V


@dataclass(frozen=True)
class RangeProjection:
    P_tilde: np.ndarray
    P_env: np.ndarray
    factorization_residual: float
    rank: int


@dataclass(frozen=True)
class Reduction:
    reduced: KrausChannel
    mixing: np.ndarray


def validate(ch: KrausChannel, tol: float = 1e-10) -> ChannelFlags:
    a = ch.stack()
    eye = np.eye(ch.dim)
    r_unital = float(np.linalg.norm(np.einsum("kji,kjl->il", a.conj(), a) - eye))
    r_tp = float(np.linalg.norm(np.einsum("kij,klj->il", a, a.conj()) - eye))
    return ChannelFlags(r_unital < tol, r_tp < tol, r_unital, r_tp)


def _check_operand(ch: KrausChannel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (ch.dim, ch.dim):
        raise ValueError(f"operand must be {ch.dim}x{ch.dim}, got {x.shape}")
    return x


def apply(ch: KrausChannel, x: np.ndarray) -> np.ndarray:
    x = _check_operand(ch, x)
    a = ch.stack()
    return np.einsum("kji,jl,klm->im", a.conj(), x, a)


def apply_many(ch: KrausChannel, xs: np.ndarray) -> np.ndarray:
    """phi applied to a stack of matrices of shape (N, n, n)."""
    a = ch.stack()
    return np.einsum("kji,pjl,klm->pim", a.conj(), np.asarray(xs, dtype=complex), a)


def superoperator(ch: KrausChannel) -> np.ndarray:
    """Matrix of phi on row-major vec: vec(A^* x A) = kron(A^*, A^T) vec(x)."""
    return sum(np.kron(dagger(a), a.T) for a in ch.kraus)


def dissipation(ch: KrausChannel, x: np.ndarray) -> np.ndarray:
    """phi(x^* x) - phi(x)^* phi(x); PSD whenever phi is unital."""
    x = _check_operand(ch, x)
    fx = apply(ch, x)
    return apply(ch, dagger(x) @ x) - dagger(fx) @ fx


def stinespring(ch: KrausChannel) -> StinespringDilation:
    n, m = ch.dim, ch.m
    # V[s*m + i, t] = A_i[s, t]
    V = np.transpose(ch.stack(), (1, 0, 2)).reshape(n * m, n)
    return StinespringDilation(n, m, V)


def vvdag_blocks(ch: KrausChannel) -> np.ndarray:
    """sum_ij A_i A_j^* (x) |e_i><e_j|, assembled independently of V."""
    n, m = ch.dim, ch.m
    out = np.zeros((n * m, n * m), dtype=complex)
    for i, ai in enumerate(ch.kraus):
        for j, aj in enumerate(ch.kraus):
            e = np.zeros((m, m))
            e[i, j] = 1.0
            out += np.kron(ai @ dagger(aj), e)
    return out


def range_projector(ch: KrausChannel, tol: float = 1e-10,
                    policy: RankPolicy = RankPolicy()) -> RangeProjection:
    """Projector onto span{(E_kl (x) 1) V e_s} and its environment factor.

    Raises ``FactorizationError`` when ``||P_tilde - 1 (x) P_env||_F >= tol``.
    """
    n, m = ch.dim, ch.m
    dil = stinespring(ch)
    lift = np.eye(m)
    cols = np.hstack([np.kron(e, lift) @ dil.V for e in matrix_units(n)])
    # orthonormal basis of the column span = complement of the left nullspace
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    tau = policy.threshold(s[0], cols.shape) if s.size and s[0] > 0 else np.inf
    q = u[:, s >= tau]
    p_tilde = q @ dagger(q)
    p_env = np.einsum("sisj->ij", p_tilde.reshape(n, m, n, m)) / n
    residual = float(np.linalg.norm(p_tilde - np.kron(np.eye(n), p_env)))
    rank = int(np.count_nonzero(np.linalg.eigvalsh((p_env + dagger(p_env)) / 2) > 0.5))
    if not residual < tol:
        raise FactorizationError(f"range projector is not 1 (x) P: residual {residual:.3e}")
    return RangeProjection(p_tilde, p_env, residual, rank)


def kraus_span_dim(ch: KrausChannel, policy: RankPolicy = RankPolicy()) -> int:
    """dim span{A_i}, from the singular values of the vectorized Kraus stack."""
    c = ch.stack().reshape(ch.m, -1).T
    return c.shape[1] - nullspace(c, policy).shape[1]


def reduce_kraus(ch: KrausChannel, policy: RankPolicy = RankPolicy()) -> Reduction:
    """Rewrite phi with l = dim span{A_i} linearly independent Kraus operators.

    With the vectorized Kraus operators as columns of C = U S W^*, the new
    operators B_j = sum_i W_ij A_i are the columns of C W = U S; those with
    singular value under the rank cut are zero and dropped.
    """
    c = ch.stack().reshape(ch.m, -1).T
    _, s, wh = np.linalg.svd(c, full_matrices=True)
    w = dagger(wh)
    if s.size and s[0] > 0:
        l = int(np.count_nonzero(s >= policy.threshold(s[0], c.shape)))
    else:
        l = 0
    if l == 0:
        raise ChannelError("all Kraus operators vanish")
    mixing = w[:, :l]
    b = np.einsum("ij,ikl->jkl", mixing, ch.stack())
    return Reduction(KrausChannel(list(b)), mixing)


def equivalent_rep(ch: KrausChannel, w: np.ndarray, tol: float = 1e-10) -> KrausChannel:
    """A'_p = sum_i w_pi A_i for an isometry w of shape (m', m)."""
    w = np.asarray(w, dtype=complex)
    if w.ndim != 2 or w.shape[1] != ch.m:
        raise ValueError(f"mixing matrix must have {ch.m} columns, got shape {w.shape}")
    if np.linalg.norm(dagger(w) @ w - np.eye(ch.m)) >= tol:
        raise ValueError("mixing matrix is not an isometry (w^* w != 1)")
    return KrausChannel(list(np.einsum("pi,ikl->pkl", w, ch.stack())))


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(random_matrix(rng, n))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_isometry(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return haar_unitary(rng, rows)[:, :cols]


def _psd_power(a: np.ndarray, p: float) -> np.ndarray:
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    w = np.clip(w, 0.0, None)
    return (v * w ** p) @ dagger(v)


def random_channel(kind: str, n: int, k: int, seed: int) -> KrausChannel:
    """Random unital trace-preserving channel of the given ensemble kind.

    ``mixed_unitary``: sqrt(p_i) U_i with Haar U_i and Dirichlet p.
    ``luders``: sqrt(E_i) for a random POVM {E_i}.
    ``padded``: a mixed-unitary channel spread over m > k linearly
    dependent operators by a random isometry.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    rng = np.random.default_rng(seed)
    if kind == "luders":
        # E_i = S^{-1/2} W_i W_i^* S^{-1/2} with S = sum W_i W_i^*; S^{-1/2} [W_1 .. W_k]
        # is the polar factor U Y^* of the stacked W, exact to rounding at any cond(S)
        w = np.hstack([random_matrix(rng, n) for _ in range(k)])
        u, _, yh = np.linalg.svd(w, full_matrices=False)
        g = (u @ yh).reshape(n, k, n).transpose(1, 0, 2)
        ops = [_psd_power(gi @ dagger(gi), 0.5) for gi in g]
        return KrausChannel([(a + dagger(a)) / 2 for a in ops])
    probs = rng.dirichlet(np.ones(k))
    ops = [np.sqrt(p) * haar_unitary(rng, n) for p in probs]
    ch = KrausChannel(ops)
    if kind == "padded":
        extra = 1 + int(rng.integers(0, k))
        ch = equivalent_rep(ch, random_isometry(rng, k + extra, k))
    return ch
