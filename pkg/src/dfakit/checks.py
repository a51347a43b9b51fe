"""Randomized property suite over channel ensembles (drives ``dfakit check``)."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .channel import (
    KINDS,
    KrausChannel,
    apply_many,
    dissipation,
    equivalent_rep,
    kraus_span_dim,
    random_channel,
    random_isometry,
    range_projector,
    reduce_kraus,
    stinespring,
    vvdag_blocks,
)
from .dfa import (
    choi_multiplicativity_check,
    compute_algebras,
    decoherence_free_algebra,
    has_positive_kraus,
    oracle_min_eigenvalue_ratio,
)
from .linalg import RankPolicy, compare_subspaces, dagger, matrix_units, random_matrix

# property -> pass threshold (value <= threshold passes)
THRESHOLDS = {
    "kadison": 1e-9,
    "oracle_psd": 1e-9,
    "commutant_vs_oracle": 1e-7,
    "rep_independence": 1e-7,
    "fixed_in_dfa": 1e-8,
    "chain_A_comm_in_fixed": 1e-8,
    "chain_dfa_eq_B_comm": 1e-8,
    "luders": 1e-7,
    "stinespring_isometry": 1e-12,
    "stinespring_compression": 1e-12,
    "stinespring_vvdag": 1e-12,
    "range_factorization": 1e-10,
    "range_rank": 0.0,
    "reduction_action": 1e-12,
    "reduction_invariance": 1e-7,
    "padded_reduces": 0.0,
    "choi": 1e-9,
}


@dataclass(frozen=True)
class ChannelSpec:
    kind: str
    n: int
    k: int
    index: int
    seed: int


@dataclass
class ChannelResult:
    spec: ChannelSpec
    m: int
    dim_dfa: int
    values: dict


@dataclass
class CheckSummary:
    thresholds: dict
    max_values: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    dims: dict = field(default_factory=dict)
    channels: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def derive_seed(seed: int, kind: str, n: int, k: int, index: int) -> int:
    ss = np.random.SeedSequence([seed, KINDS.index(kind), n, k, index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def ensemble(kinds: Sequence[str], dims: Sequence[int], counts: Sequence[int],
             per_group: int, seed: int) -> list[ChannelSpec]:
    """Channel specs ordered by (kind, n, index); k cycles through ``counts``."""
    specs = []
    for kind in kinds:
        for n in dims:
            for index in range(per_group):
                k = counts[index % len(counts)]
                specs.append(ChannelSpec(kind, n, k, index, derive_seed(seed, kind, n, k, index)))
    return specs


def action_residual(a: KrausChannel, b: KrausChannel) -> float:
    units = matrix_units(a.dim)
    return float(np.max(np.linalg.norm(apply_many(a, units) - apply_many(b, units), axis=(1, 2))))


def kadison_violation(ch: KrausChannel, xs: Iterable[np.ndarray]) -> float:
    """Largest -lambda_min(D(x)) / max(1, lambda_max(D(x))), floored at 0."""
    worst = 0.0
    for x in xs:
        d = dissipation(ch, x)
        w = np.linalg.eigvalsh((d + dagger(d)) / 2)
        worst = max(worst, -w[0] / max(1.0, w[-1]))
    return worst


def check_channel(ch: KrausChannel, kind: str, seed: int, policy: RankPolicy = RankPolicy(),
                  kadison_trials: int = 10, choi_trials: int = 20) -> tuple[dict, int]:
    """Residual of every property on one channel; returns (values, dim N_phi)."""
    rng = np.random.default_rng(seed)
    n = ch.dim
    v = {}
    v["kadison"] = kadison_violation(ch, (random_matrix(rng, n) for _ in range(kadison_trials)))
    v["oracle_psd"] = max(0.0, -oracle_min_eigenvalue_ratio(ch))

    alg = compute_algebras(ch, policy)
    v["commutant_vs_oracle"] = compare_subspaces(alg.dfa, alg.oracle).distance
    v["fixed_in_dfa"] = compare_subspaces(alg.fixed, alg.dfa).residual_12
    v["chain_A_comm_in_fixed"] = compare_subspaces(alg.A_comm, alg.fixed).residual_12
    v["chain_dfa_eq_B_comm"] = compare_subspaces(alg.dfa, alg.B_comm).distance
    if has_positive_kraus(ch):
        spaces = [alg.A_comm, alg.fixed, alg.dfa, alg.B_comm]
        v["luders"] = max(compare_subspaces(s, t).distance
                          for i, s in enumerate(spaces) for t in spaces[i + 1:])

    w = random_isometry(rng, ch.m + 1 + int(rng.integers(0, 3)), ch.m)
    v["rep_independence"] = compare_subspaces(
        decoherence_free_algebra(equivalent_rep(ch, w), policy), alg.dfa).distance

    dil = stinespring(ch)
    v["stinespring_isometry"] = float(np.linalg.norm(dagger(dil.V) @ dil.V - np.eye(n)))
    units = matrix_units(n)
    phi_units = apply_many(ch, units)
    v["stinespring_compression"] = max(float(np.linalg.norm(dil.compress(e) - f))
                                       for e, f in zip(units, phi_units))
    v["stinespring_vvdag"] = float(np.linalg.norm(dil.V @ dagger(dil.V) - vvdag_blocks(ch)))
    rp = range_projector(ch, tol=np.inf, policy=policy)
    v["range_factorization"] = rp.factorization_residual
    span = kraus_span_dim(ch, policy)
    v["range_rank"] = float(abs(rp.rank - span))

    red = reduce_kraus(ch, policy)
    v["reduction_action"] = action_residual(red.reduced, ch)
    v["reduction_invariance"] = compare_subspaces(
        decoherence_free_algebra(red.reduced, policy), alg.dfa).distance
    if kind == "padded":
        v["padded_reduces"] = 0.0 if red.reduced.m < ch.m else 1.0

    v["choi"] = choi_multiplicativity_check(ch, alg.dfa, choi_trials, seed=int(rng.integers(2**63)))
    return v, alg.dfa.dim


def _run_one(spec: ChannelSpec, policy: RankPolicy) -> ChannelResult:
    ch = random_channel(spec.kind, spec.n, spec.k, spec.seed)
    values, dim_dfa = check_channel(ch, spec.kind, spec.seed ^ 0x5EED, policy)
    return ChannelResult(spec, ch.m, dim_dfa, values)


def run_checks(specs: Sequence[ChannelSpec], tol: Optional[float] = None,
               policy: RankPolicy = RankPolicy(), jobs: int = 1) -> CheckSummary:
    """Run every property on every channel.

    ``tol`` replaces all per-property thresholds when given.  Results are
    aggregated in ``specs`` order whatever ``jobs`` is.
    """
    thresholds = {k: (tol if tol is not None else t) for k, t in THRESHOLDS.items()}
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda s: _run_one(s, policy), specs))
    else:
        results = [_run_one(s, policy) for s in specs]

    summary = CheckSummary(thresholds, channels=len(results))
    for r in results:
        for name, value in r.values.items():
            summary.max_values[name] = max(summary.max_values.get(name, 0.0), value)
            if not value <= thresholds[name]:
                summary.failures.append({"property": name, "kind": r.spec.kind, "n": r.spec.n,
                                         "k": r.spec.k, "index": r.spec.index, "value": value})
        key = f"{r.spec.kind} n={r.spec.n} k={r.spec.k}"
        summary.dims.setdefault(key, set()).add(r.dim_dfa)
    summary.dims = {k: sorted(v) for k, v in summary.dims.items()}
    return summary
