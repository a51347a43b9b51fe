"""Decoherence-free algebras of unital quantum channels given by Kraus operators."""
from .algebra import GeneratorSet, algebra_closure, commutant, contains
from .channel import (
    ChannelError,
    KrausChannel,
    apply,
    dissipation,
    equivalent_rep,
    random_channel,
    range_projector,
    reduce_kraus,
    stinespring,
    validate,
)
from .dfa import (
    AlgebraReport,
    choi_multiplicativity_check,
    decoherence_free_algebra,
    dfa_oracle,
    fixed_point_algebra,
    generator_products,
    inclusion_report,
)
from .linalg import (
    MatrixSubspace,
    RankPolicy,
    compare_subspaces,
    hermitian_parts,
    hs_inner,
    is_psd,
    nullspace,
    orthonormalize,
)

__version__ = "0.1.0"

__all__ = [
    "GeneratorSet",
    "algebra_closure",
    "commutant",
    "contains",
    "AlgebraReport",
    "ChannelError",
    "KrausChannel",
    "MatrixSubspace",
    "RankPolicy",
    "apply",
    "choi_multiplicativity_check",
    "compare_subspaces",
    "decoherence_free_algebra",
    "dfa_oracle",
    "dissipation",
    "equivalent_rep",
    "fixed_point_algebra",
    "generator_products",
    "hermitian_parts",
    "hs_inner",
    "inclusion_report",
    "is_psd",
    "nullspace",
    "orthonormalize",
    "random_channel",
    "range_projector",
    "reduce_kraus",
    "stinespring",
    "validate",
]
