"""Products of selection functions, sequential games, and realizers extracted
from classical proofs (drinkers paradox, metastability, Sigma_1 comprehension,
no-injection, Bolzano-Weierstrass)."""

from selprod.core import (
    FiniteDomain,
    binary_product,
    hilbert_epsilon,
    product,
    quantifier,
)
from selprod.errors import (
    BudgetExhausted,
    DepthCapExceeded,
    GameFileError,
    InternalInvariantViolation,
    MonotonicityViolation,
    MuSearchFailed,
    SelprodError,
)
from selprod.unbounded import (
    Budget,
    Game,
    PaddedSequence,
    Solver,
    canonical_extension,
    check_equilibrium,
    check_prefix_consistency,
    continuation_outcome,
    eps,
    finite_product,
    shift_outcome,
    unbounded_product,
)

__all__ = [
    "Budget",
    "BudgetExhausted",
    "DepthCapExceeded",
    "FiniteDomain",
    "Game",
    "GameFileError",
    "InternalInvariantViolation",
    "MonotonicityViolation",
    "MuSearchFailed",
    "PaddedSequence",
    "SelprodError",
    "Solver",
    "binary_product",
    "canonical_extension",
    "check_equilibrium",
    "check_prefix_consistency",
    "continuation_outcome",
    "eps",
    "finite_product",
    "hilbert_epsilon",
    "product",
    "quantifier",
    "shift_outcome",
    "unbounded_product",
]
