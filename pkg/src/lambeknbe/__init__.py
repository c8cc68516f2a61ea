"""Normalization by evaluation for the Lambek calculus, MILL, and DILL."""

from .nbe import evaluate, fresh_env, normalize, reflect, reify
from .nf import emb_dn, emb_up, nf_equal, typecheck_ne, typecheck_nf
from .rewrite import (
    EquationId,
    Related,
    RewriteStep,
    Unknown,
    applicable_steps,
    apply_step,
    equiv_oracle,
    non_equation_witnesses,
)
from .syntax import (
    Atom,
    Context,
    Derivation,
    Formula,
    Over,
    Sequent,
    Tensor,
    Under,
    Unit,
    ids_env,
    sub1,
    substitute,
    typecheck,
)

__all__ = [
    "Atom", "Context", "Derivation", "EquationId", "Formula", "Over", "Related",
    "RewriteStep", "Sequent", "Tensor", "Under", "Unit", "Unknown",
    "applicable_steps", "apply_step", "emb_dn", "emb_up", "equiv_oracle",
    "evaluate", "fresh_env", "ids_env", "nf_equal", "non_equation_witnesses",
    "normalize", "reflect", "reify", "sub1", "substitute", "typecheck",
    "typecheck_ne", "typecheck_nf",
]
