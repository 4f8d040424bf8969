"""Weil algebras and their functors as a Taylor-mode differentiation engine.

A Weil algebra ``A = R*1 + N`` is stored by its structure constants.  The
functor ``T_A`` lifts smooth maps given as expression graphs
(:func:`eval_lift`), manifolds glued from charts (:mod:`.manifold`) and
matrix Lie groups (:mod:`.liegroup`).
"""

from .algebra import (
    AlgebraElement,
    AlgebraHom,
    Decomposition,
    FiniteAlgebra,
    Idempotent,
    ValidationReport,
    WeilAlgebra,
    augmentation_hom,
    direct_sum,
    dual,
    elem_add,
    elem_invert,
    elem_mul,
    elem_scale,
    exchange_iso,
    identity_hom,
    inclusion_hom,
    jet,
    make_hom,
    make_monomial_quotient,
    minimal_idempotents,
    projection_hom,
    real_line,
    rebase,
    scaling_hom,
    tensor_product,
    validate,
)
from .errors import (
    AlgebraError,
    AlgebraMismatchError,
    ChartError,
    DecompositionError,
    DomainError,
    NotFormallyRealError,
    NotInvertibleError,
    NotPolynomialError,
    ParseError,
    WeilError,
)
from .lift import (
    ExprGraph,
    LiftedVector,
    compose,
    eval_lift,
    evaluate,
    lift_graph,
    pair,
    push_hom,
    recover_algebra,
    relative_residual,
    taylor_formula_oracle,
    trace,
)
from .parse import format_graph, parse_expressions
from .sampling import preset
from .serialize import dumps_algebra, load_algebra, loads_algebra, save_algebra

__all__ = [
    "AlgebraElement",
    "AlgebraError",
    "AlgebraHom",
    "AlgebraMismatchError",
    "ChartError",
    "Decomposition",
    "DecompositionError",
    "DomainError",
    "ExprGraph",
    "FiniteAlgebra",
    "Idempotent",
    "LiftedVector",
    "NotFormallyRealError",
    "NotInvertibleError",
    "NotPolynomialError",
    "ParseError",
    "ValidationReport",
    "WeilAlgebra",
    "WeilError",
    "augmentation_hom",
    "compose",
    "direct_sum",
    "dual",
    "dumps_algebra",
    "elem_add",
    "elem_invert",
    "elem_mul",
    "elem_scale",
    "eval_lift",
    "evaluate",
    "exchange_iso",
    "format_graph",
    "identity_hom",
    "inclusion_hom",
    "jet",
    "lift_graph",
    "load_algebra",
    "loads_algebra",
    "make_hom",
    "make_monomial_quotient",
    "minimal_idempotents",
    "pair",
    "parse_expressions",
    "preset",
    "projection_hom",
    "push_hom",
    "real_line",
    "rebase",
    "recover_algebra",
    "relative_residual",
    "save_algebra",
    "scaling_hom",
    "taylor_formula_oracle",
    "tensor_product",
    "trace",
    "validate",
]

__version__ = "0.1.0"
