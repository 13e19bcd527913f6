"""Neighborhood frames, modal algebras and omega-rule proof systems for predicate modal logic."""

from .algebra import (
    ModalAlgebra,
    check_algebra_cf,
    check_algebra_mt,
    check_algebra_tp,
    check_ckl_algebra,
    check_dfrm_conditions,
    check_gl_frame,
    complex_algebra,
    embedding,
    enumerate_prime_filters,
    is_qfilter,
    qfilter_frame,
)
from .frames import (
    NeighborhoodFrame,
    check_cf,
    check_kripke,
    check_mt,
    check_tp,
    common_knowledge_frame,
    frame_to_relation,
    kripke_frame,
    relation_to_frame,
    transitive_closure_union,
)
from .ordinal import Ordinal, OrdinalElement, demo_incompleteness, op_C, op_E, truncated_meet_E, verify_ckl_laws
from .proofs import (
    PS_QCKL,
    PS_QCKL_MINUS,
    PS_QGL,
    CheckedToBound,
    FullyChecked,
    Proof,
    Rejected,
    check_proof,
    generate_mhformula_proof,
    instantiate_axiom,
    soundness_spot_check,
)
from .semantics import (
    AlgebraicModel,
    BudgetExceeded,
    NeighborhoodModel,
    Valid,
    algebra_validates,
    check_duality,
    eval_algebraic,
    eval_neighborhood,
    frame_validates,
)
from .syntax import Formula, ParseError, apply_substitution, parse, to_text

__version__ = "0.1.0"
