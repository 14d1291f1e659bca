"""Formal contexts, rough-set operators, two-sorted modal logics, and concept lattices."""

from .context import (
    SORT_ATTRIBUTES,
    SORT_OBJECTS,
    FormalContext,
    OperatorKind,
    SortedSubset,
    apply_operator,
    complement_context,
    duality_check,
)
from .errors import (
    BudgetExceededError,
    ConceptLogicError,
    CxtFormatError,
    DimensionError,
    FormulaSyntaxError,
    FrameError,
    InternalConsistencyError,
    LatticeError,
    ProofScriptError,
    SignatureError,
    SortMismatchError,
    ValuationError,
)
from .formats import (
    export_dot,
    load_context,
    parse_csv,
    parse_cxt,
    serialize_csv,
    serialize_cxt,
)
from .lattices import (
    ConceptKind,
    ConceptLattice,
    SemanticConcept,
    build_lattice,
    check_lattice_laws,
    closure,
    enumerate_concepts,
    enumerate_concepts_bruteforce,
    verify_yao_isomorphisms,
)
from .logical import (
    LogicalConceptPair,
    TransformDirection,
    equiv_pairs,
    generate_pair,
    member_class,
    member_pair,
    quotient_join,
    quotient_meet,
    transform_pair,
    verify_isomorphisms,
    verify_quotient_lattice,
)
from .parser import parse_formula, print_formula
from .proofs import (
    AxiomRef,
    MPRef,
    PremiseRef,
    ProofLine,
    ProofScript,
    UGRef,
    check_proof,
    establishes,
    get_system,
    is_tautology,
    match_axiom,
    parse_proof_script,
    serialize_proof_script,
    soundness_probe,
    system_K,
    system_KB2,
    system_KF,
    translate_proof,
)
from .semantics import (
    DEFAULT_BUDGET,
    FrameEvaluator,
    Model,
    SortedFrame,
    Valuation,
    complement_frame,
    context_to_frame,
    falsify,
    frame_to_context,
    frame_valid,
    global_consequence,
    local_consequence,
    satisfies,
    truth_set,
)
from .syntax import (
    FULL,
    KF,
    RS,
    SORT1,
    SORT2,
    And,
    Bot,
    Box,
    Dia,
    Formula,
    Iff,
    Imp,
    Modality,
    Neg,
    Or,
    Signature,
    Top,
    Var,
    normalize,
    sort_of,
    substitute,
    translate_rho,
)

__all__ = [name for name in dir() if not name.startswith("_")]
