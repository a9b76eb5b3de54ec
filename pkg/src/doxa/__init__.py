"""Doxastic-logic toolkit: parse belief formulas, decide satisfiability and
validity by tableau under selectable logic profiles, extract self-verified
countermodels, and cross-check verdicts against a brute-force oracle.

The belief operator ``B[a]`` quantifies universally over an agent's
doxastic alternatives; the compatibility operator ``C[a]`` is its
existential dual.  Profiles select the frame class and the introspection
strength: ``kd`` (seriality only), ``hstar`` (seriality plus a weak
introspection witness), ``hintikka`` (seriality plus transitivity), and
``kd45`` (seriality, transitivity and euclideanness).
"""

from __future__ import annotations

from .corpus import (
    CorpusEntry,
    CorpusResult,
    CorpusRow,
    load_corpus,
    run_corpus,
    run_entry,
)
from .formula import (
    Agent,
    And,
    Atom,
    Bel,
    Comp,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    agents,
    atoms,
    desugar,
    modal_depth,
    neg,
    node_count,
    render,
    subformula_closure,
    subformulas,
)
from .models import (
    LabeledModelSystem,
    LogicProfile,
    ModelSystem,
    PROFILES_BY_STRENGTH,
    Violation,
    check_frame,
    check_model_set,
    evaluate,
    labeled_from_json_dict,
    labeled_to_json_dict,
    model_from_json_dict,
    model_to_json_dict,
)
from .oracle import (
    MAX_BUDGET_WORLDS,
    REFERENCE_COUNTS,
    EnumerationBudget,
    enumerate_models,
    sat_upto,
)
from .parser import ParseError, SourceSpan, format_parse_error, parse
from .tableau import (
    InternalVerificationError,
    ProofStep,
    RULES,
    SatVerdict,
    TableauStats,
    UnsatVerdict,
    ValidityVerdict,
    decide_sat,
    decide_valid,
    render_trace,
    trace_to_json_dict,
    verdict_to_json_dict,
)

__version__ = "0.1.0"

__all__ = [
    "Agent",
    "And",
    "Atom",
    "Bel",
    "Comp",
    "CorpusEntry",
    "CorpusResult",
    "CorpusRow",
    "EnumerationBudget",
    "Formula",
    "Iff",
    "Implies",
    "InternalVerificationError",
    "LabeledModelSystem",
    "LogicProfile",
    "MAX_BUDGET_WORLDS",
    "ModelSystem",
    "Not",
    "Or",
    "PROFILES_BY_STRENGTH",
    "REFERENCE_COUNTS",
    "ParseError",
    "ProofStep",
    "RULES",
    "SatVerdict",
    "SourceSpan",
    "TableauStats",
    "UnsatVerdict",
    "ValidityVerdict",
    "Violation",
    "agents",
    "atoms",
    "check_frame",
    "check_model_set",
    "decide_sat",
    "decide_valid",
    "desugar",
    "enumerate_models",
    "evaluate",
    "format_parse_error",
    "labeled_from_json_dict",
    "labeled_to_json_dict",
    "load_corpus",
    "modal_depth",
    "model_from_json_dict",
    "model_to_json_dict",
    "neg",
    "node_count",
    "parse",
    "render",
    "render_trace",
    "run_corpus",
    "run_entry",
    "sat_upto",
    "subformula_closure",
    "subformulas",
    "trace_to_json_dict",
    "verdict_to_json_dict",
    "__version__",
]
