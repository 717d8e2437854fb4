"""Free theorems for single-variable polymorphic types."""
from .check import (
    CandidateVerdict,
    PyCandidate,
    TableCandidate,
    TermCandidate,
    check_candidate,
    evaluate_instance,
    load_candidate,
)
from .interp import EvalError, eval_term, parse_term
from .theorem import FreeTheorem, emit_free_theorem, theorem_parts
from .types import ParseError, UnsupportedFeature, parse_type, show_type
from .variance import SemDifunctor, derive_maps, render_map, split_variance

__all__ = [
    "CandidateVerdict", "EvalError", "FreeTheorem", "ParseError", "PyCandidate", "SemDifunctor",
    "TableCandidate", "TermCandidate", "UnsupportedFeature", "check_candidate", "derive_maps",
    "emit_free_theorem", "eval_term", "evaluate_instance", "load_candidate", "parse_term",
    "parse_type", "render_map", "show_type", "split_variance", "theorem_parts",
]
