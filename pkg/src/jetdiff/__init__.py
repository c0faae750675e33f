"""Exact construction and verification of generating jet differentials on plane curves."""
from .generator import GeneratorPair, faa_di_bruno, generate, golden_elimination_forms, trivialization_change
from .infinity import symbolic_transfer_check, transfer_jet, verify_uniform_order
from .jetalgebra import DSym, JetExpression, JetPoly, Side, mirror
from .numeric_eval import (
    EvalConfig,
    check_generator_agreement,
    check_trivialization_roundtrip,
    local_graph_series,
    probe_infinity_vanishing,
)
from .polycore import CurveSpec, Poly2, parse_poly, partial, validate_curve
from .sections import count_sections, dim_h0, enumerate_compositions

__version__ = "0.1.0"

__all__ = [
    "CurveSpec",
    "DSym",
    "EvalConfig",
    "GeneratorPair",
    "JetExpression",
    "JetPoly",
    "Poly2",
    "Side",
    "check_generator_agreement",
    "check_trivialization_roundtrip",
    "count_sections",
    "dim_h0",
    "enumerate_compositions",
    "faa_di_bruno",
    "generate",
    "golden_elimination_forms",
    "local_graph_series",
    "mirror",
    "parse_poly",
    "partial",
    "probe_infinity_vanishing",
    "symbolic_transfer_check",
    "transfer_jet",
    "trivialization_change",
    "validate_curve",
    "verify_uniform_order",
]
