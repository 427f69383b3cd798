"""Reasoning with nested propositional circumscription and nested
abnormality theories: parsing, exact and polynomial query answering,
translations to quantified boolean formulas, structural rewritings, and
hardness encoding generators."""

from .engine import Answer, check_model, infer, models, satisfiable, stats
from .errors import (
    CapExceeded,
    NestcircError,
    ParseError,
    SemanticError,
    VerifyFailed,
)
from .formulas import (
    And,
    Atom,
    Circ,
    Const,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
)
from .parser import parse_formula, parse_model, parse_nat, parse_prenex
from .printer import render_formula, render_model, render_nat
from .theory import Block, Nat

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "And",
    "Atom",
    "Block",
    "CapExceeded",
    "Circ",
    "Const",
    "Exists",
    "Forall",
    "Formula",
    "Iff",
    "Implies",
    "Nat",
    "NestcircError",
    "Not",
    "Or",
    "ParseError",
    "SemanticError",
    "VerifyFailed",
    "check_model",
    "infer",
    "models",
    "parse_formula",
    "parse_model",
    "parse_nat",
    "parse_prenex",
    "render_formula",
    "render_model",
    "render_nat",
    "satisfiable",
    "stats",
    "__version__",
]
