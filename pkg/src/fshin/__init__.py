"""Fuzzy description logic reasoning: tableau decision procedures for
ABox consistency in f-SI and f-SHIN, with entailment, satisfiability,
subsumption, and best-degree bounds derived from consistency."""

__version__ = "0.1.0"

from .degrees import Degree, Ineq, SignedBound, conjugates, to_degree
from .kb import ABox, ConceptAssertion, FuzzyKB, RBox, RoleAssertion, TBox
from .parser import ParseError, parse_concept, parse_kb, parse_query, serialize_kb
from .services import (
    InconsistentKB,
    ModeError,
    consistency,
    entails,
    glb,
    lub,
    n_satisfiable,
    satisfiable,
    subsumes,
)
from .syntax import (
    And,
    AtLeast,
    AtMost,
    BOTTOM,
    Concept,
    Exists,
    Forall,
    Name,
    Not,
    Or,
    Role,
    TOP,
    inv,
    nnf,
)
from .tableau import Budget, Forest, ResourceLimit, extract_model, solve

__all__ = [
    "ABox",
    "And",
    "AtLeast",
    "AtMost",
    "BOTTOM",
    "Budget",
    "Concept",
    "ConceptAssertion",
    "Degree",
    "Exists",
    "Forall",
    "Forest",
    "FuzzyKB",
    "InconsistentKB",
    "Ineq",
    "ModeError",
    "Name",
    "Not",
    "Or",
    "ParseError",
    "RBox",
    "ResourceLimit",
    "Role",
    "RoleAssertion",
    "SignedBound",
    "TBox",
    "TOP",
    "conjugates",
    "consistency",
    "entails",
    "extract_model",
    "glb",
    "inv",
    "lub",
    "n_satisfiable",
    "nnf",
    "parse_concept",
    "parse_kb",
    "parse_query",
    "satisfiable",
    "serialize_kb",
    "solve",
    "subsumes",
    "to_degree",
]
