"""Canonical bases of higher-level Fock spaces for U_q(gl_inf), in exact arithmetic."""
from .canonical import CanonicalExpansion, CanonicalOracle, Method, canonical, canonical_oracle, verify_block
from .combinatorics import Symbol, SymbolError, is_ordered, is_standard
from .fock import FockVector, GoodSequence, good_maximal_sequence, monomial_vector
from .laurent import LaurentPoly

__all__ = [
    "CanonicalExpansion", "CanonicalOracle", "FockVector", "GoodSequence", "LaurentPoly",
    "Method", "Symbol", "SymbolError", "canonical", "canonical_oracle", "good_maximal_sequence",
    "is_ordered", "is_standard", "monomial_vector", "verify_block",
]
