"""Result type shared by the oracle and the closed formulas."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .combinatorics import Symbol, block_key
from .fock import FockVector
from .laurent import LaurentPoly, positive_valuation


class Method(str, Enum):
    ORACLE = "oracle"
    LM2 = "lm2"
    ASYMPTOTIC = "asymptotic"
    REMOVAL = "removal"
    GOOD_MONOMIAL_L3 = "good_monomial_l3"
    ORDERED = "ordered"
    SPINE = "spine"

    def __str__(self) -> str:
        return self.value


class MethodInapplicable(ValueError):
    """A forced method's applicability predicate does not hold."""

    def __init__(self, method, predicate: str):
        super().__init__(f"method inapplicable: {method} requires {predicate}")
        self.method = method
        self.predicate = predicate


class TriangularityError(RuntimeError):
    """The elimination oracle met a cyclic or non-unitriangular dependency."""


@dataclass(frozen=True)
class CanonicalExpansion:
    """``G(source)`` expanded in the symbol basis.

    ``certificate`` is only filled by the oracle: the pairs
    ``(T, c)`` with ``G(source) = A(source) - sum c * G(T)``.
    """

    source: Symbol
    vector: FockVector
    method: Method
    certificate: tuple[tuple[Symbol, LaurentPoly], ...] = field(default=(), compare=False)

    def coefficient(self, T: Symbol) -> LaurentPoly:
        return self.vector.coefficient(T)

    def unitriangularity_violations(self) -> list[str]:
        """Human readable reasons this is not of the canonical shape (empty if fine)."""
        problems = []
        if self.vector.coefficient(self.source) != LaurentPoly.one():
            problems.append(f"coefficient of source is {self.vector.coefficient(self.source)}")
        key = block_key(self.source)
        for T, c in self.vector.items():
            if T != self.source and not positive_valuation(c):
                problems.append(f"coefficient {c} of {T} lacks positive valuation")
            if block_key(T) != key:
                problems.append(f"{T} leaves the block of the source")
        return problems

    def with_method(self, method: Method) -> "CanonicalExpansion":
        return CanonicalExpansion(self.source, self.vector, method, self.certificate)
