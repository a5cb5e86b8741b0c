"""Fock space vectors and the action of divided powers and Kashiwara operators.

Throughout, a *word* or :class:`GoodSequence` lists its steps in the order
they are applied to the vacuum: ``((3, 2), (2, 2))`` means apply
``F_3^(2)`` first, then ``F_2^(2)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .combinatorics import Symbol, SymbolError, is_standard, order_key
from .laurent import LaurentPoly


class FockVector:
    """A finitely supported map from symbols to Laurent polynomials.

    Zero coefficients are never stored.  Instances are treated as values:
    every operation returns a new vector.
    """

    __slots__ = ("_terms", "multicharge")

    def __init__(self, terms: Mapping[Symbol, LaurentPoly] | Iterable = (),
                 multicharge: Sequence[int] | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Symbol, LaurentPoly] = {}
        for S, c in items:
            c = LaurentPoly.coerce(c)
            if c:
                clean[S] = clean[S] + c if S in clean else c
                if not clean[S]:
                    del clean[S]
        charges = {S.multicharge for S in clean}
        if multicharge is not None:
            charges.add(tuple(multicharge))
        if len(charges) > 1:
            raise SymbolError(f"mixed multicharges in one vector: {sorted(charges)}")
        self._terms = clean
        self.multicharge = next(iter(charges)) if charges else None

    @classmethod
    def basis(cls, S: Symbol) -> "FockVector":
        return cls({S: LaurentPoly.one()})

    @classmethod
    def zero(cls, multicharge: Sequence[int] | None = None) -> "FockVector":
        return cls({}, multicharge)

    # -- mapping protocol -------------------------------------------------

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self._terms)

    def __contains__(self, S) -> bool:
        return S in self._terms

    def items(self):
        return self._terms.items()

    def coefficient(self, S: Symbol) -> LaurentPoly:
        return self._terms.get(S, LaurentPoly())

    __getitem__ = coefficient

    def support(self) -> list[Symbol]:
        return sorted(self._terms, key=order_key)

    def sorted_items(self) -> list[tuple[Symbol, LaurentPoly]]:
        return [(S, self._terms[S]) for S in self.support()]

    def is_zero(self) -> bool:
        return not self._terms

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "FockVector") -> "FockVector":
        if self.multicharge and other.multicharge and self.multicharge != other.multicharge:
            raise SymbolError(f"cannot add vectors of multicharges {self.multicharge} "
                              f"and {other.multicharge}")
        out = dict(self._terms)
        for S, c in other._terms.items():
            d = out.get(S)
            d = c if d is None else d + c
            if d:
                out[S] = d
            else:
                out.pop(S, None)
        return FockVector._raw(out, self.multicharge or other.multicharge)

    def __neg__(self) -> "FockVector":
        return FockVector._raw({S: -c for S, c in self._terms.items()}, self.multicharge)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-other)

    def scale(self, c) -> "FockVector":
        c = LaurentPoly.coerce(c)
        if not c:
            return FockVector.zero(self.multicharge)
        return FockVector._raw({S: d * c for S, d in self._terms.items()}, self.multicharge)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return self._terms == other._terms

    def map_symbols(self, fn) -> "FockVector":
        """Relabel every term through ``fn`` (must be injective)."""
        return FockVector([(fn(S), c) for S, c in self._terms.items()])

    @classmethod
    def _raw(cls, terms: dict, multicharge) -> "FockVector":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.multicharge = multicharge if terms or multicharge else None
        return obj

    def __repr__(self) -> str:
        if not self._terms:
            return "FockVector(0)"
        return "FockVector(" + " + ".join(f"({c})*[{S}]" for S, c in self.sorted_items()) + ")"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "multicharge": list(self.multicharge) if self.multicharge is not None else [],
            "terms": [{"multipartition": [list(p) for p in S.multipartition],
                       "coeff": c.to_json()} for S, c in self.sorted_items()],
        }

    @classmethod
    def from_json(cls, data) -> "FockVector":
        v = tuple(data["multicharge"])
        terms = []
        for t in data["terms"]:
            S = Symbol(v, tuple(tuple(p) for p in t["multipartition"]))
            terms.append((S, LaurentPoly.from_json(t["coeff"])))
        return cls(terms, v)


# ---------------------------------------------------------------------------
# Chevalley action

def _window(S: Symbol, i: int) -> int:
    return min(min(S.cutoffs), i) - 1


@lru_cache(maxsize=200_000)
def f_divided_symbol(S: Symbol, i: int, a: int) -> tuple[tuple[Symbol, int], ...]:
    """Terms ``(S', exponent)`` of ``F_i^(a) . S``.

    ``S'`` replaces ``a`` entries ``i`` by ``i+1`` in rows containing ``i``
    but not ``i+1``; the exponent sums, over the changed rows ``j``, the
    rows below ``j`` containing ``i`` after the change minus the rows below
    ``j`` containing ``i+1`` before it.
    """
    if a < 0:
        raise ValueError("divided power exponent must be >= 0")
    if a == 0:
        return ((S, 0),)
    low = _window(S, i)
    rows = S.sets(low)
    has_i = [i in r for r in rows]
    has_i1 = [i + 1 in r for r in rows]
    eligible = [r for r in range(S.level) if has_i[r] and not has_i1[r]]
    out = []
    for chosen in itertools.combinations(eligible, a):
        picked = set(chosen)
        exp = 0
        for j in chosen:
            for k in range(j + 1, S.level):
                if has_i[k] and k not in picked:
                    exp += 1
                if has_i1[k]:
                    exp -= 1
        new_rows = [(r - {i}) | {i + 1} if k in picked else r for k, r in enumerate(rows)]
        out.append((Symbol.from_sets(S.multicharge, low, new_rows), exp))
    return tuple(out)


@lru_cache(maxsize=200_000)
def e_divided_symbol(S: Symbol, i: int, a: int) -> tuple[tuple[Symbol, int], ...]:
    """Terms ``(S', exponent)`` of ``E_i^(a) . S`` (mirror of the F rule, rows above)."""
    if a < 0:
        raise ValueError("divided power exponent must be >= 0")
    if a == 0:
        return ((S, 0),)
    low = _window(S, i)
    rows = S.sets(low)
    has_i = [i in r for r in rows]
    has_i1 = [i + 1 in r for r in rows]
    eligible = [r for r in range(S.level) if has_i1[r] and not has_i[r]]
    out = []
    for chosen in itertools.combinations(eligible, a):
        picked = set(chosen)
        n1 = 0
        for j in chosen:
            for k in range(j):
                if has_i[k] or k in picked:
                    n1 += 1
                if has_i1[k]:
                    n1 -= 1
        new_rows = [(r - {i + 1}) | {i} if k in picked else r for k, r in enumerate(rows)]
        out.append((Symbol.from_sets(S.multicharge, low, new_rows), -n1))
    return tuple(out)


def _act(x: FockVector, table) -> FockVector:
    out: dict[Symbol, LaurentPoly] = {}
    for S, c in x.items():
        for T, e in table(S):
            d = c.shift(e)
            prev = out.get(T)
            d = d if prev is None else prev + d
            if d:
                out[T] = d
            else:
                out.pop(T, None)
    return FockVector._raw(out, x.multicharge)


def f_divided(x: FockVector, i: int, a: int = 1) -> FockVector:
    return _act(x, lambda S: f_divided_symbol(S, i, a))


def e_divided(x: FockVector, i: int, a: int = 1) -> FockVector:
    return _act(x, lambda S: e_divided_symbol(S, i, a))


def weight_exponent(S: Symbol, i: int) -> int:
    """Rows with ``i`` but not ``i+1`` minus rows with ``i+1`` but not ``i``."""
    low = _window(S, i)
    total = 0
    for r in S.sets(low):
        total += (i in r) - (i + 1 in r)
    return total


# ---------------------------------------------------------------------------
# crystal structure

@dataclass(frozen=True)
class Signature:
    """Reduced i-signature of a symbol.

    ``epsilon`` counts the surviving ``+`` (how often Kashiwara's E can be
    applied) and ``phi`` the surviving ``-``.  Positions are row indices.
    """

    letter: int
    epsilon: int
    phi: int
    e_position: int | None
    f_position: int | None
    word: str


def signature(S: Symbol, i: int) -> Signature:
    low = _window(S, i)
    letters = []
    for r, row in enumerate(S.sets(low)):
        has_i, has_i1 = i in row, i + 1 in row
        if has_i and has_i1:
            letters.append(("+", r))
            letters.append(("-", r))
        elif has_i1:
            letters.append(("+", r))
        elif has_i:
            letters.append(("-", r))
    open_plus: list[int] = []
    minus_rows: list[int] = []
    for sign, r in letters:
        if sign == "+":
            open_plus.append(r)
        elif open_plus:
            open_plus.pop()
        else:
            minus_rows.append(r)
    return Signature(
        letter=i,
        epsilon=len(open_plus),
        phi=len(minus_rows),
        e_position=open_plus[0] if open_plus else None,
        f_position=minus_rows[-1] if minus_rows else None,
        word="".join(sign for sign, _ in letters),
    )


def _flip(S: Symbol, row: int, old: int, new: int) -> Symbol:
    low = min(min(S.cutoffs), old, new) - 1
    rows = list(S.sets(low))
    rows[row] = (rows[row] - {old}) | {new}
    return Symbol.from_sets(S.multicharge, low, rows)


def kashiwara_f(S: Symbol, i: int) -> Symbol | None:
    sig = signature(S, i)
    if sig.f_position is None:
        return None
    return _flip(S, sig.f_position, i, i + 1)


def kashiwara_e(S: Symbol, i: int) -> Symbol | None:
    sig = signature(S, i)
    if sig.e_position is None:
        return None
    return _flip(S, sig.e_position, i + 1, i)


def candidate_letters(S: Symbol) -> range:
    """Letters whose signature can be non-trivial."""
    low = S.window_low
    top = max((max(h) for h in S.heads if h), default=low + 1)
    top = max(top, max(S.multicharge, default=low))
    return range(low - 1, top + 1)


@dataclass(frozen=True)
class GoodSequence:
    """Steps ``(letter, multiplicity)`` in application order from the vacuum."""

    steps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for k, (i, a) in enumerate(self.steps):
            if a < 1:
                raise ValueError("multiplicities must be positive")
            if k and self.steps[k - 1][0] == i:
                raise ValueError("consecutive letters must differ")

    def letters(self) -> list[int]:
        return [i for i, a in self.steps for _ in range(a)]

    def __str__(self) -> str:
        return " ".join(f"F{i}^({a})" for i, a in self.steps) or "1"


def good_maximal_sequence(S: Symbol) -> GoodSequence:
    """A good maximal sequence for a standard symbol.

    Built backwards: repeatedly take the largest letter ``i`` with
    ``epsilon_i > 0`` and strip it with Kashiwara's E as often as possible.
    """
    if not is_standard(S):
        raise SymbolError("good_maximal_sequence needs a standard symbol")
    peeled = []
    cur = S
    while cur.size:
        best = None
        for i in reversed(candidate_letters(cur)):
            eps = signature(cur, i).epsilon
            if eps:
                best = (i, eps)
                break
        if best is None:
            raise SymbolError(f"no letter lowers {cur}; symbol is not in the crystal")
        i, eps = best
        cur = _strip(cur, i, eps)
        peeled.append((i, eps))
    return GoodSequence(tuple(reversed(peeled)))


def _strip(S: Symbol, i: int, times: int) -> Symbol:
    for _ in range(times):
        S = kashiwara_e(S, i)
    return S


def good_maximal_sequences(S: Symbol) -> Iterator[GoodSequence]:
    """Every good maximal sequence for ``S``, largest first letter choices first."""
    if not is_standard(S):
        raise SymbolError("good maximal sequences need a standard symbol")

    def rec(cur: Symbol) -> Iterator[tuple]:
        if not cur.size:
            yield ()
            return
        for i in reversed(candidate_letters(cur)):
            eps = signature(cur, i).epsilon
            if eps:
                for rest in rec(_strip(cur, i, eps)):
                    yield rest + ((i, eps),)

    for steps in rec(S):
        yield GoodSequence(steps)


def apply_kashiwara_word(S: Symbol, letters: Iterable[int]) -> Symbol | None:
    """Apply Kashiwara's F for each letter in order; ``None`` once it vanishes."""
    cur: Symbol | None = S
    for i in letters:
        cur = kashiwara_f(cur, i)
        if cur is None:
            return None
    return cur


def monomial_vector(v: Sequence[int], seq: GoodSequence | Sequence[tuple[int, int]]) -> FockVector:
    """``F_{i_k}^(a_k) ... F_{i_1}^(a_1) . vacuum`` with the first step applied first."""
    steps = seq.steps if isinstance(seq, GoodSequence) else tuple(seq)
    x = FockVector.basis(Symbol.empty(tuple(v)))
    for i, a in steps:
        x = f_divided(x, i, a)
        if x.is_zero():
            break
    return x


def apply_word(x: FockVector, word: Sequence[tuple[str, int, int]]) -> FockVector:
    """Apply ``(kind, letter, power)`` steps in order; ``kind`` is ``"F"`` or ``"E"``."""
    for kind, i, a in word:
        if kind == "F":
            x = f_divided(x, i, a)
        elif kind == "E":
            x = e_divided(x, i, a)
        else:
            raise ValueError(f"unknown generator {kind!r}")
    return x
