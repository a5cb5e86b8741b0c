"""Closed formulas for canonical basis elements.

Covers the level-2 pair-swapping formula, asymptotic splitting, column
removal, the ordered-symbol formula and the spine formula.  Each formula
has an applicability predicate; callers are expected to check it.
"""
from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .combinatorics import (
    Symbol,
    SymbolError,
    insert_entry_all_rows,
    is_ordered,
    is_standard,
    remove_entry_all_rows,
)
from .expansion import CanonicalExpansion, Method, MethodInapplicable
from .fock import (
    FockVector,
    GoodSequence,
    candidate_letters,
    f_divided,
    kashiwara_e,
    signature,
)
from .laurent import LaurentPoly, positive_valuation


# ---------------------------------------------------------------------------
# permutations of columns / spines

def min_length(original: Sequence[int], arrangement: Sequence[int]) -> int:
    """Fewest adjacent transpositions turning ``original`` into ``arrangement``.

    Equal values are matched in order (the minimal coset representative),
    so the answer is the inversion count of that matching.
    """
    if sorted(original) != sorted(arrangement):
        raise ValueError("arrangement is not a rearrangement of original")
    slots: dict[int, list[int]] = {}
    for pos, val in enumerate(original):
        slots.setdefault(val, []).append(pos)
    cursor = {val: 0 for val in slots}
    perm = []
    for val in arrangement:
        perm.append(slots[val][cursor[val]])
        cursor[val] += 1
    return sum(1 for a, b in itertools.combinations(perm, 2) if a > b)


def arrangements(values: Sequence[int]) -> Iterator[tuple[tuple[int, ...], int]]:
    """Distinct rearrangements of ``values`` with their minimal lengths."""
    values = tuple(values)
    seen = set()
    for perm in itertools.permutations(values):
        if perm not in seen:
            seen.add(perm)
            yield perm, min_length(values, perm)


def permutation_from_word(word: Sequence[int], n: int) -> tuple[int, ...]:
    """The permutation ``s_{w1} s_{w2} ...`` of ``{0..n-1}`` as a tuple.

    Generators are 1-based adjacent transpositions; composition is as
    functions, so the rightmost generator acts first.
    """
    perm = list(range(n))
    for g in reversed(word):
        if not 1 <= g < n:
            raise ValueError(f"s_{g} is not a generator of S_{n}")
        perm = [g if p == g - 1 else g - 1 if p == g else p for p in perm]
    return tuple(perm)


def permute(values: Sequence[int], sigma: Sequence[int]) -> tuple[int, ...]:
    """``(values[sigma(0)], values[sigma(1)], ...)``."""
    return tuple(values[sigma[t]] for t in range(len(values)))


# ---------------------------------------------------------------------------
# psi maps

@dataclass(frozen=True)
class PsiMap:
    """Greedy matching of a lower row into a higher one.

    Identity on entries ``<= low``; ``mapping`` holds the rest.
    """

    target_row: int
    source_row: int
    low: int
    mapping: dict

    def __call__(self, x: int) -> int:
        if x <= self.low:
            return x
        return self.mapping[x]

    def pairs(self) -> list[tuple[int, int]]:
        return [(y, x) for x, y in sorted(self.mapping.items()) if x != y]

    def __hash__(self):
        return hash((self.target_row, self.source_row, self.low,
                     tuple(sorted(self.mapping.items()))))


def psi_between(target: Sequence[int], source: Sequence[int], low: int) -> dict[int, int]:
    """Match each source entry (increasing) to the largest unused target entry below it.

    ``target`` and ``source`` hold the entries above ``low`` of two rows;
    every integer ``<= low`` is shared and matched to itself.
    """
    free = sorted(x for x in target if x > low)
    out = {}
    for b in sorted(x for x in source if x > low):
        k = bisect.bisect_right(free, b)
        if k == 0:
            raise SymbolError(f"no free target entry below {b}; charge condition violated")
        out[b] = free.pop(k - 1)
    return out


def psi_injection(S: Symbol, target_row: int, source_row: int) -> PsiMap:
    """The injection from row ``source_row`` into the higher row ``target_row``."""
    if target_row >= source_row:
        raise ValueError("target row must lie above the source row")
    low = min(S.cutoffs)
    rows = S.sets(low)
    return PsiMap(target_row, source_row, low,
                  psi_between(rows[target_row], rows[source_row], low))


# ---------------------------------------------------------------------------
# level 2

def lm_pairs(S: Symbol) -> list[tuple[int, int]]:
    return psi_injection(S, 0, 1).pairs()


def lm_canonical(S: Symbol) -> CanonicalExpansion:
    """Level-2 formula: swap any subset of pairs, weight ``q^(#swapped)``."""
    if S.level != 2:
        raise MethodInapplicable(Method.LM2, "level 2")
    if not is_standard(S):
        raise MethodInapplicable(Method.LM2, "a standard symbol")
    low = min(S.cutoffs)
    top, bottom = S.sets(low)
    pairs = lm_pairs(S)
    terms = []
    for k in range(len(pairs) + 1):
        for chosen in itertools.combinations(pairs, k):
            up = set(top)
            down = set(bottom)
            for y, x in chosen:
                up.discard(y)
                up.add(x)
                down.discard(x)
                down.add(y)
            T = Symbol.from_sets(S.multicharge, low, [up, down])
            terms.append((T, LaurentPoly.monomial(k)))
    vector = FockVector(terms)
    if len(vector) != 2 ** len(pairs):
        raise SymbolError("pair swaps produced coinciding symbols")
    return CanonicalExpansion(S, vector, Method.LM2)


# ---------------------------------------------------------------------------
# asymptotic splitting

def asymptotic_cuts(v: Sequence[int], n: int) -> list[int]:
    """Row indices ``k`` with ``v[k-1] - v[k] >= n``."""
    return [k for k in range(1, len(v)) if v[k - 1] - v[k] >= n]


def _separated(S: Symbol, k: int) -> bool:
    """Letters building rows ``< k`` never meet rows ``>= k`` and vice versa.

    The lower letters stay below the vacuum of the upper rows, and the
    upper letters start above every entry of the lower rows.  A charge gap
    of at least ``size(S)`` implies this.
    """
    upper, lower = range(k), range(k, S.level)
    lower_top = max(max(S.heads[r], default=S.multicharge[r]) for r in lower)
    lower_moved = [r for r in lower if S.multipartition[r]]
    if lower_moved and lower_top > S.multicharge[k - 1]:
        return False
    upper_moved = [r for r in upper if S.multipartition[r]]
    if upper_moved and min(S.cutoffs[r] + 1 for r in upper_moved) <= lower_top:
        return False
    return True


def separated_cuts(S: Symbol) -> list[int]:
    return [k for k in range(1, S.level) if _separated(S, k)]


def asymptotic_split(S: Symbol, n: int | None = None) -> list[tuple[tuple[int, ...], Symbol]] | None:
    """Split ``S`` row-wise into independent components.

    With ``n`` given, cut at every charge gap of at least ``n`` (valid for
    ``n >= size(S)``).  Without it, cut wherever the letters of the two
    sides are separated, which includes every gap of at least the size.
    Returns ``None`` when there is no cut.
    """
    cuts = separated_cuts(S) if n is None else asymptotic_cuts(S.multicharge, n)
    if not cuts:
        return None
    bounds = [0] + cuts + [S.level]
    out = []
    for a, b in zip(bounds, bounds[1:]):
        v = S.multicharge[a:b]
        out.append((v, Symbol(v, S.multipartition[a:b])))
    return out


def asymptotic_canonical(S: Symbol,
                         component: Callable[[Symbol], CanonicalExpansion]) -> CanonicalExpansion:
    """Product of the component expansions, computed with ``component``."""
    parts = asymptotic_split(S)
    if parts is None or len(parts) < 2:
        raise MethodInapplicable(Method.ASYMPTOTIC, "a charge gap at least the size")
    if not is_standard(S):
        raise MethodInapplicable(Method.ASYMPTOTIC, "a standard symbol")
    pieces = [component(Si).vector for _, Si in parts]
    terms = [((), LaurentPoly.one())]
    for piece in pieces:
        terms = [(lam + T.multipartition, c * d)
                 for lam, c in terms for T, d in piece.sorted_items()]
    vector = FockVector([(Symbol(S.multicharge, lam), c) for lam, c in terms])
    return CanonicalExpansion(S, vector, Method.ASYMPTOTIC)


# ---------------------------------------------------------------------------
# column removal

def column_removal(expansion: CanonicalExpansion, x: int) -> CanonicalExpansion:
    """Delete ``x`` from every row of every term, keeping coefficients."""
    vector = expansion.vector.map_symbols(lambda T: remove_entry_all_rows(T, x))
    return CanonicalExpansion(remove_entry_all_rows(expansion.source, x), vector,
                              Method.REMOVAL)


def column_lift(expansion: CanonicalExpansion, x: int) -> CanonicalExpansion:
    """Insert ``x`` into every row of every term, keeping coefficients."""
    vector = expansion.vector.map_symbols(lambda T: insert_entry_all_rows(T, x))
    return CanonicalExpansion(insert_entry_all_rows(expansion.source, x), vector,
                              Method.REMOVAL)


# ---------------------------------------------------------------------------
# level 3 monomials

def is_unitriangular(S: Symbol, x: FockVector) -> bool:
    """``x = S mod q``: coefficient 1 on ``S``, positive valuation elsewhere."""
    if x.coefficient(S) != LaurentPoly.one():
        return False
    return all(positive_valuation(c) for T, c in x.items() if T != S)


def good_monomial(S: Symbol) -> tuple[GoodSequence, FockVector]:
    """A good maximal sequence whose monomial is ``S`` modulo ``q``.

    A monomial on the vacuum is bar-invariant, so that monomial is
    ``G(S)``.  Not every good maximal sequence qualifies.  The search keeps
    only prefixes whose monomial is itself canonical; since ``G`` of each
    intermediate symbol is unique, one witness per symbol suffices.
    """
    if not is_standard(S):
        raise MethodInapplicable(Method.GOOD_MONOMIAL_L3, "a standard symbol")
    memo: dict[Symbol, tuple | None] = {}

    def search(cur: Symbol):
        if cur in memo:
            return memo[cur]
        if not cur.size:
            memo[cur] = ((), FockVector.basis(cur))
            return memo[cur]
        memo[cur] = None
        for i in reversed(candidate_letters(cur)):
            eps = signature(cur, i).epsilon
            if not eps:
                continue
            prev = cur
            for _ in range(eps):
                prev = kashiwara_e(prev, i)
            found = search(prev)
            if found is None:
                continue
            x = f_divided(found[1], i, eps)
            if is_unitriangular(cur, x):
                memo[cur] = (found[0] + ((i, eps),), x)
                break
        return memo[cur]

    found = search(S)
    if found is None:
        raise MethodInapplicable(Method.GOOD_MONOMIAL_L3,
                                 "a good maximal sequence with canonical monomial")
    return GoodSequence(found[0]), found[1]


def good_monomial_canonical(S: Symbol) -> CanonicalExpansion:
    if S.level != 3:
        raise MethodInapplicable(Method.GOOD_MONOMIAL_L3, "level 3")
    if not is_standard(S):
        raise MethodInapplicable(Method.GOOD_MONOMIAL_L3, "a standard symbol")
    _, x = good_monomial(S)
    return CanonicalExpansion(S, x, Method.GOOD_MONOMIAL_L3)


# ---------------------------------------------------------------------------
# ordered symbols

def _columns(S: Symbol) -> tuple[int, list[tuple[int, ...]]]:
    """Columns strictly above the common vacuum, left to right."""
    low = min(S.cutoffs)
    v = S.multicharge
    cols = []
    for j in range(low + 1, v[0] + 1):
        cols.append(tuple(S.entry(r, j) for r in range(S.level) if v[r] >= j))
    return low, cols


def _ordered_peel(S: Symbol) -> tuple[int, int, Symbol]:
    """One peeling step: returns ``(x, a, S')``."""
    v = S.multicharge
    low = min(S.cutoffs)
    for k in range(S.level - 1, -1, -1):
        lower = v[k + 1] if k + 1 < S.level else None
        start = max(low + 1, (lower + 1) if lower is not None else low + 1)
        for i in range(start, v[k] + 1):
            x = S.entry(k, i)
            blocked = any(S.entry(s, j) == x - 1
                          for s in range(k, S.level)
                          for j in range(low, min(i, v[s] + 1)))
            if blocked:
                continue
            a = 1
            while k - a >= 0 and S.entry(k - a, i) == x:
                a += 1
            rows = list(S.sets(low - 1))
            for r in range(k - a + 1, k + 1):
                rows[r] = (rows[r] - {x}) | {x - 1}
            return x, a, Symbol.from_sets(v, low - 1, rows)
    raise SymbolError(f"no peelable entry in {S}")


def ordered_seq_steps(S: Symbol) -> list[tuple[int, int]]:
    """Peeling steps ``(x, a)`` in application order (last peel first)."""
    if not is_ordered(S):
        raise MethodInapplicable(Method.ORDERED, "an ordered symbol")
    steps = []
    cur = S
    while cur.size:
        x, a, cur = _ordered_peel(cur)
        steps.append((x, a))
    return steps[::-1]


def ordered_seq(S: Symbol) -> list[int]:
    return [x for x, a in ordered_seq_steps(S) for _ in range(a)]


def runs_to_monomial(seq: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Group equal consecutive values ``x`` into divided powers of ``F_{x-1}``."""
    return tuple((x - 1, len(list(group))) for x, group in itertools.groupby(seq))


def m_statistic(T: Symbol) -> int:
    """Count pairs (row k above row t) whose column-(j-1) entry equals the (t, j) entry."""
    if T.level == 0:
        return 0
    low = min(T.cutoffs)
    v = T.multicharge
    total = 0
    for j in range(low + 1, v[0] + 1):
        height = sum(1 for s in v if s >= j)
        for t in range(height):
            target = T.entry(t, j)
            total += sum(1 for k in range(t) if T.entry(k, j - 1) == target)
    return total


@dataclass(frozen=True)
class AdmissibleTerm:
    """One admissible permutation tuple and the symbol it produces.

    ``arrangement`` lists the permuted columns (or spines) that differ from
    the identity, as ``(index, permuted values)``.
    """

    image: Symbol
    length: int
    m_statistic: int = 0
    multiplicity: int = 1
    arrangement: tuple = ()

    @property
    def exponent(self) -> int:
        return self.length - self.m_statistic


def ordered_terms(S: Symbol) -> list[AdmissibleTerm]:
    if not is_ordered(S):
        raise MethodInapplicable(Method.ORDERED, "an ordered symbol")
    low, cols = _columns(S)
    choices = [list(arrangements(col)) for col in cols]
    v = S.multicharge
    out = []

    def rec(c: int, rows: list[list[int]], length: int, moved: list):
        if c == len(cols):
            image = Symbol.from_sets(v, low, rows)
            out.append(AdmissibleTerm(image, length, m_statistic(image),
                                      arrangement=tuple(moved)))
            return
        for arr, ell in choices[c]:
            if any(rows[r] and rows[r][-1] >= arr[r] for r in range(len(arr))):
                continue
            for r, x in enumerate(arr):
                rows[r].append(x)
            if ell:
                moved.append((low + 1 + c, arr))
            rec(c + 1, rows, length + ell, moved)
            if ell:
                moved.pop()
            for r in range(len(arr)):
                rows[r].pop()

    rec(0, [[] for _ in v], 0, [])
    return out


def ordered_canonical(S: Symbol) -> CanonicalExpansion:
    terms = ordered_terms(S)
    vector = FockVector([(t.image, LaurentPoly.monomial(t.exponent)) for t in terms])
    return CanonicalExpansion(S, vector, Method.ORDERED)


def disjoint_column_boundaries(S: Symbol) -> bool:
    """Bottom of every column differs from the top of the next one."""
    _, cols = _columns(S)
    low = min(S.cutoffs) if S.level else 0
    prev = (low,)
    for col in cols:
        if prev[-1] == col[0]:
            return False
        prev = col
    return True


# ---------------------------------------------------------------------------
# spines

def _psi_table(S: Symbol) -> dict[tuple[int, int], PsiMap]:
    return {(i, j): psi_injection(S, i, j)
            for i in range(S.level) for j in range(i + 1, S.level)}


def heart_check(S: Symbol) -> bool:
    """Every triple of rows satisfies psi_{k,i} = psi_{j,i} o psi_{k,j}."""
    if not is_standard(S):
        raise SymbolError("heart_check needs a standard symbol")
    psi = _psi_table(S)
    low = min(S.cutoffs) if S.level else 0
    rows = S.sets(low) if S.level else ()
    for i, j, k in itertools.combinations(range(S.level), 3):
        for x in rows[k]:
            if psi[i, k](x) != psi[i, j](psi[j, k](x)):
                return False
    return True


@dataclass(frozen=True)
class SpineDecomposition:
    """Spines above the common vacuum ``low``, ordered by their top entry.

    Every integer ``y <= low`` forms the vacuum spine ``(y, ..., y)``.
    """

    low: int
    spines: tuple[tuple[int, ...], ...]


def spines(S: Symbol) -> SpineDecomposition:
    if not heart_check(S):
        raise MethodInapplicable(Method.SPINE, "condition (heart)")
    low = min(S.cutoffs)
    rows = S.sets(low)
    parent: dict[tuple[int, int], tuple[int, int]] = {}

    def find(node):
        while parent.get(node, node) != node:
            node = parent[node]
        return node

    for r, row in enumerate(rows):
        for x in row:
            parent[(r, x)] = (r, x)
    for (i, j), psi in _psi_table(S).items():
        for x in rows[j]:
            a, b = find((j, x)), find((i, psi(x)))
            if a != b:
                parent[a] = b
    classes: dict = {}
    for node in parent:
        classes.setdefault(find(node), []).append(node)
    out = []
    for members in classes.values():
        members.sort()
        rows_hit = [r for r, _ in members]
        if rows_hit != list(range(len(members))):
            raise SymbolError(f"spine {members} is not a contiguous run from the top row")
        out.append(tuple(x for _, x in members))
    out.sort(key=lambda sp: (sp[0], sp))
    return SpineDecomposition(low, tuple(out))


def spine_terms(S: Symbol) -> list[AdmissibleTerm]:
    """Admissible spine permutations, one term per distinct image."""
    decomposition = spines(S)
    low = decomposition.low
    sps = decomposition.spines
    choices = [list(arrangements(sp)) for sp in sps]
    best: dict[Symbol, list] = {}
    v = S.multicharge

    def rec(c: int, rows: list[set], length: int, moved: list):
        if c == len(sps):
            image = Symbol.from_sets(v, low, rows)
            entry = best.get(image)
            if entry is None or length < entry[0]:
                best[image] = [length, 1, tuple(moved)]
            elif length == entry[0]:
                entry[1] += 1
            return
        for arr, ell in choices[c]:
            if any(x in rows[r] for r, x in enumerate(arr)):
                continue
            for r, x in enumerate(arr):
                rows[r].add(x)
            if ell:
                moved.append((c, arr))
            rec(c + 1, rows, length + ell, moved)
            if ell:
                moved.pop()
            for r, x in enumerate(arr):
                rows[r].discard(x)

    rec(0, [set() for _ in v], 0, [])
    return [AdmissibleTerm(img, ell, 0, mult, moved)
            for img, (ell, mult, moved) in best.items()]


def spine_canonical(S: Symbol) -> CanonicalExpansion:
    if not is_standard(S):
        raise MethodInapplicable(Method.SPINE, "a standard symbol")
    terms = spine_terms(S)
    vector = FockVector([(t.image, LaurentPoly.monomial(t.length, t.multiplicity))
                         for t in terms])
    return CanonicalExpansion(S, vector, Method.SPINE)


def spine_tilde_seq(S: Symbol) -> list[tuple[int, int]]:
    """Peeling steps ``(x, m)`` in application order (last peel first).

    Each peel takes the deepest non-empty row ``c``, its smallest entry
    ``x`` above the vacuum, and lowers ``x`` to ``x - 1`` in the rows
    ``c' .. c`` holding ``x`` that do not already hold ``x - 1``.
    """
    if not is_standard(S) or not heart_check(S):
        raise MethodInapplicable(Method.SPINE, "a standard symbol satisfying (heart)")
    steps = []
    cur = S
    while cur.size:
        c = max(r for r in range(cur.level) if cur.multipartition[r])
        x = cur.heads[c][0]
        low = min(min(cur.cutoffs), x - 1) - 1
        rows = list(cur.sets(low))
        first = min(r for r in range(c + 1) if x in rows[r])
        m = 0
        for r in range(first, c + 1):
            if x not in rows[r]:
                raise SymbolError(f"entry {x} skips row {r}; (heart) fails")
            if x - 1 not in rows[r]:
                rows[r] = (rows[r] - {x}) | {x - 1}
                m += 1
        cur = Symbol.from_sets(cur.multicharge, low, rows)
        steps.append((x, m))
    return steps[::-1]
