"""Partitions, beta-numbers and l-symbols.

A row of a symbol with charge ``s`` is a strictly increasing sequence
``(beta_j)_{j <= s}`` with ``beta_j = j`` far to the left.  It is stored as
the pair (charge, partition) and the beta-numbers are derived on demand:
``beta_j = lambda_{s-j+1} + j``.

Rows are indexed from 0 (top) to ``l - 1`` (bottom) throughout the package.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class SymbolError(ValueError):
    """Raised for malformed symbols or violated preconditions."""


# ---------------------------------------------------------------------------
# partitions

def check_partition(parts: Iterable[int]) -> tuple[int, ...]:
    parts = tuple(int(p) for p in parts)
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    if any(p <= 0 for p in parts):
        raise SymbolError(f"partition parts must be positive: {parts}")
    if any(parts[k] < parts[k + 1] for k in range(len(parts) - 1)):
        raise SymbolError(f"partition must be non-increasing: {parts}")
    return parts


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``n`` in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``n`` into ``parts`` pieces, lexicographic."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


def multipartitions(n: int, level: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    for sizes in compositions(n, level):
        for combo in itertools.product(*(list(partitions(k)) for k in sizes)):
            yield combo


def check_multicharge(v: Iterable[int]) -> tuple[int, ...]:
    v = tuple(int(c) for c in v)
    if any(v[k] < v[k + 1] for k in range(len(v) - 1)):
        raise SymbolError(f"multicharge must be weakly decreasing: {v}")
    return v


# ---------------------------------------------------------------------------
# symbols

@dataclass(frozen=True)
class Symbol:
    """An l-symbol of a given multicharge.

    Equality and hashing use the canonical (multicharge, multipartition)
    storage, so two symbols are equal iff all their beta-numbers agree.
    """

    multicharge: tuple[int, ...]
    multipartition: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        v = check_multicharge(self.multicharge)
        lam = tuple(check_partition(p) for p in self.multipartition)
        if len(v) != len(lam):
            raise SymbolError(
                f"multicharge has {len(v)} entries but multipartition has {len(lam)}")
        object.__setattr__(self, "multicharge", v)
        object.__setattr__(self, "multipartition", lam)

    # -- derived data -----------------------------------------------------

    @property
    def level(self) -> int:
        return len(self.multicharge)

    @cached_property
    def size(self) -> int:
        return sum(sum(p) for p in self.multipartition)

    @cached_property
    def cutoffs(self) -> tuple[int, ...]:
        """Per row, the largest index ``c`` with ``beta_j = j`` for all ``j <= c``."""
        return tuple(s - len(p) for s, p in zip(self.multicharge, self.multipartition))

    @cached_property
    def heads(self) -> tuple[tuple[int, ...], ...]:
        """Per row, the entries strictly above the row's cutoff, increasing."""
        out = []
        for s, lam, c in zip(self.multicharge, self.multipartition, self.cutoffs):
            out.append(tuple(lam[s - j] + j for j in range(c + 1, s + 1)))
        return tuple(out)

    @cached_property
    def _head_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(h) for h in self.heads)

    @property
    def window_low(self) -> int:
        """Common window: one below the deepest deviation from the vacuum."""
        return min(self.cutoffs) - 1 if self.multicharge else 0

    def contains(self, row: int, x: int) -> bool:
        return x <= self.cutoffs[row] or x in self._head_sets[row]

    def entry(self, row: int, j: int) -> int:
        """``beta^row_j`` for ``j <= multicharge[row]``."""
        s = self.multicharge[row]
        if j > s:
            raise IndexError(f"index {j} above charge {s} of row {row}")
        lam = self.multipartition[row]
        k = s - j
        return (lam[k] if k < len(lam) else 0) + j

    def row_entries(self, row: int, window_low: int) -> list[int]:
        """Entries ``beta^row_j`` for ``window_low <= j <= charge``."""
        s = self.multicharge[row]
        if window_low > s:
            raise SymbolError(f"window {window_low} above charge {s}")
        return [self.entry(row, j) for j in range(window_low, s + 1)]

    def sets(self, low: int) -> tuple[frozenset, ...]:
        """Per row, the set of entries greater than ``low``.

        ``low`` must not exceed any row cutoff; every integer ``<= low``
        is then an entry of every row.
        """
        if self.multicharge and low > min(self.cutoffs):
            raise SymbolError(f"window {low} above a row cutoff {self.cutoffs}")
        return tuple(frozenset(range(low + 1, c + 1)) | h
                     for c, h in zip(self.cutoffs, self._head_sets))

    def entry_multiset(self, low: int) -> tuple[int, ...]:
        return tuple(sorted(x for row in self.sets(low) for x in row))

    # -- constructors -----------------------------------------------------

    @classmethod
    def empty(cls, multicharge: Sequence[int]) -> "Symbol":
        return cls(tuple(multicharge), tuple(() for _ in multicharge))

    @classmethod
    def from_sets(cls, multicharge: Sequence[int], low: int,
                  rows: Sequence[Iterable[int]]) -> "Symbol":
        """Build from the entries greater than ``low`` of every row."""
        v = tuple(multicharge)
        if len(rows) != len(v):
            raise SymbolError("row count does not match multicharge")
        lam = []
        for s, row in zip(v, rows):
            entries = sorted(row)
            if len(entries) != s - low or len(set(entries)) != len(entries):
                raise SymbolError(
                    f"row {entries} is not a beta-number of charge {s} above {low}")
            if entries and entries[0] <= low:
                raise SymbolError(f"row {entries} has an entry below the window {low}")
            parts = [entries[k] - (low + 1 + k) for k in range(len(entries) - 1, -1, -1)]
            lam.append(tuple(p for p in parts if p))
        return cls(v, tuple(lam))

    @classmethod
    def from_rows(cls, multicharge: Sequence[int],
                  rows: Sequence[Sequence[int]]) -> "Symbol":
        """Build from displayed rows, each right-aligned at its charge.

        Entries before the first displayed one are the vacuum ``beta_j = j``.
        """
        v = tuple(multicharge)
        if len(rows) != len(v):
            raise SymbolError("row count does not match multicharge")
        full = []
        for s, row in zip(v, rows):
            row = [int(x) for x in row]
            start = s - len(row) + 1
            if any(row[k] >= row[k + 1] for k in range(len(row) - 1)):
                raise SymbolError(f"row {row} is not strictly increasing")
            if row and row[0] < start:
                raise SymbolError(f"row {row} dips below the vacuum")
            full.append((start, row))
        low = min([start - 1 for start, _ in full], default=0)
        sets = []
        for (start, row), s in zip(full, v):
            sets.append(list(range(low + 1, start)) + row)
        return cls.from_sets(v, low, sets)

    # -- presentation -----------------------------------------------------

    def display_start(self) -> int:
        if not self.multicharge:
            return 0
        return min(min(self.cutoffs) + 1, min(self.multicharge))

    def display_rows(self) -> list[list[int]]:
        start = self.display_start()
        return [self.row_entries(r, start) for r in range(self.level)]

    def __str__(self) -> str:
        return " | ".join("...," + ",".join(map(str, row)) if row else "..."
                          for row in self.display_rows())

    def to_json(self, rendered: bool = False) -> dict:
        out = {"multicharge": list(self.multicharge),
               "multipartition": [list(p) for p in self.multipartition]}
        if rendered:
            out["rows"] = self.display_rows()
            out["window_low"] = self.display_start()
        return out

    @classmethod
    def from_json(cls, data) -> "Symbol":
        return cls(tuple(data["multicharge"]),
                   tuple(tuple(p) for p in data["multipartition"]))


def symbol_from_multipartition(v: Sequence[int], lam: Sequence[Sequence[int]]) -> Symbol:
    if len(v) != len(lam):
        raise SymbolError("multipartition length must equal multicharge length")
    return Symbol(tuple(v), tuple(tuple(p) for p in lam))


def multipartition_from_symbol(S: Symbol) -> tuple[tuple[int, ...], ...]:
    return S.multipartition


def row_entries(S: Symbol, i: int, window_low: int) -> list[int]:
    return S.row_entries(i, window_low)


# ---------------------------------------------------------------------------
# predicates

def is_standard(S: Symbol) -> bool:
    """Columns weakly increase from top to bottom."""
    low = S.window_low
    for r in range(S.level - 1):
        for j in range(low + 1, S.multicharge[r + 1] + 1):
            if S.entry(r, j) > S.entry(r + 1, j):
                return False
    return True


def is_ordered(S: Symbol) -> bool:
    """Standard, and the top of every column bounds the whole previous column."""
    if not is_standard(S):
        return False
    if S.level == 0:
        return True
    low = S.window_low
    v = S.multicharge
    for i in range(low + 2, v[0] + 1):
        top = S.entry(0, i)
        for c in range(S.level):
            if i - 1 <= v[c] and S.entry(c, i - 1) > top:
                return False
    return True


# ---------------------------------------------------------------------------
# blocks and orders

@dataclass(frozen=True, order=True)
class BlockKey:
    """Multicharge plus the multiset of entries above ``window_low``.

    ``window_low = min(v) - size`` lies below every row cutoff, so all the
    entries not recorded are shared by every symbol of the block.
    """

    multicharge: tuple[int, ...]
    window_low: int
    entries: tuple[int, ...]

    def to_json(self) -> dict:
        return {"multicharge": list(self.multicharge), "window_low": self.window_low,
                "entries": list(self.entries)}


def block_key(S: Symbol) -> BlockKey:
    low = min(S.multicharge, default=0) - S.size
    return BlockKey(S.multicharge, low, S.entry_multiset(low))


def _common_low(*symbols: Symbol) -> int:
    return min(min(S.multicharge, default=0) - S.size for S in symbols)


def dominance_leq(T: Symbol, T2: Symbol) -> bool:
    """Prefix-sum comparison of descending-sorted entries.

    Defined on a single block; raises ``SymbolError`` otherwise.
    """
    if block_key(T) != block_key(T2):
        raise SymbolError("dominance_leq needs two symbols of the same block")
    low = _common_low(T, T2)
    a = sorted(T.entry_multiset(low), reverse=True)
    b = sorted(T2.entry_multiset(low), reverse=True)
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa > sb:
            return False
    return True


def order_key(S: Symbol) -> tuple:
    """Deterministic total order on symbols of one multicharge.

    Size first, then the descending entry sequence, then the rows compared
    lexicographically top to bottom.  Within a canonical basis element the
    source symbol is the smallest term.
    """
    low = min(S.multicharge, default=0) - S.size
    rows = tuple(tuple(sorted(r)) for r in S.sets(low))
    desc = tuple(sorted((x for r in rows for x in r), reverse=True))
    return (S.size, desc, rows)


# ---------------------------------------------------------------------------
# enumeration

def enumerate_all_symbols(v: Sequence[int], n: int) -> list[Symbol]:
    v = check_multicharge(v)
    return [Symbol(v, lam) for lam in multipartitions(n, len(v))]


def enumerate_standard_symbols(v: Sequence[int], n: int) -> list[Symbol]:
    return [S for S in enumerate_all_symbols(v, n) if is_standard(S)]


def group_by_block(symbols: Iterable[Symbol]) -> dict[BlockKey, list[Symbol]]:
    """Group symbols by block; blocks and members in deterministic order."""
    groups: dict[BlockKey, list[Symbol]] = {}
    for S in symbols:
        groups.setdefault(block_key(S), []).append(S)
    return {k: sorted(groups[k], key=order_key) for k in sorted(groups)}


# ---------------------------------------------------------------------------
# transformations

def shift_symbol(S: Symbol, delta: int) -> Symbol:
    """Add ``delta`` to the multicharge and to every entry."""
    return Symbol(tuple(s + delta for s in S.multicharge), S.multipartition)


def remove_entry_all_rows(T: Symbol, x: int) -> Symbol:
    """Delete ``x`` from every row; the multicharge drops by one."""
    low = min(min(T.cutoffs), x) - 1
    rows = T.sets(low)
    for r, row in enumerate(rows):
        if x not in row:
            raise SymbolError(f"entry {x} missing from row {r}")
    return Symbol.from_sets([s - 1 for s in T.multicharge], low,
                            [row - {x} for row in rows])


def insert_entry_all_rows(T: Symbol, x: int) -> Symbol:
    """Insert ``x`` into every row; the multicharge rises by one."""
    low = min(min(T.cutoffs), x) - 1
    rows = T.sets(low)
    for r, row in enumerate(rows):
        if x in row:
            raise SymbolError(f"entry {x} already present in row {r}")
    return Symbol.from_sets([s + 1 for s in T.multicharge], low,
                            [row | {x} for row in rows])


def common_entries(S: Symbol) -> list[int]:
    """Entries above the common vacuum that appear in every row."""
    low = S.window_low
    rows = S.sets(low)
    common = set.intersection(*(set(r) for r in rows)) if rows else set()
    return sorted(x for x in common if x > min(S.cutoffs))
