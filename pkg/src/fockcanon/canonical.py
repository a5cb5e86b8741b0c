"""Canonical basis elements: elimination oracle, method dispatch and verification."""
from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterable, Sequence

from . import formulas
from .combinatorics import (
    BlockKey,
    Symbol,
    SymbolError,
    block_key,
    common_entries,
    enumerate_standard_symbols,
    group_by_block,
    is_ordered,
    is_standard,
    order_key,
    remove_entry_all_rows,
)
from .expansion import CanonicalExpansion, Method, MethodInapplicable, TriangularityError
from .fock import FockVector, good_maximal_sequence, monomial_vector
from .laurent import LaurentPoly, positive_valuation, symmetrize_correction

__all__ = [
    "CanonicalExpansion", "CanonicalOracle", "Method", "MethodInapplicable",
    "TriangularityError", "applicable_methods", "canonical", "canonical_oracle",
    "compute_with", "monomial_expansion", "verify_block",
]


def monomial_expansion(S: Symbol) -> FockVector:
    """``A(S)``: the divided-power monomial of a good maximal sequence."""
    return monomial_vector(S.multicharge, good_maximal_sequence(S))


class CanonicalOracle:
    """Bar-invariant elimination over monomial vectors, memoized per symbol.

    ``G(T)`` starts from ``A(T)``; while some other term ``T'`` has a
    coefficient without positive valuation, the smallest such ``T'`` (in
    ``order_key``) is eliminated by subtracting its symmetrized coefficient
    times ``G(T')``.  A symbol needed while still being processed signals a
    cycle and raises ``TriangularityError``.

    An optional ``cache_dir`` stores one JSON file per block.
    """

    def __init__(self, cache_dir: str | os.PathLike | None = None):
        self._memo: dict[Symbol, CanonicalExpansion] = {}
        self._lock = threading.RLock()
        self._active: set[Symbol] = set()
        self.cache_dir = Path(cache_dir) if cache_dir is not None else None
        self._loaded_blocks: set[BlockKey] = set()

    def __call__(self, S: Symbol) -> CanonicalExpansion:
        return self.expand(S)

    def expand(self, S: Symbol) -> CanonicalExpansion:
        if not is_standard(S):
            raise SymbolError(f"canonical basis elements are indexed by standard symbols; got {S}")
        with self._lock:
            hit = self._memo.get(S)
            if hit is not None:
                return hit
            if self.cache_dir is not None:
                self._load_block(block_key(S))
                hit = self._memo.get(S)
                if hit is not None:
                    return hit
            result = self._compute(S)
            self._memo[S] = result
            return result

    def _compute(self, S: Symbol) -> CanonicalExpansion:
        if S in self._active:
            raise TriangularityError(f"triangularity violated: {S} depends on itself")
        self._active.add(S)
        try:
            x = monomial_expansion(S)
            if not positive_valuation(x.coefficient(S) - 1):
                raise TriangularityError(
                    f"triangularity violated: coefficient of {S} in its monomial is {x.coefficient(S)}")
            certificate = []
            while True:
                bad = [T for T, c in x.items() if T != S and not positive_valuation(c)]
                if not bad:
                    break
                T = min(bad, key=order_key)
                if not is_standard(T):
                    raise TriangularityError(
                        f"triangularity violated: non-standard {T} has coefficient "
                        f"{x.coefficient(T)} in the expansion of {S}")
                c = symmetrize_correction(x.coefficient(T))
                if T in self._active:
                    raise TriangularityError(f"triangularity violated: {S} and {T} depend on each other")
                x = x - self.expand(T).vector.scale(c)
                certificate.append((T, c))
            if x.coefficient(S) != LaurentPoly.one():
                raise TriangularityError(
                    f"triangularity violated: elimination left coefficient {x.coefficient(S)} on {S}")
            return CanonicalExpansion(S, x, Method.ORACLE, tuple(certificate))
        finally:
            self._active.discard(S)

    # -- cache ---------------------------------------------------------------

    def cache_path(self, key: BlockKey) -> Path:
        return self.cache_dir / f"{block_hash(key)}.json"

    def _load_block(self, key: BlockKey) -> None:
        if key in self._loaded_blocks:
            return
        self._loaded_blocks.add(key)
        path = self.cache_path(key)
        if not path.exists():
            return
        data = json.loads(path.read_text())
        for item in data["elements"]:
            S = Symbol.from_json(item["source"])
            vec = FockVector.from_json(item["vector"])
            cert = tuple((Symbol.from_json(t), LaurentPoly.from_json(c))
                         for t, c in item.get("certificate", ()))
            self._memo.setdefault(S, CanonicalExpansion(S, vec, Method.ORACLE, cert))

    def save_block(self, key: BlockKey) -> None:
        """Write every memoized element of ``key`` to the cache directory."""
        if self.cache_dir is None:
            return
        with self._lock:
            members = sorted((E for S, E in self._memo.items() if block_key(S) == key),
                             key=lambda E: order_key(E.source))
        payload = {
            "block": key.to_json(),
            "elements": [{
                "source": E.source.to_json(),
                "vector": E.vector.to_json(),
                "certificate": [[T.to_json(), c.to_json()] for T, c in E.certificate],
            } for E in members],
        }
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        path = self.cache_path(key)
        tmp = path.with_suffix(f".{os.getpid()}.tmp")
        tmp.write_text(json.dumps(payload, sort_keys=True))
        tmp.replace(path)


def block_hash(key: BlockKey) -> str:
    text = json.dumps([list(key.multicharge), list(key.entries), key.window_low])
    return hashlib.sha256(text.encode()).hexdigest()[:24]


_default_oracle = CanonicalOracle()


def canonical_oracle(S: Symbol, oracle: CanonicalOracle | None = None) -> CanonicalExpansion:
    return (oracle or _default_oracle).expand(S)


# ---------------------------------------------------------------------------
# dispatch

def _removable_entry(S: Symbol) -> int | None:
    common = common_entries(S)
    return common[-1] if common else None


def applicable_methods(S: Symbol) -> list[Method]:
    """Every closed method whose predicate holds for ``S`` (oracle excluded)."""
    if not is_standard(S):
        return []
    out = []
    split = formulas.asymptotic_split(S)
    if split is not None and len(split) >= 2:
        out.append(Method.ASYMPTOTIC)
    if S.level == 2:
        out.append(Method.LM2)
    if formulas.heart_check(S):
        out.append(Method.SPINE)
    if is_ordered(S):
        out.append(Method.ORDERED)
    if S.level == 3:
        out.append(Method.GOOD_MONOMIAL_L3)
    if _removable_entry(S) is not None:
        out.append(Method.REMOVAL)
    return out


def _auto_method(S: Symbol) -> Method:
    methods = applicable_methods(S)
    if Method.ASYMPTOTIC in methods:
        return Method.ASYMPTOTIC
    if Method.LM2 in methods:
        return Method.LM2
    if Method.SPINE in methods:
        return Method.SPINE
    if Method.ORDERED in methods and formulas.disjoint_column_boundaries(S):
        return Method.ORDERED
    if Method.GOOD_MONOMIAL_L3 in methods:
        return Method.GOOD_MONOMIAL_L3
    return Method.ORACLE


def compute_with(S: Symbol, method: Method | str,
                 oracle: CanonicalOracle | None = None) -> CanonicalExpansion:
    """Run one specific method; raises ``MethodInapplicable`` if its predicate fails."""
    method = Method(method)
    if not is_standard(S):
        raise SymbolError(f"canonical basis elements are indexed by standard symbols; got {S}")
    if method is Method.ORACLE:
        return canonical_oracle(S, oracle)
    if method is Method.LM2:
        return formulas.lm_canonical(S)
    if method is Method.ASYMPTOTIC:
        return formulas.asymptotic_canonical(S, lambda T: canonical(T, oracle=oracle))
    if method is Method.SPINE:
        if not formulas.heart_check(S):
            raise MethodInapplicable(method, "condition (heart)")
        return formulas.spine_canonical(S)
    if method is Method.ORDERED:
        return formulas.ordered_canonical(S)
    if method is Method.GOOD_MONOMIAL_L3:
        return formulas.good_monomial_canonical(S)
    if method is Method.REMOVAL:
        x = _removable_entry(S)
        if x is None:
            raise MethodInapplicable(method, "an entry shared by every row")
        smaller = canonical(remove_entry_all_rows(S, x), oracle=oracle)
        return formulas.column_lift(smaller, x)
    raise ValueError(f"unknown method {method}")


def canonical(S: Symbol, method: Method | str = "auto",
              oracle: CanonicalOracle | None = None) -> CanonicalExpansion:
    """``G(S)`` via the cheapest applicable method, or a forced one."""
    if not is_standard(S):
        raise SymbolError(f"canonical basis elements are indexed by standard symbols; got {S}")
    if method == "auto":
        method = _auto_method(S)
    return compute_with(S, method, oracle)


# ---------------------------------------------------------------------------
# verification

def _verify_block_task(args):
    members, methods, cache_dir = args
    oracle = CanonicalOracle(cache_dir)
    rows = []
    timings = []
    for S in members:
        start = time.perf_counter()
        ref = oracle.expand(S)
        checks = {}
        for m in applicable_methods(S):
            if methods is not None and m not in methods:
                continue
            try:
                got = compute_with(S, m, oracle)
                checks[m.value] = "match" if got.vector == ref.vector else "mismatch"
            except (MethodInapplicable, SymbolError) as exc:
                checks[m.value] = f"error: {exc}"
        problems = ref.unitriangularity_violations()
        row = {
            "symbol": S.to_json(),
            "display": str(S),
            "terms": len(ref.vector),
            "methods": checks,
            "unitriangular": not problems,
        }
        if Method.SPINE.value in checks:
            shared = [str(t.image) for t in formulas.spine_terms(S) if t.multiplicity > 1]
            if shared:
                row["diagnostics"] = [f"spine image reached by several minimal tuples: {x}"
                                      for x in shared]
        rows.append(row)
        timings.append(time.perf_counter() - start)
    if cache_dir is not None and members:
        oracle.save_block(block_key(members[0]))
    return rows, timings


def verify_block(v: Sequence[int], n: int, methods: Iterable[Method | str] | None = None,
                 jobs: int = 1, cache_dir: str | os.PathLike | None = None) -> dict:
    """Compare the oracle with every applicable closed formula on all standard symbols of size ``n``.

    The report is deterministic except for the ``timing`` entry.
    """
    v = tuple(v)
    wanted = None if methods is None else {Method(m) for m in methods}
    blocks = group_by_block(enumerate_standard_symbols(v, n))
    tasks = [(members, wanted, cache_dir) for members in blocks.values()]
    start = time.perf_counter()
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            results = list(pool.map(_verify_block_task, tasks))
    else:
        results = [_verify_block_task(t) for t in tasks]
    elapsed = time.perf_counter() - start
    symbols = []
    per_method: dict[str, dict[str, int]] = {}
    for rows, _ in results:
        for row in rows:
            symbols.append(row)
            for m, status in row["methods"].items():
                tally = per_method.setdefault(m, {"checked": 0, "mismatch": 0})
                tally["checked"] += 1
                if status != "match":
                    tally["mismatch"] += 1
    ok = all(row["unitriangular"] and all(s == "match" for s in row["methods"].values())
             for row in symbols)
    return {
        "multicharge": list(v),
        "size": n,
        "blocks": len(blocks),
        "symbols": len(symbols),
        "per_method": {m: per_method[m] for m in sorted(per_method)},
        "results": symbols,
        "ok": ok,
        "timing": {
            "total_seconds": elapsed,
            "per_block_seconds": [sum(t) for _, t in results],
        },
    }
