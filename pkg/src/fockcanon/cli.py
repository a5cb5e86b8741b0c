"""Command-line front end.

Commands: ``canon``, ``verify``, ``blocks``, ``act`` and ``crystal``.
Exit codes: 0 ok, 1 verification mismatch, 2 bad input, 3 inapplicable
method, 4 internal assertion.  Every error prints exactly one line starting
with ``fockcanon: error[<kind>]:``.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time

from .canonical import CanonicalOracle, canonical, verify_block
from .combinatorics import (
    Symbol,
    SymbolError,
    block_key,
    check_multicharge,
    enumerate_all_symbols,
    group_by_block,
    is_standard,
)
from .expansion import Method, MethodInapplicable, TriangularityError
from .fock import (
    FockVector,
    apply_kashiwara_word,
    apply_word,
    candidate_letters,
    good_maximal_sequence,
    good_maximal_sequences,
    signature,
)
from . import render

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_BAD_INPUT = 2
EXIT_INAPPLICABLE = 3
EXIT_INTERNAL = 4


class CliError(Exception):
    def __init__(self, kind: str, message: str, code: int):
        super().__init__(message)
        self.kind = kind
        self.code = code


def bad_input(message: str) -> CliError:
    return CliError("bad-input", message, EXIT_BAD_INPUT)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise bad_input(message)


# ---------------------------------------------------------------------------
# parsing helpers

def parse_multicharge(text: str) -> tuple[int, ...]:
    try:
        v = tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise bad_input(f"multicharge must be comma separated integers, got {text!r}")
    if not v:
        raise bad_input("multicharge is empty")
    try:
        return check_multicharge(v)
    except SymbolError as exc:
        raise bad_input(str(exc))


def parse_multipartition(text: str, level: int) -> tuple[tuple[int, ...], ...]:
    try:
        data = json.loads("[" + text + "]")
    except json.JSONDecodeError:
        raise bad_input(f"multipartition must look like \"[4,3],[2]\", got {text!r}")
    if len(data) == 1 and level != 1 and isinstance(data[0], list) and \
            all(isinstance(p, list) for p in data[0]):
        data = data[0]
    if not all(isinstance(p, list) and all(isinstance(x, int) for x in p) for p in data):
        raise bad_input(f"multipartition must be a list of integer lists, got {text!r}")
    if len(data) != level:
        raise bad_input(f"multipartition has {len(data)} components, multicharge has {level}")
    return tuple(tuple(p) for p in data)


def parse_rows(text: str, v: tuple[int, ...], window_low: int | None) -> Symbol:
    """Rows separated by ``;`` or ``|``, entries by commas."""
    rows = []
    for chunk in re.split(r"[;|]", text):
        chunk = chunk.replace("...", "").replace(" ", "").strip(",")
        try:
            rows.append([int(x) for x in chunk.split(",") if x != ""])
        except ValueError:
            raise bad_input(f"rows must be integers, got {chunk!r}")
    if len(rows) != len(v):
        raise bad_input(f"{len(rows)} rows given for a multicharge of level {len(v)}")
    if window_low is not None:
        for s, row in zip(v, rows):
            want = max(s - window_low + 1, 0)
            if len(row) != want:
                raise bad_input(f"row {row} must list the {want} entries from column {window_low} to {s}")
    try:
        return Symbol.from_rows(v, rows)
    except SymbolError as exc:
        raise bad_input(str(exc))


_TOKEN = re.compile(r"^([EF])_?\{?(-?\d+)\}?(?:\^\{?\(?(\d+)\)?\}?)?$")


def parse_word(text: str) -> list[tuple[str, int, int]]:
    """``"F3^(2) F2 E1^(1)"`` as steps applied left to right."""
    word = []
    for token in text.replace(",", " ").split():
        m = _TOKEN.match(token)
        if not m:
            raise bad_input(f"cannot parse operator {token!r}; expected e.g. F3^(2)")
        power = int(m.group(3)) if m.group(3) else 1
        word.append((m.group(1), int(m.group(2)), power))
    return word


def symbol_from_args(args, required: bool = True) -> Symbol | None:
    v = parse_multicharge(args.multicharge)
    if args.rows is not None and args.multipartition is not None:
        raise bad_input("give either --multipartition or --rows, not both")
    if args.rows is not None:
        return parse_rows(args.rows, v, args.window_low)
    if args.multipartition is not None:
        try:
            return Symbol(v, parse_multipartition(args.multipartition, len(v)))
        except SymbolError as exc:
            raise bad_input(str(exc))
    if required:
        raise bad_input("a symbol is required: use --multipartition or --rows")
    return None


def _standard(S: Symbol) -> Symbol:
    if not is_standard(S):
        raise bad_input(f"symbol {S} is not standard")
    return S


def _oracle(args) -> CanonicalOracle:
    return CanonicalOracle(None if args.no_cache else args.cache)


def _cache_dir(args):
    return None if args.no_cache else args.cache


# ---------------------------------------------------------------------------
# commands

def cmd_canon(args) -> tuple[str, int]:
    S = _standard(symbol_from_args(args))
    oracle = _oracle(args)
    E = canonical(S, args.method, oracle=oracle)
    if oracle.cache_dir is not None:
        oracle.save_block(block_key(S))
    if args.format == "json":
        data = render.expansion_json(E)
        data["terms"] = len(E.vector)
        return render.dumps(data), EXIT_OK
    if args.format == "latex":
        return render.expansion_latex(E), EXIT_OK
    return render.expansion_text(E), EXIT_OK


def _parse_methods(text: str | None):
    if text is None:
        return None
    out = []
    for name in text.split(","):
        name = name.strip()
        try:
            out.append(Method(name))
        except ValueError:
            raise bad_input(f"unknown method {name!r}; choose from {', '.join(m.value for m in Method)}")
    return out


def cmd_verify(args) -> tuple[str, int]:
    v = parse_multicharge(args.multicharge)
    if args.max_size < 0:
        raise bad_input("--max-size must be non-negative")
    methods = _parse_methods(args.methods)
    jobs = args.jobs if args.jobs is not None else (os.cpu_count() or 1)
    if jobs < 1:
        raise bad_input("--jobs must be positive")
    start = time.perf_counter()
    reports = [verify_block(v, n, methods, jobs=jobs, cache_dir=_cache_dir(args))
               for n in range(args.max_size + 1)]
    elapsed = time.perf_counter() - start
    per_method: dict[str, dict[str, int]] = {}
    for rep in reports:
        for m, tally in rep["per_method"].items():
            agg = per_method.setdefault(m, {"checked": 0, "mismatch": 0})
            agg["checked"] += tally["checked"]
            agg["mismatch"] += tally["mismatch"]
    ok = all(rep["ok"] for rep in reports)
    timing = {"total_seconds": elapsed,
              "per_size_seconds": [rep["timing"]["total_seconds"] for rep in reports]}
    sizes = [{k: val for k, val in rep.items() if k not in ("timing", "multicharge")}
             for rep in reports]
    code = EXIT_OK if ok else EXIT_MISMATCH
    if args.format == "json":
        data = {
            "multicharge": list(v),
            "max_size": args.max_size,
            "ok": ok,
            "per_method": {m: per_method[m] for m in sorted(per_method)},
            "sizes": sizes,
        }
        if not args.no_timing:
            data["timing"] = timing
        return render.dumps(data), code
    lines = [f"multicharge {','.join(map(str, v))}, sizes 0..{args.max_size}"]
    for rep in sizes:
        lines.append(f"size {rep['size']}: {rep['blocks']} block(s), {rep['symbols']} standard symbol(s)")
        for row in rep["results"]:
            bad = {m: s for m, s in row["methods"].items() if s != "match"}
            if bad or not row["unitriangular"]:
                lines.append(f"  MISMATCH {row['display']}: {bad or 'not unitriangular'}")
    for m in sorted(per_method):
        t = per_method[m]
        lines.append(f"method {m}: {t['checked']} checked, {t['mismatch']} mismatch(es)")
    lines.append("result: " + ("ok" if ok else "MISMATCH"))
    if not args.no_timing:
        lines.append(f"timing: {elapsed:.3f}s")
    return "\n".join(lines), code


def cmd_blocks(args) -> tuple[str, int]:
    v = parse_multicharge(args.multicharge)
    if args.size < 0:
        raise bad_input("--size must be non-negative")
    groups = group_by_block(enumerate_all_symbols(v, args.size))
    blocks = []
    for key, members in groups.items():
        blocks.append({
            "window_low": key.window_low,
            "entries": list(key.entries),
            "symbols": len(members),
            "standard": sum(1 for S in members if is_standard(S)),
        })
    if args.format == "json":
        return render.dumps({"multicharge": list(v), "size": args.size, "blocks": blocks}), EXIT_OK
    lines = [f"multicharge {','.join(map(str, v))}, size {args.size}: {len(blocks)} block(s)"]
    for b in blocks:
        lines.append(f"  from {b['window_low']}: [{','.join(map(str, b['entries']))}] "
                     f"{b['symbols']} symbol(s), {b['standard']} standard")
    return "\n".join(lines), EXIT_OK


def _read_vector(args) -> FockVector:
    if args.input is not None:
        try:
            text = sys.stdin.read() if args.input == "-" else open(args.input).read()
        except OSError as exc:
            raise bad_input(f"cannot read {args.input}: {exc.strerror}")
        try:
            data = json.loads(text)
            if "terms" in data:
                x = FockVector.from_json(data)
            else:
                x = FockVector.basis(Symbol.from_json(data))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise bad_input(f"malformed input JSON: {exc}")
        if args.multicharge is not None and x.multicharge is not None and \
                x.multicharge != parse_multicharge(args.multicharge):
            raise bad_input("input vector multicharge differs from --multicharge")
        return x
    if args.multicharge is None:
        raise bad_input("act needs --multicharge or --input")
    S = symbol_from_args(args, required=False)
    if S is None:
        S = Symbol.empty(parse_multicharge(args.multicharge))
    return FockVector.basis(S)


def cmd_act(args) -> tuple[str, int]:
    word = parse_word(args.word or "")
    x = apply_word(_read_vector(args), word)
    if args.format == "json":
        return render.dumps(x.to_json()), EXIT_OK
    if args.format == "latex":
        return render.vector_latex(x), EXIT_OK
    return render.vector_text(x), EXIT_OK


def cmd_crystal(args) -> tuple[str, int]:
    S = _standard(symbol_from_args(args))
    seq = good_maximal_sequence(S)
    vacuum = Symbol.empty(S.multicharge)
    replay = apply_kashiwara_word(vacuum, seq.letters())
    table = []
    for i in candidate_letters(S):
        sig = signature(S, i)
        if sig.epsilon or sig.phi:
            table.append({"letter": i, "epsilon": sig.epsilon, "phi": sig.phi, "signature": sig.word})
    data = {
        "symbol": S.to_json(rendered=True),
        "good_maximal_sequence": [list(step) for step in seq.steps],
        "all_good_maximal_sequences": [[list(step) for step in s.steps]
                                       for s in good_maximal_sequences(S)],
        "replay_ok": replay == S,
        "signatures": table,
    }
    code = EXIT_OK if replay == S else EXIT_INTERNAL
    if args.word is not None:
        word = parse_word(args.word)
        if any(kind != "F" for kind, _, _ in word):
            raise bad_input("crystal words may only use F")
        letters = [i for _, i, a in word for _ in range(a)]
        data["word_replay_ok"] = apply_kashiwara_word(vacuum, letters) == S
    if args.format == "json":
        return render.dumps(data), code
    lines = [render.symbol_block_text(S),
             f"good maximal sequence (first applied first): {seq}",
             f"replay from vacuum: {'ok' if data['replay_ok'] else 'FAILED'}"]
    for s in good_maximal_sequences(S):
        lines.append(f"  also good: {s}")
    if "word_replay_ok" in data:
        lines.append(f"word replay: {'ok' if data['word_replay_ok'] else 'FAILED'}")
    lines.append("letter  eps  phi  signature")
    for row in table:
        lines.append(f"{row['letter']:>6} {row['epsilon']:>4} {row['phi']:>4}  {row['signature']}")
    return "\n".join(lines), code


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fockcanon", description="Canonical bases of higher-level Fock spaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def symbol_flags(p, multicharge_required=True):
        p.add_argument("--multicharge", required=multicharge_required, help="e.g. 3,2,1")
        p.add_argument("--multipartition", help='e.g. "[4,3,2,2],[7,3,2]"')
        p.add_argument("--rows", help='displayed rows, e.g. "0,1,3,5;0,2,7"')
        p.add_argument("--window-low", type=int, help="column of the first listed entry in --rows")

    def cache_flags(p):
        p.add_argument("--cache", metavar="PATH", help="directory for per-block oracle results")
        p.add_argument("--no-cache", action="store_true", help="ignore --cache")

    formats = ["json", "text", "latex"]

    p = sub.add_parser("canon", help="expand G(S) in the symbol basis")
    symbol_flags(p)
    p.add_argument("--method", default="auto", choices=["auto"] + [m.value for m in Method])
    p.add_argument("--format", default="text", choices=formats)
    cache_flags(p)
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("verify", help="compare every applicable method with the oracle")
    p.add_argument("--multicharge", default="0", help="default: level one, charge 0")
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--methods", help="comma separated subset of methods")
    p.add_argument("--jobs", type=int, help="worker cap (default: one per CPU)")
    p.add_argument("--format", default="text", choices=["json", "text"])
    p.add_argument("--no-timing", action="store_true", help="omit wall-clock fields")
    cache_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("blocks", help="list the blocks of a given size")
    p.add_argument("--multicharge", required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--format", default="text", choices=["json", "text"])
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("act", help="apply a divided-power word, left to right")
    symbol_flags(p, multicharge_required=False)
    p.add_argument("--word", default="", help='e.g. "F3^(2) F2^(2)"')
    p.add_argument("--input", help="JSON vector or symbol file, '-' for stdin")
    p.add_argument("--format", default="text", choices=formats)
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("crystal", help="good maximal sequences and signatures")
    symbol_flags(p)
    p.add_argument("--word", help="F-word to replay from the vacuum, left to right")
    p.add_argument("--format", default="text", choices=["json", "text"])
    p.set_defaults(func=cmd_crystal)
    return parser


def _diagnostic(kind: str, message: str) -> str:
    return f"fockcanon: error[{kind}]: " + " ".join(str(message).split())


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        out, code = args.func(args)
    except CliError as exc:
        print(_diagnostic(exc.kind, exc), file=sys.stderr)
        return exc.code
    except MethodInapplicable as exc:
        print(_diagnostic("inapplicable", exc), file=sys.stderr)
        return EXIT_INAPPLICABLE
    except TriangularityError as exc:
        print(_diagnostic("internal", exc), file=sys.stderr)
        return EXIT_INTERNAL
    except SymbolError as exc:
        print(_diagnostic("bad-input", exc), file=sys.stderr)
        return EXIT_BAD_INPUT
    print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
