"""Text, LaTeX and JSON renderings of symbols, vectors and expansions."""
from __future__ import annotations

import json

from .combinatorics import Symbol
from .expansion import CanonicalExpansion
from .fock import FockVector


def symbol_grid(S: Symbol) -> list[list[str]]:
    """Rows on a common column grid starting at the display start; blanks pad short rows."""
    start = S.display_start()
    top = max(S.multicharge, default=start - 1)
    grid = []
    for r, s in enumerate(S.multicharge):
        cells = [str(S.entry(r, j)) for j in range(start, s + 1)]
        grid.append(cells + [""] * (top - s))
    return grid


def symbol_text(S: Symbol) -> str:
    return str(S)


def symbol_block_text(S: Symbol) -> str:
    """Multi-line aligned picture of ``S``."""
    grid = symbol_grid(S)
    if not grid:
        return "()"
    width = max((len(c) for row in grid for c in row), default=1)
    lines = []
    for row in grid:
        lines.append("... " + " ".join(c.rjust(width) for c in row).rstrip())
    return "\n".join(lines)


def symbol_latex(S: Symbol) -> str:
    grid = symbol_grid(S)
    body = " \\\\\n".join("  \\cdots & " + " & ".join(row) for row in grid)
    return "\\begin{pmatrix}\n" + body + "\n\\end{pmatrix}"


def vector_text(x: FockVector) -> str:
    if x.is_zero():
        return "0"
    return "\n".join(f"{str(c):>12}  {T}" for T, c in x.sorted_items())


def vector_latex(x: FockVector) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for T, c in x.sorted_items():
        if c == 1:
            coeff = ""
        elif c == -1:
            coeff = "-"
        elif c.is_monomial():
            coeff = c.to_latex()
        else:
            coeff = f"\\left({c.to_latex()}\\right)"
        parts.append(coeff + symbol_latex(T))
    return "\n+ ".join(parts).replace("+ -", "- ")


def expansion_json(E: CanonicalExpansion) -> dict:
    return {
        "source": E.source.to_json(rendered=True),
        "method": E.method.value,
        "vector": E.vector.to_json(),
    }


def expansion_text(E: CanonicalExpansion) -> str:
    head = f"G({E.source}) via {E.method.value}, {len(E.vector)} term(s)"
    return head + "\n" + vector_text(E.vector)


def expansion_latex(E: CanonicalExpansion) -> str:
    return "G\\left(" + symbol_latex(E.source) + "\\right) =\n" + vector_latex(E.vector)


def dumps(data) -> str:
    """Deterministic JSON."""
    return json.dumps(data, sort_keys=True, indent=2)
