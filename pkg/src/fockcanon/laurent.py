"""Integer Laurent polynomials in one variable ``q``.

A polynomial is stored as a dense coefficient window starting at its lowest
exponent, so ``LaurentPoly(-1, (1, 0, 1))`` is ``q^-1 + q``.
"""
from __future__ import annotations

from typing import Iterable, Mapping


class LaurentPoly:
    """An element of Z[q, q^-1].

    Instances are immutable and hashable.  The zero polynomial is stored as
    ``lo == 0`` with an empty coefficient tuple; any other polynomial has
    nonzero first and last coefficients.

    >>> q = LaurentPoly.q()
    >>> (q + q**-1) * q
    LaurentPoly('q^2+1')
    """

    __slots__ = ("lo", "coeffs", "_hash")

    def __init__(self, lo: int = 0, coeffs: Iterable[int] = ()):
        coeffs = [int(c) for c in coeffs]
        start, stop = 0, len(coeffs)
        while start < stop and coeffs[start] == 0:
            start += 1
        while stop > start and coeffs[stop - 1] == 0:
            stop -= 1
        if start == stop:
            object.__setattr__(self, "lo", 0)
            object.__setattr__(self, "coeffs", ())
        else:
            object.__setattr__(self, "lo", int(lo) + start)
            object.__setattr__(self, "coeffs", tuple(coeffs[start:stop]))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls(0, (1,))

    @classmethod
    def q(cls) -> "LaurentPoly":
        return cls(1, (1,))

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls(exponent, (coeff,))

    @classmethod
    def from_dict(cls, terms: Mapping[int, int]) -> "LaurentPoly":
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls(lo, [terms.get(e, 0) for e in range(lo, hi + 1)])

    @classmethod
    def coerce(cls, value) -> "LaurentPoly":
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, int):
            return cls(0, (value,))
        raise TypeError(f"cannot coerce {type(value).__name__} to LaurentPoly")

    # -- inspection -------------------------------------------------------

    @property
    def hi(self) -> int:
        """Highest exponent (meaningless for zero)."""
        return self.lo + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def terms(self) -> dict[int, int]:
        return {self.lo + k: c for k, c in enumerate(self.coeffs) if c}

    def coefficient(self, exponent: int) -> int:
        k = exponent - self.lo
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        out = [0] * (hi - lo + 1)
        for k, c in enumerate(self.coeffs):
            out[self.lo - lo + k] += c
        for k, c in enumerate(other.coeffs):
            out[other.lo - lo + k] += c
        return LaurentPoly(lo, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.lo, [-c for c in self.coeffs])

    def __sub__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return LaurentPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for a, ca in enumerate(self.coeffs):
            if ca:
                for b, cb in enumerate(other.coeffs):
                    out[a + b] += ca * cb
        return LaurentPoly(self.lo + other.lo, out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q**k``."""
        if not self.coeffs:
            return self
        return LaurentPoly(self.lo + k, self.coeffs)

    def __pow__(self, n: int):
        if n < 0:
            if self.is_monomial() and self.coeffs[0] in (1, -1):
                return LaurentPoly(self.lo * n, (self.coeffs[0] ** (-n),))
            raise ValueError("only signed monomials are invertible")
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.lo == other.lo and self.coeffs == other.coeffs

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.lo, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def evaluate(self, x):
        return sum(c * x ** (self.lo + k) for k, c in enumerate(self.coeffs) if c)

    # -- rendering / serialization ----------------------------------------

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            e = self.lo + k
            if e == 0:
                mono = str(abs(c))
            else:
                base = "q" if e == 1 else f"q^{e}"
                mono = base if abs(c) == 1 else f"{abs(c)}{base}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, mono))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, mono in parts[1:]:
            out += sign + mono
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly('{self}')"

    def to_latex(self) -> str:
        return _latex(self)

    def to_json(self) -> dict:
        return {"lo": self.lo, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPoly":
        return cls(int(data["lo"]), [int(c) for c in data["coeffs"]])


def _latex(a: LaurentPoly) -> str:
    text = str(a)
    out = []
    i = 0
    while i < len(text):
        if text[i] == "^":
            j = i + 1
            if j < len(text) and text[j] == "-":
                j += 1
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append("^{" + text[i + 1:j] + "}")
            i = j
        else:
            out.append(text[i])
            i += 1
    return "".join(out)


def add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def negate(a: LaurentPoly) -> LaurentPoly:
    return -a


def bar(a: LaurentPoly) -> LaurentPoly:
    """Substitute ``q -> q^-1``."""
    if not a.coeffs:
        return a
    return LaurentPoly(-a.hi, a.coeffs[::-1])


def quantum_integer(r: int) -> LaurentPoly:
    """``[r] = q^(r-1) + q^(r-3) + ... + q^(1-r)``."""
    if r < 0:
        raise ValueError("quantum_integer expects r >= 0")
    if r == 0:
        return LaurentPoly()
    coeffs = [0] * (2 * r - 1)
    coeffs[::2] = [1] * r
    return LaurentPoly(1 - r, coeffs)


def quantum_factorial(r: int) -> LaurentPoly:
    if r < 0:
        raise ValueError("quantum_factorial expects r >= 0")
    out = LaurentPoly.one()
    for k in range(2, r + 1):
        out = out * quantum_integer(k)
    return out


def positive_valuation(a: LaurentPoly) -> bool:
    """True iff every nonzero term has exponent >= 1 (zero counts)."""
    return not a.coeffs or a.lo >= 1


def symmetrize_correction(a: LaurentPoly) -> LaurentPoly:
    """Bar-invariant ``c`` with ``a - c`` in ``q Z[q]``.

    ``c = a_0 + sum_{k>0} a_{-k} (q^k + q^-k)``.
    """
    terms = a.terms()
    out: dict[int, int] = {}
    for e, c in terms.items():
        if e < 0:
            out[e] = out.get(e, 0) + c
            out[-e] = out.get(-e, 0) + c
        elif e == 0:
            out[0] = out.get(0, 0) + c
    return LaurentPoly.from_dict(out)
