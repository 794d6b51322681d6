"""Integer Laurent polynomials in one symbol.

Shared coefficient ring for point counts (polynomials in q) and spherical
Hecke coefficients (Laurent polynomials in v, with q = v^2).  Coefficients
are exact Python ints (Fractions are tolerated where a caller needs them);
there is no floating point anywhere in this package.
"""

from __future__ import annotations

from fractions import Fraction


class Laurent:
    """Sparse Laurent polynomial: finite map exponent -> nonzero coefficient."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        self.c = {}
        if coeffs:
            for e, a in coeffs.items():
                if a:
                    self.c[int(e)] = a

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Laurent":
        return Laurent()

    @staticmethod
    def const(a) -> "Laurent":
        return Laurent({0: a} if a else None)

    @staticmethod
    def monomial(a, e: int) -> "Laurent":
        return Laurent({e: a} if a else None)

    @staticmethod
    def var() -> "Laurent":
        return Laurent({1: 1})

    # -- ring ops ------------------------------------------------------

    def __add__(self, other: "Laurent") -> "Laurent":
        c = dict(self.c)
        for e, a in other.c.items():
            b = c.get(e, 0) + a
            if b:
                c[e] = b
            else:
                c.pop(e, None)
        out = Laurent()
        out.c = c
        return out

    def __neg__(self) -> "Laurent":
        out = Laurent()
        out.c = {e: -a for e, a in self.c.items()}
        return out

    def __sub__(self, other: "Laurent") -> "Laurent":
        return self + (-other)

    def __mul__(self, other: "Laurent") -> "Laurent":
        c = {}
        for e1, a1 in self.c.items():
            for e2, a2 in other.c.items():
                e = e1 + e2
                b = c.get(e, 0) + a1 * a2
                if b:
                    c[e] = b
                else:
                    c.pop(e, None)
        out = Laurent()
        out.c = c
        return out

    def scale(self, a) -> "Laurent":
        if not a:
            return Laurent()
        out = Laurent()
        out.c = {e: a * b for e, b in self.c.items()}
        return out

    def shift(self, k: int) -> "Laurent":
        """Multiply by var^k."""
        out = Laurent()
        out.c = {e + k: a for e, a in self.c.items()}
        return out

    def __pow__(self, k: int) -> "Laurent":
        if k < 0:
            if not self.is_unit_monomial():
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            e, a = next(iter(self.c.items()))
            if a * a != 1:
                raise ValueError("negative power needs coefficient +-1")
            return Laurent.monomial(a if k % 2 == 0 or a == 1 else a, e * k)
        r = Laurent.const(1)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    # -- predicates / views ---------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Laurent.const(other)
        return isinstance(other, Laurent) and self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def is_unit_monomial(self) -> bool:
        """True when the polynomial is +-var^e."""
        return len(self.c) == 1 and next(iter(self.c.values())) in (1, -1)

    def is_monomial(self) -> bool:
        return len(self.c) == 1

    def min_exp(self) -> int:
        return min(self.c) if self.c else 0

    def max_exp(self) -> int:
        return max(self.c) if self.c else 0

    def coeff(self, e: int):
        return self.c.get(e, 0)

    # -- specialisations -------------------------------------------------

    def subs_square(self) -> "Laurent":
        """Substitute var -> var^2 (used for q = v^2)."""
        out = Laurent()
        out.c = {2 * e: a for e, a in self.c.items()}
        return out

    def subs_inverse(self) -> "Laurent":
        """Substitute var -> var^-1."""
        out = Laurent()
        out.c = {-e: a for e, a in self.c.items()}
        return out

    def __call__(self, x):
        """Evaluate at an exact number (int or Fraction)."""
        total = 0
        for e, a in self.c.items():
            if e >= 0:
                total += a * x**e
            else:
                total += a * Fraction(1, x ** (-e))
        if isinstance(total, Fraction) and total.denominator == 1:
            total = total.numerator
        return total

    def divexact_monomial(self, a, e: int) -> "Laurent":
        """Divide by a*var^e; requires every coefficient divisible by a."""
        out = Laurent()
        c = {}
        for e1, a1 in self.c.items():
            q, r = divmod(a1, a)
            if r:
                raise ValueError("inexact coefficient division")
            c[e1 - e] = q
        out.c = c
        return out

    # -- io ----------------------------------------------------------------

    def coeff_list(self):
        """Dense coefficient list from exponent 0 (requires no negative exponents)."""
        if self.c and self.min_exp() < 0:
            raise ValueError("negative exponent in a plain polynomial context")
        n = self.max_exp()
        return [self.c.get(e, 0) for e in range(n + 1)] if self.c else [0]

    def to_dict(self):
        return {str(e): a for e, a in sorted(self.c.items())}

    def text(self, sym: str = "q") -> str:
        if not self.c:
            return "0"
        bits = []
        for e in sorted(self.c):
            a = self.c[e]
            if e == 0:
                bits.append(f"{a}")
            else:
                head = "" if a == 1 else ("-" if a == -1 else f"{a}*")
                pw = sym if e == 1 else f"{sym}^{e}"
                bits.append(f"{head}{pw}")
        return " + ".join(bits).replace("+ -", "- ")

    def __repr__(self):
        return f"Laurent({self.text()})"


def one() -> Laurent:
    return Laurent.const(1)
