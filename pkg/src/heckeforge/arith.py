"""Exact arithmetic substrate for two-variable local fields.

Everything downstream works inside F_p((x))((t)) or F_p((t))((x)), but almost
all of the actual computation happens on three small exact carriers:

* ``BiPoly`` -- bivariate polynomials over a prime field F_p, kept as sparse
  ``(i, j) -> coefficient`` maps.  These are exact: products, restrictions to
  an axis, and leading-coefficient extractions never truncate.
* ``TruncSeries`` -- one-variable Laurent series under an *absolute precision*
  model: a series knows its coefficients for exponents ``val .. prec-1`` and
  nothing beyond ``prec``.  Inversion is certified by a nonzero leading
  coefficient and pays ``2*val`` of precision, multiplication pays
  ``min(prec1 + val2, prec2 + val1)``; a valuation query on a series whose
  known window is entirely zero raises ``UncertifiedValuation`` rather than
  inventing an answer.
* ``FactoredElement`` -- a multiplicative element of the fraction field kept
  in factored form (scalar times powers of x, t, unit polynomials,
  transversal curves, and general monic/distinguished polynomials).  Symbol
  computations stay exact on this carrier.

``IterView``/``embed`` realise the two iterated-Laurent viewpoints: the same
factored element expanded in k((x))((t)) (order ``"xt"``: outer variable t)
or in k((t))((x)) (order ``"tx"``: outer variable x).  Truncation enters only
here, with an adaptive retry up to a configurable cap.

The coefficient domain of a ``TruncSeries`` is pluggable (prime field,
nested series, or exact rational functions via polynomial pairs) through the
small ``FqDom``/``SeriesDom`` protocol objects.
"""

from __future__ import annotations

from typing import Iterable, Optional

DEFAULT_PREC = 16
PREC_CAP = 256


class ArithError(ValueError):
    """Base class for arithmetic domain errors."""


class UncertifiedValuation(ArithError):
    """A valuation was requested but every computed coefficient vanishes."""


class PrecisionError(ArithError):
    """Requested operation cannot be certified at the available precision."""


class ParseError(ArithError):
    """Expression rejected; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


# ---------------------------------------------------------------------------
# prime fields
# ---------------------------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Fq:
    """The prime field F_p with elements represented as ints in [0, p)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ArithError(f"modulus {p} is not prime")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, Fq) and other.p == self.p

    def __hash__(self):
        return hash(("Fq", self.p))

    def __repr__(self):
        return f"Fq({self.p})"

    def elem(self, v: int) -> "FqElem":
        return FqElem(self, v % self.p)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return pow(a, self.p - 2, self.p)


class FqElem:
    """An element of F_p.  Hashable, with full field operator support."""

    __slots__ = ("field", "v")

    def __init__(self, field: Fq, v: int):
        self.field = field
        self.v = v % field.p

    def _coerce(self, other) -> "FqElem":
        if isinstance(other, FqElem):
            if other.field.p != self.field.p:
                raise ArithError("mixed moduli")
            return other
        if isinstance(other, int):
            return FqElem(self.field, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FqElem(self.field, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return FqElem(self.field, -self.v)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FqElem(self.field, self.v - o.v)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FqElem(self.field, o.v - self.v)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FqElem(self.field, self.v * o.v)

    __rmul__ = __mul__

    def inverse(self) -> "FqElem":
        return FqElem(self.field, self.field.inv(self.v))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FqElem(self.field, pow(self.v, k, self.field.p))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.v == other % self.field.p
        return isinstance(other, FqElem) and other.field.p == self.field.p and other.v == self.v

    def __hash__(self):
        return hash((self.field.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}"


# ---------------------------------------------------------------------------
# coefficient domains for truncated series
# ---------------------------------------------------------------------------


class FqDom:
    """Domain adapter: coefficients are ints mod p."""

    __slots__ = ("field",)

    def __init__(self, field: Fq):
        self.field = field

    @property
    def p(self):
        return self.field.p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, k: int):
        return k % self.field.p

    def is_zero(self, a) -> bool:
        return a == 0

    def add(self, a, b):
        return (a + b) % self.field.p

    def neg(self, a):
        return (-a) % self.field.p

    def mul(self, a, b):
        return (a * b) % self.field.p

    def inv(self, a):
        return self.field.inv(a)

    def eq(self, a, b) -> bool:
        return a == b

    def text(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, FqDom) and other.field.p == self.field.p

    def __hash__(self):
        return hash(("FqDom", self.field.p))


class SeriesDom:
    """Domain adapter whose elements are TruncSeries (nested Laurent)."""

    __slots__ = ("var", "prec", "base")

    def __init__(self, var: str, prec: int, base):
        self.var = var
        self.prec = prec
        self.base = base

    def zero(self):
        return TruncSeries(self.base, self.var, self.prec, [], self.prec)

    def one(self):
        return self.from_int(1)

    def from_int(self, k: int):
        return TruncSeries(self.base, self.var, 0, [self.base.from_int(k)], self.prec)

    def is_zero(self, a: "TruncSeries") -> bool:
        return not a.coeffs

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.invert()

    def eq(self, a, b) -> bool:
        return a == b

    def text(self, a) -> str:
        return f"({a.text()})"

    def __eq__(self, other):
        return (
            isinstance(other, SeriesDom)
            and other.var == self.var
            and other.base == self.base
        )

    def __hash__(self):
        return hash(("SeriesDom", self.var, self.base))


# ---------------------------------------------------------------------------
# truncated Laurent series
# ---------------------------------------------------------------------------


class TruncSeries:
    """One-variable Laurent series known modulo var^prec.

    Coefficients live in a pluggable domain.  The window ``val .. prec-1`` is
    fully known (absent entries inside it are genuine zeros); nothing is known
    at or beyond ``prec``.  A series whose window holds no nonzero coefficient
    is "zero to precision" and normalises to ``val == prec`` with no stored
    coefficients.
    """

    __slots__ = ("dom", "var", "val", "coeffs", "prec")

    def __init__(self, dom, var: str, val: int, coeffs: Iterable, prec: int):
        self.dom = dom
        self.var = var
        self.prec = prec
        cs = list(coeffs)
        # drop anything at or beyond the precision horizon
        if val + len(cs) > prec:
            cs = cs[: max(0, prec - val)]
        # strip known-zero leading coefficients
        k = 0
        while k < len(cs) and dom.is_zero(cs[k]):
            k += 1
        cs = cs[k:]
        val += k
        # strip trailing zeros (they are implied by the window semantics)
        while cs and dom.is_zero(cs[-1]):
            cs.pop()
        if not cs:
            val = prec
        self.val = val
        self.coeffs = cs

    # -- helpers ---------------------------------------------------------

    @staticmethod
    def zero(dom, var: str, prec: int) -> "TruncSeries":
        return TruncSeries(dom, var, prec, [], prec)

    @staticmethod
    def const(dom, var: str, a, prec: int) -> "TruncSeries":
        return TruncSeries(dom, var, 0, [a], prec)

    @staticmethod
    def gen(dom, var: str, prec: int) -> "TruncSeries":
        return TruncSeries(dom, var, 1, [dom.one()], prec)

    def coeff(self, e: int):
        """Coefficient at exponent e; raises past the precision horizon."""
        if e >= self.prec:
            raise PrecisionError(
                f"coefficient of {self.var}^{e} unknown at precision O({self.var}^{self.prec})"
            )
        if e < self.val or e >= self.val + len(self.coeffs):
            return self.dom.zero()
        return self.coeffs[e - self.val]

    def _check(self, other: "TruncSeries"):
        if other.var != self.var or other.dom != self.dom:
            raise ArithError("series domain/variable mismatch")

    # -- ring ops -----------------------------------------------------------

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        prec = min(self.prec, other.prec)
        val = min(self.val, other.val, prec)
        n = max(self.val + len(self.coeffs), other.val + len(other.coeffs), val)
        n = min(n, prec)
        out = []
        for e in range(val, n):
            a = self.coeffs[e - self.val] if 0 <= e - self.val < len(self.coeffs) else None
            b = other.coeffs[e - other.val] if 0 <= e - other.val < len(other.coeffs) else None
            if a is None and b is None:
                out.append(self.dom.zero())
            elif a is None:
                out.append(b)
            elif b is None:
                out.append(a)
            else:
                out.append(self.dom.add(a, b))
        return TruncSeries(self.dom, self.var, val, out, prec)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(
            self.dom, self.var, self.val, [self.dom.neg(a) for a in self.coeffs], self.prec
        )

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        if not self.coeffs or not other.coeffs:
            prec = min(self.prec + other.val, other.prec + self.val)
            return TruncSeries.zero(self.dom, self.var, prec)
        prec = min(self.prec + other.val, other.prec + self.val)
        val = self.val + other.val
        n = min(prec - val, len(self.coeffs) + len(other.coeffs) - 1)
        acc = [self.dom.zero() for _ in range(max(n, 0))]
        for i, a in enumerate(self.coeffs):
            if self.dom.is_zero(a):
                continue
            jmax = min(len(other.coeffs), n - i)
            for j in range(jmax):
                b = other.coeffs[j]
                if self.dom.is_zero(b):
                    continue
                acc[i + j] = self.dom.add(acc[i + j], self.dom.mul(a, b))
        return TruncSeries(self.dom, self.var, val, acc, prec)

    def scale(self, a) -> "TruncSeries":
        if self.dom.is_zero(a):
            return TruncSeries.zero(self.dom, self.var, self.prec)
        return TruncSeries(
            self.dom, self.var, self.val, [self.dom.mul(a, c) for c in self.coeffs], self.prec
        )

    def shift(self, k: int) -> "TruncSeries":
        return TruncSeries(self.dom, self.var, self.val + k, list(self.coeffs), self.prec + k)

    def __pow__(self, k: int) -> "TruncSeries":
        if k < 0:
            return self.invert() ** (-k)
        # start the accumulator at a precision no tighter than what the mul
        # rule will erode it to, so the constant does not cap the result
        r = TruncSeries(
            self.dom, self.var, 0, [self.dom.one()], self.prec + abs(self.val) * (k + 1)
        )
        b = self
        while k:
            if k & 1:
                r = r * b
            if k > 1:
                b = b * b
            k >>= 1
        return r

    def invert(self) -> "TruncSeries":
        """Multiplicative inverse; needs a certified (nonzero) leading coefficient.

        Output precision is ``prec - 2*val`` per the absolute-precision model.
        """
        if not self.coeffs:
            raise UncertifiedValuation(
                f"cannot invert: all computed terms vanish to O({self.var}^{self.prec})"
            )
        v = self.val
        out_prec = self.prec - 2 * v
        m = self.prec - v  # unit-part window length
        a0_inv = self.dom.inv(self.coeffs[0])
        b = [a0_inv]
        for k in range(1, m):
            s = self.dom.zero()
            for j in range(1, min(k, len(self.coeffs) - 1) + 1):
                aj = self.coeffs[j]
                if self.dom.is_zero(aj):
                    continue
                s = self.dom.add(s, self.dom.mul(aj, b[k - j]))
            b.append(self.dom.neg(self.dom.mul(a0_inv, s)))
        return TruncSeries(self.dom, self.var, -v, b, out_prec)

    # -- queries ---------------------------------------------------------

    def valuation(self) -> int:
        if not self.coeffs:
            raise UncertifiedValuation(
                f"valuation not certifiable: zero to O({self.var}^{self.prec})"
            )
        return self.val

    def lead(self):
        """(valuation, leading coefficient), certified."""
        return self.valuation(), self.coeffs[0]

    def constant_term(self):
        return self.coeff(0)

    def truncate(self, prec: int) -> "TruncSeries":
        if prec >= self.prec:
            return self
        return TruncSeries(self.dom, self.var, self.val, list(self.coeffs), prec)

    def is_zero_to_prec(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        """Equality on the shared window (precision beyond it is ignored)."""
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if other.var != self.var:
            return False
        n = min(self.prec, other.prec)
        lo = min(self.val, other.val, n)
        for e in range(lo, n):
            a = self.coeffs[e - self.val] if 0 <= e - self.val < len(self.coeffs) else self.dom.zero()
            b = other.coeffs[e - other.val] if 0 <= e - other.val < len(other.coeffs) else other.dom.zero()
            if not self.dom.eq(a, b):
                return False
        return True

    def __hash__(self):
        raise TypeError("TruncSeries is unhashable (window-relative equality)")

    def nonzero_items(self):
        return [
            (self.val + k, c) for k, c in enumerate(self.coeffs) if not self.dom.is_zero(c)
        ]

    def text(self) -> str:
        bits = []
        for e, c in self.nonzero_items():
            cs = self.dom.text(c)
            if e == 0:
                bits.append(cs)
            elif cs == "1":
                bits.append(self.var if e == 1 else f"{self.var}^{e}")
            else:
                bits.append(f"{cs}*{self.var}" + ("" if e == 1 else f"^{e}"))
        bits.append(f"O({self.var}^{self.prec})")
        return " + ".join(bits)

    def __repr__(self):
        return f"TruncSeries({self.text()})"


# ---------------------------------------------------------------------------
# bivariate polynomials
# ---------------------------------------------------------------------------


class BiPoly:
    """Sparse polynomial in x and t over F_p: map (i, j) -> nonzero int."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Fq, coeffs=None):
        self.field = field
        self.coeffs = {}
        if coeffs:
            p = field.p
            for (i, j), c in coeffs.items():
                if i < 0 or j < 0:
                    raise ArithError("negative exponent in a polynomial")
                c %= p
                if c:
                    self.coeffs[(i, j)] = c

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(field: Fq, c: int) -> "BiPoly":
        return BiPoly(field, {(0, 0): c})

    @staticmethod
    def x(field: Fq) -> "BiPoly":
        return BiPoly(field, {(1, 0): 1})

    @staticmethod
    def t(field: Fq) -> "BiPoly":
        return BiPoly(field, {(0, 1): 1})

    # -- ring ops -----------------------------------------------------------

    def _check(self, other: "BiPoly"):
        if other.field.p != self.field.p:
            raise ArithError("mixed moduli")

    def __add__(self, other: "BiPoly") -> "BiPoly":
        self._check(other)
        c = dict(self.coeffs)
        p = self.field.p
        for k, v in other.coeffs.items():
            w = (c.get(k, 0) + v) % p
            if w:
                c[k] = w
            else:
                c.pop(k, None)
        out = BiPoly(self.field)
        out.coeffs = c
        return out

    def __neg__(self) -> "BiPoly":
        p = self.field.p
        out = BiPoly(self.field)
        out.coeffs = {k: (-v) % p for k, v in self.coeffs.items()}
        return out

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        self._check(other)
        p = self.field.p
        c = {}
        for (i1, j1), a in self.coeffs.items():
            for (i2, j2), b in other.coeffs.items():
                k = (i1 + i2, j1 + j2)
                w = (c.get(k, 0) + a * b) % p
                if w:
                    c[k] = w
                else:
                    c.pop(k, None)
        out = BiPoly(self.field)
        out.coeffs = c
        return out

    def scale(self, a: int) -> "BiPoly":
        a %= self.field.p
        out = BiPoly(self.field)
        if a:
            out.coeffs = {k: (a * v) % self.field.p for k, v in self.coeffs.items()}
        return out

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_coeff(self) -> int:
        return self.coeffs.get((0, 0), 0)

    def is_unit(self) -> bool:
        """Unit of F_p[[x,t]]: nonzero constant term."""
        return self.constant_coeff() != 0

    def coeff(self, i: int, j: int) -> FqElem:
        return self.field.elem(self.coeffs.get((i, j), 0))

    def deg_x(self) -> int:
        return max((i for (i, _) in self.coeffs), default=0)

    def deg_t(self) -> int:
        return max((j for (_, j) in self.coeffs), default=0)

    def total_degree(self) -> int:
        return max((i + j for (i, j) in self.coeffs), default=0)

    def restrict_t0(self) -> dict:
        """f(x, 0) as a one-variable map exponent -> coefficient."""
        return {i: c for (i, j), c in self.coeffs.items() if j == 0}

    def restrict_x0(self) -> dict:
        return {j: c for (i, j), c in self.coeffs.items() if i == 0}

    def vt_leadt(self):
        """Valuation in t of the x-Laurent viewpoint and its leading x-polynomial.

        Returns (v_t, {i: c}) where the dict is the coefficient of t^{v_t},
        a polynomial in x.  Raises on the zero polynomial.
        """
        if not self.coeffs:
            raise ArithError("zero polynomial has no valuation")
        vt = min(j for (_, j) in self.coeffs)
        return vt, {i: c for (i, j), c in self.coeffs.items() if j == vt}

    def vx_leadx(self):
        if not self.coeffs:
            raise ArithError("zero polynomial has no valuation")
        vx = min(i for (i, _) in self.coeffs)
        return vx, {j: c for (i, j), c in self.coeffs.items() if i == vx}

    def derivative_x(self) -> "BiPoly":
        p = self.field.p
        out = BiPoly(self.field)
        c = {}
        for (i, j), a in self.coeffs.items():
            if i == 0:
                continue
            w = (a * i) % p
            if w:
                c[(i - 1, j)] = w
        out.coeffs = c
        return out

    def eval_series(self, s: TruncSeries) -> TruncSeries:
        """Evaluate f(s(t), t) as a truncated series in t over F_p.

        ``s`` must be a series in t over an FqDom with matching modulus.
        """
        dom = s.dom
        if not isinstance(dom, FqDom) or dom.field.p != self.field.p:
            raise ArithError("eval_series needs a base-field series in t")
        prec = s.prec
        rows = {}
        for (i, j), c in self.coeffs.items():
            rows.setdefault(i, {})[j] = c
        if not rows:
            return TruncSeries.zero(dom, s.var, prec)
        degx = max(rows)
        acc = TruncSeries.zero(dom, s.var, prec)
        for i in range(degx, -1, -1):
            acc = acc * s
            row = rows.get(i)
            if row:
                lo = min(row)
                hi = max(row)
                coeffs = [row.get(e, 0) for e in range(lo, hi + 1)]
                acc = acc + TruncSeries(dom, s.var, lo, coeffs, prec)
        return acc

    # -- identity ----------------------------------------------------------

    def key(self):
        return (self.field.p, tuple(sorted(self.coeffs.items())))

    def __eq__(self, other):
        return (
            isinstance(other, BiPoly)
            and other.field.p == self.field.p
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash(self.key())

    def text(self) -> str:
        if not self.coeffs:
            return "0"
        bits = []
        for (i, j) in sorted(self.coeffs, key=lambda k: (k[0] + k[1], k[0])):
            c = self.coeffs[(i, j)]
            parts = []
            if c != 1 or (i == 0 and j == 0):
                parts.append(str(c))
            if i:
                parts.append("x" if i == 1 else f"x^{i}")
            if j:
                parts.append("t" if j == 1 else f"t^{j}")
            bits.append("*".join(parts))
        return " + ".join(bits)

    def __repr__(self):
        return f"BiPoly({self.text()} mod {self.field.p})"


# ---------------------------------------------------------------------------
# expression parser:  expr := term (('+'|'-') term)*
#                     term := factor ('*' factor)*
#                     factor := INT | 'x' | 't' | factor '^' UINT | '(' expr ')'
# ---------------------------------------------------------------------------


class _Scanner:
    __slots__ = ("s", "i")

    def __init__(self, s: str):
        self.s = s
        self.i = 0

    def skip_ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.s[self.i] if self.i < len(self.s) else ""

    def take(self) -> str:
        ch = self.peek()
        self.i += 1
        return ch

    def take_uint(self) -> int:
        self.skip_ws()
        j = self.i
        while j < len(self.s) and self.s[j].isdigit():
            j += 1
        if j == self.i:
            raise ParseError("expected an unsigned integer", self.i)
        v = int(self.s[self.i : j])
        self.i = j
        return v


def parse_bipoly(text: str, p: int) -> BiPoly:
    """Parse a polynomial expression in x and t over F_p.

    Grammar: sums of products of integers, x, t, parenthesised
    subexpressions, and ^ with an unsigned exponent.  Coefficients reduce
    mod p; errors carry a byte offset.
    """
    field = Fq(p)
    sc = _Scanner(text)

    def parse_expr() -> BiPoly:
        acc = parse_term()
        while True:
            ch = sc.peek()
            if ch == "+":
                sc.take()
                acc = acc + parse_term()
            elif ch == "-":
                sc.take()
                acc = acc - parse_term()
            else:
                return acc

    def parse_term() -> BiPoly:
        acc = parse_factor()
        while sc.peek() == "*":
            sc.take()
            acc = acc * parse_factor()
        return acc

    def parse_factor() -> BiPoly:
        base = parse_primary()
        while sc.peek() == "^":
            sc.take()
            at = sc.i
            e = sc.take_uint()
            r = BiPoly.const(field, 1)
            b = base
            k = e
            while k:
                if k & 1:
                    r = r * b
                b = b * b
                k >>= 1
            base = r
            del at
        return base

    def parse_primary() -> BiPoly:
        ch = sc.peek()
        at = sc.i
        if ch == "(":
            sc.take()
            inner = parse_expr()
            if sc.peek() != ")":
                raise ParseError("expected ')'", sc.i)
            sc.take()
            return inner
        if ch == "x":
            sc.take()
            return BiPoly.x(field)
        if ch == "t":
            sc.take()
            return BiPoly.t(field)
        if ch.isdigit():
            return BiPoly.const(field, sc.take_uint())
        raise ParseError("expected a factor (integer, x, t, or '(')", at)

    out = parse_expr()
    sc.skip_ws()
    if sc.i != len(sc.s):
        raise ParseError("trailing input", sc.i)
    return out


# ---------------------------------------------------------------------------
# factored multiplicative elements
# ---------------------------------------------------------------------------

AXIS_X = "x"
AXIS_T = "t"
UNIT = "unit"
CURVE = "curve"
MONIC = "monic"


class Factor:
    """One multiplicative factor: an axis, a unit polynomial, a transversal
    curve (carried as its canonical ideal object), or a general monic
    (distinguished) polynomial."""

    __slots__ = ("kind", "payload")

    def __init__(self, kind: str, payload=None):
        self.kind = kind
        self.payload = payload

    @staticmethod
    def axis_x() -> "Factor":
        return Factor(AXIS_X)

    @staticmethod
    def axis_t() -> "Factor":
        return Factor(AXIS_T)

    @staticmethod
    def unit(poly: BiPoly) -> "Factor":
        if not poly.is_unit():
            raise ArithError("unit factor must have a nonzero constant term")
        return Factor(UNIT, poly)

    @staticmethod
    def curve(tc) -> "Factor":
        # a curve whose branch is x = 0 exactly IS the x-axis
        if tc.s.is_zero_to_prec():
            return Factor(AXIS_X)
        return Factor(CURVE, tc)

    @staticmethod
    def monic(poly: BiPoly) -> "Factor":
        if poly.is_zero():
            raise ArithError("zero polynomial is not a factor")
        if poly.is_unit():
            return Factor(UNIT, poly)
        return Factor(MONIC, poly)

    def key(self):
        if self.kind in (AXIS_X, AXIS_T):
            return (self.kind,)
        if self.kind == CURVE:
            return (CURVE, self.payload.key())
        return (self.kind, self.payload.key())

    def label(self) -> str:
        if self.kind == AXIS_X:
            return "axis-x"
        if self.kind == AXIS_T:
            return "axis-t"
        if self.kind == CURVE:
            return self.payload.label()
        return f"{self.kind}:{self.payload.text()}"

    def __repr__(self):
        return f"Factor({self.label()})"


class FactoredElement:
    """scalar * prod(factor^exp): an element of Frac(F_p[[x,t]])^* kept factored.

    Factors are merged by canonical key and sorted deterministically; a zero
    net exponent removes the factor.  Inverses negate exponents, so negative
    powers are first-class.
    """

    __slots__ = ("field", "scalar", "factors")

    def __init__(self, field: Fq, scalar: int = 1, factors=()):
        self.field = field
        s = scalar % field.p
        if s == 0:
            raise ArithError("factored elements are nonzero (scalar vanished)")
        merged = {}
        for f, e in factors:
            if e == 0:
                continue
            k = f.key()
            if k in merged:
                merged[k] = (merged[k][0], merged[k][1] + e)
            else:
                merged[k] = (f, e)
        items = [(f, e) for k, (f, e) in merged.items() if e != 0]
        items.sort(key=lambda fe: fe[0].key())
        self.field = field
        self.scalar = s
        self.factors = tuple(items)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def one(field: Fq) -> "FactoredElement":
        return FactoredElement(field, 1, ())

    @staticmethod
    def axis_x(field: Fq, e: int = 1) -> "FactoredElement":
        return FactoredElement(field, 1, [(Factor.axis_x(), e)])

    @staticmethod
    def axis_t(field: Fq, e: int = 1) -> "FactoredElement":
        return FactoredElement(field, 1, [(Factor.axis_t(), e)])

    @staticmethod
    def monomial(field: Fq, c: int, a: int, b: int) -> "FactoredElement":
        return FactoredElement(
            field, c, [(Factor.axis_x(), a), (Factor.axis_t(), b)]
        )

    # -- group ops ---------------------------------------------------------

    def __mul__(self, other: "FactoredElement") -> "FactoredElement":
        if other.field.p != self.field.p:
            raise ArithError("mixed moduli")
        return FactoredElement(
            self.field,
            self.scalar * other.scalar,
            list(self.factors) + list(other.factors),
        )

    def inverse(self) -> "FactoredElement":
        return FactoredElement(
            self.field,
            self.field.inv(self.scalar),
            [(f, -e) for f, e in self.factors],
        )

    def __pow__(self, k: int) -> "FactoredElement":
        if k == 0:
            return FactoredElement.one(self.field)
        base = self if k > 0 else self.inverse()
        k = abs(k)
        return FactoredElement(
            self.field,
            pow(base.scalar, k, self.field.p),
            [(f, e * k) for f, e in base.factors],
        )

    # -- queries -----------------------------------------------------------

    def kinds(self) -> set:
        return {f.kind for f, _ in self.factors}

    def exponent_of(self, key) -> int:
        for f, e in self.factors:
            if f.key() == key:
                return e
        return 0

    def __repr__(self):
        bits = [str(self.scalar)] if self.scalar != 1 or not self.factors else []
        for f, e in self.factors:
            bits.append(f.label() + (f"^{e}" if e != 1 else ""))
        return "FactoredElement(" + " * ".join(bits or ["1"]) + f" mod {self.field.p})"


# ---------------------------------------------------------------------------
# iterated Laurent views
# ---------------------------------------------------------------------------

ORDER_XT = "xt"  # k((x))((t)): outer variable t, inner variable x
ORDER_TX = "tx"  # k((t))((x)): outer variable x, inner variable t


class IterView:
    """A two-variable element expanded as an iterated truncated Laurent series."""

    __slots__ = ("order", "body")

    def __init__(self, order: str, body: TruncSeries):
        if order not in (ORDER_XT, ORDER_TX):
            raise ArithError(f"unknown expansion order {order!r}")
        self.order = order
        self.body = body

    @property
    def outer_var(self) -> str:
        return "t" if self.order == ORDER_XT else "x"

    @property
    def inner_var(self) -> str:
        return "x" if self.order == ORDER_XT else "t"

    def __mul__(self, other: "IterView") -> "IterView":
        if other.order != self.order:
            raise ArithError("cannot multiply views with different expansion orders")
        return IterView(self.order, self.body * other.body)

    def invert(self) -> "IterView":
        return IterView(self.order, self.body.invert())

    def __repr__(self):
        return f"IterView[{self.order}]({self.body.text()})"


def _doms(field: Fq, order: str, inner_prec: int):
    inner = FqDom(field)
    if order == ORDER_XT:
        return SeriesDom("x", inner_prec, inner)
    return SeriesDom("t", inner_prec, inner)


def embed_bipoly(f: BiPoly, order: str, inner_prec: int, outer_prec: int) -> IterView:
    """Expand a polynomial exactly (up to the stated window) in either order."""
    dom = _doms(f.field, order, inner_prec)
    outer_var = "t" if order == ORDER_XT else "x"
    rows = {}
    for (i, j), c in f.coeffs.items():
        if order == ORDER_XT:
            rows.setdefault(j, {})[i] = c  # outer exponent j, inner exponent i
        else:
            rows.setdefault(i, {})[j] = c
    coeffs = []
    if rows:
        hi = min(max(rows), outer_prec - 1)
        for e in range(0, hi + 1):
            row = rows.get(e)
            if not row:
                coeffs.append(dom.zero())
                continue
            lo2, hi2 = min(row), max(row)
            inner = TruncSeries(
                dom.base, dom.var, lo2, [row.get(k, 0) for k in range(lo2, hi2 + 1)], inner_prec
            )
            coeffs.append(inner)
    return IterView(order, TruncSeries(dom, outer_var, 0, coeffs, outer_prec))


def _embed_curve(tc, order: str, inner_prec: int, outer_prec: int) -> IterView:
    """Expand the canonical curve element x - s(t)."""
    field = tc.field
    dom = _doms(field, order, inner_prec)
    s = tc.s
    if order == ORDER_XT:
        # outer t: coefficient of t^0 is x; coefficient of t^j (j>=1) is -s_j
        oprec = min(outer_prec, s.prec)
        coeffs = [TruncSeries(dom.base, "x", 1, [1], inner_prec)]
        for j in range(1, oprec):
            c = s.coeff(j) if j < s.prec else 0
            coeffs.append(
                TruncSeries(dom.base, "x", 0, [(-c) % field.p], inner_prec)
            )
        return IterView(order, TruncSeries(dom, "t", 0, coeffs, oprec))
    # outer x: (x - s) = (-s) * x^0 + 1 * x^1, exact in x
    inner_p = min(inner_prec, s.prec)
    minus_s = (-s).truncate(inner_p)
    one = TruncSeries(dom.base, "t", 0, [1], inner_p)
    return IterView(order, TruncSeries(dom, "x", 0, [minus_s, one], outer_prec))


def _embed_factor(factor: Factor, field: Fq, order: str, ip: int, op: int) -> IterView:
    if factor.kind == AXIS_X:
        return embed_bipoly(BiPoly.x(field), order, ip, op)
    if factor.kind == AXIS_T:
        return embed_bipoly(BiPoly.t(field), order, ip, op)
    if factor.kind == CURVE:
        return _embed_curve(factor.payload, order, ip, op)
    return embed_bipoly(factor.payload, order, ip, op)


def embed(
    f,
    order: str,
    inner_prec: int = DEFAULT_PREC,
    outer_prec: int = DEFAULT_PREC,
    prec_cap: int = PREC_CAP,
) -> IterView:
    """Expand a BiPoly or FactoredElement in the requested iterated view.

    Factored input is expanded factor by factor; negative exponents invert
    certified-unit-lead series.  Precision erosion from inversions is
    compensated by retrying at a doubled working precision, up to ``prec_cap``
    (a hard error beyond it).
    """
    if isinstance(f, BiPoly):
        return embed_bipoly(f, order, inner_prec, outer_prec)
    if not isinstance(f, FactoredElement):
        raise ArithError(f"cannot embed object of type {type(f).__name__}")

    field = f.field
    wi, wo = inner_prec, outer_prec
    while True:
        dom = _doms(field, order, wi)
        outer_var = "t" if order == ORDER_XT else "x"
        acc = IterView(
            order,
            TruncSeries(dom, outer_var, 0, [dom.from_int(f.scalar)], wo),
        )
        try:
            for factor, e in f.factors:
                base = _embed_factor(factor, field, order, wi, wo)
                if e < 0:
                    base = base.invert()
                    e = -e
                for _ in range(e):
                    acc = acc * base
            got = acc.body.prec
        except UncertifiedValuation:
            raise
        if got >= outer_prec:
            return IterView(order, acc.body.truncate(outer_prec))
        need = outer_prec - got
        if max(wi, wo) + need > prec_cap:
            raise PrecisionError(
                f"precision cap {prec_cap} exceeded while certifying an expansion"
            )
        wi += need
        wo += need


def valuation(view: IterView) -> int:
    """Certified outer valuation of an iterated view.

    Raises UncertifiedValuation when every computed outer coefficient is zero
    to precision (never returns an infinity sentinel).
    """
    return view.body.valuation()


def series_invert(s):
    """Inverse of a truncated series or of an iterated view (certified)."""
    if isinstance(s, IterView):
        return s.invert()
    return s.invert()
