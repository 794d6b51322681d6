"""Free commutative algebra on (transversal curve, dominant coweight) pairs.

A monomial assigns a nonzero dominant coweight to finitely many canonical
curves; multiplication adds coweights curve-by-curve, so each curve's
generators form a copy of the dominant monoid and generators attached to
different curves commute.  Coefficients are exact rationals.

The map into the convolution algebra sends the generator at a fundamental
coweight to the corresponding char-basis element, independently of which
curve carries it, and extends multiplicatively.  That determination is exact
for GL(n) and PGL(n), where every dominant coweight is a product of
fundamental ones (with an invertible central factor for GL(n)).  For other
groups only the dominance-leading term of the image is pinned down, and
`iota` refuses to invent the rest: mode="leading" returns the certified
leading term plus an explicit statement that lower terms are undetermined.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import ArithError
from .curves import TransversalCurve
from .laurent import Laurent
from .rootdata import RootDatum, vadd, vscale
from . import hecke as hk


class CurveElement:
    """Finite rational combination of curve-monomials.

    A monomial is stored canonically as a tuple of (curve_key, coweight)
    pairs sorted by curve key; the element keeps the curve objects around
    for labels and serialization.
    """

    __slots__ = ("datum", "terms", "curves")

    def __init__(self, datum: RootDatum, terms=None, curves=None):
        self.datum = datum
        self.terms = {}
        self.curves = dict(curves or {})
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            self.terms[mono] = self.terms.get(mono, Fraction(0)) + c
        self.terms = {m: c for m, c in self.terms.items() if c != 0}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def one(datum: RootDatum) -> "CurveElement":
        return CurveElement(datum, {(): Fraction(1)})

    @staticmethod
    def generator(datum: RootDatum, curve: TransversalCurve, lam) -> "CurveElement":
        """The generator: the single monomial {curve -> lam}.

        lam = 0 collapses to the identity monomial.
        """
        lam = datum.check_coweight(lam)
        if not datum.is_dominant(lam):
            raise ArithError(f"{lam} is not dominant for {datum.name}")
        if all(x == 0 for x in lam):
            return CurveElement.one(datum)
        key = curve.key()
        return CurveElement(datum, {((key, lam),): Fraction(1)}, {key: curve})

    # -- algebra -------------------------------------------------------------

    def _check(self, other: "CurveElement"):
        if other.datum is not self.datum:
            raise ArithError("elements live over different root data")

    def __add__(self, other: "CurveElement") -> "CurveElement":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        curves = dict(self.curves)
        curves.update(other.curves)
        return CurveElement(self.datum, terms, curves)

    def __neg__(self) -> "CurveElement":
        return CurveElement(self.datum, {m: -c for m, c in self.terms.items()}, self.curves)

    def __sub__(self, other: "CurveElement") -> "CurveElement":
        return self + (-other)

    def scale(self, c) -> "CurveElement":
        c = Fraction(c)
        return CurveElement(self.datum, {m: a * c for m, a in self.terms.items()}, self.curves)

    def __mul__(self, other: "CurveElement") -> "CurveElement":
        self._check(other)
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _merge_monomials(m1, m2)
                c = c1 * c2
                terms[m] = terms.get(m, Fraction(0)) + c
        curves = dict(self.curves)
        curves.update(other.curves)
        return CurveElement(self.datum, terms, curves)

    def __pow__(self, k: int) -> "CurveElement":
        if k < 0:
            raise ArithError("no inverses in the free algebra")
        out = CurveElement.one(self.datum)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, CurveElement):
            return NotImplemented
        return self.datum is other.datum and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def monomials(self):
        return sorted(self.terms)

    def __repr__(self):
        if not self.terms:
            return "CurveElement(0)"
        bits = []
        for m in sorted(self.terms):
            c = self.terms[m]
            if not m:
                bits.append(f"{c}")
                continue
            parts = "*".join(
                f"[{self.curves[k].label() if k in self.curves else '?'} : {list(lam)}]"
                for k, lam in m
            )
            bits.append(f"{c}*{parts}")
        return " + ".join(bits)

    def to_json(self) -> dict:
        out = []
        for m in sorted(self.terms):
            mono = []
            for key, lam in m:
                curve = self.curves.get(key)
                mono.append(
                    {
                        "curve": curve_key_json(key),
                        "curve_label": curve.label() if curve else None,
                        "coweight": list(lam),
                    }
                )
            out.append({"monomial": mono, "coeff": str(self.terms[m])})
        return {"group": self.datum.name, "terms": out}


def _merge_monomials(m1, m2):
    acc = dict(m1)
    for key, lam in m2:
        if key in acc:
            s = vadd(acc[key], lam)
            if any(s):
                acc[key] = s
            else:
                del acc[key]
        else:
            acc[key] = lam
    return tuple(sorted(acc.items()))


def curve_key_json(key) -> dict:
    p, prec, coeffs = key
    trimmed = list(coeffs)
    while trimmed and trimmed[-1] == 0:
        trimmed.pop()
    return {"p": p, "prec": prec, "s": trimmed}


def monomial_leq(datum: RootDatum, m1, m2) -> bool:
    """Partial order: every curve of m1 appears in m2 and its coweight is
    dominance-below the one m2 assigns there (curves only in m2 need their
    coweight dominance-above 0)."""
    d1 = dict(m1)
    d2 = dict(m2)
    if not set(d1) <= set(d2):
        return False
    zero = datum.zero()
    for key, lam2 in d2.items():
        lam1 = d1.get(key, zero)
        if not datum.dominance_leq(lam1, lam2)[0]:
            return False
    return True


# ---------------------------------------------------------------------------
# the map to the convolution algebra
# ---------------------------------------------------------------------------


def _fundamental_image(datum: RootDatum, lam) -> hk.HeckeElement:
    """char-basis image of one dominant coweight: product of fundamental
    char elements per its exponent vector, then the central shift."""
    exps, central = datum.fundamental_monomial_exponents(lam)
    out = hk.HeckeElement.identity(datum, hk.CHAR)
    for i, k in enumerate(exps):
        if k < 0:
            raise ArithError("negative fundamental exponent on a dominant coweight")
        if k == 0:
            continue
        gen = hk.HeckeElement.basis_element(
            datum, hk.CHAR, datum.fundamental_coweights()[i]
        )
        for _ in range(k):
            out = hk.mul(out, gen)
    if central:
        shift = vscale(central, datum.central_coweight())
        out = hk.HeckeElement(
            datum, hk.CHAR, {vadd(mu, shift): c for mu, c in out.terms.items()}
        )
    return out


def iota(elem: CurveElement, mode: str = "exact"):
    """Image of a curve-algebra element in the convolution algebra.

    mode="exact" (GL(n)/PGL(n) only): generators at fundamental coweights map
    to the char-basis elements at those coweights, independently of the
    carrying curve; the rest follows by multiplicativity.  Returns a
    HeckeElement in the char basis.

    mode="leading" (any group): returns a report with the certified
    dominance-leading term of each monomial's image in the natural basis --
    the sum of the monomial's coweights with unit coefficient -- and no claim
    about lower terms.
    """
    datum = elem.datum
    if mode == "leading":
        leading = {}
        for mono, c in elem.terms.items():
            total = datum.zero()
            for _, lam in mono:
                total = vadd(total, lam)
            leading[total] = leading.get(total, Fraction(0)) + c
        return {
            "basis": hk.NATURAL,
            "leading": {k: v for k, v in leading.items() if v != 0},
            "lower_terms": "undetermined",
        }
    if mode != "exact":
        raise ArithError(f"unknown iota mode {mode!r}")
    if not (
        datum.flavor == "gl" or (datum.family == "A" and datum.flavor == "adj")
    ):
        raise ArithError(
            "exact mode is available only for GL(n)/PGL(n); use mode='leading'"
        )
    out = hk.HeckeElement(datum, hk.CHAR, {})
    for mono, c in elem.terms.items():
        img = hk.HeckeElement.identity(datum, hk.CHAR)
        for _, lam in mono:
            img = hk.mul(img, _fundamental_image(datum, lam))
        out = out + img.scale(Laurent.const(c))
    return out
