"""Transversal curve germs through the origin of Spec F_p[[x,t]].

A polynomial f cuts out a *transversal* curve when it passes through the
origin and meets the axis t = 0 there with multiplicity one, i.e.
f(0,0) = 0 and the one-variable polynomial f(x, 0) has x-valuation exactly 1.
Such a germ has a unique branch of the form x = s(t) with s(0) = 0, obtained
by Hensel/Newton iteration, and the pair (prime p, coefficients of s modulo
t^N) is a canonical key for the curve ideal: two defining polynomials give
the same curve iff their branches agree mod t^N.

N defaults to 64 and is a visible parameter everywhere; comparisons below
the working precision raise instead of guessing.
"""

from __future__ import annotations

from .arith import (
    ArithError,
    BiPoly,
    Fq,
    FqDom,
    PrecisionError,
    TruncSeries,
)

DEFAULT_CURVE_PREC = 64

GOOD = "good"
NOT_THROUGH_ORIGIN = "not-through-origin"
TANGENT_OR_CONTAINED = "tangent-or-contained-in-t-axis"
ZERO = "zero-polynomial"


def diagnose(f: BiPoly) -> str:
    """Classify f against the transversality test (one of the module tags)."""
    if f.is_zero():
        return ZERO
    if f.constant_coeff() != 0:
        return NOT_THROUGH_ORIGIN
    ft0 = f.restrict_t0()  # f(x, 0) as {exponent: coeff}
    vx = min(ft0) if ft0 else None
    if vx != 1:
        return TANGENT_OR_CONTAINED
    return GOOD


def is_transversal(f: BiPoly) -> bool:
    return diagnose(f) == GOOD


class TransversalCurve:
    """The ideal of a transversal curve, keyed by its branch x = s(t).

    ``s`` is a truncated series in t with s(0) = 0, known mod t^prec.  The
    curve with s identically zero is the x-axis itself; constructors upstream
    normalise that case away, but the class tolerates it.
    """

    __slots__ = ("field", "s")

    def __init__(self, field: Fq, s: TruncSeries):
        if s.coeffs and s.val < 1:
            raise ArithError("curve branch must vanish at t = 0")
        self.field = field
        self.s = s

    @property
    def prec(self) -> int:
        return self.s.prec

    def key(self):
        coeffs = [0] * self.s.prec
        for e, c in self.s.nonzero_items():
            coeffs[e] = c
        return (self.field.p, self.s.prec, tuple(coeffs))

    def label(self) -> str:
        shown = self.s.nonzero_items()[:6]
        if not shown:
            return "curve:x=0"
        bits = []
        for e, c in shown:
            head = "" if c == 1 else f"{c}*"
            bits.append(f"{head}t" + ("" if e == 1 else f"^{e}"))
        more = " + ..." if len(self.s.nonzero_items()) > 6 else ""
        return "curve:x=" + " + ".join(bits) + more

    def __repr__(self):
        return f"TransversalCurve({self.label()} mod {self.field.p}, prec {self.prec})"


def canonicalize(f: BiPoly, prec: int = DEFAULT_CURVE_PREC) -> TransversalCurve:
    """Branch x = s(t) of a transversal f, by Newton iteration mod t^prec.

    Raises on non-transversal input; a stalled iteration (residual valuation
    refusing to grow) is reported as a transversality violation since for
    genuinely transversal f the derivative is a unit along the branch.
    """
    tag = diagnose(f)
    if tag != GOOD:
        raise ArithError(f"cannot canonicalize: input is {tag}")
    field = f.field
    dom = FqDom(field)
    fx = f.derivative_x()
    s = TruncSeries.zero(dom, "t", prec)
    # f(0, t) has t-valuation >= 1, so s = 0 is correct mod t^1; Newton doubles
    last_v = 0
    for _ in range(prec.bit_length() + 3):
        r = f.eval_series(s)
        if r.is_zero_to_prec():
            return TransversalCurve(field, s)
        v = r.valuation()
        if v >= prec:
            return TransversalCurve(field, s)
        if v <= last_v:
            raise ArithError(
                "canonicalization stalled (transversality violated along the branch)"
            )
        last_v = v
        d = fx.eval_series(s)
        s = s - (r * d.invert()).truncate(prec)
    raise ArithError("canonicalization did not converge within the iteration bound")


def curve_eq(a: TransversalCurve, b: TransversalCurve, prec: int = DEFAULT_CURVE_PREC) -> bool:
    """Equality of curve ideals, decided by branch agreement mod t^prec."""
    if a.field.p != b.field.p:
        return False
    if a.prec < prec or b.prec < prec:
        raise PrecisionError(
            f"curve comparison needs both branches mod t^{prec} "
            f"(have {a.prec} and {b.prec})"
        )
    return a.s.truncate(prec) == b.s.truncate(prec)
