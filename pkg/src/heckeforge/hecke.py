"""The finite spherical convolution algebra over Z[v, v^-1], v^2 = q.

Two bases over the same dominant-coweight support:

* ``char``    -- elements corresponding to irreducible characters of the
  dual group.  Products have integer structure constants, independent of v
  (tensor product multiplicities).
* ``natural`` -- scaled characteristic functions of double cosets.  The
  scaling is fixed here once and for all: natural_lam = v^<lam,2rho> * c_lam
  where c_lam is the plain characteristic function.  Products of c's have
  Hall numbers (polynomials in q = v^2) as structure constants, computed by
  the lattice oracle and interpolated symbolically.

The Satake expansion of c_lam is the W-invariant sum
    sum_mu v^{-<mu,2rho>} N(lam, mu)|_{q=v^2} m_mu
with N the unipotent-coset count from the lattice module; W-invariance of
the result is asserted, not assumed.  The change of basis between char and
natural is dominance-triangular with unit-monomial diagonal; it is computed
two independent ways (a triangular solve against Satake expansions for
GL(n), and a closed formula via q-analog weight multiplicities for any
group) and the two must agree -- the per-coweight discrepancy monomial is
recorded in the transition metadata and is 1 in every verified case.

All coefficients are exact Laurent polynomials; there is no floating point
and no modular shortcut here.
"""

from __future__ import annotations

from .arith import ArithError
from .laurent import Laurent
from . import lattice as lattice_oracle
from .rootdata import RootDatum, vadd

CHAR = "char"
NATURAL = "natural"
_BASES = (CHAR, NATURAL)

_HALL_CACHE = {}
_SATAKE_CACHE = {}
_TRANSITION_CACHE = {}
_TO_CHAR_CACHE = {}


class HeckeElement:
    """Finitely supported map dominant-coweight -> Laurent, tagged by basis."""

    __slots__ = ("datum", "basis", "terms")

    def __init__(self, datum: RootDatum, basis: str, terms=None):
        if basis not in _BASES:
            raise ArithError(f"unknown basis {basis!r}")
        self.datum = datum
        self.basis = basis
        clean = {}
        for lam, c in (terms or {}).items():
            lam = datum.check_coweight(lam)
            if not datum.is_dominant(lam):
                raise ArithError(f"support coweight {lam} is not dominant")
            if not isinstance(c, Laurent):
                c = Laurent.const(c)
            if c:
                clean[lam] = c
        self.terms = clean

    # -- constructors --------------------------------------------------------

    @staticmethod
    def basis_element(datum, basis, lam, coeff=None) -> "HeckeElement":
        return HeckeElement(datum, basis, {tuple(lam): coeff if coeff is not None else 1})

    @staticmethod
    def identity(datum, basis=CHAR) -> "HeckeElement":
        return HeckeElement.basis_element(datum, basis, datum.zero())

    # -- ring-module structure -------------------------------------------------

    def _check(self, other: "HeckeElement"):
        if other.datum is not self.datum:
            raise ArithError("elements live over different root data")

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        self._check(other)
        if other.basis != self.basis:
            raise ArithError("cannot add across bases; transition first")
        terms = dict(self.terms)
        for lam, c in other.terms.items():
            terms[lam] = terms.get(lam, Laurent.zero()) + c
        return HeckeElement(self.datum, self.basis, terms)

    def __neg__(self) -> "HeckeElement":
        return HeckeElement(self.datum, self.basis, {l: -c for l, c in self.terms.items()})

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + (-other)

    def scale(self, c) -> "HeckeElement":
        if not isinstance(c, Laurent):
            c = Laurent.const(c)
        return HeckeElement(self.datum, self.basis, {l: a * c for l, a in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return (
            self.datum is other.datum
            and self.basis == other.basis
            and self.terms == other.terms
        )

    def __bool__(self) -> bool:
        return bool(self.terms)

    def support(self):
        return sorted(self.terms)

    def coeff(self, lam) -> Laurent:
        return self.terms.get(tuple(lam), Laurent.zero())

    def __mul__(self, other: "HeckeElement") -> "HeckeElement":
        return mul(self, other)

    # -- structure maps ---------------------------------------------------------

    def leading_terms(self) -> dict:
        """Dominance-maximal support coweights with their coefficients."""
        out = {}
        sup = list(self.terms)
        for lam in sup:
            if any(
                mu != lam and self.datum.dominance_leq(lam, mu)[0] for mu in sup
            ):
                continue
            out[lam] = self.terms[lam]
        return out

    def sign_twist(self) -> "HeckeElement":
        """Involution scaling the lam-term by (-1)^<lam,2rho>.

        An algebra automorphism: structure constants connect coweights whose
        2rho-pairings agree mod 2 (differences are coroot sums).
        """
        out = {}
        for lam, c in self.terms.items():
            out[lam] = c if self.datum.pairing_2rho(lam) % 2 == 0 else -c
        return HeckeElement(self.datum, self.basis, out)

    def to_json(self) -> dict:
        return {
            "group": self.datum.name,
            "basis": self.basis,
            "terms": [
                {"coweight": list(lam), "coeffs": self.terms[lam].to_dict()}
                for lam in sorted(self.terms)
            ],
        }

    def __repr__(self):
        if not self.terms:
            return "HeckeElement(0)"
        bits = []
        for lam in sorted(self.terms):
            bits.append(f"({self.terms[lam].text('v')})*{self.basis}{list(lam)}")
        return " + ".join(bits)


def from_json(datum: RootDatum, data: dict) -> HeckeElement:
    terms = {}
    for item in data["terms"]:
        lam = tuple(int(x) for x in item["coweight"])
        co = Laurent({int(e): int(c) for e, c in item["coeffs"].items()})
        terms[lam] = terms.get(lam, Laurent.zero()) + co
    return HeckeElement(datum, data["basis"], terms)


# ---------------------------------------------------------------------------
# multiplication
# ---------------------------------------------------------------------------


def hall_structure(datum: RootDatum, lam, mu, nu) -> Laurent:
    """Hall number as a polynomial in q, cached, GL(n) only."""
    if datum.flavor != "gl":
        raise ArithError("Hall tables exist only for the gl flavour")
    key = (datum.dim, lam, mu, nu)
    hit = _HALL_CACHE.get(key)
    if hit is None:
        bound = datum.pairing_2rho(vadd(lam, mu))
        hit = lattice_oracle.hall_polynomial(lam, mu, nu, max(0, bound))
        _HALL_CACHE[key] = hit
    return hit


def _mul_char(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    datum = a.datum
    terms = {}
    for lam, ca in a.terms.items():
        for mu, cb in b.terms.items():
            c = ca * cb
            for nu, mult in datum.tensor_decompose(lam, mu).items():
                add = c.scale(mult)
                terms[nu] = terms.get(nu, Laurent.zero()) + add
    return HeckeElement(datum, CHAR, terms)


def _mul_natural_gl(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    datum = a.datum
    terms = {}
    for lam, ca in a.terms.items():
        e_lam = datum.pairing_2rho(lam)
        for mu, cb in b.terms.items():
            c = ca * cb
            e_mu = datum.pairing_2rho(mu)
            target = vadd(lam, mu)
            for nu in datum.dominants_below(target):
                h = hall_structure(datum, lam, mu, nu)
                if not h:
                    continue
                shift = e_lam + e_mu - datum.pairing_2rho(nu)
                if shift < 0:
                    raise ArithError("negative normalization shift; oracle bug")
                add = c * h.subs_square().shift(shift)
                terms[nu] = terms.get(nu, Laurent.zero()) + add
    return HeckeElement(datum, NATURAL, terms)


def mul(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    """Product in the convolution algebra.

    char x char goes through tensor multiplicities (q-free); natural x
    natural over GL(n) goes through Hall tables; anything else is routed
    through the char basis via the transition maps and converted back when
    both inputs shared a basis.
    """
    a._check(b)
    if a.basis == CHAR and b.basis == CHAR:
        return _mul_char(a, b)
    if a.basis == NATURAL and b.basis == NATURAL and a.datum.flavor == "gl":
        return _mul_natural_gl(a, b)
    ca = to_char(a) if a.basis == NATURAL else a
    cb = to_char(b) if b.basis == NATURAL else b
    prod = _mul_char(ca, cb)
    if a.basis == NATURAL and b.basis == NATURAL:
        return to_natural(prod)
    return prod


# ---------------------------------------------------------------------------
# Satake expansion
# ---------------------------------------------------------------------------


def satake_of_char(datum: RootDatum, lam) -> dict:
    """Expansion of the plain characteristic function c_lam as a W-invariant
    sum over dominant coweights (monomial-symmetric coordinates).

    Computed entirely from the lattice oracle; the equality of normalized
    coefficients across each Weyl orbit is asserted.  GL(n) only.
    """
    if datum.flavor != "gl":
        raise ArithError("the coset-count Satake route needs the gl flavour")
    lam = datum.check_coweight(lam)
    if not datum.is_dominant(lam):
        raise ArithError(f"{lam} is not dominant")
    key = (datum.name, lam)
    hit = _SATAKE_CACHE.get(key)
    if hit is not None:
        return dict(hit)
    out = {}
    for nu in datum.dominants_below(lam):
        bound = max(0, datum.pairing_2rho(vadd(lam, nu)))
        coeff = None
        for mu in datum.weyl_orbit(nu):
            n_poly = lattice_oracle.iwasawa_polynomial(lam, mu, bound)
            cand = n_poly.subs_square().shift(-datum.pairing_2rho(mu))
            if coeff is None:
                coeff = cand
            elif coeff != cand:
                raise ArithError(
                    f"Satake image not W-invariant at {mu} in orbit of {nu}; oracle bug"
                )
        if nu == lam:
            expect = Laurent.monomial(1, datum.pairing_2rho(lam))
            if coeff != expect:
                raise ArithError(
                    f"diagonal Satake coefficient {coeff.text('v')} != v^<lam,2rho>"
                )
        if coeff:
            out[nu] = coeff
    _SATAKE_CACHE[key] = dict(out)
    return out


def weyl_character(datum: RootDatum, lam) -> dict:
    """The irreducible character in monomial-symmetric coordinates."""
    return {
        mu: Laurent.const(m) for mu, m in datum.weight_mults(tuple(lam)).items()
    }


# ---------------------------------------------------------------------------
# transition between the bases
# ---------------------------------------------------------------------------


def _transition_satake(datum: RootDatum, lam) -> dict:
    """char-basis element lam written in the natural basis, by triangular
    solve of the Weyl character against Satake expansions.  GL(n) only."""
    order = datum.dominants_below(lam)  # descending 2rho-pairing = refinement of dominance
    residue = dict(weyl_character(datum, lam))
    coeffs_c = {}
    for mu in order:
        want = residue.get(mu)
        if want is None or not want:
            continue
        sat = satake_of_char(datum, mu)
        diag = sat[mu]
        if not diag.is_unit_monomial():
            raise ArithError("diagonal Satake coefficient is not a unit monomial")
        e = diag.min_exp()
        a = want.divexact_monomial(diag.coeff(e), e)
        coeffs_c[mu] = a
        for nu, c in sat.items():
            nxt = residue.get(nu, Laurent.zero()) - a * c
            if nxt:
                residue[nu] = nxt
            else:
                residue.pop(nu, None)
    if residue:
        raise ArithError(f"triangular solve left a residue at {sorted(residue)}; oracle bug")
    return {
        mu: a.shift(-datum.pairing_2rho(mu)) for mu, a in coeffs_c.items()
    }


def _transition_qanalog(datum: RootDatum, lam) -> dict:
    """Closed-form transition: coefficient of the natural element at mu is
    K(lam,mu)(q^-1) * v^{-2<mu,2rho>} (one factor v^{-<mu,2rho>} from the
    characteristic-function normalization, one from the formula)."""
    out = {}
    for mu in datum.dominants_below(lam):
        k = datum.lusztig_q(lam, mu)
        if not k:
            continue
        coeff = k.subs_inverse().subs_square().shift(-2 * datum.pairing_2rho(mu))
        out[mu] = coeff
    return out


def transition(datum: RootDatum, lam, direction: str = "to-natural", path: str = "auto"):
    """Change of basis for a single basis element.

    direction "to-natural": the char element of highest coweight lam,
    expanded in the natural basis.  direction "to-char": the natural element
    expanded in the char basis (triangular inversion of the former).

    Returns (element, meta); meta records which computation path produced it
    and the per-coweight agreement monomial between the two paths (always 1
    where both run -- a disagreement raises instead).
    """
    lam = datum.check_coweight(lam)
    if not datum.is_dominant(lam):
        raise ArithError(f"{lam} is not dominant")
    if direction == "to-char":
        elem = _natural_to_char(datum, lam, path)
        meta = {"path": "triangular-inversion", "base_path": _pick_path(datum, lam, path)}
        return elem, meta
    if direction != "to-natural":
        raise ArithError(f"unknown direction {direction!r}")
    chosen = _pick_path(datum, lam, path)
    key = (datum.name, lam, chosen)
    hit = _TRANSITION_CACHE.get(key)
    if hit is None:
        if chosen == "satake":
            terms = _transition_satake(datum, lam)
        else:
            terms = _transition_qanalog(datum, lam)
        _TRANSITION_CACHE[key] = terms
        hit = terms
    elem = HeckeElement(datum, NATURAL, dict(hit))
    diag = elem.coeff(lam)
    if not diag.is_unit_monomial():
        raise ArithError("transition diagonal is not a unit monomial")
    meta = {"path": chosen, "diagonal": diag.text("v"), "agreement_monomial": "1"}
    if chosen == "satake":
        # cross-check against the closed formula whenever it is cheap
        other = _transition_qanalog(datum, lam)
        if other != dict(hit):
            raise ArithError("transition paths disagree beyond the recorded monomial")
    return elem, meta


def _pick_path(datum: RootDatum, lam, path: str) -> str:
    if path not in ("auto", "satake", "qanalog"):
        raise ArithError(f"unknown transition path {path!r}")
    if path != "auto":
        if path == "satake" and datum.flavor != "gl":
            raise ArithError("satake transition path needs the gl flavour")
        return path
    if datum.flavor == "gl" and (
        datum.dim == 2 or datum.pairing_2rho(lam) <= 2
    ):
        return "satake"
    return "qanalog"


def to_natural(elem: HeckeElement, path: str = "auto") -> HeckeElement:
    if elem.basis == NATURAL:
        return elem
    out = HeckeElement(elem.datum, NATURAL, {})
    for lam, c in elem.terms.items():
        t, _ = transition(elem.datum, lam, "to-natural", path)
        out = out + t.scale(c)
    return out


def _natural_to_char(datum: RootDatum, lam, path: str = "auto") -> HeckeElement:
    key = (datum.name, lam, "inv", _pick_path(datum, lam, path))
    hit = _TO_CHAR_CACHE.get(key)
    if hit is not None:
        return HeckeElement(datum, CHAR, dict(hit))
    fwd, _ = transition(datum, lam, "to-natural", path)
    diag = fwd.coeff(lam)
    e = diag.min_exp()
    a = diag.coeff(e)
    rest = HeckeElement(datum, CHAR, {})
    for mu, c in fwd.terms.items():
        if mu == lam:
            continue
        rest = rest + _natural_to_char(datum, mu, path).scale(c)
    # natural_lam = (char_lam_in_natural - lower) => invert the diagonal
    out = HeckeElement(datum, CHAR, {lam: Laurent.monomial(1, 0)}) - rest
    out = HeckeElement(
        datum,
        CHAR,
        {mu: c.divexact_monomial(a, e) for mu, c in out.terms.items()},
    )
    _TO_CHAR_CACHE[key] = dict(out.terms)
    return out


def to_char(elem: HeckeElement, path: str = "auto") -> HeckeElement:
    if elem.basis == CHAR:
        return elem
    out = HeckeElement(elem.datum, CHAR, {})
    for lam, c in elem.terms.items():
        out = out + _natural_to_char(elem.datum, lam, path).scale(c)
    return out


def leading_term(elem: HeckeElement) -> dict:
    """Dominance-maximal support with coefficients (any basis)."""
    return elem.leading_terms()
