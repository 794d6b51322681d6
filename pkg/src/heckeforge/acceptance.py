"""Named batch checks shared by the command-line selftest and the test suite.

Each criterion is a pure function sized by a suite profile ("full" runs the
shipping sizes, "quick" a fast subset with the same logic) and returns a
pass/fail verdict plus a one-line summary.  Nothing here prints or exits;
presentation belongs to the callers.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import curve_algebra as ca
from . import grass
from . import hecke as hk
from . import lattice as lat
from . import symbols as sym
from .arith import (
    ORDER_TX,
    ORDER_XT,
    BiPoly,
    FactoredElement,
    Fq,
    FqDom,
    TruncSeries,
    parse_bipoly,
)
from .curves import canonicalize, curve_eq, is_transversal
from .rootdata import build_root_datum, vadd, vscale

DEFAULT_SEED = 42


# ---------------------------------------------------------------------------
# small shared generators
# ---------------------------------------------------------------------------


def _dominant_window(n: int, bound: int):
    """Dominant integer tuples whose central-shifted index is <= bound."""
    out = []
    for tup in itertools.product(range(-bound, bound + 1), repeat=n):
        if any(tup[i] < tup[i + 1] for i in range(n - 1)):
            continue
        shift = max(0, -min(tup))
        if sum(x + shift for x in tup) <= bound:
            out.append(tup)
    return sorted(out)


def _random_transversal(rng: random.Random, field: Fq, prec: int = 64):
    coeffs = {(1, 0): rng.randrange(1, field.p)}
    for _ in range(rng.randrange(1, 4)):
        j = rng.randrange(1, 5)
        i = rng.randrange(0, 5 - j)
        coeffs[(i, j)] = rng.randrange(0, field.p)
    return BiPoly(field, coeffs), canonicalize(BiPoly(field, coeffs), prec)


def _random_unit(rng: random.Random, field: Fq) -> BiPoly:
    coeffs = {(0, 0): rng.randrange(1, field.p)}
    for _ in range(rng.randrange(1, 4)):
        i = rng.randrange(0, 4)
        j = rng.randrange(0, 4 - i)
        if (i, j) != (0, 0):
            coeffs[(i, j)] = rng.randrange(0, field.p)
    return BiPoly(field, coeffs)


def _sc_dominants(datum, height: int):
    """Dominant coroot-lattice points with rho-height <= height."""
    out = []
    for comb in itertools.product(range(height + 1), repeat=datum.rank):
        if sum(comb) > height:
            continue
        lam = datum.zero()
        for c, av in zip(comb, datum.simple_coroots):
            lam = vadd(lam, vscale(c, av))
        if datum.is_dominant(lam):
            out.append(lam)
    return sorted(set(out))


# ---------------------------------------------------------------------------
# criterion 1: flag-sum reciprocity on random factored pairs
# ---------------------------------------------------------------------------


def _crit_reciprocity(cfg, seed, threads):
    field = Fq(5)
    rng = random.Random(seed)
    trials = cfg["trials"]
    pairs = [
        (
            sym.random_factored(rng, field, 4, 4, False, 64),
            sym.random_factored(rng, field, 4, 4, False, 64),
        )
        for _ in range(trials)
    ]

    def total(pair):
        return sym.parshin_sum(pair[0], pair[1])["total"]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            totals = list(pool.map(total, pairs))
    else:
        totals = [total(pair) for pair in pairs]
    bad = sum(1 for t in totals if t != 0)
    detail = (
        f"{trials - bad}/{trials} random factored pairs at p=5 "
        "(<=4 factors, degrees <=4, curve precision 64) have flag sum 0"
    )
    return bad == 0, detail


# ---------------------------------------------------------------------------
# criterion 2: the axis identity and its documented failure off the axes
# ---------------------------------------------------------------------------


def _crit_axis_identity(cfg, seed, threads):
    field = Fq(5)
    rng = random.Random(seed + 1)
    trials = cfg["trials"]
    bad = 0
    for _ in range(trials):
        f = sym.random_factored(rng, field, 4, 4, True, 64)
        g = sym.random_factored(rng, field, 4, 4, True, 64)
        if not sym.two_flag_identity(f, g)["ok"]:
            bad += 1
    probe = sym.fixed_pair_report(5)
    probe_ok = (
        probe["lhs"] == 0
        and probe["rhs"] == 1
        and probe["parshin_total"] == 0
        and probe["note"] == "axis identity violated, Parshin holds"
    )
    detail = (
        f"{trials - bad}/{trials} axis-supported pairs satisfy the identity; "
        f"probe (x, x+t): lhs={probe['lhs']}, rhs={probe['rhs']}, "
        f"flag sum {probe['parshin_total']}"
    )
    return bad == 0 and probe_ok, detail


# ---------------------------------------------------------------------------
# criterion 3: Steinberg symbols and the monomial determinant law
# ---------------------------------------------------------------------------


def _crit_symbol_laws(cfg, seed, threads):
    field = Fq(5)
    dom = FqDom(field)
    prec = 16
    rng = random.Random(seed + 2)
    one = TruncSeries(dom, "u", 0, [1], prec)
    want = cfg["steinberg"]
    checked = bad = attempts = 0
    while checked < want and attempts < 100 * want:
        attempts += 1
        v = rng.randrange(0, 3)
        coeffs = [rng.randrange(0, 5) for _ in range(6)]
        coeffs[0] = rng.randrange(1, 5)
        f = TruncSeries(dom, "u", v, coeffs, prec)
        g = one - f
        if g.is_zero_to_prec():
            continue  # f = 1: the symbol is undefined, not admissible
        checked += 1
        if sym.tame_symbol(f, g) != dom.one():
            bad += 1
    r = cfg["grid"]
    cells = grid_bad = 0
    for a, b, c, d in itertools.product(range(-r, r + 1), repeat=4):
        f = FactoredElement.monomial(field, 1, a, b)
        g = FactoredElement.monomial(field, 1, c, d)
        cells += 1
        if sym.flag_composite(f, g, ORDER_XT) != a * d - b * c:
            grid_bad += 1
        if sym.flag_composite(f, g, ORDER_TX) != b * c - a * d:
            grid_bad += 1
    ok = checked == want and bad == 0 and grid_bad == 0
    detail = (
        f"(f, 1-f) = 1 on {checked - bad}/{checked} admissible series; "
        f"determinant law exact on {cells} monomial pairs with exponents in [-{r}, {r}]"
    )
    return ok, detail


# ---------------------------------------------------------------------------
# criterion 4: orbit and closure polynomials against honest enumeration
# ---------------------------------------------------------------------------


def _crit_orbit_counts(cfg, seed, threads):
    checks = 0
    bad = []
    for name, bound, qs in cfg["cases"]:
        datum = build_root_datum(name)
        n = datum.dim
        for q in qs:
            for lam in _dominant_window(n, bound):
                checks += 1
                if grass.orbit_count(datum, lam)(q) != lat.orbit_count_bruteforce(lam, q):
                    bad.append((name, q, lam, "orbit"))
                shift = max(0, -min(lam))
                lam_pos = tuple(x + shift for x in lam)
                k = sum(lam_pos)
                below = sum(
                    1
                    for kk, _d, _e, cotype in lat.enumerate_sublattices(n, q, k)
                    if kk == k and datum.dominance_leq(cotype, lam_pos)[0]
                )
                checks += 1
                if grass.closure_count(datum, lam)(q) != below:
                    bad.append((name, q, lam, "closure"))
    detail = f"{checks - len(bad)}/{checks} orbit/closure counts match enumeration"
    if bad:
        detail += f"; first mismatch {bad[0]}"
    return not bad, detail


# ---------------------------------------------------------------------------
# criterion 5: Hecke ring laws over the Hall tables
# ---------------------------------------------------------------------------


def _partitions2(total: int):
    return [(total - b, b) for b in range(total // 2 + 1)]


def _crit_hecke_ring(cfg, seed, threads):
    datum = build_root_datum("GL2")
    S = [lam for lam in _dominant_window(2, cfg["total"]) if min(lam) >= 0]
    qs = (2, 3)
    issues = []
    checks = 0

    def note(tag, *args):
        issues.append((tag,) + args)

    natural = lambda lam: hk.HeckeElement.basis_element(datum, hk.NATURAL, lam)
    char = lambda lam: hk.HeckeElement.basis_element(datum, hk.CHAR, lam)

    for lam, mu in itertools.combinations_with_replacement(S, 2):
        strata = set(grass.convolution_support(datum, lam, mu)["strata"])
        # numeric tables at q = 2, 3: symmetric, supported inside the strata
        for q in qs:
            for nu in _partitions2(sum(lam) + sum(mu)):
                h = lat.hall_number_gl2(lam, mu, nu, q)
                checks += 2
                if h != lat.hall_number_gl2(mu, lam, nu, q):
                    note("table-symmetry", q, lam, mu, nu)
                if h != 0 and nu not in strata:
                    note("table-support", q, lam, mu, nu)
        # symbolic products: commutative, supported inside the strata
        prod = hk.mul(natural(lam), natural(mu))
        checks += 2
        if prod != hk.mul(natural(mu), natural(lam)):
            note("symbolic-symmetry", lam, mu)
        if not set(prod.support()) <= strata:
            note("symbolic-support", lam, mu)
        # char-basis structure constants through the Hall route match the
        # tensor oracle and carry no q dependence
        back = hk.to_char(hk.mul(hk.to_natural(char(lam)), hk.to_natural(char(mu))))
        want = {
            nu: m for nu, m in datum.tensor_decompose(lam, mu).items() if m
        }
        got = {nu: back.coeff(nu) for nu in back.support()}
        checks += 1
        if set(got) != set(want) or any(
            got[nu].to_dict() != {"0": want[nu]} for nu in want
        ):
            note("tensor", lam, mu)

    # associativity, numeric at q = 2, 3 and symbolic
    for lam, mu, nu in itertools.combinations_with_replacement(S, 3):
        for q in qs:
            checks += 1
            good = True
            for omega in _partitions2(sum(lam) + sum(mu) + sum(nu)):
                lhs = sum(
                    lat.hall_number_gl2(lam, mu, xi, q)
                    * lat.hall_number_gl2(xi, nu, omega, q)
                    for xi in _partitions2(sum(lam) + sum(mu))
                )
                rhs = sum(
                    lat.hall_number_gl2(mu, nu, xi, q)
                    * lat.hall_number_gl2(lam, xi, omega, q)
                    for xi in _partitions2(sum(mu) + sum(nu))
                )
                if lhs != rhs:
                    good = False
            if not good:
                note("table-associativity", q, lam, mu, nu)
        checks += 1
        l = hk.mul(hk.mul(natural(lam), natural(mu)), natural(nu))
        r = hk.mul(natural(lam), hk.mul(natural(mu), natural(nu)))
        if l != r:
            note("symbolic-associativity", lam, mu, nu)

    detail = (
        f"{checks - len(issues)}/{checks} ring-law checks pass "
        f"(GL2, coweights of index <= {cfg['total']}, tables at q in {{2, 3}})"
    )
    if issues:
        detail += f"; first failure {issues[0]}"
    return not issues, detail


# ---------------------------------------------------------------------------
# criterion 6: transition triangularity, path agreement, round trips
# ---------------------------------------------------------------------------


def _crit_transition(cfg, seed, threads):
    datum = build_root_datum("GL2")
    lams = [(a, b) for a in range(cfg["max1"] + 1) for b in range(a + 1)]
    issues = []
    checks = 0
    for lam in lams:
        sat, meta = hk.transition(datum, lam, "to-natural", path="satake")
        qan, _ = hk.transition(datum, lam, "to-natural", path="qanalog")
        checks += 1
        if sat != qan or meta["agreement_monomial"] != "1":
            issues.append(("paths", lam))
        diag = sat.coeff(lam)
        checks += 1
        if not diag.is_unit_monomial():
            issues.append(("diagonal", lam))
        checks += 1
        lower = [mu for mu in sat.support() if mu != lam]
        if not all(
            datum.dominance_leq(mu, lam)[0] and mu != lam for mu in lower
        ):
            issues.append(("triangular", lam))
        checks += 1
        elem = hk.HeckeElement.basis_element(datum, hk.CHAR, lam)
        if hk.to_char(hk.to_natural(elem)) != elem:
            issues.append(("roundtrip", lam))
    detail = (
        f"{checks - len(issues)}/{checks} transition checks pass on GL2 "
        f"coweights up to ({cfg['max1']}, 0)"
    )
    if issues:
        detail += f"; first failure {issues[0]}"
    return not issues, detail


# ---------------------------------------------------------------------------
# criterion 7: the curve-to-Hecke homomorphism on fundamental coweights
# ---------------------------------------------------------------------------


def _crit_iota(cfg, seed, threads):
    curve_texts = ["x+t", "x+t^2", "x+t+x*t"]
    issues = []
    checks = 0
    groups = cfg["groups"]
    for gname in groups:
        datum = build_root_datum(gname)
        fundamentals = datum.fundamental_coweights()
        curves = [canonicalize(parse_bipoly(text, 5)) for text in curve_texts]
        for w in fundamentals:
            want = hk.HeckeElement.basis_element(datum, hk.CHAR, w)
            checks += 1
            if any(
                ca.iota(ca.CurveElement.generator(datum, C, w)) != want
                for C in curves
            ):
                issues.append(("fundamental", gname, w))
        C = curves[2]
        for lam in sorted(
            tup
            for tup in itertools.product(range(cfg["height"] + 1), repeat=datum.dim)
            if sum(tup) <= cfg["height"] and datum.is_dominant(tup)
        ):
            nat = hk.to_natural(ca.iota(ca.CurveElement.generator(datum, C, lam)))
            lead = hk.leading_term(nat)
            checks += 1
            if set(lead) != {tuple(lam)} or not lead[tuple(lam)].is_unit_monomial():
                issues.append(("leading", gname, lam))
    detail = (
        f"{checks - len(issues)}/{checks} homomorphism checks pass on "
        + ", ".join(groups)
        + f" (3 curves per fundamental coweight, leading terms up to height {cfg['height']})"
    )
    if issues:
        detail += f"; first failure {issues[0]}"
    return not issues, detail


# ---------------------------------------------------------------------------
# criterion 8: curve-algebra laws and monomial independence
# ---------------------------------------------------------------------------


def _crit_curve_algebra(cfg, seed, threads):
    datum = build_root_datum("GL2")
    field = Fq(5)
    rng = random.Random(seed + 7)
    pool = {}
    while len(pool) < 8:
        _, C = _random_transversal(rng, field)
        pool.setdefault(C.key(), C)
    pool = list(pool.values())
    issues = []
    checks = 0

    def rand_dominant():
        a = rng.randrange(1, 4)
        return (a, rng.randrange(0, a + 1))

    for _ in range(cfg["samples"]):
        C = pool[rng.randrange(len(pool))]
        lam, mu = rand_dominant(), rand_dominant()
        total = tuple(x + y for x, y in zip(lam, mu))
        checks += 1
        lhs = ca.CurveElement.generator(datum, C, lam) * ca.CurveElement.generator(
            datum, C, mu
        )
        if lhs != ca.CurveElement.generator(datum, C, total):
            issues.append(("additivity", lam, mu))

    def rand_element():
        out = ca.CurveElement(datum, {}, {})
        for _ in range(rng.randrange(1, 4)):
            term = ca.CurveElement.generator(
                datum, pool[rng.randrange(len(pool))], rand_dominant()
            ).scale(Fraction(rng.randrange(1, 9), rng.randrange(1, 5)))
            out = out + term
        return out

    for _ in range(cfg["samples"] // 2):
        a, b = rand_element(), rand_element()
        checks += 1
        if a * b != b * a:
            issues.append(("commutativity",))

    monomials = {}
    while len(monomials) < cfg["monomials"]:
        elem = ca.CurveElement.one(datum)
        for _ in range(rng.randrange(1, 3)):
            elem = elem * ca.CurveElement.generator(
                datum, pool[rng.randrange(len(pool))], rand_dominant()
            )
        key = next(iter(elem.terms))
        monomials.setdefault(key, elem)
    coeffs = {
        key: Fraction(rng.randrange(1, 9), rng.randrange(1, 5))
        * (1 if rng.randrange(2) else -1)
        for key in monomials
    }
    combo = ca.CurveElement(datum, {}, {})
    for key, elem in monomials.items():
        combo = combo + elem.scale(coeffs[key])
    checks += 1
    independent = len(combo.terms) == len(monomials) and all(
        combo.terms[key] == coeffs[key] for key in monomials
    )
    if not independent:
        issues.append(("independence",))
    detail = (
        f"{checks - len(issues)}/{checks} algebra-law checks pass "
        f"({cfg['monomials']} seeded monomials stay independent)"
    )
    if issues:
        detail += f"; first failure {issues[0]}"
    return not issues, detail


# ---------------------------------------------------------------------------
# criterion 9: curve canonicalization and the transversality test
# ---------------------------------------------------------------------------


def _crit_curves(cfg, seed, threads):
    field = Fq(5)
    rng = random.Random(seed + 8)
    trials = cfg["trials"]
    bad = 0
    for _ in range(trials):
        f, C = _random_transversal(rng, field)
        if not f.eval_series(C.s).is_zero_to_prec():
            bad += 1
            continue
        if not curve_eq(canonicalize(_random_unit(rng, field) * f), C):
            bad += 1
    f2 = Fq(2)
    monos = [
        (i, j)
        for i in range(cfg["grid_degree"] + 1)
        for j in range(cfg["grid_degree"] + 1)
        if i + j <= cfg["grid_degree"]
    ]
    grid_bad = 0
    for mask in range(1 << len(monos)):
        coeffs = {monos[b]: 1 for b in range(len(monos)) if mask >> b & 1}
        f = BiPoly(f2, coeffs)
        ft0 = f.restrict_t0()
        defn = bool(coeffs) and f.constant_coeff() == 0 and bool(ft0) and min(ft0) == 1
        if is_transversal(f) != defn:
            grid_bad += 1
    ok = bad == 0 and grid_bad == 0
    detail = (
        f"{trials - bad}/{trials} seeded curves: residual 0 mod t^64 and "
        f"unit-multiple stability; transversality test exact on all "
        f"{1 << len(monos)} polynomials of degree <= {cfg['grid_degree']} over F_2"
    )
    return ok, detail


# ---------------------------------------------------------------------------
# criterion 10: root-datum tables
# ---------------------------------------------------------------------------


def _crit_root_data(cfg, seed, threads):
    table = {
        "A1": 2,
        "A2": 3,
        "A3": 4,
        "A4": 5,
        "B2": 3,
        "B3": 5,
        "C3": 4,
        "D4": 6,
        "G2": 4,
    }
    issues = []
    checks = 0
    for name, want in table.items():
        checks += 1
        if build_root_datum(name).dual_coxeter() != want:
            issues.append(("coxeter", name))
    for name in cfg["groups"]:
        datum = build_root_datum(name)
        doms = _sc_dominants(datum, cfg["height"])
        for lam in doms:
            mults = datum.weight_mults(lam)
            for mu in datum.dominants_below(lam):
                checks += 1
                if datum.lusztig_q(lam, mu)(1) != mults.get(tuple(mu), 0):
                    issues.append(("q-analog", name, lam, mu))
        smalls = [lam for lam in doms if any(lam)][:3]
        for lam, mu in itertools.combinations_with_replacement(smalls, 2):
            checks += 1
            dec = datum.tensor_decompose(lam, mu)
            total = sum(m * datum.weyl_dimension(nu) for nu, m in dec.items())
            if total != datum.weyl_dimension(lam) * datum.weyl_dimension(mu):
                issues.append(("tensor-dim", name, lam, mu))
    detail = f"{checks - len(issues)}/{checks} table checks pass"
    if issues:
        detail += f"; first failure {issues[0]}"
    return not issues, detail


# ---------------------------------------------------------------------------
# registry and runners
# ---------------------------------------------------------------------------

CRITERIA = (
    ("reciprocity", "flag-sum reciprocity on random factored pairs", _crit_reciprocity),
    ("axis-identity", "two-flag axis identity and its off-axis failure probe", _crit_axis_identity),
    ("symbol-laws", "Steinberg symbols and the monomial determinant law", _crit_symbol_laws),
    ("orbit-counts", "orbit and closure polynomials against enumeration", _crit_orbit_counts),
    ("hecke-ring", "Hall-table ring laws and tensor structure constants", _crit_hecke_ring),
    ("transition", "basis-transition triangularity and path agreement", _crit_transition),
    ("iota", "curve-to-Hecke homomorphism on fundamental coweights", _crit_iota),
    ("curve-algebra", "curve-algebra laws and monomial independence", _crit_curve_algebra),
    ("curves", "curve canonicalization and the transversality test", _crit_curves),
    ("root-data", "dual Coxeter table, q-analog multiplicities, tensor dimensions", _crit_root_data),
)

SIZES = {
    "full": {
        "reciprocity": {"trials": 200},
        "axis-identity": {"trials": 100},
        "symbol-laws": {"steinberg": 100, "grid": 3},
        "orbit-counts": {"cases": [("GL2", 4, (2, 3)), ("GL3", 3, (2, 3))]},
        "hecke-ring": {"total": 3},
        "transition": {"max1": 3},
        "iota": {"groups": ["PGL2", "PGL3"], "height": 3},
        "curve-algebra": {"monomials": 50, "samples": 30},
        "curves": {"trials": 100, "grid_degree": 3},
        "root-data": {
            "groups": ["A1", "A2", "B2", "G2", "A3", "B3", "C3"],
            "height": 6,
        },
    },
    "quick": {
        "reciprocity": {"trials": 20},
        "axis-identity": {"trials": 20},
        "symbol-laws": {"steinberg": 20, "grid": 1},
        "orbit-counts": {"cases": [("GL2", 2, (2,))]},
        "hecke-ring": {"total": 2},
        "transition": {"max1": 2},
        "iota": {"groups": ["PGL2"], "height": 2},
        "curve-algebra": {"monomials": 12, "samples": 8},
        "curves": {"trials": 15, "grid_degree": 2},
        "root-data": {"groups": ["A1", "A2", "B2"], "height": 3},
    },
}


def run_criterion(which, suite: str = "full", seed: int = DEFAULT_SEED, threads: int = 1) -> dict:
    """Run one criterion by 1-based index or by key; returns a result row."""
    if suite not in SIZES:
        raise ValueError(f"unknown suite {suite!r}")
    if isinstance(which, int):
        key, title, fn = CRITERIA[which - 1]
    else:
        matches = [row for row in CRITERIA if row[0] == which]
        if not matches:
            raise ValueError(f"unknown criterion {which!r}")
        key, title, fn = matches[0]
    ok, detail = fn(SIZES[suite][key], seed, threads)
    return {"name": key, "title": title, "ok": bool(ok), "detail": detail}


def run_all(suite: str = "full", seed: int = DEFAULT_SEED, threads: int = 1) -> dict:
    rows = [
        run_criterion(i + 1, suite=suite, seed=seed, threads=threads)
        for i in range(len(CRITERIA))
    ]
    return {
        "suite": suite,
        "seed": seed,
        "ok": all(row["ok"] for row in rows),
        "criteria": rows,
    }
