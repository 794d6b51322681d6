"""Batch command-line front end.

Every subcommand reads flags (plus an optional ``key = value`` config file,
with flags winning), computes with exact arithmetic, and prints one JSON
document to standard output.  Identical (argv, seed) always produces
byte-identical output: keys are sorted, coefficients are exact, and nothing
time- or host-dependent is ever emitted.  Exit codes: 0 success, 1 domain
error (reported as ``{"error": ...}`` on standard output), 2 usage error.

The environment variable HECKEFORGE_THREADS caps worker parallelism for the
batch subcommands (``reciprocity``, ``selftest``); reports are assembled in
submission order, so threading never changes the bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import acceptance
from . import curve_algebra as ca
from . import grass
from . import hecke as hk
from . import lattice as lat
from . import symbols as sym
from .arith import (
    ORDER_TX,
    ORDER_XT,
    ArithError,
    BiPoly,
    Fq,
    parse_bipoly,
)
from .curves import canonicalize, curve_eq, is_transversal
from .rootdata import build_root_datum


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input parsing helpers
# ---------------------------------------------------------------------------


def _parse_coweight(text: str) -> tuple:
    try:
        return tuple(int(part.strip()) for part in text.split(","))
    except ValueError:
        raise UsageError(f"bad coweight {text!r}; expected comma-separated integers")


def _parse_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"bad JSON for {what}: {e}")


def _need(args, name: str):
    value = getattr(args, name.replace("-", "_"), None)
    if value is None:
        raise UsageError(f"--{name} is required for this subcommand")
    return value


def _curve_from_spec(spec, p, prec):
    """A curve from either a polynomial string or {"p", "prec", "s"} JSON."""
    if isinstance(spec, str) and spec.lstrip().startswith("{"):
        spec = _parse_json(spec, "curve")
    if isinstance(spec, dict):
        try:
            cp = int(spec.get("p", p if p is not None else 0))
            cprec = int(spec.get("prec", prec))
            s_coeffs = [int(c) for c in spec["s"]]
        except (KeyError, TypeError, ValueError):
            raise UsageError('curve JSON must look like {"p": 5, "prec": 64, "s": [0, 1, ...]}')
        if cp < 2:
            raise UsageError("curve JSON needs a prime p (give one in the JSON or via --p)")
        field = Fq(cp)
        # rebuild through the public constructors: the branch x = s(t) is the
        # canonical form of the polynomial x - s(t)
        coeffs = {(1, 0): 1}
        for e, c in enumerate(s_coeffs):
            if c % cp:
                coeffs[(0, e)] = (-c) % cp
        return canonicalize(BiPoly(field, coeffs), cprec)
    if p is None:
        raise UsageError("--p is required when a curve is given as a polynomial")
    return canonicalize(parse_bipoly(str(spec), p), prec)


def _ralg_element(datum, text: str, p, prec) -> ca.CurveElement:
    """A curve-algebra element from JSON: either a full {"terms": [...]} body
    or a bare monomial list [{"curve": ..., "coweight": [...]}]."""
    data = _parse_json(text, "element")
    if isinstance(data, list):
        data = {"terms": [{"monomial": data, "coeff": "1"}]}
    if not isinstance(data, dict) or "terms" not in data:
        raise UsageError("element JSON must be a term list or have a 'terms' key")
    out = ca.CurveElement(datum, {}, {})
    for item in data["terms"]:
        mono = ca.CurveElement.one(datum)
        for part in item.get("monomial", []):
            curve = _curve_from_spec(part.get("curve"), p, prec)
            lam = tuple(int(x) for x in part["coweight"])
            mono = mono * ca.CurveElement.generator(datum, curve, lam)
        try:
            coeff = Fraction(str(item.get("coeff", "1")))
        except ValueError:
            raise UsageError(f"bad coefficient {item.get('coeff')!r}")
        out = out + mono.scale(coeff)
    return out


def _ralg_monomial(datum, text: str, p, prec):
    elem = _ralg_element(datum, text, p, prec)
    if len(elem.terms) != 1:
        raise UsageError("expected a single monomial")
    return next(iter(elem.terms)), elem.curves


def _hecke_element(datum, text: str, basis: str) -> hk.HeckeElement:
    if text.lstrip().startswith("{"):
        data = _parse_json(text, "element")
        if "terms" not in data:
            raise UsageError("element JSON needs a 'terms' key")
        data.setdefault("basis", basis)
        return hk.from_json(datum, data)
    return hk.HeckeElement.basis_element(datum, basis, _parse_coweight(text))


def _laurent_terms(basis: str, terms: dict) -> dict:
    return {
        "basis": basis,
        "terms": [
            {"coweight": list(lam), "coeffs": terms[lam].to_dict()}
            for lam in sorted(terms)
        ],
    }


# ---------------------------------------------------------------------------
# subcommand bodies: each returns the JSON-ready payload
# ---------------------------------------------------------------------------


def _cmd_symbol(args):
    p = _need(args, "p")
    prec = args.prec if args.prec is not None else 64
    f = sym.factor_bipoly(parse_bipoly(_need(args, "f"), p), prec)
    g = sym.factor_bipoly(parse_bipoly(_need(args, "g"), p), prec)
    if args.flags:
        return {
            "XT": sym.flag_composite(f, g, ORDER_XT),
            "TX": sym.flag_composite(f, g, ORDER_TX),
            "parshin_total": sym.parshin_sum(f, g)["total"],
        }
    if args.parshin:
        rep = sym.parshin_sum(f, g)
        return {
            "flags": [
                {"curve": fac.label(), "value": value} for fac, value in rep["flags"]
            ],
            "total": rep["total"],
        }
    return sym.two_flag_identity(f, g)


def _cmd_reciprocity(args, threads):
    return sym.reciprocity_batch(
        _need(args, "p"),
        args.trials if args.trials is not None else 200,
        args.seed,
        max_factors=args.max_factors,
        max_degree=args.max_degree,
        curve_prec=args.prec if args.prec is not None else 64,
        threads=threads,
    )


def _cmd_curve(args):
    p = _need(args, "p")
    prec = args.prec if args.prec is not None else 64
    f = parse_bipoly(_need(args, "f"), p)
    if args.action == "good":
        if not is_transversal(f):
            return {"good": False}
        curve = canonicalize(f, prec)
        return {"good": True, "s": ca.curve_key_json(curve.key())["s"], "prec": curve.prec}
    if args.action == "canon":
        curve = canonicalize(f, prec)
        return {"good": True, "s": ca.curve_key_json(curve.key())["s"], "prec": curve.prec}
    g = parse_bipoly(_need(args, "g"), p)
    return {
        "equal": curve_eq(canonicalize(f, prec), canonicalize(g, prec), prec),
        "prec": prec,
    }


def _cmd_grass(args):
    datum = build_root_datum(_need(args, "group"))
    lam = _parse_coweight(_need(args, "coweight"))
    if args.action == "count":
        return {"poly": grass.orbit_count(datum, lam).coeff_list()}
    if args.action == "dim":
        return {"dim": grass.orbit_dim(datum, lam)}
    return {"poly": grass.closure_count(datum, lam).coeff_list()}


def _cmd_hecke(args):
    datum = build_root_datum(_need(args, "group"))
    if args.action == "mul":
        a = _hecke_element(datum, _need(args, "a"), args.basis)
        b = _hecke_element(datum, _need(args, "b"), args.basis)
        return hk.mul(a, b).to_json()
    if args.action == "transition":
        elem, meta = hk.transition(
            datum,
            _parse_coweight(_need(args, "coweight")),
            direction=args.direction,
            path=args.path,
        )
        return {"element": elem.to_json(), "meta": meta}
    elem = _hecke_element(datum, _need(args, "a"), args.basis)
    return _laurent_terms(elem.basis, hk.leading_term(elem))


def _cmd_lattice(args):
    q = _need(args, "p")
    if args.action == "smith":
        rows = _parse_json(_need(args, "matrix"), "matrix")
        if not isinstance(rows, list) or not rows:
            raise UsageError("matrix must be a JSON array of rows")
        prec = args.prec if args.prec is not None else 32
        dom = lat.make_dom(q)
        mat = []
        for row in rows:
            if not isinstance(row, list) or len(row) != len(rows):
                raise UsageError("matrix must be square")
            entries = []
            for cell in row:
                coeffs = cell if isinstance(cell, list) else [cell]
                try:
                    coeffs = [int(c) for c in coeffs]
                except (TypeError, ValueError):
                    raise UsageError("matrix entries must be integers or coefficient lists")
                entries.append(lat.entry_series(dom, coeffs, prec))
            mat.append(entries)
        return {"smith": list(lat.smith_cartan(mat))}
    if args.action == "hall":
        lam = _parse_coweight(_need(args, "lam"))
        mu = _parse_coweight(_need(args, "mu"))
        nu = _parse_coweight(_need(args, "nu"))
        if len(lam) == 2:
            return {"count": lat.hall_number_gl2(lam, mu, nu, q)}
        return {"count": lat.hall_number(lam, mu, nu, q)}
    if args.action == "count":
        lam = _parse_coweight(_need(args, "coweight"))
        return {"count": lat.orbit_count_bruteforce(lam, q)}
    lam = _parse_coweight(_need(args, "lam"))
    mu = _parse_coweight(_need(args, "mu"))
    cap = args.window_cap if args.window_cap is not None else lat.WINDOW_CAP
    return lat.iwasawa_count(lam, mu, q, window_cap=cap)


def _cmd_ralg(args):
    datum = build_root_datum(_need(args, "group"))
    prec = args.prec if args.prec is not None else 64
    if args.action == "mul":
        a = _ralg_element(datum, _need(args, "a"), args.p, prec)
        b = _ralg_element(datum, _need(args, "b"), args.p, prec)
        return (a * b).to_json()
    if args.action == "iota":
        if args.a is not None:
            elem = _ralg_element(datum, args.a, args.p, prec)
        else:
            curve = _curve_from_spec(_need(args, "curve"), args.p, prec)
            lam = _parse_coweight(_need(args, "coweight"))
            elem = ca.CurveElement.generator(datum, curve, lam)
        image = ca.iota(elem, mode=args.mode)
        if isinstance(image, hk.HeckeElement):
            return image.to_json()
        return {
            "basis": image["basis"],
            "leading": [
                {"coweight": list(lam), "coeff": str(c)}
                for lam, c in sorted(image["leading"].items())
            ],
            "lower_terms": image["lower_terms"],
        }
    m1, _ = _ralg_monomial(datum, _need(args, "a"), args.p, prec)
    m2, _ = _ralg_monomial(datum, _need(args, "b"), args.p, prec)
    return {
        "leq": ca.monomial_leq(datum, m1, m2),
        "geq": ca.monomial_leq(datum, m2, m1),
    }


def _cmd_selftest(args, threads):
    return acceptance.run_all(args.suite, seed=args.seed, threads=threads)


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=None, help="prime (residue field size)")
    common.add_argument("--group", default=None, help="root-datum name, e.g. GL2, PGL3, B2sc")
    common.add_argument("--coweight", default=None, help="comma-separated integers, e.g. 2,0")
    common.add_argument("--prec", type=int, default=None, help="series working precision")
    common.add_argument("--seed", type=int, default=None, help=f"batch seed (default {acceptance.DEFAULT_SEED})")
    common.add_argument("--trials", type=int, default=None, help="batch size")
    common.add_argument("--window-cap", type=int, default=None, help="principal-part window cap")
    common.add_argument("--json", action="store_true", default=None, help="compact single-line output")
    common.add_argument("--config", default=None, help="key = value file; flags override it")

    parser = argparse.ArgumentParser(
        prog="heckeforge",
        description="Exact two-dimensional symbol, lattice, and Hecke-algebra toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_symbol = sub.add_parser("symbol", parents=[common], help="two-flag symbols of a pair")
    p_symbol.add_argument("--f", default=None, help="first polynomial, e.g. \"x+t^2\"")
    p_symbol.add_argument("--g", default=None, help="second polynomial")
    p_symbol.add_argument("--flags", action="store_true", help="report both flag orders and the flag sum")
    p_symbol.add_argument("--parshin", action="store_true", help="report the per-flag boundary values")

    p_rec = sub.add_parser("reciprocity", parents=[common], help="seeded reciprocity batch")
    p_rec.add_argument("--max-factors", type=int, default=4)
    p_rec.add_argument("--max-degree", type=int, default=4)

    p_curve = sub.add_parser("curve", parents=[common], help="transversal-curve tools")
    p_curve.add_argument("action", choices=["good", "canon", "eq"])
    p_curve.add_argument("--f", default=None, help="polynomial in x and t")
    p_curve.add_argument("--g", default=None, help="second polynomial (for eq)")

    p_grass = sub.add_parser("grass", parents=[common], help="orbit counting polynomials")
    p_grass.add_argument("action", choices=["count", "dim", "closure"])

    p_hecke = sub.add_parser("hecke", parents=[common], help="convolution-algebra operations")
    p_hecke.add_argument("action", choices=["mul", "transition", "leading"])
    p_hecke.add_argument("--a", default=None, help="element JSON or a coweight")
    p_hecke.add_argument("--b", default=None, help="element JSON or a coweight")
    p_hecke.add_argument("--basis", choices=[hk.NATURAL, hk.CHAR], default=hk.NATURAL)
    p_hecke.add_argument("--direction", choices=["to-natural", "to-char"], default="to-natural")
    p_hecke.add_argument("--path", choices=["auto", "satake", "qanalog"], default="auto")

    p_lat = sub.add_parser("lattice", parents=[common], help="lattice counting and invariants")
    p_lat.add_argument("action", choices=["smith", "hall", "count", "iwasawa"])
    p_lat.add_argument("--matrix", default=None, help="JSON rows of x-adic coefficient lists")
    p_lat.add_argument("--lam", default=None, help="coweight, e.g. 2,0")
    p_lat.add_argument("--mu", default=None, help="coweight")
    p_lat.add_argument("--nu", default=None, help="coweight")

    p_ralg = sub.add_parser("ralg", parents=[common], help="curve-algebra operations")
    p_ralg.add_argument("action", choices=["mul", "iota", "order"])
    p_ralg.add_argument("--a", default=None, help="element JSON")
    p_ralg.add_argument("--b", default=None, help="element JSON")
    p_ralg.add_argument("--curve", default=None, help="curve JSON or polynomial string")
    p_ralg.add_argument("--mode", choices=["exact", "leading"], default="exact")

    p_self = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p_self.add_argument("--suite", choices=sorted(acceptance.SIZES), default="quick")

    return parser


def _apply_config(args):
    """Fill flag values that were not given from the config file (flags win)."""
    if not getattr(args, "config", None):
        return
    try:
        with open(args.config) as fh:
            lines = fh.readlines()
    except OSError as e:
        raise UsageError(f"cannot read config file: {e}")
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if not hasattr(args, key) or key in ("config", "command", "action"):
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        if getattr(args, key) is not None:
            continue  # the flag was given explicitly
        if key == "json":
            if value.lower() not in ("true", "false", "0", "1"):
                raise UsageError(f"config line {lineno}: json must be true or false")
            setattr(args, key, value.lower() in ("true", "1"))
        elif key in ("p", "prec", "seed", "trials", "window_cap", "max_factors", "max_degree"):
            try:
                setattr(args, key, int(value))
            except ValueError:
                raise UsageError(f"config line {lineno}: {key} must be an integer")
        else:
            setattr(args, key, value)


def _thread_cap() -> int:
    raw = os.environ.get("HECKEFORGE_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"HECKEFORGE_THREADS must be an integer, got {raw!r}")


def run(argv) -> int:
    """Parse argv, print one JSON document, and return the exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        if args.seed is None:
            args.seed = acceptance.DEFAULT_SEED
        threads = _thread_cap()
        if args.command == "symbol":
            payload = _cmd_symbol(args)
        elif args.command == "reciprocity":
            payload = _cmd_reciprocity(args, threads)
        elif args.command == "curve":
            payload = _cmd_curve(args)
        elif args.command == "grass":
            payload = _cmd_grass(args)
        elif args.command == "hecke":
            payload = _cmd_hecke(args)
        elif args.command == "lattice":
            payload = _cmd_lattice(args)
        elif args.command == "ralg":
            payload = _cmd_ralg(args)
        else:
            payload = _cmd_selftest(args, threads)
    except UsageError as e:
        print(f"heckeforge: error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:  # ArithError and friends subclass ValueError
        _emit({"error": str(e)}, bool(args.json))
        return 1
    _emit(payload, bool(args.json))
    if args.command == "selftest":
        return 0 if payload["ok"] else 1
    return 0


def _emit(payload, compact: bool):
    if compact:
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    else:
        text = json.dumps(payload, sort_keys=True, indent=2)
    print(text)


def main(argv=None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
