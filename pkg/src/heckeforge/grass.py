"""Orbit combinatorics on the quotient G(F_q((x)))/G(F_q[[x]]).

Orbits are indexed by dominant coweights.  Counts over F_q come from the
parabolic fibration: the orbit of lam fibers over a partial flag variety
whose point count is ``parabolic_poincare(lam)``, with affine fibers making
up the difference to the full orbit dimension ``<lam, 2 rho>``.  The
``lattice`` module provides the brute-force certification of these formulas
for GL(n); any mismatch there is a hard test failure, not a tolerance.
"""

from __future__ import annotations

from .arith import ArithError
from .laurent import Laurent
from .rootdata import RootDatum, vadd


def _require_dominant(datum: RootDatum, lam):
    lam = datum.check_coweight(lam)
    if not datum.is_dominant(lam):
        raise ArithError(f"{lam} is not dominant for {datum.name}")
    return lam


def orbit_dim(datum: RootDatum, lam) -> int:
    """Dimension of the orbit through x^lam: the doubled rho-pairing."""
    lam = _require_dominant(datum, lam)
    return datum.pairing_2rho(lam)


def orbit_count(datum: RootDatum, lam) -> Laurent:
    """Number of F_q-points of the open orbit, as a polynomial in q.

    parabolic_poincare(lam) counts the base flag variety; the orbit is an
    affine-space bundle over it of total dimension <lam, 2 rho>.
    """
    lam = _require_dominant(datum, lam)
    pp = datum.parabolic_poincare(lam)
    dim = datum.pairing_2rho(lam)
    deg = pp.max_exp()
    if deg > dim:
        raise ArithError("flag-variety degree exceeds orbit dimension; datum corrupted")
    return pp.shift(dim - deg)


def closure_count(datum: RootDatum, lam) -> Laurent:
    """Point count of the closed orbit-closure: sum over all dominant mu <= lam."""
    lam = _require_dominant(datum, lam)
    total = Laurent.zero()
    for mu in datum.dominants_below(lam):
        total = total + orbit_count(datum, mu)
    return total


def convolution_support(datum: RootDatum, lam, mu) -> dict:
    """Target stratum and candidate support of a convolution product.

    The product of the orbits of lam and mu lands inside the closure of the
    orbit of lam+mu; the strata list enumerates every dominant coweight
    below that target.  Downstream products must be supported inside it.
    """
    lam = _require_dominant(datum, lam)
    mu = _require_dominant(datum, mu)
    target = vadd(lam, mu)
    return {"target": target, "strata": datum.dominants_below(target)}
