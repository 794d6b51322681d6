"""Root data, Weyl combinatorics, and dual-side representation theory.

A ``RootDatum`` fixes a coweight lattice Y = Z^m together with integer
vectors for the simple roots (in the dual lattice X = Z^m, paired by the dot
product) and the simple coroots (in Y).  Three lattice flavours are built:

* ``sc``   -- Y has the simple coroots as its standard basis,
* ``adj``  -- Y has the fundamental coweights as its standard basis,
* ``gl``   -- GL(n): Y = Z^n with roots/coroots e_i - e_{i+1}.

Everything else is derived: the full root/coroot list by reflection closure,
positivity via an interior functional, 2*rho (sum of positive roots, stored
doubled so all pairings stay integral), the dual Coxeter number, Weyl group
enumeration with lengths, and dominance order with explicit simple-coroot
certificates.

Representation-theoretic routines (weight multiplicities, tensor product
decomposition, q-weighted partition counts, the q-analog of weight
multiplicity, parabolic Poincare polynomials) all run on the *dual* system --
the one whose roots are our coroots -- so that Y is its weight lattice.
Computations are exact: integer vectors, Fraction solves, and integer Laurent
polynomials.  Half-sums of coroots appear only in doubled form.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import ArithError
from .laurent import Laurent

WEYL_CAP = 10**6


# ---------------------------------------------------------------------------
# small exact linear algebra on tuples
# ---------------------------------------------------------------------------


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))

def vneg(a):
    return tuple(-x for x in a)


def vscale(k, a):
    return tuple(k * x for x in a)


def vdot(a, b):
    return sum(x * y for x, y in zip(a, b))


def solve_in_columns(cols, target):
    """Exact solve of sum_i c_i * cols[i] = target over Q.

    Returns the unique Fraction list when the columns are independent and the
    system is consistent, else None.
    """
    if not cols:
        return [] if all(x == 0 for x in target) else None
    m = len(cols[0])
    r = len(cols)
    rows = [[Fraction(cols[j][i]) for j in range(r)] + [Fraction(target[i])] for i in range(m)]
    piv_cols = []
    rank = 0
    for col in range(r):
        sel = None
        for i in range(rank, m):
            if rows[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[rank], rows[sel] = rows[sel], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for i in range(m):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        piv_cols.append(col)
        rank += 1
    for i in range(rank, m):
        if rows[i][r] != 0:
            return None
    sol = [Fraction(0)] * r
    for i, col in enumerate(piv_cols):
        sol[col] = rows[i][r]
    return sol


# ---------------------------------------------------------------------------
# Cartan matrices
# ---------------------------------------------------------------------------


def cartan_matrix(family: str, n: int):
    """Cartan matrix A with A[i][j] = <alpha_i, alpha_j^vee>."""
    if family == "A" and n >= 1:
        edges = [(i, i + 1, 1, 1) for i in range(n - 1)]
    elif family == "B" and n >= 2:
        # last simple root short: <alpha_{n-2}, alpha_{n-1}^vee> = -2
        edges = [(i, i + 1, 1, 1) for i in range(n - 2)] + [(n - 2, n - 1, 2, 1)]
    elif family == "C" and n >= 2:
        edges = [(i, i + 1, 1, 1) for i in range(n - 2)] + [(n - 2, n - 1, 1, 2)]
    elif family == "D" and n >= 4:
        edges = [(i, i + 1, 1, 1) for i in range(n - 3)] + [(n - 3, n - 2, 1, 1), (n - 3, n - 1, 1, 1)]
    elif family == "E" and n in (6, 7, 8):
        # chain 0-2-3-4-...-(n-1), extra node 1 attached to 3
        chain = [0, 2, 3, 4, 5, 6, 7][: n - 1]
        edges = [(chain[i], chain[i + 1], 1, 1) for i in range(len(chain) - 1)]
        edges.append((1, 3, 1, 1))
    elif family == "F" and n == 4:
        edges = [(0, 1, 1, 1), (1, 2, 2, 1), (2, 3, 1, 1)]
    elif family == "G" and n == 2:
        edges = [(0, 1, 1, 3)]
    else:
        raise ArithError(f"rank out of range for family {family}: {n}")
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j, down, up in edges:
        a[i][j] = -down
        a[j][i] = -up
    return a


# ---------------------------------------------------------------------------
# root datum
# ---------------------------------------------------------------------------


class RootDatum:
    def __init__(self, name, family, rank, dim, flavor, simple_roots, simple_coroots):
        self.name = name
        self.family = family
        self.rank = rank          # number of simple roots
        self.dim = dim            # lattice rank of X and Y
        self.flavor = flavor      # "sc" | "adj" | "gl"
        self.simple_roots = [tuple(v) for v in simple_roots]
        self.simple_coroots = [tuple(v) for v in simple_coroots]
        if rank == 0:
            raise ArithError("torus factor only: no semisimple component")

        # interior functional: w in Y (x) Q with <alpha_i, w> = 1 for all i
        w = solve_in_columns(
            [tuple(r[i] for r in self.simple_roots) for i in range(dim)],
            tuple([1] * rank),
        )
        if w is None:
            # roots do not span; extend by zeros on a complement (gl case has
            # sum-zero roots: any vector with strictly decreasing entries works)
            if flavor == "gl":
                w = [Fraction(dim - i) for i in range(dim)]
            else:  # pragma: no cover - all built flavours are covered above
                raise ArithError("cannot build an interior functional")
        self._interior = tuple(w)

        self._root_pairs = self._generate_roots()
        self.positive_roots = [a for a, _ in self._root_pairs]
        self.positive_coroots = [b for _, b in self._root_pairs]
        z = tuple([0] * dim)
        self.two_rho = z
        for a in self.positive_roots:
            self.two_rho = vadd(self.two_rho, a)
        self.two_rho_hat = z
        for b in self.positive_coroots:
            self.two_rho_hat = vadd(self.two_rho_hat, b)

        self._weyl = None
        self._weight_mults = {}
        self._kostant_memo = {}
        self._coroot_order = sorted(
            range(len(self.positive_coroots)),
            key=lambda i: (vdot(self.two_rho, self.positive_coroots[i]), self.positive_coroots[i]),
        )

    # -- roots -------------------------------------------------------------

    def _generate_roots(self):
        """All (root, coroot) pairs by reflection closure; keep the positives."""
        pairs = {}
        frontier = list(zip(self.simple_roots, self.simple_coroots))
        for a, b in frontier:
            pairs[a] = b
        while frontier:
            nxt = []
            for a, b in frontier:
                for i in range(self.rank):
                    ai, bi = self.simple_roots[i], self.simple_coroots[i]
                    na = vsub(a, vscale(vdot(a, bi), ai))
                    if na not in pairs:
                        nb = vsub(b, vscale(vdot(ai, b), bi))
                        pairs[na] = nb
                        nxt.append((na, nb))
            frontier = nxt
        pos = []
        for a, b in pairs.items():
            h = sum(Fraction(x) * y for x, y in zip(a, self._interior))
            if h > 0:
                pos.append((a, b))
        pos.sort(key=lambda ab: ab[0])
        return pos

    # -- pairings and order --------------------------------------------------

    def pairing_2rho(self, lam) -> int:
        """<lam, 2 rho> with rho the half-sum of positive roots (stored doubled)."""
        return vdot(self.two_rho, lam)

    def is_dominant(self, lam) -> bool:
        return all(vdot(a, lam) >= 0 for a in self.simple_roots)

    def check_coweight(self, lam):
        if len(lam) != self.dim:
            raise ArithError(
                f"coweight length {len(lam)} does not match lattice rank {self.dim}"
            )
        return tuple(int(x) for x in lam)

    def dominance_leq(self, mu, lam):
        """mu <= lam iff lam - mu is a nonnegative integer sum of simple coroots.

        Returns (bool, certificate) where the certificate lists the unique
        simple-coroot coefficients when the relation holds.
        """
        diff = vsub(lam, mu)
        sol = solve_in_columns(self.simple_coroots, diff)
        if sol is None:
            return False, None
        out = []
        for c in sol:
            if c.denominator != 1 or c < 0:
                return False, None
            out.append(int(c))
        return True, out

    def zero(self):
        return tuple([0] * self.dim)

    # -- Weyl group ----------------------------------------------------------

    def reflect(self, i: int, lam):
        """Simple reflection on coweights: s_i(lam) = lam - <alpha_i, lam> alpha_i^vee."""
        return vsub(lam, vscale(vdot(self.simple_roots[i], lam), self.simple_coroots[i]))

    def weyl_orbit(self, lam):
        lam = tuple(lam)
        seen = {lam}
        frontier = [lam]
        while frontier:
            nxt = []
            for v in frontier:
                for i in range(self.rank):
                    w = self.reflect(i, v)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return sorted(seen)

    def weyl_elements(self, cap: int = WEYL_CAP):
        """All Weyl elements as (columns, length); columns[j] = w(e_j)."""
        if self._weyl is not None:
            return self._weyl
        dim = self.dim
        ident = tuple(tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim))
        seen = {ident: 0}
        order = [ident]
        frontier = [ident]
        depth = 0
        while frontier:
            depth += 1
            nxt = []
            for cols in frontier:
                for i in range(self.rank):
                    ai, bi = self.simple_roots[i], self.simple_coroots[i]
                    w_bi = self.apply(cols, bi)
                    ncols = tuple(
                        vsub(cols[j], vscale(ai[j], w_bi)) for j in range(dim)
                    )
                    if ncols not in seen:
                        seen[ncols] = depth
                        order.append(ncols)
                        nxt.append(ncols)
                        if len(seen) > cap:
                            raise ArithError(f"Weyl group enumeration cap {cap} exceeded")
            frontier = nxt
        self._weyl = [(cols, seen[cols]) for cols in order]
        return self._weyl

    @staticmethod
    def apply(cols, y):
        out = None
        for j, c in enumerate(y):
            if c:
                term = vscale(c, cols[j])
                out = term if out is None else vadd(out, term)
        return out if out is not None else tuple([0] * len(cols))

    def weyl_order(self) -> int:
        return len(self.weyl_elements())

    def to_dominant(self, v):
        """(dominant representative, number of reflections used)."""
        v = tuple(v)
        count = 0
        while True:
            for i in range(self.rank):
                if vdot(self.simple_roots[i], v) < 0:
                    v = self.reflect(i, v)
                    count += 1
                    break
            else:
                return v, count

    # -- structure constants of the lattice order ------------------------------

    def dominants_below(self, lam):
        """All dominant mu <= lam, by bounded search over coroot expansions."""
        lam = tuple(lam)
        budget = self.pairing_2rho(lam) // 2  # each simple coroot costs <2rho, a^vee> = 2
        r = self.rank
        seen = set()
        stack = [(0, lam, budget)]
        while stack:
            i, v, left = stack.pop()
            if self.is_dominant(v):
                seen.add(v)
            if i < r:
                stack.append((i + 1, v, left))
                w = v
                for k in range(1, left + 1):
                    w = vsub(w, self.simple_coroots[i])
                    stack.append((i + 1, w, left - k))
        return sorted(seen, key=lambda m: (-self.pairing_2rho(m), m))

    def dual_coxeter(self) -> int:
        """1 + <rho, theta^vee> for the highest root theta (irreducible part)."""
        best = None
        best_h = None
        for a, b in self._root_pairs:
            h = sum(Fraction(x) * y for x, y in zip(a, self._interior))
            if best_h is None or h > best_h:
                best_h = h
                best = b
        if best is None:
            raise ArithError("torus factor only: no roots")
        tw = vdot(self.two_rho, best)
        if tw % 2:
            raise ArithError("pairing <2rho, theta^vee> is odd; datum corrupted")
        return tw // 2 + 1

    # -- dual-side representation theory ---------------------------------------

    def inner(self, y1, y2) -> int:
        """W-invariant integral form on Y: sum over positive roots of products."""
        total = 0
        for a in self.positive_roots:
            total += vdot(a, y1) * vdot(a, y2)
        return total

    def weight_mults(self, lam):
        """Dominant-weight multiplicities of the dual-group irreducible V_lam.

        Freudenthal recursion, exact; keys are dominant mu <= lam.
        """
        lam = tuple(lam)
        cached = self._weight_mults.get(lam)
        if cached is not None:
            return cached
        if not self.is_dominant(lam):
            raise ArithError(f"highest weight {lam} is not dominant")
        doms = self.dominants_below(lam)
        mult = {lam: 1}
        dom_set = set(doms)
        t2rh = self.two_rho_hat
        for mu in doms:
            if mu == lam:
                continue
            num = 0
            for b in self.positive_coroots:
                bb = self.inner(b, b)
                mb = self.inner(mu, b)
                k = 1
                while True:
                    w = vadd(mu, vscale(k, b))
                    rep, _ = self.to_dominant(w)
                    m = mult.get(rep)
                    if m is None:
                        if rep not in dom_set:
                            break  # weight strings are unbroken: done with this root
                        m = 0
                    if m:
                        num += (mb + k * bb) * m
                    k += 1
            den = self.inner(vadd(vadd(lam, mu), t2rh), vsub(lam, mu))
            if den <= 0:
                raise ArithError("Freudenthal denominator not positive")
            val = 2 * num
            if val % den:
                raise ArithError("Freudenthal division not exact")
            m = val // den
            if m:
                mult[mu] = m
        self._weight_mults[lam] = mult
        return mult

    def freudenthal_multiplicity(self, lam, mu) -> int:
        rep, _ = self.to_dominant(tuple(mu))
        return self.weight_mults(lam).get(rep, 0)

    def weight_diagram(self, lam):
        """Full weight -> multiplicity map (orbits of the dominant skeleton)."""
        out = {}
        for mu, m in self.weight_mults(lam).items():
            for w in self.weyl_orbit(mu):
                out[w] = m
        return out

    def weyl_dimension(self, lam) -> int:
        num = 1
        den = 1
        d2 = vadd(vscale(2, tuple(lam)), self.two_rho_hat)
        for a in self.positive_roots:
            num *= vdot(a, d2)
            den *= vdot(a, self.two_rho_hat)
        if num % den:
            raise ArithError("Weyl dimension not integral")
        return num // den

    def tensor_decompose(self, lam, mu):
        """Multiplicities of V_nu in V_lam (x) V_mu (dual side), exact.

        Chamber-walk over the full weight diagram of mu with doubled vectors,
        so half-integral shifts never appear.
        """
        lam = tuple(lam)
        mu = tuple(mu)
        if not self.is_dominant(lam) or not self.is_dominant(mu):
            raise ArithError("tensor factors must be dominant")
        # walk over the smaller diagram
        if self.weyl_dimension(mu) > self.weyl_dimension(lam):
            lam, mu = mu, lam
        t2rh = self.two_rho_hat
        out = {}
        lam2 = vscale(2, lam)
        for nu, m in self.weight_diagram(mu).items():
            xi2 = vadd(vadd(lam2, vscale(2, nu)), t2rh)
            dom2, count = self.to_dominant(xi2)
            if any(vdot(a, dom2) == 0 for a in self.simple_roots):
                continue
            diff = vsub(dom2, t2rh)
            if any(x % 2 for x in diff):
                raise ArithError("tensor walk produced a non-integral weight")
            target = tuple(x // 2 for x in diff)
            sign = -1 if count % 2 else 1
            val = out.get(target, 0) + sign * m
            if val:
                out[target] = val
            else:
                out.pop(target, None)
        for v in out.values():
            if v < 0:
                raise ArithError("negative tensor multiplicity; walk corrupted")
        return out

    # -- q-combinatorics --------------------------------------------------------

    def kostant_q(self, beta) -> Laurent:
        """q-weighted count of ways to write beta as a sum of positive coroots.

        Each multiset decomposition contributes q^(number of parts, counted
        with multiplicity); beta outside the nonnegative coroot cone gives 0.
        """
        beta = tuple(beta)
        roots = [self.positive_coroots[i] for i in self._coroot_order]

        def rec(i, b):
            if all(x == 0 for x in b):
                return Laurent.const(1)
            if i == len(roots):
                return Laurent.zero()
            key = (i, b)
            hit = self._kostant_memo.get(key)
            if hit is not None:
                return hit
            g = roots[i]
            cost = vdot(self.two_rho, g)
            acc = Laurent.zero()
            k = 0
            bb = b
            while vdot(self.two_rho, bb) >= 0:
                sub = rec(i + 1, bb)
                if sub:
                    acc = acc + sub.shift(k)
                k += 1
                bb = vsub(bb, g)
                if cost <= 0:  # pragma: no cover - positive coroots have positive height
                    break
            self._kostant_memo[key] = acc
            return acc

        return rec(0, beta)

    def lusztig_q(self, lam, mu) -> Laurent:
        """q-analog of the mu-weight multiplicity of V_lam (dual side).

        Alternating Weyl sum of q-weighted partition counts of
        w(lam + rho_hat) - (mu + rho_hat), computed with doubled vectors.
        """
        lam = tuple(lam)
        mu = tuple(mu)
        t2rh = self.two_rho_hat
        lam2 = vadd(vscale(2, lam), t2rh)
        mu2 = vadd(vscale(2, mu), t2rh)
        acc = Laurent.zero()
        for cols, length in self.weyl_elements():
            img = self.apply(cols, lam2)
            d2 = vsub(img, mu2)
            if any(x % 2 for x in d2):
                raise ArithError("q-analog shift not integral")
            if vdot(self.two_rho, d2) < 0:
                continue
            p = self.kostant_q(tuple(x // 2 for x in d2))
            if p:
                acc = acc + (p if length % 2 == 0 else -p)
        return acc

    def parabolic_poincare(self, lam) -> Laurent:
        """Length generating function of the minimal coset representatives
        for the stabiliser parabolic of lam: sum over the orbit of q^(minimal
        length reaching that orbit point)."""
        lam = tuple(lam)
        best = {}
        for cols, length in self.weyl_elements():
            img = self.apply(cols, lam)
            if img not in best or length < best[img]:
                best[img] = length
        out = Laurent.zero()
        for length in best.values():
            out = out + Laurent.monomial(1, length)
        return out

    # -- GL/PGL coweight generators ----------------------------------------------

    def fundamental_monomial_exponents(self, lam):
        """Exponents (a_1..a_k, central) writing lam as a product of fundamental
        generators of the dominant monoid; exact for gl and adj flavours."""
        lam = self.check_coweight(lam)
        if not self.is_dominant(lam):
            raise ArithError(f"{lam} is not dominant")
        if self.flavor == "gl":
            n = self.dim
            a = [lam[i] - lam[i + 1] for i in range(n - 1)]
            return a, lam[n - 1]
        if self.flavor == "adj":
            return [vdot(self.simple_roots[i], lam) for i in range(self.rank)], 0
        raise ArithError(
            "fundamental-generator decomposition is exact only for gl/adj flavours"
        )

    def fundamental_coweights(self):
        if self.flavor == "gl":
            n = self.dim
            return [tuple([1] * (i + 1) + [0] * (n - i - 1)) for i in range(n - 1)]
        if self.flavor == "adj":
            return [
                tuple(1 if j == i else 0 for j in range(self.dim))
                for i in range(self.rank)
            ]
        raise ArithError("fundamental coweights as lattice points need gl/adj flavour")

    def central_coweight(self):
        if self.flavor != "gl":
            raise ArithError("central coweight only exists for the gl flavour")
        return tuple([1] * self.dim)

    def __repr__(self):
        return f"RootDatum({self.name})"


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

_REGISTRY = {}


def _build_gl(n: int) -> RootDatum:
    roots = []
    coroots = []
    for i in range(n - 1):
        v = [0] * n
        v[i] = 1
        v[i + 1] = -1
        roots.append(tuple(v))
        coroots.append(tuple(v))
    return RootDatum(f"GL{n}", "A", n - 1, n, "gl", roots, coroots)


def _build_simple(family: str, n: int, flavor: str) -> RootDatum:
    a = cartan_matrix(family, n)
    if flavor == "sc":
        # Y basis: simple coroots; alpha_j = row j of the Cartan matrix
        roots = [tuple(a[j][i] for i in range(n)) for j in range(n)]
        coroots = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    elif flavor == "adj":
        # Y basis: fundamental coweights; alpha_j^vee = column j of the Cartan matrix
        roots = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
        coroots = [tuple(a[j][i] for j in range(n)) for i in range(n)]
    else:
        raise ArithError(f"unknown flavor {flavor!r}")
    return RootDatum(f"{family}{n}-{flavor}", family, n, n, flavor, roots, coroots)


def build_root_datum(spec: str) -> RootDatum:
    """Construct (and cache) a root datum from a short name.

    Accepted names: ``GLn``, ``PGLn`` (adjoint type A), ``SLn`` (simply
    connected type A), and ``<Family><rank>[-sc|-adj]`` for families A..G.
    A bare family name defaults to the simply connected flavour (for E8, F4,
    G2 the lattice is the same either way).
    """
    key = spec.strip()
    hit = _REGISTRY.get(key)
    if hit is not None:
        return hit
    s = key.upper()
    try:
        if s.startswith("GL"):
            n = int(s[2:])
            if n < 2:
                raise ArithError(f"rank out of range for GL: {s[2:]}")
            datum = _build_gl(n)
        elif s.startswith("PGL"):
            n = int(s[3:])
            if n < 2:
                raise ArithError(f"rank out of range for PGL: {s[3:]}")
            datum = _build_simple("A", n - 1, "adj")
            datum.name = f"PGL{n}"
        elif s.startswith("SL"):
            n = int(s[2:])
            if n < 2:
                raise ArithError(f"rank out of range for SL: {s[2:]}")
            datum = _build_simple("A", n - 1, "sc")
            datum.name = f"SL{n}"
        else:
            family = s[0]
            if family not in "ABCDEFG":
                raise ArithError(f"unknown family in {spec!r}")
            body = s[1:]
            flavor = "sc"
            if body.endswith("-SC"):
                body = body[:-3]
            elif body.endswith("-ADJ"):
                body = body[:-4]
                flavor = "adj"
            n = int(body)
            datum = _build_simple(family, n, flavor)
    except ValueError as exc:
        raise ArithError(f"cannot parse root datum name {spec!r}") from exc
    _REGISTRY[key] = datum
    return datum
