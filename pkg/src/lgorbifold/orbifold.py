"""Structure constants sigma_{g,h} and the twisted algebra M*(X,W,G).

Elements of M*(X,W,G) are sums of classes f * xi_g with f in M(W^g); the
companion right module Omega*(X,W,G) uses generators omega_g.  Products carry
an integer t-exponent d_{g,h}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .clifford import BiThetaElement, CliffordElement, upsilon
from .milnor import MilnorClass, build_sector_algebra, g_act
from .poly import X, Y, Z, MultiPoly, act, nabla, substitute_diag
from .scalars import zeta_power
from .symmetry import GroupElement, SymmetryGroup, pair_defect

_HW_CACHE = {}


def h_w_general(W):
    """{(i, j): grad^{y->(y,z)}_j grad^{x->(x,y)}_i W} for j <= i, polynomials in (x, y, z)."""
    hit = _HW_CACHE.get(W)
    if hit is not None:
        return hit
    out = {}
    for i in range(1, W.nvars + 1):
        Fi = nabla(W, i, X, Y)
        for j in range(1, i + 1):
            p = nabla(Fi, j, Y, Z)
            if p:
                out[(i, j)] = p
    _HW_CACHE[W] = out
    return out


def h_w_restricted(W, g, z=None):
    """H_W(x, g(x), z(x)) in K[X] (x) K[theta] (x) K[theta]; z defaults to the identity."""
    terms = {}
    for (i, j), p in h_w_general(W).items():
        q = substitute_diag(p, Y, g, X)
        q = substitute_diag(q, Z, z, X)
        if q:
            terms[((i,), (j,))] = q
    return BiThetaElement(W.nvars, terms)


def _fixed_projection(g):
    """Scale vector realizing x -> x^g (moving coordinates set to 0)."""
    return [0 if a else 1 for a in g.exponents]


def h_wg(W, g, variant="plain", shift=None):
    """H_{W,g} as a theta-only Clifford element.

    variant "plain" uses grad^{x->(x,g(x))} for the inner derivative,
    "dagger" uses grad^{x->(g(x),x)}.  With shift=h the coefficients are
    evaluated at h(x), giving H_{W,g}(h(x)).
    """
    if variant not in ("plain", "dagger"):
        raise ValueError(f"unknown variant {variant!r}")
    n = W.nvars
    moving = g.moving
    proj = _fixed_projection(g)
    factors = g.factors()
    terms = {}
    for i in moving:
        inner = nabla(W, i, X, Y)
        if variant == "plain":
            inner = substitute_diag(inner, Y, g, X)
        else:
            inner = substitute_diag(inner, Y, None, Z)
            inner = substitute_diag(inner, X, g, X)
            inner = substitute_diag(inner, Z, None, X)
        for j in moving:
            if j >= i:
                break
            outer = nabla(inner, j, X, Y)
            outer = substitute_diag(outer, Y, proj, X)
            outer = outer.scale(1 / (1 - factors[j - 1]))
            if shift is not None:
                outer = act(outer, shift)
            if outer:
                terms[((j, i), ())] = outer
    return CliffordElement(n, terms)


def _one(W):
    return MultiPoly.constant(1, W.nvars, W.order)


def dtheta_monomial(I, W):
    return CliffordElement(W.nvars, {((), tuple(I)): _one(W)})


def t_exponent(g, h):
    """d_{g,h} when it is a non-negative integer, else None."""
    d = pair_defect(g, h)
    if d.denominator != 1 or d < 0:
        return None
    return int(d)


def sigma_expression(W, g, h, alg_gh):
    """The K[dtheta]-valued expression whose dtheta_{I_gh} coefficient is sigma_{g,h}."""
    d = t_exponent(g, h)
    if d is None:
        return None
    red = alg_gh.reduce_poly
    one = _one(W)
    S = h_w_restricted(W, g).map_coeffs(red)
    S = S + BiThetaElement.left(h_wg(W, g).map_coeffs(red))
    S = S + BiThetaElement.right(h_wg(W, h, shift=g).map_coeffs(red))
    P = BiThetaElement.unit(one, W.nvars)
    for _ in range(d):
        P = P.mul(S, reduce=red)
    P = P.scale(Fraction(1, factorial(d)))
    return upsilon(P, dtheta_monomial(g.moving, W), dtheta_monomial(h.moving, W))


def sigma(W, g, h, alg_gh):
    """sigma_{g,h} as a class in M(W^{gh})."""
    r = sigma_expression(W, g, h, alg_gh)
    if r is None:
        return alg_gh.zero()
    c = r.coefficient((), (g * h).moving)
    if c is None:
        return alg_gh.zero()
    return alg_gh.class_of(c)


# ---------------------------------------------------------------------------
# the twisted algebra
# ---------------------------------------------------------------------------

class TwistedElement:
    """Sum of class * xi_g (kind "xi") or class * omega_g (kind "omega") with t-exponents.

    terms maps (g, t) to a MilnorClass in M(W^g).
    """

    __slots__ = ("alg", "terms", "kind")

    def __init__(self, alg, terms=None, kind="xi"):
        self.alg = alg
        self.kind = kind
        self.terms = {k: c for k, c in (terms or {}).items() if not c.is_zero()}

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, TwistedElement):
            return NotImplemented
        return self.alg is other.alg and self.kind == other.kind and self.terms == other.terms

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return TwistedElement(self.alg, out, self.kind)

    def __neg__(self):
        return TwistedElement(self.alg, {k: -c for k, c in self.terms.items()}, self.kind)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return TwistedElement(self.alg, {k: c.scale(s) for k, c in self.terms.items()}, self.kind)

    def _check(self, other):
        if other.alg is not self.alg or other.kind != self.kind:
            raise ValueError("elements of different twisted algebras or modules")

    def sectors(self):
        return {g for g, _ in self.terms}

    def parity(self):
        """Z/2 degree of a sector-homogeneous element."""
        ps = {self.alg.parity(g, self.kind) for g, _ in self.terms}
        if len(ps) != 1:
            raise ValueError("element is not homogeneous")
        return ps.pop()

    def __repr__(self):
        return f"TwistedElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        gen = "xi" if self.kind == "xi" else "omega"
        parts = []
        for (g, t), c in sorted(self.terms.items(), key=lambda kv: (kv[0][0].exponents, kv[0][1])):
            tt = f"t^{t}*" if t else ""
            parts.append(f"{tt}({c})*{gen}_{g.label()}")
        return " + ".join(parts)


class TwistedAlgebra:
    """M*(X,W,G) with its sigma-table, cup and cap products and G-action."""

    def __init__(self, W, group, local="auto", sigma_table=None, algebras=None):
        self.W = W
        self.group = group
        self.local = local
        self.algebras = algebras if algebras is not None else {
            g: build_sector_algebra(W, g, local) for g in group}
        self._sigma = dict(sigma_table or {})
        self._basis_cup = {}

    # -- sectors -----------------------------------------------------------

    def algebra(self, g):
        return self.algebras[g]

    def parity(self, g, kind="xi"):
        d = g.d if kind == "xi" else g.d - self.W.nvars
        return d % 2

    def sector_dims(self):
        return {g: self.algebras[g].dim for g in self.group}

    # -- structure constants ----------------------------------------------

    def sigma(self, g, h):
        key = (g, h)
        s = self._sigma.get(key)
        if s is None:
            s = sigma(self.W, g, h, self.algebras[g * h])
            self._sigma[key] = s
        return s

    def set_sigma(self, g, h, value):
        self._sigma[(g, h)] = value

    def sigma_table(self, jobs=1):
        pairs = [(g, h) for g in self.group for h in self.group]
        missing = [p for p in pairs if p not in self._sigma]
        if jobs and jobs > 1 and len(missing) > 4:
            _parallel_sigma(self, missing, jobs)
        return {p: self.sigma(*p) for p in pairs}

    # -- elements ----------------------------------------------------------

    def element(self, g, f=None, kind="xi", t=0):
        alg = self.algebras[g]
        c = alg.unit() if f is None else alg.class_of(f)
        return TwistedElement(self, {(g, t): c}, kind)

    def xi(self, g):
        return self.element(g)

    def omega(self, g):
        return self.element(g, kind="omega")

    def basis(self, kind="xi"):
        """[(g, monomial, element)] over all sectors and staircase monomials."""
        out = []
        for g in self.group:
            alg = self.algebras[g]
            for i, m in enumerate(alg.basis):
                out.append((g, m, TwistedElement(self, {(g, 0): alg.basis_class(i)}, kind)))
        return out

    def zero(self, kind="xi"):
        return TwistedElement(self, {}, kind)

    # -- products ----------------------------------------------------------

    def _product(self, u, v, kind):
        out = {}
        for (g, t1), c1 in u.terms.items():
            for (h, t2), c2 in v.terms.items():
                te = t_exponent(g, h)
                if te is None:
                    continue
                s = self.sigma(g, h)
                if s.is_zero():
                    continue
                gh = g * h
                alg = self.algebras[gh]
                prod = alg.class_of(c1.to_poly() * c2.to_poly() * s.to_poly())
                if prod.is_zero():
                    continue
                key = (gh, t1 + t2 + te)
                out[key] = out[key] + prod if key in out else prod
        return TwistedElement(self, out, kind)

    def cup(self, u, v):
        if u.alg is not self or v.alg is not self:
            raise ValueError("cup of elements from different algebras")
        if u.kind != "xi" or v.kind != "xi":
            raise ValueError("cup takes two xi-side elements")
        return self._product(u, v, "xi")

    def cap(self, w, v):
        """Right action of M* on Omega*: (f1 omega_g) cap (f2 xi_h)."""
        if w.alg is not self or v.alg is not self:
            raise ValueError("cap of elements from different algebras")
        if w.kind != "omega" or v.kind != "xi":
            raise ValueError("cap takes an omega-side and a xi-side element")
        return self._product(w, v, "omega")

    # -- group action ------------------------------------------------------

    def generator_character(self, h, g, kind="xi"):
        """Scalar by which h acts on xi_g (or omega_g)."""
        if kind == "xi":
            e = -sum(h.exponents[i - 1] for i in g.moving)
        else:
            e = sum(h.exponents[i - 1] for i in g.fixed)
        return zeta_power(e, h.order)

    def g_action(self, h, u):
        out = {}
        for (g, t), c in u.terms.items():
            out[(g, t)] = g_act(h, c).scale(self.generator_character(h, g, u.kind))
        return TwistedElement(self, out, u.kind)

    def _total_character_exponent(self, h, g, m, kind):
        if kind == "xi":
            gen = -sum(h.exponents[i - 1] for i in g.moving)
        else:
            gen = sum(h.exponents[i - 1] for i in g.fixed)
        return (h.character_exponent(m) + gen) % h.order

    def invariant_basis(self, kind="xi"):
        """Basis monomials of sector g whose total character is trivial for all of G.

        For kind "omega" this is a basis of the coinvariants: the averaging
        projector kills every other character line, so the trivial-character
        monomials map isomorphically onto Omega_G.
        """
        out = []
        for g, m, el in self.basis(kind):
            if all(self._total_character_exponent(h, g, m, kind) == 0 for h in self.group):
                out.append((g, m, el))
        return out

    def coinvariant_basis(self):
        return self.invariant_basis("omega")

    def invariant_dims(self):
        even = odd = 0
        for g, m, el in self.invariant_basis():
            if self.parity(g):
                odd += 1
            else:
                even += 1
        return {"even": even, "odd": odd}


def _parallel_sigma(A, pairs, jobs):
    from concurrent.futures import ProcessPoolExecutor
    idx = {g: i for i, g in enumerate(A.group)}
    tasks = [(idx[g], idx[h]) for g, h in pairs]
    try:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_worker_init,
                                 initargs=(A.W, A.group.elements, A.group.nvars,
                                           A.group.order, A.local)) as ex:
            results = list(ex.map(_worker_sigma, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    except (OSError, RuntimeError):
        return
    for (g, h), coeffs in zip(pairs, results):
        A.set_sigma(g, h, MilnorClass(A.algebras[g * h], coeffs))


_WORKER = {}


def _worker_init(W, elements, nvars, order, local):
    G = SymmetryGroup(elements, nvars, order)
    _WORKER["A"] = TwistedAlgebra(W, G, local)


def _worker_sigma(task):
    A = _WORKER["A"]
    g, h = A.group[task[0]], A.group[task[1]]
    return A.sigma(g, h).coeffs


# ---------------------------------------------------------------------------
# structure-constant tables on the monomial basis and property checks
# ---------------------------------------------------------------------------

def shuffle_sign(I, J):
    """Sign of the permutation sorting the concatenation I + J (disjoint)."""
    inv = sum(1 for a in I for b in J if a > b)
    return -1 if inv % 2 else 1


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int = 0
    witness: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.witness})" if self.witness else ""
        return f"{status} {self.name}: {self.checked} cases{extra}"


def check_unit(A):
    n = 0
    for g in A.group:
        e = A.group.identity
        for a, b in ((e, g), (g, e)):
            n += 1
            s = A.sigma(a, b)
            if s != A.algebras[g].unit():
                return CheckResult("unit", False, n, f"sigma({a.label()},{b.label()}) = {s}")
    return CheckResult("unit", True, n)


def check_braided(A):
    """u cup v = (-1)^{|u||v|} v cup h^{-1}(u) on all sector-basis pairs."""
    B = A.basis()
    n = 0
    for g, m1, u in B:
        for h, m2, v in B:
            n += 1
            lhs = A.cup(u, v)
            rhs = A.cup(v, A.g_action(h.inverse(), u))
            if (g.d * h.d) % 2:
                rhs = -rhs
            if lhs != rhs:
                return CheckResult("braided", False, n,
                                   f"{u} cup {v}: {lhs} vs {rhs}")
    return CheckResult("braided", True, n)


def check_assoc(A, elements=None):
    """(u cup v) cup w = u cup (v cup w), t-exponents included."""
    B = [el for _, _, el in A.basis()] if elements is None else elements
    cache = {}

    def cup(a, b):
        key = (id(a), id(b))
        r = cache.get(key)
        if r is None:
            r = A.cup(a, b)
            cache[key] = r
        return r

    n = 0
    for u in B:
        for v in B:
            uv = cup(u, v)
            for w in B:
                n += 1
                vw = cup(v, w)
                lhs = A.cup(uv, w) if not uv.is_zero() else uv
                rhs = A.cup(u, vw) if not vw.is_zero() else vw
                if lhs != rhs:
                    return CheckResult("assoc", False, n, f"({u})({v})({w}): {lhs} vs {rhs}")
    return CheckResult("assoc", True, n)


def check_equivariance(A):
    B = A.basis()
    n = 0
    for k in A.group:
        for _, _, u in B:
            ku = A.g_action(k, u)
            for _, _, v in B:
                n += 1
                lhs = A.g_action(k, A.cup(u, v))
                rhs = A.cup(ku, A.g_action(k, v))
                if lhs != rhs:
                    return CheckResult("equivariance", False, n,
                                       f"k={k.label()} on {u} cup {v}")
    return CheckResult("equivariance", True, n)


def check_transversal(A):
    """sigma = shuffle sign of (I_g, I_h) whenever d_{g,h} = 0."""
    n = 0
    for g in A.group:
        for h in A.group:
            if pair_defect(g, h) != 0:
                continue
            n += 1
            alg = A.algebras[g * h]
            want = alg.unit().scale(shuffle_sign(g.moving, h.moving))
            if A.sigma(g, h) != want:
                return CheckResult("transversal", False, n, f"({g.label()},{h.label()})")
    return CheckResult("transversal", True, n)


def check_omega(A):
    """omega_e cap xi_g = omega_g and cap reuses the cup constants."""
    n = 0
    e = A.group.identity
    for g in A.group:
        n += 1
        if A.cap(A.omega(e), A.xi(g)) != A.omega(g):
            return CheckResult("omega", False, n, f"omega_e cap xi_{g.label()}")
    B = A.basis()
    for g, m1, u in B:
        w = TwistedElement(A, dict(u.terms), "omega")
        for h, m2, v in B:
            n += 1
            a = A.cap(w, v)
            b = A.cup(u, v)
            if a.terms != b.terms:
                return CheckResult("omega", False, n, f"{w} cap {v}")
    return CheckResult("omega", True, n)


def check_invariant_subalgebra(A):
    """The invariant part is closed under cup and super-commutative."""
    inv = A.invariant_basis()
    n = 0
    for g, _, u in inv:
        for h, _, v in inv:
            n += 1
            p = A.cup(u, v)
            for k in A.group:
                if A.g_action(k, p) != p:
                    return CheckResult("invariant_subalgebra", False, n, f"{u} cup {v} not invariant")
            q = A.cup(v, u)
            if (g.d * h.d) % 2:
                q = -q
            if p != q:
                return CheckResult("invariant_subalgebra", False, n, f"{u}, {v} do not supercommute")
    return CheckResult("invariant_subalgebra", True, n)


def check_braided_det_identity(A):
    """Compare sigma_{g^-1,g} with (-1)^{d_g} det(g) sigma_{g,g^-1} (derived from braiding).

    Also reports how many pairs satisfy the identity without the (-1)^{d_g} factor.
    """
    n = 0
    plain = 0
    for g in A.group:
        gi = g.inverse()
        s1, s2 = A.sigma(gi, g), A.sigma(g, gi)
        n += 1
        want = s2.scale(g.det() * (-1 if g.d % 2 else 1))
        if s1 != want:
            return CheckResult("det_identity", False, n, f"g={g.label()}")
        if s1 == s2.scale(g.det()):
            plain += 1
    return CheckResult("det_identity", True, n, f"{plain}/{n} also hold without the (-1)^d_g factor")


ALL_CHECKS = {
    "unit": check_unit,
    "braided": check_braided,
    "assoc": check_assoc,
    "equivariance": check_equivariance,
    "transversal": check_transversal,
    "omega": check_omega,
    "invariant_subalgebra": check_invariant_subalgebra,
    "det_identity": check_braided_det_identity,
}


# ---------------------------------------------------------------------------
# Kunneth
# ---------------------------------------------------------------------------

def shift_poly(f, offset, nvars, order):
    """Re-embed a block-x polynomial into nvars variables starting at x_{offset+1}."""
    from .scalars import embed_scalar
    out = {}
    for k, c in f.x_terms().items():
        e = [0] * nvars
        e[offset:offset + len(k)] = k
        out[tuple(e)] = embed_scalar(c, order)
    return MultiPoly.from_x_dict(out, nvars, order)


def direct_sum_model(W1, G1, W2, G2):
    """(W1 + W2, G1 x G2) on disjoint variables over a common cyclotomic field."""
    from math import lcm
    n1, n2 = W1.nvars, W2.nvars
    N = n1 + n2
    order = lcm(W1.order, W2.order, G1.order, G2.order)
    W = shift_poly(W1, 0, N, order) + shift_poly(W2, n1, N, order)
    s1, s2 = order // G1.order, order // G2.order
    elems = [GroupElement([a * s1 for a in g1.exponents] + [b * s2 for b in g2.exponents], order)
             for g1 in G1 for g2 in G2]
    return W, SymmetryGroup(elems, N, order)


@dataclass
class KunnethResult:
    tensor: TwistedAlgebra
    direct: TwistedAlgebra
    epsilon: dict
    dims_multiply: bool
    consistent: bool
    witness: str = ""
    pairs: dict = field(default_factory=dict)


def _split(g, n1, s1, s2, o1, o2):
    a = [x // s1 for x in g.exponents[:n1]]
    b = [x // s2 for x in g.exponents[n1:]]
    return GroupElement(a, o1), GroupElement(b, o2)


def _solve_gf2(equations, unknowns):
    """Solve sum of x_i = b over GF(2); equations are (set of unknowns, b). None if inconsistent."""
    idx = {u: i for i, u in enumerate(unknowns)}
    rows = []
    for vars_, b in equations:
        mask = 0
        for v in vars_:
            mask ^= 1 << idx[v]
        rows.append([mask, b])
    pivots = []
    r = 0
    for col in range(len(unknowns)):
        bit = 1 << col
        p = next((i for i in range(r, len(rows)) if rows[i][0] & bit), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][0] & bit:
                rows[i][0] ^= rows[r][0]
                rows[i][1] ^= rows[r][1]
        pivots.append(col)
        r += 1
    for mask, b in rows[r:]:
        if mask == 0 and b:
            return None
    sol = [0] * len(unknowns)
    for i, col in enumerate(pivots):
        sol[col] = rows[i][1]
    return {u: sol[idx[u]] for u in unknowns}


def kunneth(A1, A2, local="auto"):
    """Assemble M*(W1+W2, G1xG2) from the factors and match it to a direct computation.

    Generators correspond as xi_(g1,g2) <-> eps * xi_g1 (x) xi_g2; the tensor
    product carries the Koszul sign (-1)^{d_g2 d_h1}.  eps is solved over
    GF(2) from sigma_direct = eps_g eps_h eps_gh sigma_tensor.
    """
    W, G = direct_sum_model(A1.W, A1.group, A2.W, A2.group)
    direct = TwistedAlgebra(W, G, local)
    n1 = A1.W.nvars
    s1, s2 = G.order // A1.group.order, G.order // A2.group.order
    dims_ok = all(direct.algebras[g].dim ==
                  A1.algebras[_split(g, n1, s1, s2, A1.group.order, A2.group.order)[0]].dim *
                  A2.algebras[_split(g, n1, s1, s2, A1.group.order, A2.group.order)[1]].dim
                  for g in G)
    N = W.nvars
    raw = {}
    for g in G:
        g1, g2 = _split(g, n1, s1, s2, A1.group.order, A2.group.order)
        for h in G:
            h1, h2 = _split(h, n1, s1, s2, A1.group.order, A2.group.order)
            a, b = A1.sigma(g1, h1), A2.sigma(g2, h2)
            sign = -1 if (g2.d * h1.d) % 2 else 1
            p = shift_poly(a.to_poly(), 0, N, G.order) * shift_poly(b.to_poly(), n1, N, G.order)
            raw[(g, h)] = direct.algebras[g * h].class_of(p).scale(sign)
    equations = []
    witness = ""
    consistent = True
    for (g, h), t in raw.items():
        d = direct.sigma(g, h)
        if d.is_zero() and t.is_zero():
            continue
        if d == t:
            b = 0
        elif d == -t:
            b = 1
        else:
            consistent = False
            witness = f"sigma({g.label()},{h.label()}): direct {d} vs tensor {t}"
            break
        equations.append((_odd_vars(g, h, g * h), b))
    eps = None
    if consistent:
        sol = _solve_gf2(equations, list(G))
        if sol is None:
            consistent = False
            witness = "no sign assignment reconciles the tables"
        else:
            eps = {g: (-1 if sol[g] else 1) for g in G}
    table = {}
    if eps is not None:
        for (g, h), t in raw.items():
            table[(g, h)] = t.scale(eps[g] * eps[h] * eps[g * h])
    tensor = TwistedAlgebra(W, G, local, sigma_table=table, algebras=direct.algebras)
    return KunnethResult(tensor, direct, eps or {}, dims_ok, consistent, witness, raw)


def _odd_vars(*gs):
    """Unknowns appearing an odd number of times in eps_g + eps_h + eps_gh."""
    out = set()
    for g in gs:
        out ^= {g}
    return out
