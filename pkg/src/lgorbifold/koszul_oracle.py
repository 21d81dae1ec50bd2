"""Independent checks through the twisted Koszul complexes of each sector.

For a sector g the complex is K[X] (x) K[dtheta] with differential
dKos(g) + t dcurv(g), where dKos(g) = sum_{i in I_g} (1 - g_i) x_i dtheta_i
and dcurv(g) = -sum_i grad_i(W)|_{y=g(x)} theta_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .clifford import (CliffordElement, act_on_dtheta, cl_mul, contract, exp_nilpotent,
                       upsilon, wedge)
from .linalg import sparse_rank
from .milnor import quasi_homogeneous_weights
from .orbifold import dtheta_monomial, h_w_restricted, h_wg, t_exponent
from .poly import X, Y, MultiPoly, nabla, substitute_diag
from .scalars import CycScalar


def _one(W):
    return MultiPoly.constant(1, W.nvars, W.order)


def d_kos(W, g):
    n = W.nvars
    terms = {}
    for i, f in zip(range(1, n + 1), g.factors()):
        if i in g.moving:
            terms[((), (i,))] = MultiPoly.var(i, n, W.order).scale(1 - f)
    return CliffordElement(n, terms)


def curv_coefficients(W, g):
    """{i: grad^{x->(x,y)}_i(W) at y = g(x)}."""
    out = {}
    for i in range(1, W.nvars + 1):
        c = substitute_diag(nabla(W, i, X, Y), Y, g, X)
        if c:
            out[i] = c
    return out


def d_curv(W, g, part="all"):
    """dcurv(g); part "moving" or "fixed" gives the split pieces dcurv' and dcurv''."""
    keep = {"all": None, "moving": set(g.moving), "fixed": set(g.fixed)}[part]
    terms = {}
    for i, c in curv_coefficients(W, g).items():
        if keep is None or i in keep:
            terms[((i,), ())] = -c
    return CliffordElement(W.nvars, terms)


def _tmul(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            p = cl_mul(x, y)
            if p:
                out[i + j] = out[i + j] + p if i + j in out else p
    return {k: v for k, v in out.items() if v}


@dataclass
class ConjugationResult:
    ok: bool
    witness: str = ""
    squares_to_zero: bool = True
    annihilates_generator: bool = True


def verify_conjugation(W, g):
    """Check dKos + t dcurv = e^{tH} (dKos + t dcurv'') e^{-tH} exactly, t kept as an exponent."""
    H = h_wg(W, g)
    one = _one(W)
    kos, curv, curv2 = d_kos(W, g), d_curv(W, g), d_curv(W, g, "fixed")
    lhs = {k: v for k, v in {0: kos, 1: curv}.items() if v}
    mid = {k: v for k, v in {0: kos, 1: curv2}.items() if v}
    ep = exp_nilpotent(H, one=one, track_t=True)
    em = exp_nilpotent(-H, one=one, track_t=True)
    rhs = _tmul(_tmul(ep, mid), em)
    witness = ""
    ok = True
    for t in sorted(set(lhs) | set(rhs)):
        a = lhs.get(t, CliffordElement.zero(W.nvars))
        b = rhs.get(t, CliffordElement.zero(W.nvars))
        if a != b:
            ok = False
            witness = f"t^{t}: lhs {a} != rhs {b}"
            break
    D = kos + curv
    sq = not cl_mul(D, D)
    gen = dtheta_monomial(g.moving, W)
    ann = not act_on_dtheta(kos + curv2, gen)
    return ConjugationResult(ok, witness, sq, ann)


# ---------------------------------------------------------------------------
# dimension oracle
# ---------------------------------------------------------------------------

@dataclass
class DimensionReport:
    even: int
    odd: int
    mode: str
    certified: bool
    details: dict = field(default_factory=dict)

    def total(self):
        return self.even + self.odd


def _differential_data(W, g):
    """[(kind, i, coefficient dict)] with kind 'wedge' (dKos) or 'contract' (dcurv)."""
    n = W.nvars
    ops = []
    for i, f in zip(range(1, n + 1), g.factors()):
        if i in g.moving:
            e = [0] * n
            e[i - 1] = 1
            ops.append(("wedge", i, {tuple(e): CycScalar.one(W.order) * (1 - f)}))
    for i, c in curv_coefficients(W, g).items():
        ops.append(("contract", i, {k: -v for k, v in c.x_terms().items()}))
    return ops


def _apply(ops, alpha, K):
    """delta(x^alpha dtheta_K) as {(beta, K'): coeff}."""
    out = {}
    for kind, i, coeffs in ops:
        if kind == "wedge":
            r = wedge((i,), K)
        else:
            r = contract(i, K)
        if r is None:
            continue
        K2, s = r
        for m, c in coeffs.items():
            beta = tuple(a + b for a, b in zip(alpha, m))
            key = (beta, K2)
            v = c if s == 1 else -c
            out[key] = out[key] + v if key in out else v
    return {k: v for k, v in out.items() if v}


def _subsets(n):
    for r in range(n + 1):
        yield from combinations(range(1, n + 1), r)


def _monomials_up_to_weight(w, bound):
    n = len(w)
    out = []

    def rec(i, prefix, acc):
        if i == n:
            out.append((tuple(prefix), acc))
            return
        e = 0
        while acc + e * w[i] <= bound:
            prefix.append(e)
            rec(i + 1, prefix, acc + e * w[i])
            prefix.pop()
            e += 1

    rec(0, [], Fraction(0))
    return out


def _monomials_up_to_degree(n, D):
    from .groebner import monomials_of_degree
    out = []
    for d in range(D + 1):
        out.extend(monomials_of_degree(n, d))
    return out


def sector_dimension_oracle(W, g, D=None, mode="auto"):
    """Z/2-graded cohomology dimensions of the sector complex (t = 1).

    Exact mode (W quasi-homogeneous): the differential has weight 1/2 once
    x_i has weight w_i and dtheta_i weight 1/2 - w_i, so the complex splits
    into finite weight pieces; all weights up to D / deg W are computed.
    Heuristic mode truncates by polynomial degree and reports whether the
    estimate stabilized between D - 1 and D.  Both modes see every critical
    point of W, not just the origin.
    """
    deg = W.degree()
    if D is None:
        D = 3 * deg
    weights = quasi_homogeneous_weights(W)
    if weights is not None and any(v is None for v in weights):
        weights = None
    if mode == "exact" and weights is None:
        raise ValueError("exact mode needs a quasi-homogeneous W")
    ops = _differential_data(W, g)
    if mode in ("auto", "exact") and weights is not None:
        return _exact_dimensions(W, ops, weights, Fraction(D, deg))
    return _heuristic_dimensions(W, ops, D)


def _exact_dimensions(W, ops, w, bound):
    n = W.nvars
    half = Fraction(1, 2)
    spaces = {}
    for K in _subsets(n):
        wk = sum((half - w[k - 1] for k in K), Fraction(0))
        for alpha, wa in _monomials_up_to_weight(w, bound + half - wk):
            lam = wa + wk
            spaces.setdefault(lam, []).append((alpha, K))
    ranks = {}

    def rank_from(lam, par):
        key = (lam, par)
        if key not in ranks:
            src = [b for b in spaces.get(lam, []) if len(b[1]) % 2 == par]
            rows = [{k: v for k, v in _apply(ops, *b).items()} for b in src]
            # column labels are hashable basis keys; map them to integers
            labels = {}
            rows2 = []
            for r in rows:
                rows2.append({labels.setdefault(k, len(labels)): v for k, v in r.items()})
            ranks[key] = sparse_rank(rows2)
        return ranks[key]

    even = odd = 0
    per_weight = {}
    for lam in sorted(spaces):
        if lam > bound:
            continue
        for par in (0, 1):
            dim = sum(1 for b in spaces[lam] if len(b[1]) % 2 == par)
            h = dim - rank_from(lam, par) - rank_from(lam - half, 1 - par)
            if h:
                per_weight[(str(lam), par)] = h
                if par:
                    odd += h
                else:
                    even += h
    return DimensionReport(even, odd, "exact", True, {"weights": [str(v) for v in w],
                                                      "max_weight": str(bound),
                                                      "per_weight": per_weight})


def _heuristic_dimensions(W, ops, D):
    n = W.nvars
    raise_deg = max([1] + [max(sum(m) for m in c) for kind, _, c in ops if c])
    history = []
    for d in (D - 1, D):
        counts = {}
        for par in (0, 1):
            src = [(a, K) for K in _subsets(n) if len(K) % 2 == par
                   for a in _monomials_up_to_degree(n, d)]
            img_src = [(a, K) for K in _subsets(n) if len(K) % 2 == 1 - par
                       for a in _monomials_up_to_degree(n, max(d - raise_deg, -1))
                       ] if d - raise_deg >= 0 else []
            r_out = _rank_of(ops, src)
            r_in = _rank_of(ops, img_src)
            counts[par] = len(src) - r_out - r_in
        history.append(counts)
    stable = history[0] == history[1]
    return DimensionReport(history[1][0], history[1][1], "heuristic", False,
                           {"stabilized": stable, "D": D, "history": history})


def _rank_of(ops, src):
    labels = {}
    rows = []
    for b in src:
        rows.append({labels.setdefault(k, len(labels)): v for k, v in _apply(ops, *b).items()})
    return sparse_rank(rows)


# ---------------------------------------------------------------------------
# chain-level cup product
# ---------------------------------------------------------------------------

def chain_cup_oracle(W, g, h, alg_gh, f1=None, f2=None):
    """sigma_{g,h} through the chain-level product of exponential-twist representatives.

    The product uses H_W(x, g(x), gh(x)) in the first slot (third block at
    gh(x) rather than x), is untwisted by e^{-H_{W,gh}}, and only the final
    dtheta_{I_gh} coefficient is reduced through the class map of M(W^{gh}).
    """
    d = t_exponent(g, h)
    if d is None:
        return alg_gh.zero()
    one = _one(W)
    gh = g * h
    E = exp_nilpotent(h_w_restricted(W, g, z=gh), one=one)
    q1 = act_on_dtheta(exp_nilpotent(h_wg(W, g), one=one), dtheta_monomial(g.moving, W))
    q2 = act_on_dtheta(exp_nilpotent(h_wg(W, h, shift=g), one=one), dtheta_monomial(h.moving, W))
    R = upsilon(E, q1, q2)
    R = act_on_dtheta(exp_nilpotent(-h_wg(W, gh), one=one), R)
    c = R.coefficient((), gh.moving)
    if c is None:
        return alg_gh.zero()
    if f1 is not None or f2 is not None:
        from .poly import act
        a = f1 if f1 is not None else one
        b = act(f2, g) if f2 is not None else one
        c = c * a * b
    return alg_gh.class_of(c)
