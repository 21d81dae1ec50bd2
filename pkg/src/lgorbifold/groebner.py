"""Buchberger's algorithm, normal forms and monomial quotient bases.

Internally polynomials are plain dicts {exponent tuple of length N: coeff}
in block x.  When every input coefficient is rational the computation runs
over Fraction, which is much cheaper than generic cyclotomic arithmetic; a
Groebner basis over Q is also one over Q(zeta_n).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .poly import MultiPoly, grevlex_key
from .scalars import CycScalar


class NonIsolatedError(ArithmeticError):
    """The quotient by the ideal is not finite dimensional."""


class StabilizationError(ArithmeticError):
    """The local quotient did not stabilize before the degree cap."""


# ---------------------------------------------------------------------------
# raw dict helpers
# ---------------------------------------------------------------------------

def _lm(f):
    return max(f, key=grevlex_key)


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_exp(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _monic(f):
    m = _lm(f)
    c = f[m]
    if c == 1:
        return dict(f)
    inv = 1 / c
    return {k: v * inv for k, v in f.items()}


def _to_raw(p, rational):
    d = p.x_terms()
    if rational:
        return {k: c.to_fraction() for k, c in d.items()}
    return dict(d)


class _Reducer:
    """Reduction against a list of monic polynomials, keyed by leading monomial."""

    def __init__(self, polys):
        self.items = []
        for g in polys:
            lm = _lm(g)
            tail = [(k, v) for k, v in g.items() if k != lm]
            self.items.append((lm, tail))

    def reduce(self, f, full=True):
        f = dict(f)
        heap = [tuple(-x for x in grevlex_key(k)) + (k,) for k in f]
        heapq.heapify(heap)
        queued = set(f)
        rem = {}
        while heap:
            entry = heapq.heappop(heap)
            m = entry[-1]
            queued.discard(m)
            c = f.pop(m, None)
            if c is None or not c:
                continue
            for lm, tail in self.items:
                if _divides(lm, m):
                    q = _sub_exp(m, lm)
                    for k, v in tail:
                        k2 = _add_exp(k, q)
                        s = f.get(k2)
                        if s is None:
                            f[k2] = -c * v
                        else:
                            s = s - c * v
                            if s:
                                f[k2] = s
                            else:
                                del f[k2]
                                continue
                        if k2 not in queued:
                            queued.add(k2)
                            heapq.heappush(heap, tuple(-x for x in grevlex_key(k2)) + (k2,))
                    break
            else:
                rem[m] = c
                if not full:
                    rem.update(f)
                    return rem
        return rem


def _spoly(f, g, lf, lg):
    L = _lcm(lf, lg)
    a, b = _sub_exp(L, lf), _sub_exp(L, lg)
    out = {}
    for k, v in f.items():
        out[_add_exp(k, a)] = v
    for k, v in g.items():
        k2 = _add_exp(k, b)
        s = out.get(k2)
        if s is None:
            out[k2] = -v
        else:
            s = s - v
            if s:
                out[k2] = s
            else:
                del out[k2]
    return out


def _update(G, lms, P, f, lf):
    """Gebauer-Moeller pair update when f (leading monomial lf) joins G."""
    P = {p for p in P if (not _divides(lf, _lcm(lms[p[0]], lms[p[1]]))
                          or _lcm(lms[p[0]], lms[p[1]]) == _lcm(lms[p[0]], lf)
                          or _lcm(lms[p[0]], lms[p[1]]) == _lcm(lms[p[1]], lf))}
    new = len(G)
    by_lcm = {}
    for i in range(len(G)):
        by_lcm.setdefault(_lcm(lms[i], lf), []).append(i)
    minimal = []
    for L in sorted(by_lcm, key=grevlex_key):
        if all(not _divides(M, L) for M in minimal):
            minimal.append(L)
    for L in minimal:
        idx = by_lcm[L]
        # coprime leading monomials: the pair reduces to zero
        if any(_lcm(lms[i], lf) == _add_exp(lms[i], lf) for i in idx):
            continue
        P.add((min(idx), new))
    G.append(f)
    lms.append(lf)
    return P


def _buchberger_raw(F):
    G, lms, P = [], [], set()
    for f in F:
        if f:
            f = _monic(f)
            P = _update(G, lms, P, f, _lm(f))
    while P:
        i, j = min(P, key=lambda p: (sum(_lcm(lms[p[0]], lms[p[1]])),
                                     grevlex_key(_lcm(lms[p[0]], lms[p[1]])), p))
        P.remove((i, j))
        s = _spoly(G[i], G[j], lms[i], lms[j])
        r = _Reducer(G).reduce(s)
        if r:
            r = _monic(r)
            P = _update(G, lms, P, r, _lm(r))
    # minimalize then interreduce
    order = sorted(range(len(G)), key=lambda i: grevlex_key(lms[i]))
    keep = []
    for i in order:
        if all(not _divides(lms[j], lms[i]) for j in keep):
            keep.append(i)
    Gmin = [G[i] for i in keep]
    out = []
    for i, g in enumerate(Gmin):
        others = Gmin[:i] + Gmin[i + 1:]
        lm = _lm(g)
        r = {lm: g[lm]}
        tail = {k: v for k, v in g.items() if k != lm}
        r.update(_Reducer(others).reduce(tail) if others else tail)
        out.append(_monic(r))
    out.sort(key=lambda g: grevlex_key(_lm(g)))
    return out


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------

@dataclass
class GroebnerBasis:
    """Reduced, monic Groebner basis for grevlex with x_1 > x_2 > ...."""

    nvars: int
    field_order: int
    raw: list
    rational: bool
    order_tag: str = "grevlex"
    _reducer: _Reducer = field(default=None, repr=False)
    _basis: list = field(default=None, repr=False)

    def __post_init__(self):
        self._reducer = _Reducer(self.raw)

    @property
    def generators(self):
        return [_from_raw(g, self.nvars, self.field_order) for g in self.raw]

    def leading_monomials(self):
        return [_lm(g) for g in self.raw]

    def reduce_raw(self, f):
        """Normal form of a raw dict {exps: coeff}."""
        return self._reducer.reduce(f)


def _from_raw(d, nvars, order):
    terms = {}
    for k, c in d.items():
        if not isinstance(c, CycScalar):
            c = CycScalar.rational(c, order)
        terms[k] = c
    return MultiPoly.from_x_dict(terms, nvars, order)


def buchberger(gens, nvars=None, field_order=None):
    """Reduced Groebner basis of the ideal generated by `gens` (block x)."""
    gens = list(gens)
    if gens:
        nvars = gens[0].nvars
        field_order = gens[0].order
    if nvars is None or field_order is None:
        raise ValueError("empty generator list needs nvars and field_order")
    rational = all(c.is_rational() for g in gens for c in g.terms.values())
    F = [_to_raw(g, rational) for g in gens]
    return GroebnerBasis(nvars, field_order, _buchberger_raw(F), rational)


def normal_form(f, gb):
    """Remainder of f on division by gb; a polynomial supported on the staircase."""
    r = gb.reduce_raw(f.x_terms())
    return _from_raw(r, gb.nvars, gb.field_order)


def normal_form_raw(d, gb):
    return gb.reduce_raw(d)


def quotient_basis(gb):
    """Staircase monomials (not divisible by any leading monomial), sorted."""
    if gb._basis is not None:
        return list(gb._basis)
    n = gb.nvars
    lms = gb.leading_monomials()
    if any(not any(m) for m in lms):
        gb._basis = []
        return []
    bounds = []
    for i in range(n):
        pure = [m[i] for m in lms if m[i] and all(m[j] == 0 for j in range(n) if j != i)]
        if not pure:
            raise NonIsolatedError(
                f"non-isolated critical locus: no pure power of x{i + 1} among leading terms")
        bounds.append(min(pure))
    out = []

    def walk(i, prefix):
        if i == n:
            mono = tuple(prefix)
            if not any(_divides(m, mono) for m in lms):
                out.append(mono)
            return
        for e in range(bounds[i]):
            prefix.append(e)
            walk(i + 1, prefix)
            prefix.pop()

    walk(0, [])
    out.sort(key=grevlex_key)
    gb._basis = out
    return list(out)


def monomials_of_degree(nvars, D):
    out = []
    for combo in combinations_with_replacement(range(nvars), D):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def local_quotient_at_origin(gens, d_max=None, nvars=None, field_order=None, d_start=1):
    """Groebner basis presenting the local algebra of the ideal at the origin.

    Computes GB(gens + all monomials of degree D) for D = d_start, d_start+1, ...
    and stops once two consecutive D give the same staircase.  Equality
    J + m^D = J + m^(D+1) forces m^D into the localized ideal (Nakayama), so the
    answer is exact, not a heuristic.
    """
    gens = list(gens)
    if gens:
        nvars = gens[0].nvars
        field_order = gens[0].order
    if d_max is None:
        deg = max((g.degree() for g in gens), default=1)
        d_max = 4 * (deg + 1)
    rational = all(c.is_rational() for g in gens for c in g.terms.values())
    F = [_to_raw(g, rational) for g in gens]
    one = Fraction(1) if rational else CycScalar.one(field_order)
    prev_dim, prev_gb = None, None
    for D in range(d_start, d_max + 1):
        pad = [{m: one} for m in monomials_of_degree(nvars, D)]
        gb = GroebnerBasis(nvars, field_order, _buchberger_raw(F + pad), rational)
        dim = len(quotient_basis(gb))
        if prev_dim is not None and dim == prev_dim:
            return prev_gb
        prev_dim, prev_gb = dim, gb
    raise StabilizationError(
        f"local quotient did not stabilize up to degree {d_max} (last dimension {prev_dim})")


def is_origin_supported(gb):
    """True when every variable is nilpotent in the (finite) quotient."""
    dim = len(quotient_basis(gb))
    if dim == 0:
        return True
    n = gb.nvars
    one = Fraction(1) if gb.rational else CycScalar.one(gb.field_order)
    for i in range(n):
        e = [0] * n
        e[i] = dim
        if gb.reduce_raw({tuple(e): one}):
            return False
    return True
