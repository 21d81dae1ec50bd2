"""Preset LG orbifolds and the genus-g surface presentation check."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .orbifold import TwistedAlgebra, t_exponent
from .poly import parse_poly
from .scalars import zeta_power
from .symmetry import GroupElement, generate_group


@dataclass
class Model:
    name: str
    W: object
    group: object
    generators: list = field(default_factory=list)


def _model(name, text, nvars, order, gens):
    W = parse_poly(text, nvars, order)
    return Model(name, W, generate_group(gens, order, W), gens)


def fermat(a=3):
    """x^a with Z/a."""
    return _model(f"fermat({a})", f"x^{a}", 1, a, [[1]])


def fermat_pair(a=3):
    """x1^a + x2^a with Z/a x Z/a."""
    return _model(f"fermat({a})+fermat({a})", f"x1^{a}+x2^{a}", 2, a, [[1, 0], [0, 1]])


def chain(a1, a2):
    """x1^a1 x2 + x2^a2 with its maximal diagonal group, generated by (1, -a1) mod a1 a2."""
    n = a1 * a2
    return _model(f"chain({a1},{a2})", f"x1^{a1}*x2+x2^{a2}", 2, n, [[1, -a1]])


def loop(a1, a2):
    """x1^a1 x2 + x2^a2 x1 with its maximal diagonal group."""
    n = a1 * a2 - 1
    return _model(f"loop({a1},{a2})", f"x1^{a1}*x2+x2^{a2}*x1", 2, n, [[1, -a1]])


def surface(genus):
    """x1^m + x2^m + x3^m - x1 x2 x3 with m = 2g+1 and the Z/m generated by (1, 1, -2)."""
    if genus < 2:
        raise ValueError("genus must be at least 2")
    m = 2 * genus + 1
    return _model(f"surface({genus})", f"x1^{m}+x2^{m}+x3^{m}-x1*x2*x3", 3, m, [[1, 1, -2]])


PRESETS = {
    "fermat3": fermat,
    "fermat3x3": fermat_pair,
    "chain33": lambda: chain(3, 3),
    "chain34": lambda: chain(3, 4),
    "chain43": lambda: chain(4, 3),
    "loop22": lambda: loop(2, 2),
    "surface2": lambda: surface(2),
    "surface3": lambda: surface(3),
}


# ---------------------------------------------------------------------------
# genus-g surface
# ---------------------------------------------------------------------------

@dataclass
class SurfaceReport:
    genus: int
    milnor_dim: int
    invariant_dims: dict
    c: dict                   # k -> c_k with sigma(zeta^k, zeta^-k) = c_k phi
    closed_form: dict         # k -> 1 / ((1 - z^k)^2 (1 - z^-2k))
    relations: dict           # relation name -> bool
    witness: dict             # generator -> image in H*(S)

    @property
    def isomorphic(self):
        return all(self.relations.values()) and all(self.c.values())


def surface_closed_form(k, m):
    z = zeta_power(k, m)
    return 1 / ((1 - z) ** 2 * (1 - z ** -2))


def surface_report(genus, A=None, jobs=1):
    """Check the invariant algebra against H*(S): 1, gamma, alpha_k, beta_k.

    The assignment is xi_e -> 1, phi xi_e -> gamma, xi_k^+ -> alpha_k and
    xi_k^- -> c_k beta_k, with phi = x1 x2 x3 and sigma(zeta^k, zeta^-k) = c_k phi.
    """
    mdl = surface(genus)
    m = 2 * genus + 1
    if A is None:
        A = TwistedAlgebra(mdl.W, mdl.group)
    A.sigma_table(jobs)
    e = mdl.group.identity
    M = A.algebras[e]
    phi = M.class_of(parse_poly("x1*x2*x3", 3, m))
    gens = {k: GroupElement([k, k, -2 * k], m) for k in range(1, genus + 1)}
    xi = {}
    for k, g in gens.items():
        xi[("+", k)] = A.xi(g)
        xi[("-", k)] = A.xi(g.inverse())
    c = {k: A.sigma(g, g.inverse()).ratio(phi) for k, g in gens.items()}
    Phi = A.element(e, phi.to_poly())
    zero = A.zero()
    rel = {}
    rel["phi^2=0"] = A.cup(Phi, Phi) == zero
    rel["phi xi=0"] = all(A.cup(Phi, v) == zero and A.cup(v, Phi) == zero for v in xi.values())
    ok_triv = True
    ok_pair = True
    for (s1, k), (s2, l) in product(xi, xi):
        p = A.cup(xi[(s1, k)], xi[(s2, l)])
        if s1 == s2 or k != l:
            ok_triv &= p == zero
        else:
            ck = c[k]
            g = gens[k] if s1 == "+" else gens[k].inverse()
            top = A.element(e, phi.to_poly(), t=t_exponent(g, g.inverse()))
            ok_pair &= ck is not None and p == top.scale(ck if s1 == "+" else -ck)
    rel["xi xi=0 off pairs"] = ok_triv
    rel["xi+ xi- = c phi"] = ok_pair
    rel["phi invariant"] = all(A.g_action(h, Phi) == Phi for h in mdl.group)
    inv = A.invariant_dims()
    witness = {"xi_e": "1", "phi xi_e": "gamma"}
    for k in gens:
        witness[f"xi+_{k}"] = f"alpha_{k}"
        witness[f"xi-_{k}"] = f"({c[k]}) beta_{k}"
    return SurfaceReport(genus, M.dim, inv, c,
                         {k: surface_closed_form(k, m) for k in gens}, rel, witness)
