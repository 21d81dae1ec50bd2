"""Milnor algebras M(W^g) = K[X^g]/(d_i W^g) with their class maps.

M(W^g) is presented inside K[x_1..x_N] as the quotient by the ideal
(x_i : i in I_g) + (d_i W^g : i in I^g), so every sector shares one
polynomial ring and classes of g-twisted data are plain normal forms.
"""

from __future__ import annotations

from fractions import Fraction

from .groebner import (NonIsolatedError, StabilizationError, buchberger, is_origin_supported,
                       local_quotient_at_origin, quotient_basis)
from .linalg import solve
from .poly import MultiPoly, partial_derivative, res_g
from .scalars import CycScalar


class SectorError(NonIsolatedError):
    """The sector Milnor algebra is infinite dimensional."""


def quasi_homogeneous_weights(W, variables=None):
    """Weights w with every monomial of W of weight 1, or None.

    Only variables that occur in W are weighted; the solution must be
    unique and positive.
    """
    n = W.nvars
    if not W.terms:
        return None
    supp = sorted({k[:n] for k in W.terms})
    used = [i for i in range(n) if any(m[i] for m in supp)]
    if variables is not None:
        used = [i for i in used if i + 1 in variables]
    if not used:
        return None
    rows = [[Fraction(m[i]) for i in used] for m in supp]
    from .linalg import rank
    if rank(rows) < len(used):
        return None
    x = solve(rows, [Fraction(1)] * len(rows))
    if x is None or any(v <= 0 for v in x):
        return None
    w = [None] * n
    for i, v in zip(used, x):
        w[i] = v
    return w


class MilnorAlgebra:
    """Finite-dimensional algebra M(W^g) with a staircase monomial basis."""

    def __init__(self, W, g, gb, local):
        self.W = W
        self.sector = g
        self.gb = gb
        self.local = local
        self.nvars = W.nvars
        self.order = W.order
        self.basis = quotient_basis(gb)
        self.dim = len(self.basis)
        self._pos = {m: i for i, m in enumerate(self.basis)}

    def __repr__(self):
        return f"MilnorAlgebra(g={self.sector.label()}, dim={self.dim}, local={self.local})"

    # -- classes -----------------------------------------------------------

    def reduce_poly(self, f):
        """Normal form of res^g(f) as a polynomial in block x."""
        f = res_g(f, self.sector.moving)
        r = self.gb.reduce_raw(f.x_terms())
        return MultiPoly.from_x_dict(r, self.nvars, self.order)

    def class_of(self, f):
        f = res_g(f, self.sector.moving)
        return self._from_raw(self.gb.reduce_raw(f.x_terms()))

    def _from_raw(self, r):
        zero = CycScalar.zero(self.order)
        coeffs = [zero] * self.dim
        for m, c in r.items():
            if not isinstance(c, CycScalar):
                c = CycScalar.rational(c, self.order)
            coeffs[self._pos[m]] = c
        return MilnorClass(self, tuple(coeffs))

    def unit(self):
        return self.class_of(MultiPoly.constant(1, self.nvars, self.order))

    def zero(self):
        return MilnorClass(self, (CycScalar.zero(self.order),) * self.dim)

    def basis_class(self, i):
        zero, one = CycScalar.zero(self.order), CycScalar.one(self.order)
        return MilnorClass(self, tuple(one if j == i else zero for j in range(self.dim)))

    def monomial_poly(self, m):
        return MultiPoly.from_x_dict({m: 1}, self.nvars, self.order)

    def character_exponent(self, h, m):
        """Exponent of the character of h on the basis monomial m."""
        return h.character_exponent(m)


class MilnorClass:
    """A vector over the staircase basis; always in normal form."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg, coeffs):
        self.alg = alg
        self.coeffs = tuple(coeffs)

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, MilnorClass):
            return NotImplemented
        return self.alg is other.alg and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def _check(self, other):
        if other.alg is not self.alg:
            raise ValueError("classes live in different Milnor algebras")

    def __add__(self, other):
        self._check(other)
        return MilnorClass(self.alg, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return MilnorClass(self.alg, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return MilnorClass(self.alg, [-a for a in self.coeffs])

    def scale(self, c):
        return MilnorClass(self.alg, [a * c for a in self.coeffs])

    def to_poly(self):
        alg = self.alg
        return MultiPoly.from_x_dict({m: c for m, c in zip(alg.basis, self.coeffs) if c},
                                     alg.nvars, alg.order)

    def __mul__(self, other):
        if isinstance(other, MilnorClass):
            self._check(other)
            return self.alg.class_of(self.to_poly() * other.to_poly())
        return self.scale(other)

    def ratio(self, other):
        """The scalar c with self = c * other, or None if not proportional."""
        if other.is_zero():
            return None
        c = None
        for a, b in zip(self.coeffs, other.coeffs):
            if b:
                q = a / b
                if c is None:
                    c = q
                elif q != c:
                    return None
            elif a:
                return None
        return c

    def __repr__(self):
        return f"MilnorClass({self})"

    def __str__(self):
        from .poly import format_poly
        return format_poly(self.to_poly())


def sector_generators(W, g):
    """Ideal generators presenting M(W^g) inside K[x_1..x_N]."""
    n = W.nvars
    Wg = res_g(W, g.moving)
    gens = [MultiPoly.var(i, n, W.order) for i in g.moving]
    gens += [partial_derivative(Wg, i) for i in g.fixed]
    return [f for f in gens if f], Wg


def build_sector_algebra(W, g, local="auto", d_max=None):
    """M(W^g); local in {"auto", "on", "off"} (booleans accepted)."""
    if local is True:
        local = "on"
    elif local is False:
        local = "off"
    if local not in ("auto", "on", "off"):
        raise ValueError(f"local mode must be auto, on or off, not {local!r}")
    gens, Wg = sector_generators(W, g)
    if not gens:
        raise SectorError(f"non-isolated singularity in sector {g.label()}")
    if local == "on":
        gb = local_quotient_at_origin(gens, d_max=d_max)
        return MilnorAlgebra(W, g, gb, True)
    gb = buchberger(gens)
    try:
        quotient_basis(gb)
        finite = True
    except NonIsolatedError:
        finite = False
    if local == "off":
        if not finite:
            raise SectorError(f"non-isolated singularity in sector {g.label()}")
        return MilnorAlgebra(W, g, gb, False)
    if finite and (quasi_homogeneous_weights(Wg, g.fixed) is not None or is_origin_supported(gb)):
        return MilnorAlgebra(W, g, gb, False)
    try:
        gb = local_quotient_at_origin(gens, d_max=d_max)
    except (NonIsolatedError, StabilizationError) as exc:
        raise SectorError(f"non-isolated singularity in sector {g.label()}: {exc}") from exc
    return MilnorAlgebra(W, g, gb, True)


def g_act(h, c):
    """Natural action of h on a class: each basis monomial scales by its character."""
    alg = c.alg
    return MilnorClass(alg, [a * h.character(m) if a else a for m, a in zip(alg.basis, c.coeffs)])
