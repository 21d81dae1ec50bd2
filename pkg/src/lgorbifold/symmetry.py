"""Finite abelian diagonal symmetry groups of a potential W."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import MultiPoly, format_poly
from .scalars import zeta_power


class SymmetryError(ValueError):
    """A proposed generator does not preserve W, or the data is inconsistent."""


class GroupElement:
    """g = (zeta^a_1, ..., zeta^a_N) acting by x_i -> zeta^a_i x_i."""

    __slots__ = ("exponents", "order")

    def __init__(self, exponents, order):
        self.exponents = tuple(int(a) % order for a in exponents)
        self.order = order

    @classmethod
    def identity(cls, nvars, order):
        return cls((0,) * nvars, order)

    @property
    def nvars(self):
        return len(self.exponents)

    def factors(self):
        return [zeta_power(a, self.order) for a in self.exponents]

    def __mul__(self, other):
        return GroupElement([a + b for a, b in zip(self.exponents, other.exponents)], self.order)

    def inverse(self):
        return GroupElement([-a for a in self.exponents], self.order)

    def __pow__(self, k):
        return GroupElement([a * k for a in self.exponents], self.order)

    def is_identity(self):
        return not any(self.exponents)

    @property
    def fixed(self):
        """I^g as 1-based indices."""
        return tuple(i + 1 for i, a in enumerate(self.exponents) if a == 0)

    @property
    def moving(self):
        """I_g as 1-based indices."""
        return tuple(i + 1 for i, a in enumerate(self.exponents) if a != 0)

    @property
    def d(self):
        return len(self.moving)

    def age(self):
        return sum((Fraction(a, self.order) for a in self.exponents), Fraction(0))

    def det(self):
        return zeta_power(sum(self.exponents), self.order)

    def character(self, exps):
        """The scalar by which g multiplies the monomial x^exps."""
        return zeta_power(sum(a * e for a, e in zip(self.exponents, exps)), self.order)

    def character_exponent(self, exps):
        return sum(a * e for a, e in zip(self.exponents, exps)) % self.order

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.exponents == other.exponents \
            and self.order == other.order

    def __hash__(self):
        return hash((self.exponents, self.order))

    def __lt__(self, other):
        return self.exponents < other.exponents

    def __repr__(self):
        return f"GroupElement({list(self.exponents)}, n={self.order})"

    def label(self):
        return "e" if self.is_identity() else "(" + ",".join(map(str, self.exponents)) + ")"


@dataclass(frozen=True)
class SectorData:
    g: GroupElement
    fixed: tuple
    moving: tuple
    d: int
    age: Fraction


def sector_data(g):
    return SectorData(g, g.fixed, g.moving, g.d, g.age())


def pair_defect(g, h):
    """d_{g,h} = (d_g + d_h - d_{gh}) / 2 as an exact rational."""
    return Fraction(g.d + h.d - (g * h).d, 2)


def check_invariance(W, g):
    """Raise SymmetryError naming the first monomial of W not fixed by g."""
    for key, c in W.sorted_terms():
        exps = key[:W.nvars]
        if g.character_exponent(exps) != 0:
            mono = format_poly(MultiPoly(W.nvars, W.order, {key: c}))
            raise SymmetryError(f"generator {list(g.exponents)} does not preserve W: "
                                f"monomial {mono} picks up a nontrivial root of unity")


class SymmetryGroup:
    """A fully enumerated group, sorted lexicographically; identity first."""

    def __init__(self, elements, nvars, order):
        self.elements = sorted(set(elements), key=lambda g: g.exponents)
        self.nvars = nvars
        self.order = order
        self._index = {g: i for i, g in enumerate(self.elements)}
        if not self.elements or not self.elements[0].is_identity():
            raise SymmetryError("group must contain the identity")
        for g in self.elements:
            for h in self.elements:
                if g * h not in self._index:
                    raise SymmetryError("element set is not closed under multiplication")

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def __contains__(self, g):
        return g in self._index

    def index(self, g):
        return self._index[g]

    @property
    def identity(self):
        return self.elements[0]

    def mul_index(self, i, j):
        return self._index[self.elements[i] * self.elements[j]]

    def inverse_index(self, i):
        return self._index[self.elements[i].inverse()]

    def product(self, other):
        """Direct product acting on disjoint variable sets (field orders must match)."""
        if self.order != other.order:
            raise SymmetryError("direct product needs a common field order")
        elems = [GroupElement(a.exponents + b.exponents, self.order)
                 for a in self.elements for b in other.elements]
        return SymmetryGroup(elems, self.nvars + other.nvars, self.order)


def generate_group(generators, n, W, field_order=None):
    """Close the generators (exponent vectors mod n) under multiplication.

    If field_order is a multiple of n the exponents are rescaled so that the
    group lives in Q(zeta_field_order).
    """
    N = W.nvars
    if field_order is None:
        field_order = W.order
    if field_order % n:
        raise SymmetryError(f"field order {field_order} is not a multiple of {n}")
    scale = field_order // n
    gens = []
    for v in generators:
        if len(v) != N:
            raise SymmetryError(f"generator {list(v)} has {len(v)} entries, expected {N}")
        g = GroupElement([a * scale for a in v], field_order)
        check_invariance(W, g)
        gens.append(g)
    e = GroupElement.identity(N, field_order)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return SymmetryGroup(seen, N, field_order)


def maximal_diagonal_exponents(W, n):
    """Every exponent vector v mod n with W(zeta_n^v x) = W(x), by brute force."""
    from itertools import product
    N = W.nvars
    supp = [k[:N] for k in W.terms]
    return [v for v in product(range(n), repeat=N)
            if all(sum(a * e for a, e in zip(v, m)) % n == 0 for m in supp)]
