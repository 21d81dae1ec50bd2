"""The twisted Jacobian algebra Jac'(W,G) of invertible polynomials and its comparison
with M*(X,W,G).

sigma'_{e,g} = sigma'_{g,e} = 1, sigma'_{g,g^-1} = exp(-pi i age(g)) * [det Hess_{I_g} W]_e
and sigma'_{g,h} = 0 otherwise.  exp(-pi i age(g)) = zeta_F^(-sum a_i / 2) for the
field order F, so the group exponents must all be even (doubled field).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import rank
from .orbifold import TwistedAlgebra
from .poly import MultiPoly, hessian_entry
from .scalars import CycScalar, embed_scalar, zeta_power
from .symmetry import GroupElement, SymmetryGroup


class NotInvertibleError(ValueError):
    """W is not an invertible polynomial."""


@dataclass(frozen=True)
class AtomicFactor:
    kind: str            # "fermat", "chain" or "loop"
    variables: tuple     # 1-based, in chain/loop order
    exponents: tuple

    def __str__(self):
        return f"{self.kind}({','.join(map(str, self.exponents))})"


def atomic_decompose(W):
    """Split an invertible W into Fermat, chain and loop blocks."""
    n = W.nvars
    monos = [k[:n] for k in W.terms]
    if any(any(k[n:]) for k in W.terms) or len(monos) != n:
        raise NotInvertibleError("W is not an invertible polynomial")
    partner, expo = {}, {}
    for m in monos:
        big = [i for i, e in enumerate(m) if e >= 2]
        ones = [i for i, e in enumerate(m) if e == 1]
        if len(big) == 1 and len(ones) <= 1 and sum(1 for e in m if e) == len(big) + len(ones):
            i = big[0]
        else:
            raise NotInvertibleError("W is not an invertible polynomial")
        if i in expo:
            raise NotInvertibleError("W is not an invertible polynomial")
        expo[i] = m[i]
        partner[i] = ones[0] if ones else None
    if rank([[e for e in m] for m in monos]) < n:
        raise NotInvertibleError("W is not an invertible polynomial")
    targets = [p for p in partner.values() if p is not None]
    if len(targets) != len(set(targets)):
        raise NotInvertibleError("W is not an invertible polynomial")
    seen = set()
    out = []
    # chains start at variables that are nobody's partner
    for start in range(n):
        if start in targets or start in seen:
            continue
        path = [start]
        while partner[path[-1]] is not None:
            path.append(partner[path[-1]])
        seen.update(path)
        kind = "fermat" if len(path) == 1 else "chain"
        out.append(AtomicFactor(kind, tuple(i + 1 for i in path), tuple(expo[i] for i in path)))
    for start in range(n):
        if start in seen:
            continue
        path = [start]
        while partner[path[-1]] != start:
            path.append(partner[path[-1]])
        seen.update(path)
        out.append(AtomicFactor("loop", tuple(i + 1 for i in path), tuple(expo[i] for i in path)))
    out.sort(key=lambda f: f.variables[0])
    return out


def hessian_det(W, indices):
    """det(d_i d_j W)_{i,j in indices} as a polynomial (Laplace expansion)."""
    idx = list(indices)
    n, order = W.nvars, W.order
    if not idx:
        return MultiPoly.constant(1, n, order)
    M = {(i, j): hessian_entry(W, i, j) for i in idx for j in idx}

    def det(rows, cols):
        if len(rows) == 1:
            return M[(rows[0], cols[0])]
        total = MultiPoly.zero(n, order)
        for c, col in enumerate(cols):
            e = M[(rows[0], col)]
            if not e:
                continue
            sub = det(rows[1:], cols[:c] + cols[c + 1:])
            term = e * sub
            total = total - term if c % 2 else total + term
        return total

    return det(idx, idx)


def double_field(W, group):
    """Re-embed (W, G) into Q(zeta_{2n}) with exponents doubled."""
    m = 2 * group.order
    Wd = MultiPoly(W.nvars, m, {k: embed_scalar(c, m) for k, c in W.terms.items()})
    elems = [GroupElement([2 * a for a in g.exponents], m) for g in group]
    return Wd, SymmetryGroup(elems, W.nvars, m)


def age_phase(g, indices=None):
    """exp(-pi i age(g)) in Q(zeta_F), optionally over a subset of the variables.

    Needs every exponent even, i.e. the doubled field order."""
    idx = range(1, g.nvars + 1) if indices is None else indices
    a = [g.exponents[i - 1] for i in idx]
    if any(v % 2 for v in a):
        raise ValueError("age phase needs the doubled field order (enable double_field)")
    return zeta_power(-sum(a) // 2, g.order)


class JacPrimeAlgebra(TwistedAlgebra):
    """Jac'(W,G): the sector skeleton of M* with the sigma' table.

    sigma' is assembled block by block over the atomic factors of W: each block
    contributes 1 when g or h is trivial on it, the age phase times the block
    Hessian when g and h are inverse on it, and kills the entry otherwise.
    Blocks are tensored with the Koszul sign of the dtheta generators.
    """

    def __init__(self, W, group, local="auto", algebras=None):
        super().__init__(W, group, local, algebras=algebras)
        self.factors = atomic_decompose(W)
        for g in group:
            for h in group:
                self._sigma[(g, h)] = self._entry(g, h)

    def _entry(self, g, h):
        W = self.W
        alg = self.algebras[g * h]
        gh_moving = set((g * h).moving)
        value = MultiPoly.constant(1, W.nvars, W.order)
        phase = CycScalar.one(W.order)
        sign = 0
        seen_g = 0
        for block in reversed(self.factors):
            B = set(block.variables)
            mg = [i for i in g.moving if i in B]
            mh = [i for i in h.moving if i in B]
            sign += len(mh) * seen_g
            seen_g += len(mg)
            if not mg or not mh:
                continue
            if gh_moving & B:
                return alg.zero()
            value = value * hessian_det(W, mg)
            phase = phase * age_phase(g, mg)
        c = alg.class_of(value).scale(phase)
        return -c if sign % 2 else c

    def sigma(self, g, h):
        return self._sigma[(g, h)]


def jac_prime(W, group, local="auto", algebras=None):
    return JacPrimeAlgebra(W, group, local, algebras)


@dataclass
class Verdict:
    kind: str                 # isomorphic_via_rescaling | vanishing_mismatch | inconclusive
    alpha: dict = field(default_factory=dict)
    witness: str = ""
    reason: str = ""

    def __str__(self):
        tail = self.witness or self.reason
        return self.kind + (f": {tail}" if tail else "")


def compare(M, J):
    """Test conditions A (vanishing pattern) and B (proportional inverse-pair constants)."""
    if set(M.group.elements) != set(J.group.elements):
        raise ValueError("the algebras are built over different groups")
    G = M.group
    e = G.identity
    for g in G:
        for h in G:
            a, b = M.sigma(g, h), J.sigma(g, h)
            if a.is_zero() != b.is_zero():
                return Verdict("vanishing_mismatch",
                               witness=f"sigma({g.label()},{h.label()}) is "
                                       f"{'zero' if a.is_zero() else 'nonzero'} in M* but "
                                       f"{'zero' if b.is_zero() else 'nonzero'} in Jac'")
    for g in G:
        for h in G:
            if e not in (g, h, g * h) and not J.sigma(g, h).is_zero():
                return Verdict("inconclusive",
                               reason=f"support includes ({g.label()},{h.label()}) beyond "
                                      "unit and inverse pairs; the rescaling argument does not apply")
    alpha = {e: M.sigma(e, e).ratio(J.sigma(e, e))}
    for g in G:
        if g == e:
            continue
        gi = g.inverse()
        a, b = M.sigma(g, gi), J.sigma(g, gi)
        if b.is_zero():
            return Verdict("inconclusive", reason=f"sigma'({g.label()},inverse) vanishes")
        r = a.ratio(b)
        if r is None:
            return Verdict("inconclusive",
                           reason=f"sigma({g.label()},inverse) is not proportional to sigma'")
        alpha[g] = r
    for g in G:
        if alpha[g] != alpha[g.inverse()]:
            return Verdict("inconclusive", alpha=alpha,
                           reason=f"alpha differs on {g.label()} and its inverse")
    return Verdict("isomorphic_via_rescaling", alpha=alpha)


def det_identity_report(A):
    """Per g: does sigma_{g^-1,g} = det(g) sigma_{g,g^-1} hold, and with the extra (-1)^{d_g}?"""
    out = {}
    for g in A.group:
        gi = g.inverse()
        s1, s2 = A.sigma(gi, g), A.sigma(g, gi)
        plain = s1 == s2.scale(g.det())
        signed = s1 == s2.scale(g.det() * (-1 if g.d % 2 else 1))
        out[g] = {"plain": plain, "signed": signed, "d": g.d}
    return out
