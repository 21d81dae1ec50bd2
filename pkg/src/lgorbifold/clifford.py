"""The Clifford algebra Cl_N on theta_i, dtheta_i with polynomial coefficients.

Relations: theta_i theta_j = -theta_j theta_i, dtheta_i dtheta_j = -dtheta_j dtheta_i,
dtheta_i theta_j = -theta_j dtheta_i + delta_ij.  Degrees |theta| = -1, |dtheta| = +1.

A monomial is a pair (J, K) of ascending index tuples meaning theta_J * dtheta_K
(theta letters first).  K[dtheta] = Cl/Cl<theta> and K[theta] = Cl/Cl<dtheta> are
left modules: on K[dtheta] theta_i contracts, on K[theta] dtheta_i contracts.
Coefficients can be anything with ring operators (MultiPoly, CycScalar, ...).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

# letters: (0, i) = theta_i, (1, i) = dtheta_i


def _key(letter, dtheta_first):
    kind, i = letter
    return ((1 - kind) if dtheta_first else kind, i)


@lru_cache(maxsize=None)
def normal_order(word, dtheta_first=False):
    """Rewrite a word of letters as {sorted word: integer coefficient}.

    With dtheta_first=False the target order is theta letters (ascending)
    followed by dtheta letters (ascending); otherwise the reverse grouping.
    Uses only the defining anticommutation relations.
    """
    for p in range(len(word) - 1):
        a, b = word[p], word[p + 1]
        ka, kb = _key(a, dtheta_first), _key(b, dtheta_first)
        if ka < kb:
            continue
        if a == b:
            return {}
        out = {}
        swapped = word[:p] + (b, a) + word[p + 2:]
        for w, c in normal_order(swapped, dtheta_first).items():
            out[w] = out.get(w, 0) - c
        if a[1] == b[1] and a[0] != b[0]:
            # theta_i dtheta_i + dtheta_i theta_i = 1
            for w, c in normal_order(word[:p] + word[p + 2:], dtheta_first).items():
                out[w] = out.get(w, 0) + c
        return {w: c for w, c in out.items() if c}
    return {word: 1}


def _word(J, K):
    return tuple((0, j) for j in J) + tuple((1, k) for k in K)


def _split(word):
    J = tuple(i for kind, i in word if kind == 0)
    K = tuple(i for kind, i in word if kind == 1)
    return J, K


@lru_cache(maxsize=None)
def mono_mul(m1, m2):
    """Product of two normal-ordered monomials as ((J, K), sign) pairs."""
    word = _word(*m1) + _word(*m2)
    return tuple((_split(w), c) for w, c in normal_order(word).items())


@lru_cache(maxsize=None)
def wedge(A, B):
    """theta_A * theta_B (or dtheta_A * dtheta_B) -> (merged tuple, sign) or None."""
    if set(A) & set(B):
        return None
    sign = 1
    for a in A:
        for b in B:
            if a > b:
                sign = -sign
    return tuple(sorted(A + B)), sign


@lru_cache(maxsize=None)
def contract(i, K):
    """theta_i acting on dtheta_K (or dtheta_i on theta_K): (K minus i, sign) or None."""
    if i not in K:
        return None
    t = K.index(i)
    return K[:t] + K[t + 1:], (-1) ** t


@lru_cache(maxsize=None)
def contract_word(J, K):
    """theta_J acting on dtheta_K: letters act right-to-left."""
    sign = 1
    for j in reversed(J):
        r = contract(j, K)
        if r is None:
            return None
        K, s = r
        sign *= s
    return K, sign


def _acc(out, key, c):
    s = out.get(key)
    if s is None:
        out[key] = c
    else:
        s = s + c
        if s:
            out[key] = s
        else:
            del out[key]


class CliffordElement:
    """Sum of coeff * theta_J dtheta_K."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        for (J, K), c in (terms or {}).items():
            J, K = tuple(J), tuple(K)
            if list(J) != sorted(set(J)) or list(K) != sorted(set(K)):
                raise ValueError("index tuples must be strictly ascending")
            if c:
                self.terms[(J, K)] = c

    @classmethod
    def _raw(cls, nvars, terms):
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def monomial(cls, J, K, coeff, nvars):
        return cls(nvars, {(tuple(J), tuple(K)): coeff})

    @classmethod
    def theta(cls, i, coeff, nvars):
        return cls.monomial((i,), (), coeff, nvars)

    @classmethod
    def dtheta(cls, i, coeff, nvars):
        return cls.monomial((), (i,), coeff, nvars)

    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return CliffordElement._raw(self.nvars, out)

    def __neg__(self):
        return CliffordElement._raw(self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        out = {}
        for k, v in self.terms.items():
            v = v * c
            if v:
                out[k] = v
        return CliffordElement._raw(self.nvars, out)

    def map_coeffs(self, fn):
        out = {}
        for k, v in self.terms.items():
            v = fn(v)
            if v:
                out[k] = v
        return CliffordElement._raw(self.nvars, out)

    def __mul__(self, other):
        if not isinstance(other, CliffordElement):
            return self.scale(other)
        return cl_mul(self, other)

    def degrees(self):
        return {len(K) - len(J) for (J, K) in self.terms}

    def is_theta_only(self):
        return all(not K for (J, K) in self.terms)

    def is_dtheta_only(self):
        return all(not J for (J, K) in self.terms)

    def coefficient(self, J, K, default=None):
        return self.terms.get((tuple(J), tuple(K)), default)

    def __repr__(self):
        return f"CliffordElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (J, K), c in sorted(self.terms.items(), key=lambda kv: (len(kv[0][0]) + len(kv[0][1]), kv[0])):
            mono = "".join(f"t{j}" for j in J) + "".join(f"d{k}" for k in K)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def cl_mul(a, b):
    """Product in Cl_N with full normal ordering."""
    if a.nvars != b.nvars:
        raise ValueError("Clifford elements of different rank")
    out = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            c = c1 * c2
            if not c:
                continue
            for m, s in mono_mul(m1, m2):
                _acc(out, m, c if s == 1 else (-c if s == -1 else c * s))
    return CliffordElement._raw(a.nvars, out)


def act_on_dtheta(p, q):
    """Left action of a Cl_N element p on q in K[dtheta] = Cl/Cl<theta>.

    dtheta letters multiply, theta letters contract (the t-th element of K
    contributes the sign (-1)^(t-1)).
    """
    out = {}
    for (A, B), c1 in p.terms.items():
        for (J, K), c2 in q.terms.items():
            if J:
                raise ValueError("second argument must lie in K[dtheta]")
            w = wedge(B, K)
            if w is None:
                continue
            K2, s1 = w
            r = contract_word(A, K2)
            if r is None:
                continue
            K3, s2 = r
            c = c1 * c2
            _acc(out, ((), K3), c if s1 * s2 == 1 else -c)
    return CliffordElement._raw(p.nvars, out)


def act_on_theta(p, q):
    """Left action of a Cl_N element p on q in K[theta] = Cl/Cl<dtheta>."""
    out = {}
    for (A, B), c1 in p.terms.items():
        for (J, K), c2 in q.terms.items():
            if K:
                raise ValueError("second argument must lie in K[theta]")
            r = contract_word(B, J)
            if r is None:
                continue
            J2, s1 = r
            w = wedge(A, J2)
            if w is None:
                continue
            J3, s2 = w
            c = c1 * c2
            _acc(out, (J3, ()), c if s1 * s2 == 1 else -c)
    return CliffordElement._raw(p.nvars, out)


def project_to_dtheta_module(c):
    """Image of c * 1 in Cl/Cl<theta>, computed by reordering dtheta letters first.

    Independent of the contraction formulas: used as an oracle for act_on_dtheta.
    """
    out = {}
    for (J, K), v in c.terms.items():
        for w, s in normal_order(_word(J, K), True).items():
            J2, K2 = _split(w)
            if J2:
                continue
            _acc(out, ((), K2), v if s == 1 else v * s)
    return CliffordElement._raw(c.nvars, out)


def star(c):
    """The anti-involution theta -> theta, dtheta -> -dtheta with Koszul signs."""
    out = {}
    for (J, K), v in c.terms.items():
        word = _word(J, K)
        m = len(word)
        sign = (-1) ** (m * (m - 1) // 2) * (-1) ** len(K)
        for w, s in normal_order(tuple(reversed(word))).items():
            _acc(out, _split(w), v * (sign * s))
    return CliffordElement._raw(c.nvars, out)


def constant_term(c, zero=0):
    return c.terms.get(((), ()), zero)


def pairing(p, q, zero=0):
    """{p, q} = (-1)^(|p||q|) CT(q^star(p)) for p in K[theta], q in K[dtheta]."""
    total = zero
    for mp, cp in p.terms.items():
        for mq, cq in q.terms.items():
            dp, dq = -len(mp[0]), len(mq[1])
            r = act_on_theta(star(CliffordElement._raw(q.nvars, {mq: 1})),
                             CliffordElement._raw(p.nvars, {mp: 1}))
            ct = r.terms.get(((), ()), 0)
            if ct:
                total = total + cp * cq * (-ct if (dp * dq) % 2 else ct)
    return total


# ---------------------------------------------------------------------------
# K[X] (x) K[theta] (x) K[theta]
# ---------------------------------------------------------------------------

class BiThetaElement:
    """Sum of coeff * theta_J1 (x) theta_J2 with the Koszul sign in products."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        for (J1, J2), c in (terms or {}).items():
            if c:
                self.terms[(tuple(J1), tuple(J2))] = c

    @classmethod
    def _raw(cls, nvars, terms):
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def unit(cls, one, nvars):
        return cls._raw(nvars, {((), ()): one})

    @classmethod
    def left(cls, h):
        """h (x) 1 for a theta-only Clifford element h."""
        return cls(h.nvars, {(J, ()): c for (J, K), c in h.terms.items()})

    @classmethod
    def right(cls, h):
        """1 (x) h."""
        return cls(h.nvars, {((), J): c for (J, K), c in h.terms.items()})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, BiThetaElement) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return BiThetaElement._raw(self.nvars, out)

    def __neg__(self):
        return BiThetaElement._raw(self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        out = {}
        for k, v in self.terms.items():
            v = v * c
            if v:
                out[k] = v
        return BiThetaElement._raw(self.nvars, out)

    def map_coeffs(self, fn):
        out = {}
        for k, v in self.terms.items():
            v = fn(v)
            if v:
                out[k] = v
        return BiThetaElement._raw(self.nvars, out)

    def mul(self, other, reduce=None):
        out = {}
        for (A1, A2), c1 in self.terms.items():
            for (B1, B2), c2 in other.terms.items():
                w1 = wedge(A1, B1)
                if w1 is None:
                    continue
                w2 = wedge(A2, B2)
                if w2 is None:
                    continue
                sign = w1[1] * w2[1] * (-1) ** (len(A2) * len(B1))
                c = c1 * c2
                if reduce is not None:
                    c = reduce(c)
                if not c:
                    continue
                _acc(out, (w1[0], w2[0]), c if sign == 1 else -c)
        return BiThetaElement._raw(self.nvars, out)

    def __mul__(self, other):
        if isinstance(other, BiThetaElement):
            return self.mul(other)
        return self.scale(other)

    def degrees(self):
        return {-(len(a) + len(b)) for (a, b) in self.terms}

    def __repr__(self):
        return f"BiThetaElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (A, B), c in sorted(self.terms.items()):
            a = "".join(f"t{i}" for i in A) or "1"
            b = "".join(f"t{i}" for i in B) or "1"
            parts.append(f"({c})*{a}(x){b}")
        return " + ".join(parts)


def upsilon(P, q1, q2):
    """Upsilon(p1 (x) p2 (x) q1 (x) q2) = (-1)^(|q1||p2|) p1(q1) . p2(q2), bilinearly.

    P is a BiThetaElement, q1 and q2 are CliffordElements in K[dtheta].
    Returns a CliffordElement in K[dtheta].
    """
    out = {}
    for (A1, A2), c in P.terms.items():
        for (J1, K1), c1 in q1.terms.items():
            if J1:
                raise ValueError("q1 must lie in K[dtheta]")
            r1 = contract_word(A1, K1)
            if r1 is None:
                continue
            for (J2, K2), c2 in q2.terms.items():
                if J2:
                    raise ValueError("q2 must lie in K[dtheta]")
                r2 = contract_word(A2, K2)
                if r2 is None:
                    continue
                w = wedge(r1[0], r2[0])
                if w is None:
                    continue
                sign = r1[1] * r2[1] * w[1] * (-1) ** (len(K1) * len(A2))
                v = c * c1 * c2
                if v:
                    _acc(out, ((), w[0]), v if sign == 1 else -v)
    return CliffordElement._raw(P.nvars, out)


def _subsets(n):
    from itertools import combinations
    for r in range(n + 1):
        yield from combinations(range(1, n + 1), r)


def upsilon_dagger(P, p, q, one=1):
    """The element of K[theta] adjoint to Upsilon under the pairing.

    Solved against the monomial dual basis: {theta_J, dtheta_K} vanishes unless
    J = K, so each coordinate is a single division.
    """
    n = P.nvars
    out = {}
    for (A1, A2), c in P.terms.items():
        Pm = BiThetaElement._raw(n, {(A1, A2): one})
        for mp, cp in p.terms.items():
            pm = CliffordElement._raw(n, {mp: one})
            sign = (-1) ** (len(mp[0]) * (len(A1) + len(A2)))
            for mq, cq in q.terms.items():
                qm = CliffordElement._raw(n, {mq: one})
                for K in _subsets(n):
                    dual = CliffordElement._raw(n, {((), K): one})
                    val = pairing(pm, upsilon(Pm, qm, dual), zero=0 * one)
                    if not val:
                        continue
                    # {theta_K, dtheta_K} is +-1, so dividing by it is multiplying
                    norm = pairing(CliffordElement._raw(n, {(K, ()): one}), dual, zero=0 * one)
                    v = c * cp * cq * (val * sign * norm)
                    if v:
                        _acc(out, (K, ()), v)
    return CliffordElement._raw(n, out)


def exp_nilpotent(h, reduce=None, one=None, track_t=False):
    """sum_m h^m / m! for a nilpotent even element (BiTheta or theta-only Clifford).

    With track_t the result is a dict {m: h^m/m!} recording the t-exponent.
    `reduce` is applied to coefficients after every multiplication.
    """
    n = h.nvars
    if one is None:
        one = _guess_one(h)
    if isinstance(h, BiThetaElement):
        term = BiThetaElement.unit(one, n)
        mul = (lambda a, b: a.mul(b, reduce))
    else:
        if not h.is_theta_only():
            raise ValueError("exp_nilpotent needs a theta-only element")
        term = CliffordElement._raw(n, {((), ()): one})
        mul = (lambda a, b: _reduce_cl(cl_mul(a, b), reduce))
    powers = {0: term}
    m = 0
    power = term
    while True:
        m += 1
        power = mul(power, h)
        if not power:
            break
        if m > 2 * n + 1:
            raise ValueError("element is not nilpotent")
        powers[m] = power.scale(Fraction(1, factorial(m)))
    if track_t:
        return powers
    total = powers[0]
    for k in range(1, len(powers)):
        total = total + powers[k]
    return total


def _reduce_cl(c, reduce):
    return c if reduce is None else c.map_coeffs(reduce)


def _guess_one(h):
    for c in h.terms.values():
        if hasattr(c, "nvars") and hasattr(c, "order"):
            from .poly import MultiPoly
            return MultiPoly.constant(1, c.nvars, c.order)
        if hasattr(c, "order"):
            from .scalars import CycScalar
            return CycScalar.one(c.order)
        return 1
    return 1
