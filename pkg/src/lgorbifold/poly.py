"""Sparse polynomials over Q(zeta_n) in up to three blocks of variables.

A polynomial in N variables lives in K[x] (x) K[x] (x) K[x] with the blocks
called x, y, z.  Exponent keys are tuples of length 3N laid out as
(x_1..x_N, y_1..y_N, z_1..z_N).  Indices in the public API are 1-based,
matching the usual x_1, ..., x_N notation.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .scalars import CycScalar, zeta_power

X, Y, Z = 0, 1, 2
BLOCK_NAMES = ("x", "y", "z")
_BLOCK_INDEX = {"x": X, "y": Y, "z": Z}


def _block(b):
    if isinstance(b, str):
        return _BLOCK_INDEX[b]
    return b


def grevlex_key(exps):
    """Sort key for graded reverse lex with x_1 > x_2 > ..."""
    return (sum(exps),) + tuple(-e for e in reversed(exps))


class MultiPoly:
    """Immutable sparse polynomial; terms map exponent keys to CycScalar."""

    __slots__ = ("nvars", "order", "terms")

    def __init__(self, nvars, order, terms=None):
        self.nvars = nvars
        self.order = order
        clean = {}
        if terms:
            width = 3 * nvars
            for k, c in terms.items():
                if len(k) != width:
                    raise ValueError(f"exponent key {k} does not have length {width}")
                if not isinstance(c, CycScalar):
                    c = CycScalar.rational(c, order)
                if c:
                    clean[k] = c
        self.terms = clean

    @classmethod
    def _raw(cls, nvars, order, terms):
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.order = order
        obj.terms = terms
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars, order):
        return cls._raw(nvars, order, {})

    @classmethod
    def constant(cls, c, nvars, order):
        if not isinstance(c, CycScalar):
            c = CycScalar.rational(c, order)
        if not c:
            return cls.zero(nvars, order)
        return cls._raw(nvars, order, {(0,) * (3 * nvars): c})

    @classmethod
    def var(cls, i, nvars, order, block=X):
        key = [0] * (3 * nvars)
        key[_block(block) * nvars + i - 1] = 1
        return cls._raw(nvars, order, {tuple(key): CycScalar.one(order)})

    @classmethod
    def monomial(cls, exps, nvars, order, coeff=1, block=X):
        """x^exps (exps of length N) placed in the given block."""
        key = [0] * (3 * nvars)
        off = _block(block) * nvars
        for i, e in enumerate(exps):
            key[off + i] = e
        return cls(nvars, order, {tuple(key): coeff})

    @classmethod
    def from_x_dict(cls, d, nvars, order):
        """Build from {exps of length N: coeff} in block x."""
        pad = (0,) * (2 * nvars)
        return cls(nvars, order, {tuple(k) + pad: c for k, c in d.items()})

    # -- basic protocol ----------------------------------------------------

    def _like(self, terms):
        return MultiPoly._raw(self.nvars, self.order, terms)

    def _check(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars or other.order != self.order:
                raise ValueError("polynomials live in different rings")
            return other
        if isinstance(other, (int, Fraction, CycScalar)):
            return MultiPoly.constant(other, self.nvars, self.order)
        return NotImplemented

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly) and (other.nvars, other.order) != (self.nvars, self.order):
            return False
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self.order, frozenset(self.terms.items())))

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if not c:
            return self._like({})
        return self._like({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycScalar)):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                c = c1 * c2
                s = out.get(k)
                if s is None:
                    out[k] = c
                else:
                    s = s + c
                    if s:
                        out[k] = s
                    else:
                        del out[k]
        return self._like(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = MultiPoly.constant(1, self.nvars, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- inspection --------------------------------------------------------

    def blocks(self):
        """Set of block names that actually occur."""
        n = self.nvars
        used = set()
        for k in self.terms:
            for b in range(3):
                if any(k[b * n:(b + 1) * n]):
                    used.add(BLOCK_NAMES[b])
        return used

    def degree(self):
        return max((sum(k) for k in self.terms), default=-1)

    def x_terms(self):
        """{exps of length N: coeff}; only valid for polynomials in block x."""
        n = self.nvars
        out = {}
        for k, c in self.terms.items():
            if any(k[n:]):
                raise ValueError("polynomial uses blocks other than x")
            out[k[:n]] = c
        return out

    def coefficient(self, exps, block=X):
        key = [0] * (3 * self.nvars)
        off = _block(block) * self.nvars
        for i, e in enumerate(exps):
            key[off + i] = e
        return self.terms.get(tuple(key), CycScalar.zero(self.order))

    def constant_term(self):
        return self.terms.get((0,) * (3 * self.nvars), CycScalar.zero(self.order))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)

    def map_coeffs(self, fn):
        out = {}
        for k, c in self.terms.items():
            c = fn(c)
            if c:
                out[k] = c
        return self._like(out)

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        return format_poly(self)


# ---------------------------------------------------------------------------
# slices, difference derivatives, substitutions
# ---------------------------------------------------------------------------

def _rename(key, n, src, dst, upto):
    """Move exponents of block src, indices < upto (0-based), into block dst."""
    k = list(key)
    so, do = src * n, dst * n
    for i in range(upto):
        e = k[so + i]
        if e:
            k[do + i] += e
            k[so + i] = 0
    return k


def l_slice(f, i, src=X, dst=Y):
    """l_i: the first i-1 variables of block src are renamed into block dst.

    l_1(f) = f, l_{N+1}(f) = f with the whole block src renamed.
    """
    n = f.nvars
    if not 1 <= i <= n + 1:
        raise IndexError(f"slice index {i} out of range 1..{n + 1}")
    src, dst = _block(src), _block(dst)
    out = {}
    for key, c in f.terms.items():
        k = tuple(_rename(key, n, src, dst, i - 1))
        out[k] = out[k] + c if k in out else c
    return MultiPoly(n, f.order, out)


def nabla(f, i, src=X, dst=Y):
    """The difference derivative (l_i f - l_{i+1} f) / (src_i - dst_i).

    The quotient is computed termwise via
    (s^k - d^k)/(s - d) = sum_{a+b=k-1} s^a d^b, so it is exact by construction.
    """
    n = f.nvars
    if not 1 <= i <= n:
        raise IndexError(f"nabla index {i} out of range 1..{n}")
    src, dst = _block(src), _block(dst)
    si, di = src * n + i - 1, dst * n + i - 1
    out = {}
    for key, c in f.terms.items():
        e = key[si]
        if not e:
            continue
        k = _rename(key, n, src, dst, i - 1)
        k[si] = 0
        base_d = k[di]
        for a in range(e):
            kk = list(k)
            kk[si] = a
            kk[di] = base_d + e - 1 - a
            kk = tuple(kk)
            if kk in out:
                s = out[kk] + c
                if s:
                    out[kk] = s
                else:
                    del out[kk]
            else:
                out[kk] = c
    return MultiPoly._raw(n, f.order, out)


def _factors(scale, order):
    if hasattr(scale, "factors"):
        return scale.factors()
    out = []
    for s in scale:
        if isinstance(s, CycScalar):
            out.append(s)
        else:
            out.append(CycScalar.rational(s, order))
    return out


def substitute_diag(f, block, scale, into_block):
    """Replace each v_i of `block` by scale_i * w_i with w in `into_block`.

    `scale` is a GroupElement or a sequence of N scalars; None means all ones.
    """
    n = f.nvars
    b, t = _block(block), _block(into_block)
    if scale is None:
        fac = [CycScalar.one(f.order)] * n
    else:
        fac = _factors(scale, f.order)
    if len(fac) != n:
        raise ValueError("scale must have one entry per variable")
    bo, to = b * n, t * n
    # cache powers of the scale factors
    pw = {}
    out = {}
    for key, c in f.terms.items():
        k = list(key)
        coef = c
        for i in range(n):
            e = k[bo + i]
            if e:
                if b != t:
                    k[bo + i] = 0
                    k[to + i] += e
                p = pw.get((i, e))
                if p is None:
                    p = fac[i] ** e
                    pw[(i, e)] = p
                coef = coef * p
        k = tuple(k)
        if k in out:
            s = out[k] + coef
            if s:
                out[k] = s
            else:
                del out[k]
        elif coef:
            out[k] = coef
    return MultiPoly._raw(n, f.order, out)


def act(f, scale):
    """The natural action f(x) -> f(g x) on polynomials in block x."""
    return substitute_diag(f, X, scale, X)


def res_g(f, moving):
    """Set x_i = 0 for i in the moving set (1-based indices or a GroupElement)."""
    if hasattr(moving, "moving"):
        moving = moving.moving
    n = f.nvars
    idx = [i - 1 for i in moving]
    out = {k: c for k, c in f.terms.items() if not any(k[i] for i in idx)}
    return MultiPoly._raw(n, f.order, out)


def partial_derivative(f, i, block=X):
    n = f.nvars
    pos = _block(block) * n + i - 1
    out = {}
    for key, c in f.terms.items():
        e = key[pos]
        if e:
            k = list(key)
            k[pos] = e - 1
            out[tuple(k)] = c * e
    return MultiPoly._raw(n, f.order, out)


def hessian_entry(f, i, j):
    return partial_derivative(partial_derivative(f, i), j)


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|(zeta|z)\b|([xyz])(\d*)|(\^)|(\*)|([+-])|(\()|(\)))")


class PolyParseError(ValueError):
    """Malformed polynomial text; carries the column of the problem."""

    def __init__(self, msg, column):
        super().__init__(f"{msg} (column {column})")
        self.column = column


def parse_poly(text, nvars, order):
    """Parse 'coef * x1^e1 * x2^e2 + ...'.

    Coefficients may be integers, p/q or zeta^k (zeta may be written z).
    Variables are x1..xN (also y1.., z1.. for the other blocks); with one
    variable a bare `x` is accepted.
    """
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyParseError(f"unexpected character {text[pos]!r}", pos + 1)
        toks.append((m, pos + 1))
        pos = m.end()

    one = MultiPoly.constant(1, nvars, order)
    result = MultiPoly.zero(nvars, order)
    i = 0

    def factor(i):
        m, col = toks[i]
        if m.group(1):
            val = MultiPoly.constant(Fraction(m.group(1)), nvars, order)
        elif m.group(2):
            val = MultiPoly.constant(zeta_power(1, order), nvars, order)
        elif m.group(3):
            name, idx = m.group(3), m.group(4)
            if idx == "":
                if nvars != 1:
                    raise PolyParseError(f"bare variable {name!r} needs an index", col)
                idx = 1
            idx = int(idx)
            if not 1 <= idx <= nvars:
                raise PolyParseError(f"variable {name}{idx} outside 1..{nvars}", col)
            val = MultiPoly.var(idx, nvars, order, _BLOCK_INDEX[name])
        elif m.group(8):
            depth, j = 1, i + 1
            while j < len(toks) and depth:
                if toks[j][0].group(8):
                    depth += 1
                elif toks[j][0].group(9):
                    depth -= 1
                j += 1
            if depth:
                raise PolyParseError("unbalanced parenthesis", col)
            inner = text[toks[i + 1][1] - 1: toks[j - 1][1] - 1] if j - 1 > i + 1 else ""
            val = parse_poly(inner, nvars, order)
            i = j - 1
        else:
            raise PolyParseError("expected a coefficient or a variable", col)
        i += 1
        if i < len(toks) and toks[i][0].group(5):
            if i + 1 >= len(toks) or not toks[i + 1][0].group(1) or "/" in toks[i + 1][0].group(1):
                raise PolyParseError("exponent must be a non-negative integer", toks[i][1])
            e = int(toks[i + 1][0].group(1))
            if m.group(2):
                val = MultiPoly.constant(zeta_power(e, order), nvars, order)
            else:
                val = val ** e
            i += 2
        return val, i

    if not toks:
        raise PolyParseError("empty polynomial", 1)
    while i < len(toks):
        sign = 1
        while i < len(toks) and toks[i][0].group(7):
            if toks[i][0].group(7) == "-":
                sign = -sign
            i += 1
        if i >= len(toks):
            raise PolyParseError("dangling sign", toks[-1][1])
        term, i = factor(i)
        while i < len(toks) and (toks[i][0].group(6) or not toks[i][0].group(7)):
            if toks[i][0].group(6):
                i += 1
            if i >= len(toks):
                raise PolyParseError("dangling '*'", toks[-1][1])
            f, i = factor(i)
            term = term * f
        result = result + (term if sign > 0 else -term)
    return result if result.terms else result * one


def _mono_str(key, n, latex=False):
    parts = []
    for b in range(3):
        for i in range(n):
            e = key[b * n + i]
            if not e:
                continue
            v = f"{BLOCK_NAMES[b]}_{{{i + 1}}}" if latex else f"{BLOCK_NAMES[b]}{i + 1}"
            if e == 1:
                parts.append(v)
            else:
                parts.append(f"{v}^{{{e}}}" if latex else f"{v}^{e}")
    return (" " if latex else "*").join(parts)


def format_poly(f, latex=False):
    from .scalars import format_scalar, latex_scalar
    if not f.terms:
        return "0"
    out = []
    for key, c in f.sorted_terms():
        mono = _mono_str(key, f.nvars, latex)
        cs = latex_scalar(c) if latex else format_scalar(c)
        multi = len([x for x in c.coeffs if x]) > 1
        if multi:
            cs = f"({cs})"
        if not mono:
            body = cs
        elif cs == "1":
            body = mono
        elif cs == "-1":
            body = "-" + mono
        else:
            body = f"{cs} {mono}" if latex else f"{cs}*{mono}"
        out.append(body)
    s = out[0]
    for b in out[1:]:
        s += " - " + b[1:] if b.startswith("-") else " + " + b
    return s
