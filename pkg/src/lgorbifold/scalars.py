"""Exact arithmetic in the cyclotomic field Q(zeta_n).

An element is stored as its coefficient vector in the power basis
1, zeta, ..., zeta^(phi(n)-1), i.e. as a polynomial in zeta reduced modulo
the n-th cyclotomic polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


class FieldMismatch(ValueError):
    """Raised when two scalars from different cyclotomic fields meet."""


def _poly_divmod(num, den):
    """Divide integer/rational coefficient lists (lowest degree first)."""
    num = list(num)
    out = [0] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    for k in range(len(num) - len(den), -1, -1):
        c = Fraction(num[k + len(den) - 1], 1) / lead
        out[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    rem = num[: len(den) - 1]
    return out, rem


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Coefficients of Phi_n, lowest degree first, as ints."""
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            q, r = _poly_divmod(num, list(cyclotomic_poly(d)))
            assert not any(r), "cyclotomic division left a remainder"
            num = q
    return tuple(int(c) for c in num)


def euler_phi(n):
    return len(cyclotomic_poly(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n):
    """Reduced coordinates of zeta^k for k = 0 .. 2*phi(n)-2 (and up to n)."""
    phi_poly = cyclotomic_poly(n)
    m = len(phi_poly) - 1
    top = max(2 * m - 1, n)
    rows = []
    cur = [Fraction(0)] * m
    cur[0] = Fraction(1)
    for _ in range(top):
        rows.append(tuple(cur))
        # multiply by zeta: shift up and fold the overflow through Phi_n
        carry = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if carry:
            for i in range(m):
                cur[i] -= carry * phi_poly[i]
    return tuple(rows)


class CycScalar:
    """An element of Q(zeta_n)."""

    __slots__ = ("coeffs", "order", "_hash")

    def __init__(self, coeffs, order):
        m = euler_phi(order)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) > m:
            coeffs = _reduce_long(coeffs, order)
        elif len(coeffs) < m:
            coeffs = coeffs + (Fraction(0),) * (m - len(coeffs))
        self.coeffs = coeffs
        self.order = order
        self._hash = None

    @classmethod
    def _raw(cls, coeffs, order):
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        obj.order = order
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, value, order):
        m = euler_phi(order)
        return cls._raw((Fraction(value),) + (Fraction(0),) * (m - 1), order)

    @classmethod
    def zero(cls, order):
        return cls.rational(0, order)

    @classmethod
    def one(cls, order):
        return cls.rational(1, order)

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def __bool__(self):
        return not self.is_zero()

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycScalar):
            if other.order != self.order:
                raise FieldMismatch(
                    f"cannot combine Q(zeta_{self.order}) with Q(zeta_{other.order})")
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar.rational(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycScalar._raw(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.order)

    __radd__ = __add__

    def __neg__(self):
        return CycScalar._raw(tuple(-a for a in self.coeffs), self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycScalar._raw(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.order)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return CycScalar.zero(self.order)
            return CycScalar._raw(tuple(a * other for a in self.coeffs), self.order)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_rational():
            c = other.coeffs[0]
            return CycScalar._raw(tuple(a * c for a in self.coeffs), self.order)
        if self.is_rational():
            c = self.coeffs[0]
            return CycScalar._raw(tuple(c * b for b in other.coeffs), self.order)
        m = len(self.coeffs)
        prod = [Fraction(0)] * (2 * m - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycScalar._raw(_fold(prod, self.order), self.order)

    __rmul__ = __mul__

    def inverse(self):
        return field_inverse(self)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(zeta_n)")
            return CycScalar._raw(tuple(a / other for a in self.coeffs), self.order)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * field_inverse(other)

    def __rtruediv__(self, other):
        return field_inverse(self) * other

    def __pow__(self, k):
        if k < 0:
            return field_inverse(self) ** (-k)
        result = CycScalar.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycScalar):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.order, self.coeffs))
        return self._hash

    def galois(self, k):
        """Apply the automorphism zeta -> zeta^k (gcd(k, n) = 1)."""
        if gcd(k, self.order) != 1:
            raise ValueError("Galois twist needs a unit exponent")
        acc = CycScalar.zero(self.order)
        for i, a in enumerate(self.coeffs):
            if a:
                acc = acc + zeta_power(i * k, self.order) * a
        return acc

    def conjugate(self):
        return self.galois(-1)

    def to_complex(self):
        """Floating point embedding zeta -> exp(2 pi i / n); display only."""
        import cmath
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(a) * z ** i for i, a in enumerate(self.coeffs))

    # -- display -----------------------------------------------------------

    def __repr__(self):
        return f"CycScalar({self}, n={self.order})"

    def __str__(self):
        return format_scalar(self)

    def to_json(self):
        return {"coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs],
                "order": self.order}

    @classmethod
    def from_json(cls, data):
        return cls([Fraction(s) for s in data["coeffs"]], int(data["order"]))


def _fold(prod, n):
    """Reduce a coefficient list of length <= 2*phi(n)-1 into the power basis."""
    m = euler_phi(n)
    out = list(prod[:m])
    if len(out) < m:
        out += [Fraction(0)] * (m - len(out))
    table = _power_table(n)
    for k in range(m, len(prod)):
        c = prod[k]
        if c:
            row = table[k]
            for i in range(m):
                if row[i]:
                    out[i] += c * row[i]
    return tuple(out)


def _reduce_long(coeffs, n):
    # arbitrary length: reduce exponents mod n first, then fold
    m = euler_phi(n)
    acc = [Fraction(0)] * max(n, m)
    for k, c in enumerate(coeffs):
        acc[k % n] += c
    return _fold(acc, n)


def field_arith(a, b, kind):
    """add / sub / mul of two scalars of the same order."""
    if a.order != b.order:
        raise FieldMismatch(f"order mismatch: {a.order} vs {b.order}")
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


def field_inverse(a):
    """Inverse via the extended Euclidean algorithm against Phi_n."""
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero in Q(zeta_n)")
    if a.is_rational():
        return CycScalar.rational(1 / a.coeffs[0], a.order)
    n = a.order
    # work with polynomials as lists, lowest degree first
    r0 = [Fraction(c) for c in cyclotomic_poly(n)]
    r1 = _trim(list(a.coeffs))
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while len(r1) > 1 or r1[0] != 0:
        q, r = _poly_divmod(r0, r1)
        r = _trim(r) if r else [Fraction(0)]
        r0, r1 = r1, r
        s0, s1 = s1, _trim(_sub(s0, _mul(q, s1)))
    # r0 is a nonzero constant now
    c = r0[0]
    inv = [x / c for x in s0]
    return CycScalar(inv, n)


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [Fraction(0)]


def _mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _sub(p, q):
    m = max(len(p), len(q))
    p = list(p) + [Fraction(0)] * (m - len(p))
    q = list(q) + [Fraction(0)] * (m - len(q))
    return [a - b for a, b in zip(p, q)]


def zeta_power(k, n):
    """The reduced representative of zeta_n^k."""
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    k %= n
    table = _power_table(n)
    return CycScalar._raw(table[k], n)


def embed_scalar(a, m):
    """Image of a in Q(zeta_m) under zeta_n -> zeta_m^(m/n); needs n | m."""
    if a.order == m:
        return a
    if m % a.order:
        raise FieldMismatch(f"Q(zeta_{a.order}) does not embed in Q(zeta_{m})")
    s = m // a.order
    acc = CycScalar.zero(m)
    for i, c in enumerate(a.coeffs):
        if c:
            acc = acc + zeta_power(i * s, m) * c
    return acc


def format_scalar(a, name="z"):
    """Human readable form, e.g. '2 + z' or '-1/3*z^2'."""
    parts = []
    for i, c in enumerate(a.coeffs):
        if not c:
            continue
        mono = "" if i == 0 else (name if i == 1 else f"{name}^{i}")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def latex_scalar(a):
    return format_scalar(a, name=r"\zeta").replace("*", " ")
