"""Exact arithmetic in K = Q(x1, ..., xn).

Polynomials are sparse dicts from exponent tuples to Fractions. Rational
functions keep numerator and denominator coprime with a monic denominator
(leading coefficient 1 under graded lex with x1 > x2 > ... > xn), so equal
values always have equal representations.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Sequence, Tuple

from sympy import QQ
from sympy.polys.rings import ring

Exp = Tuple[int, ...]

ZERO_Q = Fraction(0)
ONE_Q = Fraction(1)


def _grlex_key(e: Exp):
    return (sum(e), e)


class MultiPoly:
    """Sparse multivariate polynomial with rational coefficients."""

    __slots__ = ("terms", "nvars", "_mask", "_hash")

    def __init__(self, terms: Dict[Exp, Fraction], nvars: int):
        self.terms = terms
        self.nvars = nvars
        self._mask = None
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "MultiPoly":
        return cls({}, n)

    @classmethod
    def const(cls, c, n: int) -> "MultiPoly":
        c = Fraction(c)
        if c == 0:
            return cls({}, n)
        return cls({(0,) * n: c}, n)

    @classmethod
    def var(cls, i: int, n: int) -> "MultiPoly":
        e = [0] * n
        e[i] = 1
        return cls({tuple(e): ONE_Q}, n)

    @classmethod
    def from_terms(cls, items: Iterable[Tuple[Exp, object]], n: int) -> "MultiPoly":
        d: Dict[Exp, Fraction] = {}
        for e, c in items:
            v = d.get(e, ZERO_Q) + Fraction(c)
            if v:
                d[e] = v
            else:
                d.pop(e, None)
        return cls(d, n)

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and not any(next(iter(t))))

    def is_one(self) -> bool:
        t = self.terms
        if len(t) != 1:
            return False
        e, c = next(iter(t.items()))
        return c == 1 and not any(e)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, ZERO_Q)

    @property
    def varmask(self) -> int:
        m = self._mask
        if m is None:
            m = 0
            for e in self.terms:
                for i, a in enumerate(e):
                    if a:
                        m |= 1 << i
            self._mask = m
        return m

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def leading(self) -> Tuple[Exp, Fraction]:
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def leading_coeff(self) -> Fraction:
        return self.leading()[1]

    # arithmetic -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash(frozenset(self.terms.items()))
        return h

    def __neg__(self):
        return MultiPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        d = dict(self.terms)
        for e, c in other.terms.items():
            v = d.get(e)
            if v is None:
                d[e] = c
            else:
                v = v + c
                if v:
                    d[e] = v
                else:
                    del d[e]
        return MultiPoly(d, self.nvars)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        if not other.terms:
            return self
        d = dict(self.terms)
        for e, c in other.terms.items():
            v = d.get(e)
            if v is None:
                d[e] = -c
            else:
                v = v - c
                if v:
                    d[e] = v
                else:
                    del d[e]
        return MultiPoly(d, self.nvars)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly({}, self.nvars)
        if len(a) == 1:
            (ea, ca), = a.items()
            if not any(ea):
                return other.scale(ca)
        if len(b) == 1:
            (eb, cb), = b.items()
            if not any(eb):
                return self.scale(cb)
        d: Dict[Exp, Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                v = d.get(e, ZERO_Q) + ca * cb
                if v:
                    d[e] = v
                else:
                    d.pop(e, None)
        return MultiPoly(d, self.nvars)

    def scale(self, c) -> "MultiPoly":
        if c == 1:
            return self
        if c == 0:
            return MultiPoly({}, self.nvars)
        return MultiPoly({e: v * c for e, v in self.terms.items()}, self.nvars)

    def __pow__(self, k: int) -> "MultiPoly":
        out = MultiPoly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self, i: int) -> "MultiPoly":
        d = {}
        for e, c in self.terms.items():
            a = e[i]
            if a:
                ne = e[:i] + (a - 1,) + e[i + 1:]
                d[ne] = c * a
        return MultiPoly(d, self.nvars)

    def evaluate(self, point: Sequence) -> Fraction:
        total = ZERO_Q
        for e, c in self.terms.items():
            t = c
            for x, a in zip(point, e):
                if a:
                    t *= Fraction(x) ** a
            total += t
        return total

    def compose_linear(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute x_i -> images[i]."""
        n = self.nvars
        out = MultiPoly({}, n)
        for e, c in self.terms.items():
            t = MultiPoly.const(c, n)
            for i, a in enumerate(e):
                if a:
                    t = t * images[i] ** a
            out = out + t
        return out

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        return self.scale(1 / self.leading_coeff())

    def render(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                names[i] if a == 1 else f"{names[i]}^{a}" for i, a in enumerate(e) if a
            )
            neg = c < 0
            ac = -c if neg else c
            if not mono:
                body = _render_q(ac)
            elif ac == 1:
                body = mono
            else:
                body = f"{_render_q(ac)}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"MultiPoly({self.render([f'x{i + 1}' for i in range(self.nvars)])})"


def _render_q(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


# univariate helpers --------------------------------------------------------

def _single_var(mask: int) -> int:
    """Index of the only set bit, or -1."""
    if mask and not mask & (mask - 1):
        return mask.bit_length() - 1
    return -1


def _to_dense(p: MultiPoly, i: int) -> list:
    out = [ZERO_Q] * (p.degree_in(i) + 1)
    for e, c in p.terms.items():
        out[e[i]] = c
    return out


def _from_dense(coeffs: list, i: int, n: int) -> MultiPoly:
    d = {}
    base = [0] * n
    for k, c in enumerate(coeffs):
        if c:
            base[i] = k
            d[tuple(base)] = c
    return MultiPoly(d, n)


def _dense_trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _dense_divmod(a: list, b: list):
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(a) - 1 < db:
        return [], _dense_trim(a)
    q = [ZERO_Q] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db]
        if c:
            c = c / lb
            q[k] = c
            for j in range(db + 1):
                a[k + j] -= c * b[j]
    return _dense_trim(q), _dense_trim(a[:db])


# multivariate gcd ----------------------------------------------------------

def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic greatest common divisor (zero only if both are zero)."""
    n = a.nvars
    if not a.terms:
        return b.monic()
    if not b.terms:
        return a.monic()
    if a.is_constant() or b.is_constant():
        return MultiPoly.const(1, n)
    if a == b:
        return a.monic()
    ma, mb = a.varmask, b.varmask
    common = ma & mb
    if not common:
        return MultiPoly.const(1, n)
    # a common factor can only involve variables present in both
    if len(a.terms) == 1 or len(b.terms) == 1:
        return _monomial_gcd(a, b)
    return _gcd_sparse(a, b)


@lru_cache(maxsize=None)
def _qq_ring(n: int):
    return ring([f"t{i}" for i in range(n)], QQ)[0]


def _gcd_sparse(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    # Euclid over Q swells coefficients badly; sympy's sparse gcd avoids that
    R = _qq_ring(a.nvars)
    pa = R({e: QQ(c.numerator, c.denominator) for e, c in a.terms.items()})
    pb = R({e: QQ(c.numerator, c.denominator) for e, c in b.terms.items()})
    g = pa.gcd(pb)
    out = MultiPoly({e: Fraction(int(c.numerator), int(c.denominator))
                     for e, c in g.items()}, a.nvars)
    return out.monic()


def _monomial_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    # the gcd with a monomial is the largest monomial dividing every term
    ea = None
    for e in list(a.terms) + list(b.terms):
        ea = e if ea is None else tuple(min(x, y) for x, y in zip(ea, e))
    return MultiPoly({ea: ONE_Q}, a.nvars)


def divexact(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Quotient a / b; raises ArithmeticError when b does not divide a."""
    n = a.nvars
    if not b.terms:
        raise ZeroDivisionError("polynomial division by zero")
    if not a.terms:
        return a
    if b.is_constant():
        return a.scale(1 / b.constant_value())
    if len(b.terms) == 1:
        (eb, cb), = b.terms.items()
        d = {}
        for e, c in a.terms.items():
            ne = tuple(x - y for x, y in zip(e, eb))
            if min(ne) < 0:
                raise ArithmeticError("inexact polynomial division")
            d[ne] = c / cb
        return MultiPoly(d, n)
    i = _single_var(b.varmask)
    if i >= 0 and a.varmask == b.varmask:
        q, r = _dense_divmod(_to_dense(a, i), _to_dense(b, i))
        if r:
            raise ArithmeticError("inexact polynomial division")
        return _from_dense(q, i, n)
    eb, cb = b.leading()
    r = dict(a.terms)
    q = {}
    while r:
        e = max(r, key=_grlex_key)
        ne = tuple(x - y for x, y in zip(e, eb))
        if min(ne) < 0:
            raise ArithmeticError("inexact polynomial division")
        qc = r[e] / cb
        q[ne] = qc
        for f, c in b.terms.items():
            k = tuple(x + y for x, y in zip(f, ne))
            v = r.get(k, ZERO_Q) - qc * c
            if v:
                r[k] = v
            else:
                r.pop(k, None)
    return MultiPoly(q, n)


# rational functions --------------------------------------------------------

class RationalFunction:
    """Element of Q(x1..xn) in canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly, _reduced: bool = False):
        if not _reduced:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def const(cls, c, n: int) -> "RationalFunction":
        c = Fraction(c)
        return cls(MultiPoly.const(c, n), MultiPoly.const(1, n), True)

    @classmethod
    def var(cls, i: int, n: int) -> "RationalFunction":
        return cls(MultiPoly.var(i, n), MultiPoly.const(1, n), True)

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RationalFunction":
        return cls(p, MultiPoly.const(1, p.nvars), True)

    def is_zero(self) -> bool:
        return not self.num.terms

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num.terms == other.num.terms and self.den.terms == other.den.terms
        if isinstance(other, (int, Fraction)):
            return self.den.is_one() and self.num.is_constant() and self.num.constant_value() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        return RationalFunction(-self.num, self.den, True)

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        a, b = self, other
        if a.den.is_one() and b.den.is_one():
            return RationalFunction(a.num + b.num, a.den, True)
        if a.den == b.den:
            return RationalFunction(a.num + b.num, a.den)
        d1 = poly_gcd(a.den, b.den)
        if d1.is_one():
            return RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den,
                                    True)._fix_lc()
        ad, bd = divexact(a.den, d1), divexact(b.den, d1)
        t = a.num * bd + b.num * ad
        if not t.terms:
            return RationalFunction.const(0, a.nvars)
        d2 = poly_gcd(t, d1)
        return RationalFunction(divexact(t, d2), ad * divexact(b.den, d2), True)._fix_lc()

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        a, b = self, other
        if not a.num.terms or not b.num.terms:
            return RationalFunction.const(0, a.nvars)
        if a.den.is_one() and b.den.is_one():
            return RationalFunction(a.num * b.num, a.den, True)
        if a.is_constant():
            return RationalFunction(b.num.scale(a.num.constant_value()), b.den, True)
        if b.is_constant():
            return RationalFunction(a.num.scale(b.num.constant_value()), a.den, True)
        g1 = poly_gcd(a.num, b.den)
        g2 = poly_gcd(b.num, a.den)
        an, bd = (a.num, b.den) if g1.is_one() else (divexact(a.num, g1), divexact(b.den, g1))
        bn, ad = (b.num, a.den) if g2.is_one() else (divexact(b.num, g2), divexact(a.den, g2))
        return RationalFunction(an * bn, ad * bd, True)._fix_lc()

    def inverse(self) -> "RationalFunction":
        if not self.num.terms:
            raise ZeroDivisionError("inverse of zero in K")
        return RationalFunction(self.den, self.num, True)._fix_lc()

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        return self * other.inverse()

    def __pow__(self, k: int) -> "RationalFunction":
        if k < 0:
            return self.inverse() ** -k
        # num and den stay coprime under powers
        return RationalFunction(self.num ** k, self.den ** k, True)._fix_lc()

    def _fix_lc(self) -> "RationalFunction":
        lc = self.den.leading_coeff()
        if lc != 1:
            inv = 1 / lc
            self.num = self.num.scale(inv)
            self.den = self.den.scale(inv)
        return self

    def partial(self, i: int) -> "RationalFunction":
        """Derivative with respect to x_{i+1} (0-based index)."""
        dn = self.num.derivative(i)
        if self.den.is_one():
            return RationalFunction(dn, self.den, True)
        dd = self.den.derivative(i)
        if not dd.terms:
            return RationalFunction(dn, self.den)
        return RationalFunction(dn * self.den - self.num * dd, self.den * self.den)

    def evaluate(self, point: Sequence) -> Fraction:
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at point")
        return self.num.evaluate(point) / d

    def compose_linear(self, images: Sequence[MultiPoly]) -> "RationalFunction":
        return RationalFunction(self.num.compose_linear(images), self.den.compose_linear(images))

    def render(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        if self.den.is_one():
            return self.num.render(names)
        return f"({self.num.render(names)})/({self.den.render(names)})"

    def is_atomic(self) -> bool:
        """True when the rendering needs no parentheses as a factor."""
        return self.den.is_one() and len(self.num.terms) <= 1

    def __repr__(self):
        return f"RF({self.render()})"

    def __str__(self):
        return self.render()


def _normalize(num: MultiPoly, den: MultiPoly):
    n = num.nvars
    if not den.terms:
        raise ZeroDivisionError("zero denominator")
    if not num.terms:
        return num, MultiPoly.const(1, n)
    if den.is_constant():
        c = den.constant_value()
        return num.scale(1 / c), MultiPoly.const(1, n)
    g = poly_gcd(num, den)
    if not g.is_one():
        num, den = divexact(num, g), divexact(den, g)
    lc = den.leading_coeff()
    if lc != 1:
        num, den = num.scale(1 / lc), den.scale(1 / lc)
    return num, den


class Field:
    """The ground field K = Q(x1..xn) with named coordinates."""

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        self.n = len(self.names)
        self.zero = RationalFunction.const(0, self.n)
        self.one = RationalFunction.const(1, self.n)

    def const(self, c) -> RationalFunction:
        return RationalFunction.const(c, self.n)

    def var(self, i: int) -> RationalFunction:
        return RationalFunction.var(i, self.n)

    def render(self, f: RationalFunction) -> str:
        return f.render(self.names)


def rf_partial(f: RationalFunction, i: int) -> RationalFunction:
    return f.partial(i)


def rf_render(f: RationalFunction, names: Sequence[str] | None = None) -> str:
    return f.render(names)
