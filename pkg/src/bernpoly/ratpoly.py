"""Dense univariate polynomials with exact rational coefficients.

Coefficients are stored as :class:`fractions.Fraction` in ascending degree
order.  Anything that is quadratic or worse in the degree (multiplication,
composition, evaluation, remainder sequences) runs on a scaled integer copy
of the coefficients, because ``Fraction`` arithmetic pays a gcd on every
operation and Bernoulli coefficients get thousands of bits wide.

Root counting uses Sturm chains built from a primitive pseudo-remainder
sequence: each remainder is divided by its integer content and given the
sign Sturm's theorem needs, so the chain never leaves ``Z[x]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

try:  # subquadratic division and gcd for the wide remainder-sequence integers
    from gmpy2 import gcd as _big_gcd
    from gmpy2 import mpz as _big
except ImportError:  # pragma: no cover
    _big = int
    _big_gcd = math.gcd

__all__ = [
    "Interval",
    "RatPoly",
    "SturmChain",
    "cauchy_bound",
    "compose_affine",
    "derivative",
    "evaluate",
    "gcd",
    "squarefree_part",
    "sturm_chain",
    "sturm_count",
]

Number = Union[int, Fraction]

ZERO_DEGREE = -math.inf


def _as_fraction(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class RatPoly:
    """Immutable polynomial over Q; ``coeffs[i]`` multiplies ``x**i``."""

    __slots__ = ("_coeffs", "_int", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs: tuple[Fraction, ...] = tuple(cs)
        self._int: tuple[int, ...] | None = None
        self._hash: int | None = None

    # -- construction -------------------------------------------------------

    @classmethod
    def constant(cls, c: Number) -> "RatPoly":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c: Number = 1) -> "RatPoly":
        return cls([0] * degree + [c])

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    @classmethod
    def from_integer(cls, ints: Sequence[int], denominator: int = 1) -> "RatPoly":
        """Build ``sum(ints[i] * x**i) / denominator``."""
        if denominator <= 0:
            raise ValueError("denominator must be positive")
        p = cls([Fraction(a, denominator) for a in ints])
        if p._coeffs:
            p._int = tuple(_primitive(_trim(list(ints))))
        return p

    # -- basic accessors ----------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self):
        """Degree, or ``-inf`` for the zero polynomial."""
        return len(self._coeffs) - 1 if self._coeffs else ZERO_DEGREE

    @property
    def leading(self) -> Fraction:
        return self._coeffs[-1] if self._coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def __getitem__(self, i: int) -> Fraction:
        return self._coeffs[i] if 0 <= i < len(self._coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatPoly):
            return self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)):
            return self._coeffs == RatPoly([other])._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._coeffs)
        return self._hash

    def __repr__(self) -> str:
        return f"RatPoly({[str(c) for c in self._coeffs]})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        terms = []
        for i in range(len(self._coeffs) - 1, -1, -1):
            c = self._coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if i == 0:
                body = str(mag)
            else:
                xs = "x" if i == 1 else f"x^{i}"
                body = xs if mag == 1 else f"{mag}*{xs}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    # -- integer form -------------------------------------------------------

    def primitive_ints(self) -> tuple[int, ...]:
        """Primitive integer polynomial that is a positive multiple of ``self``."""
        if self._int is None:
            ints, _ = self._scaled_ints()
            self._int = tuple(_primitive(ints))
        return self._int

    def _scaled_ints(self) -> tuple[list[int], int]:
        """Exact ``(ints, den)`` with ``self == ints / den`` (not necessarily primitive)."""
        if not self._coeffs:
            return [], 1
        den = math.lcm(*(c.denominator for c in self._coeffs))
        return [c.numerator * (den // c.denominator) for c in self._coeffs], den

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "RatPoly":
        return RatPoly(-c for c in self._coeffs)

    def __add__(self, other) -> "RatPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        return RatPoly([a[i] + b[i] if i < len(b) else a[i] for i in range(len(a))])

    __radd__ = __add__

    def __sub__(self, other) -> "RatPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "RatPoly":
        return (-self) + other

    def __mul__(self, other) -> "RatPoly":
        if isinstance(other, (int, Fraction)):
            return RatPoly(c * other for c in self._coeffs)
        if not isinstance(other, RatPoly):
            return NotImplemented
        if not self._coeffs or not other._coeffs:
            return RatPoly()
        a, da = self._scaled_ints()
        b, db = other._scaled_ints()
        return RatPoly.from_integer(_int_mul(a, b), da * db)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatPoly":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("polynomial division by zero scalar")
            inv = 1 / _as_fraction(other)
            return self * inv
        return NotImplemented

    def __pow__(self, e: int) -> "RatPoly":
        if e < 0:
            raise ValueError("negative polynomial power")
        result = RatPoly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        if not isinstance(other, RatPoly):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._coeffs)
        db = len(other._coeffs) - 1
        lc = other._coeffs[-1]
        if len(rem) - 1 < db:
            return RatPoly(), self
        quo = [Fraction(0)] * (len(rem) - db)
        for i in range(len(rem) - 1 - db, -1, -1):
            q = rem[i + db] / lc
            quo[i] = q
            if q:
                for j, bj in enumerate(other._coeffs):
                    rem[i + j] -= q * bj
        return RatPoly(quo), RatPoly(rem[:db])

    def __floordiv__(self, other: "RatPoly") -> "RatPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return divmod(self, other)[1]

    # -- calculus and composition ------------------------------------------

    def __call__(self, x: Number) -> Fraction:
        return evaluate(self, x)

    def derivative(self) -> "RatPoly":
        return derivative(self)

    def antiderivative(self) -> "RatPoly":
        """Antiderivative with zero constant term."""
        return RatPoly([0] + [c / (i + 1) for i, c in enumerate(self._coeffs)])

    def integrate(self, lo: Number, hi: Number) -> Fraction:
        F = self.antiderivative()
        return evaluate(F, hi) - evaluate(F, lo)

    def compose_affine(self, a: Number, b: Number) -> "RatPoly":
        return compose_affine(self, a, b)

    def monic(self) -> "RatPoly":
        if not self._coeffs:
            return self
        return self * (1 / self._coeffs[-1])


def _coerce(other):
    if isinstance(other, RatPoly):
        return other
    if isinstance(other, (int, Fraction)):
        return RatPoly([other])
    return NotImplemented


# ---------------------------------------------------------------------------
# integer polynomial kernels (ascending coefficient lists)
# ---------------------------------------------------------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _content(a: Sequence[int]) -> int:
    return _big_gcd(*a) if a else 0


def _primitive(a: Sequence[int]) -> list[int]:
    """Divide by the positive content; sign is preserved."""
    g = _content(a)
    if g in (0, 1):
        return list(a)
    return [c // g for c in a]


def _int_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _int_derivative(a: Sequence[int]) -> list[int]:
    return [i * a[i] for i in range(1, len(a))]


def _prem(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Pseudo-remainder ``lc(b)**(deg a - deg b + 1) * a mod b`` over Z."""
    r = list(a)
    db = len(b) - 1
    lc = b[-1]
    steps = len(r) - 1 - db + 1
    for _ in range(steps):
        top = r[-1]
        shift = len(r) - 1 - db
        r = [lc * c for c in r]
        if top:
            for j, bj in enumerate(b):
                r[shift + j] -= top * bj
        r.pop()
    return _trim(r)


def _int_exact_div(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Quotient of ``a / b`` scaled to a primitive integer polynomial (b | a over Q)."""
    q, r = divmod(RatPoly(int(c) for c in a), RatPoly(int(c) for c in b))
    if not r.is_zero():
        raise ArithmeticError("inexact polynomial division")
    return list(q.primitive_ints())


def _sign_at(a: Sequence[int], x: Fraction) -> int:
    """Sign of the integer polynomial ``a`` at rational ``x`` (homogenised Horner)."""
    if not a:
        return 0
    p, q = x.numerator, x.denominator
    v = a[-1]
    if q == 1:
        for i in range(len(a) - 2, -1, -1):
            v = v * p + a[i]
    else:
        qk = q
        for i in range(len(a) - 2, -1, -1):
            v = v * p + a[i] * qk
            qk *= q
    return (v > 0) - (v < 0)


def _int_gcd(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Primitive gcd of two integer polynomials, positive leading coefficient."""
    a = _primitive(_trim([_big(c) for c in a]))
    b = _primitive(_trim([_big(c) for c in b]))
    if len(a) < len(b):
        a, b = b, a
    if not b:
        g = a
    else:
        while b:
            r = _prem(a, b)
            a, b = b, _primitive(r)
        g = a
    if len(g) == 1:
        return [1]
    sign = -1 if g[-1] < 0 else 1
    return [int(sign * c) for c in g]


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def evaluate(p: RatPoly, x: Number) -> Fraction:
    """Exact value ``p(x)``."""
    if not p.coeffs:
        return Fraction(0)
    x = _as_fraction(x)
    a, den = p._scaled_ints()
    num, q = x.numerator, x.denominator
    v = a[-1]
    qk = 1
    for i in range(len(a) - 2, -1, -1):
        qk *= q
        v = v * num + a[i] * qk
    return Fraction(v, den * qk)


def derivative(p: RatPoly) -> RatPoly:
    return RatPoly([i * p.coeffs[i] for i in range(1, len(p.coeffs))])


def compose_affine(p: RatPoly, a: Number, b: Number) -> RatPoly:
    """Return ``q`` with ``q(x) == p(a*x + b)``.

    Runs Horner's scheme on ``(s*a')*x + r`` over the integers, where
    ``a = a'`` and ``b = r/s`` share a common denominator, so the only
    ``Fraction`` work is building the final coefficients.
    """
    a, b = _as_fraction(a), _as_fraction(b)
    if a == 0:
        raise ValueError("compose_affine requires a nonzero scale factor")
    if len(p.coeffs) <= 1:
        return p
    ints, den = p._scaled_ints()
    s = math.lcm(a.denominator, b.denominator)
    lin0, lin1 = b.numerator * (s // b.denominator), a.numerator * (s // a.denominator)
    # R = sum ints[i] * (lin1 x + lin0)^i * s^(d-i);  p(ax+b) = R / (den * s^d)
    d = len(ints) - 1
    acc = [ints[-1]]
    sk = 1
    for i in range(d - 1, -1, -1):
        sk *= s
        nxt = [0] * (len(acc) + 1)
        for j, c in enumerate(acc):
            if c:
                nxt[j] += c * lin0
                nxt[j + 1] += c * lin1
        nxt[0] += ints[i] * sk
        acc = nxt
    return RatPoly.from_integer(acc, den * s**d)


def gcd(p: RatPoly, q: RatPoly) -> RatPoly:
    """Monic greatest common divisor."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if q.is_zero():
        return p.monic()
    if p.is_zero():
        return q.monic()
    return RatPoly(_int_gcd(p.primitive_ints(), q.primitive_ints())).monic()


def squarefree_part(p: RatPoly) -> RatPoly:
    """Monic ``p / gcd(p, p')``: same distinct roots, each simple."""
    if p.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    a = p.primitive_ints()
    g = _int_gcd(a, _int_derivative(a))
    if len(g) == 1:
        return p.monic()
    return RatPoly(_int_exact_div(a, g)).monic()


@dataclass(frozen=True)
class Interval:
    """Rational interval; default kind is the half-open ``(lo, hi]``."""

    lo: Fraction
    hi: Fraction
    lo_closed: bool = False
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_fraction(self.lo))
        object.__setattr__(self, "hi", _as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @classmethod
    def closed(cls, lo: Number, hi: Number) -> "Interval":
        return cls(lo, hi, True, True)

    @classmethod
    def open(cls, lo: Number, hi: Number) -> "Interval":
        return cls(lo, hi, False, False)

    @classmethod
    def point(cls, x: Number) -> "Interval":
        return cls(x, x, True, True)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x) -> bool:
        x = _as_fraction(x)
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo}, {self.hi}{right}"


class SturmChain:
    """Sturm chain of the squarefree part of a polynomial.

    ``polys[0]`` is a primitive integer multiple of the squarefree part and
    ``polys[1]`` its derivative; later members are sign-corrected primitive
    pseudo-remainders ending in a nonzero constant.
    """

    __slots__ = ("polys", "squarefree_ints", "derivative_gcd")

    def __init__(self, p: RatPoly):
        if p.is_zero():
            raise ValueError("Sturm chain of the zero polynomial")
        a = [_big(c) for c in p.primitive_ints()]
        polys = _sturm_sequence(a)
        g = polys[-1]
        # gcd(p, p') is the last member of the first sequence
        self.derivative_gcd: tuple[int, ...] = (1,) if len(g) == 1 else tuple(
            int(c) if g[-1] > 0 else -int(c) for c in g
        )
        if len(g) > 1:
            a = [_big(c) for c in _int_exact_div(a, g)]
            polys = _sturm_sequence(a)
        self.squarefree_ints: tuple[int, ...] = tuple(a)
        self.polys: tuple[tuple[int, ...], ...] = tuple(tuple(m) for m in polys)

    def __len__(self) -> int:
        return len(self.polys)

    def as_ratpolys(self) -> list[RatPoly]:
        return [RatPoly(int(c) for c in m) for m in self.polys]

    def sign(self, x: Number) -> int:
        """Sign of the squarefree polynomial at ``x``."""
        return _sign_at(self.squarefree_ints, _as_fraction(x))

    def variations(self, x: Number) -> int:
        x = _as_fraction(x)
        count, last = 0, 0
        for m in self.polys:
            s = _sign_at(m, x)
            if s:
                if last and s != last:
                    count += 1
                last = s
        return count

    def count(self, lo: Number, hi: Number) -> int:
        """Number of distinct roots in ``(lo, hi]``."""
        lo, hi = _as_fraction(lo), _as_fraction(hi)
        if lo >= hi:
            return 0
        return self.variations(lo) - self.variations(hi)

    def count_interval(self, iv: Interval) -> int:
        if iv.is_point:
            closed = iv.lo_closed and iv.hi_closed
            return int(closed and self.sign(iv.lo) == 0)
        n = self.count(iv.lo, iv.hi)
        if iv.lo_closed and self.sign(iv.lo) == 0:
            n += 1
        if not iv.hi_closed and self.sign(iv.hi) == 0:
            n -= 1
        return n


def _sturm_sequence(a: list[int]) -> list[list[int]]:
    if len(a) == 1:
        return [a]
    chain = [a, _primitive(_int_derivative(a))]
    while len(chain[-1]) > 1:
        prev, cur = chain[-2], chain[-1]
        r = _prem(prev, cur)
        if not r:
            break
        delta = len(prev) - len(cur) + 1
        # rem = prem / lc^delta, and the chain needs -rem up to a positive factor
        flip = -1 if (cur[-1] > 0 or delta % 2 == 0) else 1
        g = _content(r)
        chain.append([flip * (c // g) for c in r])
    return chain


def sturm_chain(p: RatPoly) -> SturmChain:
    return SturmChain(p)


def sturm_count(p: RatPoly, iv: Interval) -> int:
    """Distinct real roots of ``p`` in ``iv`` (default kind ``(lo, hi]``)."""
    return SturmChain(p).count_interval(iv)


def cauchy_bound(p: RatPoly) -> Fraction:
    """``1 + max|a_i| / |a_deg|``; every real root lies strictly inside."""
    if p.is_zero() or len(p.coeffs) < 2:
        raise ValueError("Cauchy bound needs a polynomial of degree >= 1")
    lc = abs(p.coeffs[-1])
    return 1 + max(abs(c) for c in p.coeffs[:-1]) / lc
