"""Real roots of Bernoulli polynomials: counts, isolation, and the largest root.

Everything is decided by exact sign evaluations and Sturm counts; floats
never enter.  Chains and multiplicity towers are memoised per polynomial so
repeated queries against the same ``B_n`` stay cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .bernoulli import bernoulli_polynomial
from .ratpoly import (
    Interval,
    RatPoly,
    SturmChain,
    cauchy_bound,
)

__all__ = [
    "DEFAULT_EPS",
    "RootIsolation",
    "RootReport",
    "ceil_max_root",
    "count_with_multiplicity",
    "isolate_poly",
    "isolate_roots",
    "max_root",
    "real_root_count",
    "refine",
    "root_report",
    "structural_count",
]

DEFAULT_EPS = Fraction(1, 2**40)


@lru_cache(maxsize=512)
def chain_for(p: RatPoly) -> SturmChain:
    return SturmChain(p)


@lru_cache(maxsize=512)
def _tower(p: RatPoly) -> tuple[SturmChain, ...]:
    """Chains for ``g_0 = p``, ``g_{k+1} = gcd(g_k, g_k')`` down to a constant.

    A root of multiplicity ``m`` is a root of exactly ``g_0 .. g_{m-1}``, so
    summing distinct-root counts across the tower counts with multiplicity.
    """
    chains = [chain_for(p)]
    while len(chains[-1].derivative_gcd) > 1:
        chains.append(chain_for(RatPoly(chains[-1].derivative_gcd)))
    return tuple(chains)


@lru_cache(maxsize=512)
def _bound(p: RatPoly) -> Fraction:
    # integral bound keeps bisection points dyadic
    return Fraction(math.ceil(cauchy_bound(p)))


def count_with_multiplicity(p: RatPoly, iv: Interval) -> int:
    return sum(ch.count_interval(iv) for ch in _tower(p))


@dataclass(frozen=True)
class RootIsolation:
    intervals: tuple[Interval, ...]
    multiplicities: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.intervals)

    @property
    def total_multiplicity(self) -> int:
        return sum(self.multiplicities)


def _bisect(chain: SturmChain, lo: Fraction, hi: Fraction, n: int, out: list[Interval]) -> None:
    """Isolate the ``n`` roots of ``chain`` in ``(lo, hi]``, appending in order."""
    stack = [(lo, hi, n)]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            if chain.sign(hi) == 0:
                out.append(Interval.point(hi))
                continue
            if chain.sign(lo) != 0:
                out.append(Interval.open(lo, hi))
                continue
        mid = (lo + hi) / 2
        left = chain.count(lo, mid)
        # push the right half first so the left one is emitted first
        stack.append((mid, hi, n - left))
        stack.append((lo, mid, left))


def isolate_poly(p: RatPoly) -> RootIsolation:
    """Isolate every real root of ``p`` (any nonconstant rational polynomial)."""
    if len(p.coeffs) < 2:
        return RootIsolation((), ())
    chain = chain_for(p)
    M = _bound(p)
    intervals: list[Interval] = []
    _bisect(chain, -M, M, chain.count(-M, M), intervals)
    mults = tuple(count_with_multiplicity(p, iv) for iv in intervals)
    return RootIsolation(tuple(intervals), mults)


def isolate_roots(n: int) -> RootIsolation:
    if n < 1:
        raise ValueError("B_0 has no roots; need n >= 1")
    return isolate_poly(bernoulli_polynomial(n))


def real_root_count(n: int) -> tuple[int, int]:
    """``(c_distinct, c_with_multiplicity)`` for ``B_n`` over the whole real line."""
    if n < 1:
        raise ValueError("need n >= 1")
    p = bernoulli_polynomial(n)
    M = _bound(p)
    whole = Interval(-M, M)
    return chain_for(p).count_interval(whole), count_with_multiplicity(p, whole)


def refine(p: RatPoly, iv: Interval, eps: Fraction) -> Interval:
    """Shrink an isolating interval of a simple root to width ``<= eps``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if iv.is_point:
        return iv
    chain = chain_for(p)
    lo, hi = iv.lo, iv.hi
    slo, shi = chain.sign(lo), chain.sign(hi)
    if slo == 0 and lo in iv:
        return Interval.point(lo)
    if shi == 0 and hi in iv:
        return Interval.point(hi)
    if slo == shi:
        raise ValueError(f"no sign change of p on {iv}")
    while hi - lo > eps:
        mid = (lo + hi) / 2
        s = chain.sign(mid)
        if s == 0:
            return Interval.point(mid)
        if s == slo:
            lo = mid
        else:
            hi = mid
    return Interval.open(lo, hi)


def _rightmost(p: RatPoly) -> Interval:
    """Isolating interval of the largest real root."""
    chain = chain_for(p)
    hi = _bound(p)
    lo = -hi
    if chain.count(lo, hi) == 0:
        raise ValueError("polynomial has no real roots")
    while True:
        if chain.sign(hi) == 0:
            return Interval.point(hi)
        if chain.count(lo, hi) == 1 and chain.sign(lo) != 0:
            return Interval.open(lo, hi)
        mid = (lo + hi) / 2
        if chain.count(mid, hi) >= 1:
            lo = mid
        else:
            hi = mid


def max_root(n: int, eps: Fraction = DEFAULT_EPS) -> tuple[Interval, bool]:
    """Enclosure of ``y_n`` of width ``<= eps`` and whether ``y_n`` is an integer."""
    if n < 1:
        raise ValueError("need n >= 1")
    p = bernoulli_polynomial(n)
    iv = refine(p, _rightmost(p), eps)
    exact_int = iv.is_point and iv.lo.denominator == 1
    if not exact_int:
        d = ceil_max_root(n)
        exact_int = chain_for(p).sign(d) == 0
        if exact_int:
            iv = Interval.point(d)
    return iv, exact_int


def ceil_max_root(n: int) -> int:
    """``d_n``, the least integer ``>= y_n``, from integer-grid Sturm counts."""
    if n < 1:
        raise ValueError("need n >= 1")
    p = bernoulli_polynomial(n)
    return _ceil_max_root(p)


@lru_cache(maxsize=512)
def _ceil_max_root(p: RatPoly) -> int:
    chain = chain_for(p)
    M = int(_bound(p))
    # largest integer m with a root in (m, M]; then y lies in (m, m+1]
    lo, hi = -M, M
    if chain.count(lo, M) == 0:
        raise ValueError("polynomial has no real roots")
    # invariant: count(lo, M) >= 1 and count(hi, M) == 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if chain.count(mid, M) >= 1:
            lo = mid
        else:
            hi = mid
    return lo + 1


def structural_count(n: int) -> int:
    """Closed-form root count ``4 d_n - 3`` valid for ``n = 1 (mod 4)``."""
    if n < 1 or n % 4 != 1:
        raise ValueError(f"structural count needs n = 1 (mod 4), got {n}")
    return 4 * ceil_max_root(n) - 3


@dataclass(frozen=True)
class RootReport:
    n: int
    c_distinct: int
    c_with_multiplicity: int
    y_enclosure: Interval
    d: int
    y_is_exact_integer: bool
    isolation: Optional[RootIsolation] = None

    @property
    def y_mid(self) -> Fraction:
        return (self.y_enclosure.lo + self.y_enclosure.hi) / 2


def root_report(n: int, eps: Fraction = DEFAULT_EPS, with_isolation: bool = False) -> RootReport:
    c_dist, c_mult = real_root_count(n)
    iv, exact_int = max_root(n, eps)
    return RootReport(
        n=n,
        c_distinct=c_dist,
        c_with_multiplicity=c_mult,
        y_enclosure=iv,
        d=ceil_max_root(n),
        y_is_exact_integer=exact_int,
        isolation=isolate_roots(n) if with_isolation else None,
    )
