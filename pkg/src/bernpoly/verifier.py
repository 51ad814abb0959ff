"""Executable checks for the structural claims about Bernoulli polynomials.

Each ``check_*`` function returns a :class:`VerdictReport`.  All comparisons
are exact: rational evaluations, Sturm counts and integer powers.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .bernoulli import bernoulli_number, bernoulli_polynomial
from .ratpoly import Interval, RatPoly, compose_affine, derivative, evaluate
from .roots import (
    ceil_max_root,
    chain_for,
    count_with_multiplicity,
    real_root_count,
    structural_count,
)

__all__ = [
    "VerdictReport",
    "check_corollary",
    "check_lemma",
    "check_root_count_step",
    "check_statement1",
    "check_statement2",
    "check_theorem2",
]

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)
THREE_QUARTERS = Fraction(3, 4)


@dataclass
class VerdictReport:
    claim: str
    checked: str
    passed: bool
    witness: Optional[dict] = None
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


class _Collector:
    """Records failing sub-checks; the first failure becomes the witness."""

    def __init__(self):
        self.failures: list[dict] = []

    def require(self, ok: bool, what: str, **values) -> bool:
        if not ok:
            self.failures.append({"check": what, **{k: _jsonable(v) for k, v in values.items()}})
        return ok

    def report(self, claim: str, checked: str, seconds: float, notes=None) -> VerdictReport:
        witness = None
        if self.failures:
            witness = dict(self.failures[0])
            if len(self.failures) > 1:
                witness["more_failures"] = len(self.failures) - 1
        return VerdictReport(claim, checked, not self.failures, witness, seconds, list(notes or []))


def _jsonable(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


@contextmanager
def _timer():
    box = [time.perf_counter()]
    yield box
    box[0] = time.perf_counter() - box[0]


def _open_count(p: RatPoly, lo: Fraction, hi: Fraction) -> int:
    return chain_for(p).count_interval(Interval.open(lo, hi))


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def check_lemma(n: int) -> VerdictReport:
    """Signs at 0, 1/2, 1 and monotonicity or strict sign on each half of [0, 1].

    For even ``n`` strict monotonicity on a closed half follows from the
    derivative ``n B_{n-1}`` having no root in the open half plus its sign at
    one interior point; for odd ``n`` the same argument is applied to ``B_n``.
    """
    if n < 2:
        raise ValueError("the lemma is stated for n >= 2")
    col = _Collector()
    with _timer() as t:
        Bn = bernoulli_polynomial(n)
        Bprev = bernoulli_polynomial(n - 1)
        v0, vh, v1 = evaluate(Bn, 0), evaluate(Bn, HALF), evaluate(Bn, 1)
        col.require(derivative(Bn) == Bprev * n, "B_n' = n B_{n-1}", n=n)
        r = n % 4
        if r in (0, 2):
            # r == 2: B(0) = B(1) > 0 > B(1/2), decreasing then increasing
            s = 1 if r == 2 else -1
            col.require(v0 == v1, "B_n(0) = B_n(1)", n=n, b0=v0, b1=v1)
            col.require(_sign(v0) == s, "sign B_n(0)", n=n, value=v0, expected=s)
            col.require(_sign(vh) == -s, "sign B_n(1/2)", n=n, value=vh, expected=-s)
            for lo, hi, probe, want in ((0, HALF, QUARTER, -s), (HALF, 1, THREE_QUARTERS, s)):
                roots = _open_count(Bprev, Fraction(lo), Fraction(hi))
                col.require(roots == 0, "derivative root-free on open half", n=n, lo=lo, hi=hi, roots=roots)
                dv = evaluate(Bprev, probe)
                col.require(_sign(dv) == want, "derivative sign on half", n=n, at=probe, value=dv, expected=want)
        else:
            # r == 1: zeros at 0, 1/2, 1; negative then positive
            s = -1 if r == 1 else 1
            for x, v in ((0, v0), (HALF, vh), (1, v1)):
                col.require(v == 0, "B_n vanishes", n=n, at=x, value=v)
            for lo, hi, probe, want in ((0, HALF, QUARTER, s), (HALF, 1, THREE_QUARTERS, -s)):
                roots = _open_count(Bn, Fraction(lo), Fraction(hi))
                col.require(roots == 0, "B_n root-free on open half", n=n, lo=lo, hi=hi, roots=roots)
                v = evaluate(Bn, probe)
                col.require(_sign(v) == want, "sign of B_n on half", n=n, at=probe, value=v, expected=want)
    return col.report("lemma", f"n={n} (n mod 4 = {n % 4})", t[0])


DEFAULT_COROLLARY_POINTS = (Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(7, 3))


def check_corollary(
    n: int, k_max: int = 5, xs: Sequence[Fraction] = DEFAULT_COROLLARY_POINTS
) -> VerdictReport:
    """Degree ``n``, leading coefficient 1, and ``B_n(x + k)`` increasing in ``k`` for ``x > 0``."""
    if n < 1:
        raise ValueError("need n >= 1")
    col = _Collector()
    with _timer() as t:
        Bn = bernoulli_polynomial(n)
        col.require(Bn.degree == n, "degree", n=n, degree=Bn.degree)
        col.require(Bn.leading == 1, "leading coefficient", n=n, leading=Bn.leading)
        # the increment B_n(x+1) - B_n(x) is n x^(n-1), positive for x > 0
        incr = compose_affine(Bn, 1, 1) - Bn
        col.require(incr == RatPoly.monomial(n - 1, n), "increment is n x^(n-1)", n=n)
        for x in xs:
            x = Fraction(x)
            if x <= 0:
                raise ValueError("sample points must be positive")
            vals = [evaluate(Bn, x + k) for k in range(k_max + 1)]
            for k in range(k_max):
                col.require(vals[k + 1] > vals[k], "strict increase", n=n, x=x, k=k,
                            lower=vals[k], upper=vals[k + 1])
    return col.report("corollary", f"n={n}, k=0..{k_max}, x in {[str(x) for x in xs]}", t[0])


def check_statement1(n_max: int, d: Optional[Mapping[int, int]] = None) -> VerdictReport:
    """``d_{n+1} <= d_n + 1`` for ``1 <= n < n_max`` plus the mod-4 sandwich.

    ``d`` may be supplied to test the checker itself; by default it is
    computed exactly.
    """
    if n_max < 2:
        raise ValueError("need n_max >= 2")
    col = _Collector()
    with _timer() as t:
        if d is None:
            d = {n: ceil_max_root(n) for n in range(1, n_max + 1)}
        for n in range(1, n_max):
            col.require(d[n + 1] <= d[n] + 1, "d_{n+1} <= d_n + 1", n=n, d_n=d[n], d_next=d[n + 1])
        k = 1
        while 4 * k + 4 <= n_max:
            for i in (1, 2, 3):
                upper, mid, lower = d[4 * k] + i, d[4 * k + i], d[4 * k + 4] - 4 + i
                col.require(upper >= mid >= lower, "sandwich d_4k+i >= d_(4k+i) >= d_(4k+4)-4+i",
                            k=k, i=i, upper=upper, value=mid, lower=lower)
            k += 1
    return col.report("statement1", f"1<=n<{n_max}", t[0])


def check_statement2(k: int) -> VerdictReport:
    """Radical bounds on ``d_{4k}``, cleared of roots by raising to the power ``4k``."""
    if k < 1:
        raise ValueError("need k >= 1")
    col = _Collector()
    with _timer() as t:
        n = 4 * k
        B = bernoulli_number(n)
        if not col.require(B < 0, "B_4k(0) < 0", k=k, B=B):
            # the polynomial may then have no real root at all
            return col.report("statement2", f"k={k} (n={4 * k})", time.perf_counter() - t[0])
        d = ceil_max_root(n)
        # (1 - B)^(1/n) < d  <=>  d^n > 1 - B   (d >= 1)
        col.require(Fraction(d) ** n > 1 - B, "lower radical bound", k=k, d=d, lhs=d**n, rhs=1 - B)
        # d < 2 + (-B)^(1/n)  <=>  (d-2)^n < -B   when d >= 2, trivially otherwise
        if d >= 2:
            col.require(Fraction(d - 2) ** n < -B, "upper radical bound", k=k, d=d,
                        lhs=(d - 2) ** n, rhs=-B)
    return col.report("statement2", f"k={k} (n={4 * k})", t[0])


def check_theorem2(k: int) -> VerdictReport:
    """``c_{4k+1} = 4 d_{4k+1} - 3`` with both sides computed independently.

    Also checks the pairing behind it: for every integer ``1 <= m <= d - 1``
    exactly two roots (with multiplicity) lie in ``[m, m + 1/2]`` and none in
    ``[m + 1/2, m + 1]``.
    """
    if k < 0:
        raise ValueError("need k >= 0")
    col = _Collector()
    notes = []
    with _timer() as t:
        n = 4 * k + 1
        Bn = bernoulli_polynomial(n)
        c_dist, c_mult = real_root_count(n)
        d = ceil_max_root(n)
        col.require(c_mult == 4 * d - 3, "c = 4d - 3", n=n, c=c_mult, d=d)
        col.require(structural_count(n) == c_mult, "structural count agrees", n=n)
        col.require(c_dist == c_mult, "real roots simple", n=n, c_distinct=c_dist, c_mult=c_mult)
        for m in range(1, d):
            lower = count_with_multiplicity(Bn, Interval.closed(m, m + HALF))
            upper = count_with_multiplicity(Bn, Interval.closed(m + HALF, m + 1))
            col.require(lower == 2, "exactly 2 roots on [m, m+1/2]", n=n, m=m, roots=lower)
            col.require(upper == 0, "no roots on [m+1/2, m+1]", n=n, m=m, roots=upper)
        if d < 2:
            notes.append("d < 2: outside the range where the pairing argument applies (degenerate case)")
    return col.report("theorem2", f"k={k} (n={4 * k + 1})", t[0], notes)


def check_root_count_step(n_max: int, c: Optional[Mapping[int, int]] = None) -> VerdictReport:
    """``c_{n+1} <= c_n + 1`` for ``1 <= n < n_max`` (counts with multiplicity)."""
    if n_max < 2:
        raise ValueError("need n_max >= 2")
    col = _Collector()
    with _timer() as t:
        if c is None:
            c = {n: real_root_count(n)[1] for n in range(1, n_max + 1)}
        for n in range(1, n_max):
            col.require(c[n + 1] <= c[n] + 1, "c_{n+1} <= c_n + 1", n=n, c_n=c[n], c_next=c[n + 1])
    return col.report("root_count_step", f"1<=n<{n_max}", t[0])
