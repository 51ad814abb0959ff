"""Bernoulli numbers and polynomials, built three independent ways.

The production route is the binomial recurrence
``sum_{j=0}^{n} C(n+1, j) B_j = 0`` with results memoised in a
:class:`BernoulliCache`.  Two slower constructions serve as oracles:

* :func:`series_oracle` divides ``t*exp(t*x)`` by ``exp(t) - 1`` as power
  series with polynomial coefficients;
* :func:`integral_oracle` integrates ``n * B_{n-1}`` and fixes the constant
  so the mean over ``[0, 1]`` vanishes.
"""

from __future__ import annotations

import math
import os
import tempfile
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .ratpoly import RatPoly, compose_affine, derivative

__all__ = [
    "BernoulliCache",
    "CacheChecksumError",
    "CacheFormatError",
    "IdentityReport",
    "bernoulli_number",
    "bernoulli_numbers",
    "bernoulli_polynomial",
    "cache_load",
    "cache_store",
    "get_default_cache",
    "integral_oracle",
    "integral_table",
    "recurrence_numbers",
    "series_oracle",
    "series_table",
    "set_default_cache",
    "verify_identities",
    "von_staudt_clausen_check",
    "von_staudt_clausen_primes",
]

DEFAULT_N_MAX = 200


class CacheFormatError(ValueError):
    def __init__(self, path, lineno: int, line: str, reason: str):
        super().__init__(f"{path}:{lineno}: {reason}: {line!r}")
        self.lineno = lineno
        self.reason = reason


class CacheChecksumError(ValueError):
    """Cached values disagree with a fresh recurrence derivation."""

    def __init__(self, path, mismatches: list[tuple[int, Fraction, Fraction]]):
        n, stored, fresh = mismatches[0]
        super().__init__(
            f"{path}: {len(mismatches)} cached Bernoulli number(s) fail re-derivation; "
            f"first at n={n}: stored {stored}, recurrence gives {fresh}"
        )
        self.mismatches = mismatches


@dataclass
class BernoulliCache:
    """Memo of exact Bernoulli numbers ``B_n = B_n(0)``.

    Reads are lock-free; filling takes ``_lock`` so only one thread extends
    the table at a time.
    """

    entries: dict[int, Fraction] = field(default_factory=dict)
    path: Optional[Path] = None
    dirty: bool = False
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __contains__(self, n: int) -> bool:
        return n in self.entries

    def get(self, n: int) -> Fraction:
        B = self.entries.get(n)
        if B is None:
            self.fill(n)
            B = self.entries[n]
        return B

    def fill(self, n: int) -> None:
        """Make sure every index ``0..n`` is present."""
        with self._lock:
            missing = [m for m in range(n + 1) if m not in self.entries]
            if not missing:
                return
            for m in missing:
                self.entries[m] = _recurrence_step(m, self.entries)
            self.dirty = True

    def as_sorted(self) -> list[tuple[int, Fraction]]:
        return sorted(self.entries.items())


def _recurrence_step(m: int, known: dict[int, Fraction]) -> Fraction:
    """``B_m`` from ``B_0..B_{m-1}`` via ``sum_{j<=m} C(m+1, j) B_j = 0``."""
    if m == 0:
        return Fraction(1)
    if m >= 3 and m % 2:
        return Fraction(0)
    s = Fraction(0)
    c = 1  # C(m+1, j), advanced along the row
    for j in range(m):
        Bj = known[j]
        if Bj:
            s += c * Bj
        c = c * (m + 1 - j) // (j + 1)
    return -s / (m + 1)


def recurrence_numbers(n_max: int) -> list[Fraction]:
    """Fresh ``[B_0, ..., B_{n_max}]`` computed without touching any cache."""
    known: dict[int, Fraction] = {}
    for m in range(n_max + 1):
        known[m] = _recurrence_step(m, known)
    return [known[m] for m in range(n_max + 1)]


_default_cache = BernoulliCache()


def get_default_cache() -> BernoulliCache:
    return _default_cache


def set_default_cache(cache: BernoulliCache) -> BernoulliCache:
    """Install ``cache`` as the process-wide cache; returns the previous one."""
    global _default_cache
    previous, _default_cache = _default_cache, cache
    return previous


def bernoulli_number(n: int, cache: Optional[BernoulliCache] = None) -> Fraction:
    """Exact ``B_n(0)`` (first convention, ``B_1 = -1/2``)."""
    if n < 0:
        raise ValueError(f"Bernoulli index must be >= 0, got {n}")
    return (cache or _default_cache).get(n)


def bernoulli_numbers(n_max: int, cache: Optional[BernoulliCache] = None) -> list[Fraction]:
    cache = cache or _default_cache
    cache.fill(n_max)
    return [cache.entries[m] for m in range(n_max + 1)]


def bernoulli_polynomial(n: int, cache: Optional[BernoulliCache] = None) -> RatPoly:
    """``B_n(x) = sum_k C(n, k) B_k x^(n-k)``."""
    if n < 0:
        raise ValueError(f"Bernoulli index must be >= 0, got {n}")
    Bs = bernoulli_numbers(n, cache)
    coeffs = [Fraction(0)] * (n + 1)
    c = 1  # C(n, k)
    for k in range(n + 1):
        coeffs[n - k] = c * Bs[k]
        c = c * (n - k) // (k + 1)
    return RatPoly(coeffs)


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def series_table(n_max: int) -> list[RatPoly]:
    """``[B_0(x), ..., B_{n_max}(x)]`` from power-series division in Q[x][[t]].

    With ``N(t) = t e^{tx} / t = sum x^m/m! t^m`` and
    ``D(t) = (e^t - 1)/t = sum t^m/(m+1)!`` the quotient ``Q = N / D``
    satisfies ``Q_m = N_m - sum_{j=1}^{m} D_j Q_{m-j}`` since ``D_0 = 1``;
    then ``B_m(x) = m! Q_m``.
    """
    D = [Fraction(1, math.factorial(j + 1)) for j in range(n_max + 1)]
    Q: list[RatPoly] = []
    for m in range(n_max + 1):
        acc = RatPoly.monomial(m, Fraction(1, math.factorial(m)))
        for j in range(1, m + 1):
            acc = acc - Q[m - j] * D[j]
        Q.append(acc)
    return [Q[m] * math.factorial(m) for m in range(n_max + 1)]


def series_oracle(n: int) -> RatPoly:
    if n < 0:
        raise ValueError(f"Bernoulli index must be >= 0, got {n}")
    return series_table(n)[n]


def integral_table(n_max: int) -> list[RatPoly]:
    """``B_n`` as the zero-mean antiderivative of ``n * B_{n-1}``."""
    polys = [RatPoly([1])]
    for n in range(1, n_max + 1):
        F = (polys[-1] * n).antiderivative()
        polys.append(F - F.integrate(0, 1))
    return polys


def integral_oracle(n: int) -> RatPoly:
    if n < 0:
        raise ValueError(f"Bernoulli index must be >= 0, got {n}")
    return integral_table(n)[n]


# ---------------------------------------------------------------------------
# identities and checksums
# ---------------------------------------------------------------------------


@dataclass
class IdentityReport:
    n: int
    reflection: bool  # B_n(1-x) = (-1)^n B_n(x)
    duplication: bool  # 2^(1-n) B_n(2x) = B_n(x) + B_n(x + 1/2)
    difference: bool  # B_n(x+1) - B_n(x) = n x^(n-1)
    derivative: bool  # B_n'(x) = n B_{n-1}(x)
    witnesses: dict[str, dict] = field(default_factory=dict)

    @property
    def results(self) -> tuple[bool, bool, bool, bool]:
        return (self.reflection, self.duplication, self.difference, self.derivative)

    @property
    def passed(self) -> bool:
        return all(self.results)


def _witness(lhs: RatPoly, rhs: RatPoly) -> dict:
    diff = lhs - rhs
    idx = next(i for i, c in enumerate(diff.coeffs) if c)
    return {"coefficient_index": idx, "lhs": str(lhs[idx]), "rhs": str(rhs[idx])}


def verify_identities(n: int, cache: Optional[BernoulliCache] = None) -> IdentityReport:
    """Check the four classical identities as exact polynomial equalities."""
    if n < 1:
        raise ValueError("identities are checked for n >= 1")
    Bn = bernoulli_polynomial(n, cache)
    Bm = bernoulli_polynomial(n - 1, cache)
    checks = {
        "reflection": (compose_affine(Bn, -1, 1), Bn * (-1) ** n),
        "duplication": (
            compose_affine(Bn, 2, 0) * Fraction(2) ** (1 - n),
            Bn + compose_affine(Bn, 1, Fraction(1, 2)),
        ),
        "difference": (compose_affine(Bn, 1, 1) - Bn, RatPoly.monomial(n - 1, n)),
        "derivative": (derivative(Bn), Bm * n),
    }
    flags = {}
    witnesses = {}
    for name, (lhs, rhs) in checks.items():
        flags[name] = lhs == rhs
        if not flags[name]:
            witnesses[name] = _witness(lhs, rhs)
    return IdentityReport(n=n, witnesses=witnesses, **flags)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def von_staudt_clausen_primes(n: int) -> list[int]:
    """Primes ``p`` with ``(p - 1) | n``."""
    return [d + 1 for d in range(1, n + 1) if n % d == 0 and _is_prime(d + 1)]


def von_staudt_clausen_check(n: int, cache: Optional[BernoulliCache] = None) -> bool:
    """True iff ``B_n + sum 1/p`` over primes with ``(p-1) | n`` is an integer."""
    if n < 2 or n % 2:
        raise ValueError(f"von Staudt-Clausen applies to even n >= 2, got {n}")
    total = bernoulli_number(n, cache) + sum(Fraction(1, p) for p in von_staudt_clausen_primes(n))
    return total.denominator == 1


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------


def _parse_line(path, lineno: int, line: str) -> tuple[int, Fraction]:
    parts = line.split("\t")
    if len(parts) != 2:
        raise CacheFormatError(path, lineno, line, "expected '<n>\\t<num>/<den>'")
    idx, frac = parts
    num, sep, den = frac.partition("/")
    if not sep:
        raise CacheFormatError(path, lineno, line, "value must be '<num>/<den>'")
    try:
        n, p, q = int(idx), int(num), int(den)
    except ValueError:
        raise CacheFormatError(path, lineno, line, "non-integer field") from None
    if n < 0 or q <= 0:
        raise CacheFormatError(path, lineno, line, "bad index or denominator")
    if math.gcd(p, q) != 1:
        raise CacheFormatError(path, lineno, line, "fraction not reduced")
    return n, Fraction(p, q)


def cache_load(path, rederive: bool = False) -> BernoulliCache:
    """Read a cache file; a missing file yields an empty cache.

    With ``rederive`` every stored value is recomputed from the recurrence
    and any disagreement raises :class:`CacheChecksumError`.
    """
    path = Path(path)
    cache = BernoulliCache(path=path)
    if not path.exists():
        return cache
    last = -1
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, 1):
            if not raw.endswith("\n"):
                raise CacheFormatError(path, lineno, raw, "missing newline terminator")
            n, B = _parse_line(path, lineno, raw[:-1])
            if n <= last:
                raise CacheFormatError(path, lineno, raw[:-1], "indices not strictly ascending")
            last = n
            cache.entries[n] = B
    if rederive and cache.entries:
        fresh = recurrence_numbers(max(cache.entries))
        bad = [(n, B, fresh[n]) for n, B in cache.as_sorted() if fresh[n] != B]
        if bad:
            raise CacheChecksumError(path, bad)
    return cache


def cache_store(cache: BernoulliCache, path=None) -> Path:
    """Write atomically: temp file in the target directory, then rename."""
    path = Path(path if path is not None else cache.path)
    lines = "".join(f"{n}\t{B.numerator}/{B.denominator}\n" for n, B in cache.as_sorted())
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(lines)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    cache.path = path
    cache.dirty = False
    return path
