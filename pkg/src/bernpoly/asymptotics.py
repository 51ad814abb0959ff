"""Asymptotic predictions for the largest root and the root count.

Radicals and Stirling ratios are evaluated in the log domain starting from
exact integers, so Bernoulli numbers of thousands of bits never overflow a
float.  ``zeta(4k) - 1`` is about ``2**-4k``, far below what a log-domain
double resolves, so :func:`zeta_euler_enclosure` gives a rigorous rational
enclosure and :func:`zeta_euler` rounds from it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bernoulli import bernoulli_number
from .roots import DEFAULT_EPS, ceil_max_root, max_root, real_root_count

__all__ = [
    "AsymptoticsRow",
    "ZetaRow",
    "log_int",
    "log_rational",
    "pi_enclosure",
    "predict_c",
    "predict_y",
    "radical",
    "radical_pred",
    "radical_residual",
    "residual_row",
    "residual_table",
    "stirling_check",
    "zeta_dirichlet",
    "zeta_euler",
    "zeta_euler_enclosure",
    "zeta_euler_log",
    "zeta_row",
    "zeta_table",
]

LN2 = math.log(2.0)
PI_E = math.pi * math.e
_MANTISSA_BITS = 53


def log_int(m: int) -> float:
    """Natural log of a positive integer of any size.

    Writes ``m = f * 2**e`` with ``f`` in ``[1, 2)`` held to double precision.
    """
    if m <= 0:
        raise ValueError(f"log of non-positive integer {m}")
    e = m.bit_length() - 1
    if e <= _MANTISSA_BITS:
        return math.log(m)
    shift = e - _MANTISSA_BITS
    f = (m >> shift) / (1 << _MANTISSA_BITS)
    return math.log(f) + e * LN2


def log_rational(q: Fraction) -> float:
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"log of non-positive rational {q}")
    return log_int(q.numerator) - log_int(q.denominator)


def predict_y(n: int) -> float:
    """Two-term asymptotic for the largest real root: ``n/(2 pi e) + ln(n)/(4 pi e)``."""
    if n < 1:
        raise ValueError("need n >= 1")
    return n / (2 * PI_E) + math.log(n) / (4 * PI_E)


def predict_c(n: int) -> float:
    """Two-term asymptotic for the root count: ``2n/(pi e) + ln(n)/(pi e)``."""
    if n < 1:
        raise ValueError("need n >= 1")
    return 2 * n / PI_E + math.log(n) / PI_E


def _minus_b4k(k: int) -> Fraction:
    if k < 1:
        raise ValueError("need k >= 1")
    B = bernoulli_number(4 * k)
    if B >= 0:
        # B_{4k} < 0 always; a nonnegative value means the cache is corrupt
        raise RuntimeError(f"B_{4 * k} = {B} is not negative: corrupted Bernoulli data")
    return -B


def radical(k: int) -> float:
    """``(-B_{4k})**(1/(4k))``."""
    return math.exp(log_rational(_minus_b4k(k)) / (4 * k))


def radical_pred(k: int) -> float:
    return 2 * k / PI_E + math.log(4 * k) / (4 * PI_E)


def radical_residual(k: int) -> float:
    return radical(k) - radical_pred(k)


def zeta_euler(k: int) -> float:
    """``zeta(4k) = -B_{4k} 2**(4k-1) pi**(4k) / (4k)!`` rounded to a double.

    Rounded from :func:`zeta_euler_enclosure`, so the result is never below 1
    (for ``k >= 14`` it is exactly ``1.0``).  :func:`zeta_euler_log` is the
    cheaper log-domain estimate, off by about ``1e-13`` relative.
    """
    lo, hi = zeta_euler_enclosure(k)
    return float((lo + hi) / 2)


def zeta_euler_log(k: int) -> float:
    n = 4 * k
    log_z = (
        log_rational(_minus_b4k(k))
        + (n - 1) * LN2
        + n * math.log(math.pi)
        - log_int(math.factorial(n))
    )
    return math.exp(log_z)


def _arctan_inv_scaled(x: int, scale: int) -> tuple[int, int]:
    """``(A, err)`` with ``|A - scale*atan(1/x)| < err``."""
    total, power, k, sign = 0, scale // x, 0, 1
    x2 = x * x
    while power:
        total += sign * (power // (2 * k + 1))
        power //= x2
        sign = -sign
        k += 1
    # each of the k terms is off by < 2 units; the omitted tail is < 1 unit
    return total, 2 * k + 1


def pi_enclosure(bits: int) -> tuple[Fraction, Fraction]:
    """Rational ``lo < pi < hi`` with ``hi - lo`` about ``2**-bits`` (Machin's formula)."""
    scale = 1 << (bits + 16)
    a, ea = _arctan_inv_scaled(5, scale)
    b, eb = _arctan_inv_scaled(239, scale)
    mid = 16 * a - 4 * b
    err = 16 * ea + 4 * eb
    return Fraction(mid - err, scale), Fraction(mid + err, scale)


def zeta_euler_enclosure(k: int, bits: int | None = None) -> tuple[Fraction, Fraction]:
    """Exact rational enclosure of ``zeta(4k)`` from the Euler formula."""
    n = 4 * k
    if bits is None:
        bits = 2 * n + 64
    lo_pi, hi_pi = pi_enclosure(bits)
    scale = _minus_b4k(k) * 2 ** (n - 1) / math.factorial(n)
    return scale * lo_pi**n, scale * hi_pi**n


def zeta_dirichlet(s: int, terms: int = 10**6) -> tuple[float, float]:
    """Partial Dirichlet sum plus integral tail: ``(value, half_width)``.

    The tail ``sum_{j>N} j**-s`` lies between ``(N+1)**(1-s)/(s-1)`` and
    ``N**(1-s)/(s-1)``; the midpoint is returned with half the gap.
    """
    if s < 2:
        raise ValueError("need s >= 2")
    head = math.fsum(j ** -float(s) for j in range(terms, 0, -1))
    t_lo = (terms + 1) ** (1.0 - s) / (s - 1)
    t_hi = terms ** (1.0 - s) / (s - 1)
    return head + (t_lo + t_hi) / 2, (t_hi - t_lo) / 2


def stirling_check(k: int) -> float:
    """``(4k)! / ((4k/e)**(4k) sqrt(8 pi k))``, computed in log domain."""
    if k < 1:
        raise ValueError("need k >= 1")
    n = 4 * k
    log_approx = n * math.log(n) - n + 0.5 * math.log(8 * math.pi * k)
    return math.exp(log_int(math.factorial(n)) - log_approx)


@dataclass(frozen=True)
class AsymptoticsRow:
    n: int
    c_actual: int
    d: int
    y_lo: Fraction
    y_hi: Fraction
    y_mid: float
    y_pred: float
    y_resid: float
    c_pred: float
    c_resid: float


@dataclass(frozen=True)
class ZetaRow:
    k: int
    zeta_euler: float
    radical: float
    radical_pred: float
    radical_resid: float
    stirling_ratio: float


def residual_row(n: int, eps: Fraction = DEFAULT_EPS) -> AsymptoticsRow:
    iv, _ = max_root(n, eps)
    _, c_mult = real_root_count(n)
    y_mid = float((iv.lo + iv.hi) / 2)
    y_pred, c_pred = predict_y(n), predict_c(n)
    return AsymptoticsRow(
        n=n,
        c_actual=c_mult,
        d=ceil_max_root(n),
        y_lo=iv.lo,
        y_hi=iv.hi,
        y_mid=y_mid,
        y_pred=y_pred,
        y_resid=y_mid - y_pred,
        c_pred=c_pred,
        c_resid=c_mult - c_pred,
    )


def residual_table(n_max: int, eps: Fraction = DEFAULT_EPS, n_min: int = 1) -> list[AsymptoticsRow]:
    return [residual_row(n, eps) for n in range(n_min, n_max + 1)]


def zeta_row(k: int) -> ZetaRow:
    r, rp = radical(k), radical_pred(k)
    return ZetaRow(k, zeta_euler(k), r, rp, r - rp, stirling_check(k))


def zeta_table(k_max: int) -> list[ZetaRow]:
    return [zeta_row(k) for k in range(1, k_max + 1)]
