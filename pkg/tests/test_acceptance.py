"""Acceptance criteria, one test per criterion, each at its stated tolerance.

The residual envelopes in criterion 8 were produced by a first oracle run
(exact Sturm enclosures for y_n, exact root counts, log-domain Bernoulli
radicals) and frozen here.  ``ENVELOPE_SLACK`` absorbs platform ULP noise.
"""

import math
import subprocess
import sys
import time
from fractions import Fraction as F

import pytest

from bernpoly.asymptotics import (
    predict_c,
    predict_y,
    radical_residual,
    residual_table,
    zeta_euler,
    zeta_euler_enclosure,
)
from bernpoly.bernoulli import (
    bernoulli_number,
    bernoulli_polynomial,
    integral_table,
    recurrence_numbers,
    series_table,
    verify_identities,
    von_staudt_clausen_check,
)
from bernpoly.ratpoly import RatPoly, evaluate
from bernpoly.roots import ceil_max_root, max_root, real_root_count
from bernpoly.verifier import check_lemma, check_statement1, check_statement2, check_theorem2

ENVELOPE_SLACK = 1e-9
Y_RESID_ENVELOPE = (0.32266850073824016, 0.9295689181500744)  # 5 <= n <= 60
C_RESID_ENVELOPE = (0.2906768089011429, 4.143014684459345)  # 5 <= n <= 60
RADICAL_RESID_ENVELOPE = (0.09708914508090949, 0.15250402965561577)  # 1 <= k <= 50


def within(x, env):
    return env[0] - ENVELOPE_SLACK <= x <= env[1] + ENVELOPE_SLACK


@pytest.mark.acceptance("1 triple-construction agreement, n <= 64")
def test_triple_construction():
    t0 = time.perf_counter()
    series, integral = series_table(64), integral_table(64)
    for n in range(65):
        assert bernoulli_polynomial(n) == series[n] == integral[n], n
    assert time.perf_counter() - t0 < 30


@pytest.mark.acceptance("2 identity suite, 1 <= n <= 200")
def test_identity_suite():
    t0 = time.perf_counter()
    for n in range(1, 201):
        rep = verify_identities(n)
        assert rep.passed, (n, rep.witnesses)
    assert time.perf_counter() - t0 < 60


@pytest.mark.acceptance("3 von Staudt-Clausen for even n <= 200; B_12 = -691/2730")
def test_von_staudt_clausen():
    for n in range(2, 201, 2):
        assert von_staudt_clausen_check(n), n
    assert bernoulli_number(12) == F(-691, 2730)
    assert recurrence_numbers(12)[12] == F(-691, 2730)


@pytest.mark.acceptance("4 lemma, all residues mod 4, 2 <= n <= 120")
def test_lemma():
    t0 = time.perf_counter()
    for n in range(2, 121):
        rep = check_lemma(n)
        assert rep.passed, rep.witness
    assert time.perf_counter() - t0 < 120


@pytest.mark.acceptance("5 small-n ground truth")
def test_small_n():
    assert [real_root_count(n)[1] for n in range(1, 6)] == [1, 2, 3, 4, 5]
    assert [ceil_max_root(n) for n in range(1, 6)] == [1, 1, 1, 2, 2]
    iv3, is_int = max_root(3)
    assert iv3.is_point and iv3.lo == 1 and is_int
    iv5, _ = max_root(5, F(1, 10**6))
    assert iv5.width <= F(1, 10**6)
    # (1 + sqrt(7/3))/2 is the positive root of x^2 - x - 1/3
    quad = RatPoly([F(-1, 3), -1, 1])
    assert evaluate(quad, iv5.lo) < 0 < evaluate(quad, iv5.hi)
    assert abs(float(iv5.lo) - (1 + math.sqrt(7 / 3)) / 2) < 1e-6


@pytest.mark.acceptance("6 ceiling step (n < 60), radical bounds (k <= 15), c = 4d - 3 (k <= 14)")
def test_ceiling_radical_and_count_claims():
    t0 = time.perf_counter()
    rep = check_statement1(60)
    assert rep.passed, rep.witness
    for k in range(1, 16):
        rep = check_statement2(k)
        assert rep.passed, rep.witness
    for k in range(0, 15):
        rep = check_theorem2(k)
        assert rep.passed, rep.witness
    assert time.perf_counter() - t0 < 300


@pytest.mark.acceptance("7 zeta(4) within 1e-9; 1 < zeta(4k) < 2 for k <= 50")
def test_zeta():
    assert abs(zeta_euler(1) - math.pi**4 / 90) <= 1e-9
    for k in range(1, 51):
        z = zeta_euler(k)
        assert 1 <= z < 2, k
        # doubles cannot resolve zeta(4k) - 1 ~ 2**-4k; the exact enclosure can
        lo, hi = zeta_euler_enclosure(k)
        assert 1 < lo <= hi < 2, k
        assert lo <= F(z) * (1 + F(1, 10**12)) and F(z) * (1 - F(1, 10**12)) <= hi


@pytest.mark.acceptance("8 residual envelopes (5 <= n <= 60, 1 <= k <= 50); predict_c = 4 predict_y")
def test_residual_envelopes():
    rows = residual_table(60, n_min=5)
    for r in rows:
        assert within(r.y_resid, Y_RESID_ENVELOPE), (r.n, r.y_resid)
        assert within(r.c_resid, C_RESID_ENVELOPE), (r.n, r.c_resid)
    for n in range(1, 201):
        assert abs(predict_c(n) - 4 * predict_y(n)) <= 1e-12
    for k in range(1, 51):
        assert within(radical_residual(k), RADICAL_RESID_ENVELOPE), k


@pytest.mark.acceptance("9 determinism of two consecutive `table --to 40` runs")
def test_determinism(tmp_path):
    cmd = [sys.executable, "-m", "bernpoly", "table", "--to", "40", "--cache", str(tmp_path / "b.cache")]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    assert first.count(b"\n") == 41
