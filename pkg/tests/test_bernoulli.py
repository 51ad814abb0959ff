import math
from fractions import Fraction as F

import pytest
import sympy

from bernpoly.bernoulli import (
    BernoulliCache,
    CacheChecksumError,
    CacheFormatError,
    bernoulli_number,
    bernoulli_numbers,
    bernoulli_polynomial,
    cache_load,
    cache_store,
    integral_oracle,
    integral_table,
    recurrence_numbers,
    series_oracle,
    series_table,
    verify_identities,
    von_staudt_clausen_check,
    von_staudt_clausen_primes,
)
from bernpoly.ratpoly import RatPoly, evaluate


def sympy_bernoulli(n: int) -> F:
    # sympy >= 1.12 uses B_1 = +1/2; only even indices are compared
    b = sympy.bernoulli(n)
    return F(int(b.p), int(b.q))


class TestNumbers:
    @pytest.mark.parametrize("n, expected", [(0, F(1)), (1, F(-1, 2)), (2, F(1, 6)), (7, F(0)), (12, F(-691, 2730))])
    def test_values(self, n, expected):
        assert bernoulli_number(n) == expected

    def test_even_against_sympy(self):
        for n in range(2, 101, 2):
            assert bernoulli_number(n) == sympy_bernoulli(n)

    def test_odd_vanish(self):
        assert all(bernoulli_number(n) == 0 for n in range(3, 150, 2))

    def test_sign_pattern(self):
        for k in range(1, 40):
            assert bernoulli_number(4 * k) < 0 < bernoulli_number(4 * k + 2)

    def test_fill_caches_lower_indices(self):
        cache = BernoulliCache()
        bernoulli_number(10, cache)
        assert sorted(cache.entries) == list(range(11))
        assert cache.dirty

    def test_negative_index(self):
        with pytest.raises(ValueError):
            bernoulli_number(-1)


class TestPolynomials:
    def test_small(self):
        assert bernoulli_polynomial(0) == RatPoly([1])
        assert bernoulli_polynomial(2) == RatPoly([F(1, 6), -1, 1])
        assert bernoulli_polynomial(5) == RatPoly([0, F(-1, 6), 0, F(5, 3), F(-5, 2), 1])

    def test_b5_factorization(self):
        x = RatPoly.x()
        f = x * (x - F(1, 2)) * (x - 1) * RatPoly([F(-1, 3), -1, 1])
        assert bernoulli_polynomial(5) == f

    def test_against_sympy(self):
        x = sympy.Symbol("x")
        for n in (2, 3, 10, 31):
            ref = sympy.Poly(sympy.bernoulli(n, x), x)
            coeffs = [F(int(c.p), int(c.q)) for c in reversed(ref.all_coeffs())]
            assert bernoulli_polynomial(n) == RatPoly(coeffs)

    def test_monic_degree_n(self):
        for n in range(0, 60):
            p = bernoulli_polynomial(n)
            assert p.degree == n and p.leading == 1


class TestOracles:
    def test_series(self):
        assert series_oracle(0) == RatPoly([1])
        assert series_oracle(1) == RatPoly([F(-1, 2), 1])
        assert series_oracle(4) == RatPoly([F(-1, 30), 0, 1, -2, 1])

    def test_series_constant_matches_zeta4(self):
        # zeta(4) = -B_4 2^3 pi^4 / 4!  and zeta(4) = pi^4 / 90
        B4 = series_oracle(4)[0]
        assert math.isclose(float(-B4) * 8 / 24, 1 / 90, rel_tol=1e-15)

    def test_integral(self):
        assert integral_oracle(1) == RatPoly([F(-1, 2), 1])
        assert integral_oracle(2) == RatPoly([F(1, 6), -1, 1])
        assert integral_oracle(3) == RatPoly([0, F(1, 2), F(-3, 2), 1])

    def test_three_constructions_agree(self):
        s, i = series_table(40), integral_table(40)
        for n in range(41):
            assert bernoulli_polynomial(n) == s[n] == i[n]

    def test_recurrence_numbers_fresh(self):
        assert recurrence_numbers(12)[12] == F(-691, 2730)


class TestIdentities:
    @pytest.mark.parametrize("n", [1, 2, 3, 40])
    def test_pass(self, n):
        rep = verify_identities(n)
        assert rep.results == (True, True, True, True)
        assert rep.witnesses == {}

    def test_witness_on_corrupt_data(self):
        cache = BernoulliCache(entries={0: F(1), 1: F(-1, 2), 2: F(1, 5)})
        rep = verify_identities(3, cache)
        assert not rep.passed
        name, w = next(iter(rep.witnesses.items()))
        assert "coefficient_index" in w

    def test_half_and_endpoints(self):
        for n in range(2, 50):
            p = bernoulli_polynomial(n)
            B = bernoulli_number(n)
            assert evaluate(p, 0) == evaluate(p, 1) == B
            assert evaluate(p, F(1, 2)) == (F(2) ** (1 - n) - 1) * B
            assert p.integrate(0, 1) == 0


class TestVonStaudtClausen:
    def test_primes(self):
        assert von_staudt_clausen_primes(12) == [2, 3, 5, 7, 13]

    @pytest.mark.parametrize("n", [2, 4, 12])
    def test_small(self, n):
        assert von_staudt_clausen_check(n)

    def test_hand_arithmetic_n12(self):
        total = F(-691, 2730) + F(1, 2) + F(1, 3) + F(1, 5) + F(1, 7) + F(1, 13)
        assert total == 1

    def test_detects_corruption(self):
        cache = BernoulliCache(entries={0: F(1), 1: F(-1, 2), 2: F(1, 5)})
        assert not von_staudt_clausen_check(2, cache)

    def test_odd_rejected(self):
        with pytest.raises(ValueError):
            von_staudt_clausen_check(3)


class TestCacheFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "b.cache"
        cache = BernoulliCache(entries={0: F(1), 1: F(-1, 2), 2: F(1, 6)})
        cache_store(cache, path)
        assert path.read_text() == "0\t1/1\n1\t-1/2\n2\t1/6\n"
        assert cache_load(path).entries == cache.entries
        assert not cache.dirty

    def test_format_line(self, tmp_path):
        path = tmp_path / "b.cache"
        cache = BernoulliCache()
        bernoulli_numbers(12, cache)
        cache_store(cache, path)
        assert "12\t-691/2730\n" in path.read_text()
        assert cache_load(path, rederive=True).entries == cache.entries

    def test_missing_file(self, tmp_path):
        cache = cache_load(tmp_path / "nope.cache")
        assert cache.entries == {}

    def test_checksum_mismatch(self, tmp_path):
        path = tmp_path / "b.cache"
        cache_store(BernoulliCache(entries={0: F(1), 1: F(-1, 2), 2: F(1, 6)}), path)
        path.write_text(path.read_text().replace("2\t1/6", "2\t1/5"))
        assert cache_load(path).entries[2] == F(1, 5)
        with pytest.raises(CacheChecksumError) as err:
            cache_load(path, rederive=True)
        assert err.value.mismatches == [(2, F(1, 5), F(1, 6))]

    @pytest.mark.parametrize(
        "text, lineno",
        [
            ("0\t1/1\n1 -1/2\n", 2),
            ("0\t1/1\n1\t-2/4\n", 2),
            ("0\t1\n", 1),
            ("0\t1/0\n", 1),
            ("1\t-1/2\n0\t1/1\n", 2),
            ("0\t1/1", 1),
        ],
    )
    def test_malformed(self, tmp_path, text, lineno):
        path = tmp_path / "b.cache"
        path.write_text(text)
        with pytest.raises(CacheFormatError) as err:
            cache_load(path)
        assert err.value.lineno == lineno

    def test_no_temp_files_left(self, tmp_path):
        cache_store(BernoulliCache(entries={0: F(1)}), tmp_path / "b.cache")
        assert [p.name for p in tmp_path.iterdir()] == ["b.cache"]
