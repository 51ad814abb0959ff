import csv
import io
import json
import math
from fractions import Fraction as F

import pytest

from bernpoly.cli import TABLE_COLUMNS, main, parse_eps


@pytest.fixture
def run(tmp_path, capsys):
    cache = tmp_path / "b.cache"

    def _run(*argv, use_cache=True):
        args = list(argv) + (["--cache", str(cache)] if use_cache else [])
        code = main(args)
        out, err = capsys.readouterr()
        return code, out, err

    _run.cache = cache
    return _run


class TestNumber:
    @pytest.mark.parametrize("n, text", [("2", "1/6"), ("3", "0"), ("12", "-691/2730"), ("0", "1"), ("1", "-1/2")])
    def test_values(self, run, n, text):
        code, out, _ = run("number", n)
        assert code == 0 and out.strip() == text

    @pytest.mark.parametrize("bad", ["-1", "2.5", "x"])
    def test_usage_error(self, run, bad):
        with pytest.raises(SystemExit) as exc:
            run("number", bad)
        assert exc.value.code == 2

    def test_cache_written(self, run):
        run("number", "12")
        lines = run.cache.read_text().splitlines()
        assert lines[0] == "0\t1/1" and lines[-1] == "12\t-691/2730"

    def test_no_store(self, run):
        run("number", "12", "--no-store")
        assert not run.cache.exists()


class TestRoots:
    def test_b5(self, run):
        code, out, _ = run("roots", "5", "--eps", "1e-9")
        data = json.loads(out)
        assert code == 0
        assert data["c_mult"] == 5 and data["c_distinct"] == 5 and data["d"] == 2
        lo, hi = F(data["y_lo"]), F(data["y_hi"])
        assert hi - lo <= F(1, 10**9)
        assert float(lo) <= (1 + math.sqrt(7 / 3)) / 2 <= float(hi)
        assert len(data["isolation"]) == 5

    def test_b1_exact(self, run):
        data = json.loads(run("roots", "1")[1])
        assert data["c_mult"] == 1 and data["d"] == 1
        assert data["y_lo"] == data["y_hi"] == "1/2"

    def test_b4(self, run):
        data = json.loads(run("roots", "4")[1])
        assert (data["c_mult"], data["d"]) == (4, 2)

    def test_budget(self, run):
        code, _, err = run("roots", "300")
        assert code == 3 and "cap" in err

    def test_budget_raised(self, run):
        code, _, _ = run("roots", "12", "--max-degree", "10")
        assert code == 3


class TestTable:
    def test_csv_schema(self, run):
        code, out, _ = run("table", "--from", "3", "--to", "8")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0
        assert tuple(rows[0]) == TABLE_COLUMNS
        assert [int(r[0]) for r in rows[1:]] == list(range(3, 9))
        for r in rows[1:]:
            assert float(r[3]) <= float(r[4])

    def test_csv_enclosure_directed(self, run):
        out = run("table", "--from", "5", "--to", "5")[1]
        row = dict(zip(TABLE_COLUMNS, list(csv.reader(io.StringIO(out)))[1]))
        # the top root of B_5 is the top root of x^2 - x - 1/3
        q = lambda x: x * x - x - F(1, 3)
        assert q(F(row["y_lo"])) < 0 < q(F(row["y_hi"]))
        assert F(row["y_hi"]) - F(row["y_lo"]) < F(1, 2**40) + F(2, 10**14)

    def test_json(self, run):
        data = json.loads(run("table", "--to", "5", "--format", "json")[1])
        assert [r["n"] for r in data] == [1, 2, 3, 4, 5]
        assert [r["c_mult"] for r in data] == [1, 2, 3, 4, 5]
        assert [r["d"] for r in data] == [1, 1, 1, 2, 2]
        assert data[2]["y_lo"] == data[2]["y_hi"] == "1/1"
        assert set(data[0]) == set(TABLE_COLUMNS)

    def test_text(self, run):
        out = run("table", "--to", "3", "--format", "text")[1]
        assert len(out.splitlines()) == 4

    def test_output_file(self, run, tmp_path):
        target = tmp_path / "t.csv"
        code, out, _ = run("table", "--to", "4", "--output", str(target))
        assert code == 0 and out == ""
        assert len(target.read_text().splitlines()) == 5

    def test_parallel_matches_serial(self, run):
        a = run("table", "--to", "20")[1]
        b = run("table", "--to", "20", "--jobs", "3")[1]
        assert a == b

    def test_bad_range(self, run):
        assert run("table", "--from", "9", "--to", "3")[0] == 2


class TestVerify:
    @pytest.mark.parametrize("suite", ["identities", "lemma", "statement1", "statement2", "theorem2", "zeta"])
    def test_suites_pass(self, run, suite):
        code, out, _ = run("verify", "--suite", suite, "--nmax", "20")
        data = json.loads(out)
        assert code == 0 and data["all_pass"]
        assert all(c["passed"] for c in data["claims"])

    def test_unknown_suite(self, run):
        assert run("verify", "--suite", "bogus")[0] == 2

    def test_tampered_cache_fails(self, run):
        run("cache", "fill", "--to", "12")
        text = run.cache.read_text().replace("2\t1/6\n", "2\t1/5\n")
        run.cache.write_text(text)
        code, out, _ = run("verify", "--suite", "identities", "--nmax", "12")
        data = json.loads(out)
        assert code == 1 and not data["all_pass"]
        failed = [c for c in data["claims"] if not c["passed"]]
        assert failed and failed[0]["witness"]["n"] == 2

    def test_zeta_default_kmax(self, run):
        data = json.loads(run("verify", "--suite", "zeta", "--nmax", "8")[1])
        assert data["kmax"] == 50 and data["all_pass"]


class TestCache:
    def test_fill_show_check(self, run):
        assert run("cache", "fill", "--to", "10")[0] == 0
        out = run("cache", "show")[1]
        assert out.splitlines()[2] == "2\t1/6"
        code, out, _ = run("cache", "check")
        assert code == 0 and "11 entries verified" in out

    def test_check_tampered(self, run):
        run("cache", "fill", "--to", "6")
        run.cache.write_text(run.cache.read_text().replace("4\t-1/30", "4\t-1/31"))
        assert run("cache", "check")[0] == 1

    def test_malformed_exits_3(self, run):
        run.cache.write_text("0\t1/1\n1 oops\n")
        code, _, err = run("number", "2")
        assert code == 3 and ":2:" in err

    def test_env_var_and_flag(self, run, tmp_path, monkeypatch):
        env_path = tmp_path / "env.cache"
        monkeypatch.setenv("BERNPOLY_CACHE", str(env_path))
        run("number", "6", use_cache=False)
        assert env_path.exists()
        run("number", "8")  # the flag wins over the environment
        assert run.cache.exists()
        assert "8\t" not in env_path.read_text()


@pytest.mark.parametrize("text, value", [("1e-6", F(1, 10**6)), ("1/1024", F(1, 1024)), ("2^-40", F(1, 2**40))])
def test_parse_eps(text, value):
    assert parse_eps(text) == value


@pytest.mark.parametrize("text", ["0", "-1e-3", "abc"])
def test_parse_eps_rejects(text):
    import argparse

    with pytest.raises(argparse.ArgumentTypeError):
        parse_eps(text)
