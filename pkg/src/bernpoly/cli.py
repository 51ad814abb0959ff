"""Command-line entry point: ``bernpoly {number,roots,verify,table,cache}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource or
budget error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import ROUND_CEILING, ROUND_FLOOR, Context
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import asymptotics, bernoulli, roots, verifier
from .bernoulli import (
    CacheChecksumError,
    CacheFormatError,
    bernoulli_number,
    bernoulli_numbers,
    bernoulli_polynomial,
    cache_load,
    cache_store,
    set_default_cache,
)
from .ratpoly import Interval, compose_affine, derivative, gcd, squarefree_part, sturm_count
from .verifier import VerdictReport

log = logging.getLogger("bernpoly")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
DEFAULT_CACHE = "./bernoulli.cache"
DEFAULT_N_MAX = 60
DEFAULT_DEGREE_CAP = 200
SUITES = ("identities", "lemma", "statement1", "statement2", "theorem2", "zeta", "all")
TABLE_COLUMNS = ("n", "c_mult", "d", "y_lo", "y_hi", "y_pred", "y_resid", "c_pred", "c_resid")
TRIPLE_N_MAX = 64
ZETA_K_MAX = 50


class BudgetError(Exception):
    pass


# -- formatting ---------------------------------------------------------------


def frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def fmt_float(x: float) -> float:
    """Round to 12 significant digits for emission."""
    return float(f"{x:.12g}")


def _decimal_str(q: Fraction, rounding: str, digits: int = 15) -> str:
    ctx = Context(prec=digits, rounding=rounding)
    return str(ctx.divide(ctx.create_decimal(q.numerator), ctx.create_decimal(q.denominator)))


def parse_eps(text: str) -> Fraction:
    """Accept ``1e-6``, ``1/1024`` or ``2^-40``."""
    try:
        if "^" in text:
            base, exp = text.split("^")
            eps = Fraction(base) ** int(exp)
        else:
            eps = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid eps {text!r}") from None
    if eps <= 0:
        raise argparse.ArgumentTypeError("eps must be positive")
    return eps


def nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return v


def pos_int(text: str) -> int:
    v = nonneg_int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


# -- parallel helpers ----------------------------------------------------------


def pmap(fn: Callable, items: Sequence, jobs: int) -> list:
    """Ordered map, optionally over a process pool (workers inherit the warm cache)."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


# -- commands -------------------------------------------------------------------


def cmd_number(args) -> int:
    print(str(bernoulli_number(args.n)))
    return EXIT_OK


def _check_degree(n: int, cap: int) -> None:
    if n > cap:
        raise BudgetError(f"degree {n} exceeds the cap {cap} (raise it with --max-degree)")


def roots_payload(n: int, eps: Fraction) -> dict:
    rep = roots.root_report(n, eps, with_isolation=True)
    iso = rep.isolation
    return {
        "n": n,
        "c_distinct": rep.c_distinct,
        "c_mult": rep.c_with_multiplicity,
        "d": rep.d,
        "y_lo": frac_str(rep.y_enclosure.lo),
        "y_hi": frac_str(rep.y_enclosure.hi),
        "y_mid": fmt_float(float(rep.y_mid)),
        "y_exact_integer": rep.y_is_exact_integer,
        "isolation": [
            {
                "lo": frac_str(iv.lo),
                "hi": frac_str(iv.hi),
                "lo_closed": iv.lo_closed,
                "hi_closed": iv.hi_closed,
                "multiplicity": m,
            }
            for iv, m in zip(iso.intervals, iso.multiplicities)
        ],
    }


def cmd_roots(args) -> int:
    _check_degree(args.n, args.max_degree)
    print(json.dumps(roots_payload(args.n, args.eps), indent=2))
    return EXIT_OK


def table_row(n: int, eps: Fraction) -> dict:
    r = asymptotics.residual_row(n, eps)
    return {
        "n": r.n,
        "c_mult": r.c_actual,
        "d": r.d,
        "y_lo": r.y_lo,
        "y_hi": r.y_hi,
        "y_pred": fmt_float(r.y_pred),
        "y_resid": fmt_float(r.y_resid),
        "c_pred": fmt_float(r.c_pred),
        "c_resid": fmt_float(r.c_resid),
    }


def _table_row_job(arg):
    return table_row(*arg)


def render_table(rows: Iterable[dict], fmt: str) -> str:
    if fmt == "json":
        out = []
        for r in rows:
            r = dict(r, y_lo=frac_str(r["y_lo"]), y_hi=frac_str(r["y_hi"]))
            out.append({k: r[k] for k in TABLE_COLUMNS})
        return json.dumps(out, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if fmt == "csv":
        w.writerow(TABLE_COLUMNS)
        for r in rows:
            # decimal enclosure: lo rounded down, hi rounded up
            r = dict(r, y_lo=_decimal_str(r["y_lo"], ROUND_FLOOR), y_hi=_decimal_str(r["y_hi"], ROUND_CEILING))
            w.writerow([r[k] for k in TABLE_COLUMNS])
        return buf.getvalue()
    lines = ["  ".join(f"{c:>12}" for c in TABLE_COLUMNS)]
    for r in rows:
        r = dict(r, y_lo=f"{float(r['y_lo']):.10f}", y_hi=f"{float(r['y_hi']):.10f}")
        lines.append("  ".join(f"{str(r[k]):>12}" for k in TABLE_COLUMNS))
    return "\n".join(lines) + "\n"


def cmd_table(args) -> int:
    lo, hi = args.from_, args.to
    if lo > hi:
        raise argparse.ArgumentTypeError("--from must not exceed --to")
    _check_degree(hi, args.max_degree)
    bernoulli_numbers(hi)
    rows = pmap(_table_row_job, [(n, args.eps) for n in range(lo, hi + 1)], args.jobs)
    text = render_table(rows, args.format)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise BudgetError(f"cannot write {args.output}: {exc}") from None
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- verify --------------------------------------------------------------------


def _aggregate(claim: str, checked: str, reports: list[VerdictReport], notes=()) -> VerdictReport:
    bad = [r for r in reports if not r.passed]
    witness = None
    if bad:
        witness = dict(bad[0].witness or {}, at=bad[0].checked, failing=len(bad))
    seconds = sum(r.seconds for r in reports)
    all_notes = list(notes) + [f"{r.checked}: {n}" for r in reports for n in r.notes]
    return VerdictReport(claim, checked, not bad, witness, seconds, all_notes)


def _simple(claim: str, checked: str, failures: list[dict], notes=()) -> VerdictReport:
    witness = dict(failures[0], failing=len(failures)) if failures else None
    return VerdictReport(claim, checked, not failures, witness, 0.0, list(notes))


def claim_constructions(n_max: int) -> VerdictReport:
    top = min(n_max, TRIPLE_N_MAX)
    series = bernoulli.series_table(top)
    integral = bernoulli.integral_table(top)
    fails = []
    for n in range(top + 1):
        rec = bernoulli_polynomial(n)
        if not (rec == series[n] == integral[n]):
            fails.append({"n": n, "recurrence": str(rec), "series": str(series[n]), "integral": str(integral[n])})
    return _simple("triple_construction", f"0<=n<={top}", fails)


def claim_identities(n_max: int, jobs: int) -> VerdictReport:
    reports = pmap(bernoulli.verify_identities, list(range(1, n_max + 1)), jobs)
    fails = [{"n": r.n, "identity": k, **w} for r in reports for k, w in r.witnesses.items()]
    return _simple("identities", f"1<=n<={n_max}", fails)


def claim_vsc(n_max: int) -> VerdictReport:
    fails = []
    for n in range(2, n_max + 1, 2):
        if not bernoulli.von_staudt_clausen_check(n):
            B = bernoulli_number(n)
            s = B + sum(Fraction(1, p) for p in bernoulli.von_staudt_clausen_primes(n))
            fails.append({"n": n, "B_n": frac_str(B), "B_n_plus_prime_sum": frac_str(s)})
    return _simple("von_staudt_clausen", f"even 2<=n<={n_max}", fails)


def claim_number_invariants(n_max: int) -> VerdictReport:
    fails = []
    Bs = bernoulli_numbers(n_max)
    if Bs[0] != 1 or (n_max >= 1 and Bs[1] != Fraction(-1, 2)):
        fails.append({"n": "0/1", "B_0": frac_str(Bs[0])})
    half = Fraction(1, 2)
    for n in range(1, n_max + 1):
        p = bernoulli_polynomial(n)
        if n >= 3 and n % 2 and Bs[n] != 0:
            fails.append({"n": n, "check": "odd index vanishes", "B_n": frac_str(Bs[n])})
        if n >= 2 and n % 2 == 0 and (Bs[n] > 0) != (n % 4 == 2):
            fails.append({"n": n, "check": "sign pattern", "B_n": frac_str(Bs[n])})
        if n >= 2 and p(0) != p(1):
            fails.append({"n": n, "check": "B_n(0) = B_n(1)"})
        if p(half) != (Fraction(2) ** (1 - n) - 1) * Bs[n]:
            fails.append({"n": n, "check": "B_n(1/2) = (2^(1-n) - 1) B_n"})
        if p.integrate(0, 1) != 0:
            fails.append({"n": n, "check": "zero mean on [0, 1]"})
    return _simple("number_invariants", f"0<=n<={n_max}", fails)


def _root_facts(n: int) -> dict:
    p = bernoulli_polynomial(n)
    c_dist, c_mult = roots.real_root_count(n)
    sq = squarefree_part(p)
    return {
        "n": n,
        "c_distinct": c_dist,
        "c_mult": c_mult,
        "d": roots.ceil_max_root(n),
        "gcd_trivial": gcd(p, derivative(p)) == 1,
        "squarefree_same": sq == p,
        "structural": roots.structural_count(n) if n % 4 == 1 else None,
    }


def _isolation_ok(n: int) -> dict | None:
    """Validate the isolation of ``B_n`` and its mirror image under ``x -> 1 - x``."""
    p = bernoulli_polynomial(n)
    iso = roots.isolate_roots(n)
    c_dist, c_mult = roots.real_root_count(n)
    if len(iso) != c_dist or iso.total_multiplicity != c_mult:
        return {"n": n, "check": "isolation size", "intervals": len(iso)}
    for iv in iso.intervals:
        if sturm_count(p, Interval(iv.lo, iv.hi, True, True)) != 1:
            return {"n": n, "check": "one root per interval", "interval": str(iv)}
        fine = roots.refine(p, iv, Fraction(1, 2**20))
        if not fine.is_point and p(fine.lo) * p(fine.hi) >= 0:
            return {"n": n, "check": "refined endpoints change sign", "interval": str(fine)}
    # x -> 1 - x maps the roots onto themselves: reflected mirror intervals
    # must meet the original ones in a sub-interval that still holds the root
    mirror = roots.isolate_poly(compose_affine(p, -1, 1))
    if len(mirror) != len(iso):
        return {"n": n, "check": "reflection symmetry", "mirror_intervals": len(mirror)}
    for a, b in zip(iso.intervals, reversed(mirror.intervals)):
        lo, hi = max(a.lo, 1 - b.hi), min(a.hi, 1 - b.lo)
        if lo > hi or sturm_count(p, Interval(lo, hi, True, True)) != 1:
            return {"n": n, "check": "reflection symmetry", "interval": str(a), "mirror": str(b)}
    return None


def claim_roots(n_max: int, jobs: int) -> list[VerdictReport]:
    ns = list(range(1, n_max + 1))
    facts = pmap(_root_facts, ns, jobs)
    by_n = {f["n"]: f for f in facts}
    simple_fails = [
        {"n": f["n"], "c_distinct": f["c_distinct"], "c_mult": f["c_mult"]}
        for f in facts
        if not (f["gcd_trivial"] and f["squarefree_same"] and f["c_distinct"] == f["c_mult"])
    ]
    struct_fails = [
        {"n": f["n"], "structural": f["structural"], "c_mult": f["c_mult"]}
        for f in facts
        if f["structural"] is not None and f["structural"] != f["c_mult"]
    ]
    iso_fails = [w for w in pmap(_isolation_ok, list(range(1, min(n_max, 40) + 1)), jobs) if w]
    out = [
        _simple("simple_real_roots", f"1<=n<={n_max}", simple_fails),
        _simple("structural_count", f"n=1 mod 4, n<={n_max}", struct_fails),
        _simple("isolation", f"1<=n<={min(n_max, 40)}", iso_fails),
    ]
    if n_max >= 2:
        out.append(verifier.check_root_count_step(n_max, {n: by_n[n]["c_mult"] for n in ns}))
    return out


def claim_zeta(k_max: int) -> list[VerdictReport]:
    fails = []
    z1 = asymptotics.zeta_euler(1)
    if abs(z1 - math.pi**4 / 90) > 1e-9:
        fails.append({"k": 1, "zeta_euler": z1, "pi4_over_90": math.pi**4 / 90})
    dv, dw = asymptotics.zeta_dirichlet(4)
    if abs(z1 - dv) > 1e-9 + dw:
        fails.append({"k": 1, "zeta_euler": z1, "dirichlet": dv})
    out = [_simple("zeta_euler_k1", "k=1", fails)]
    fails = []
    prev = None
    for k in range(1, k_max + 1):
        lo, hi = asymptotics.zeta_euler_enclosure(k)
        if not (1 < lo and hi < 2):
            fails.append({"k": k, "lo": float(lo), "hi": float(hi)})
        if prev is not None and not hi < prev:
            fails.append({"k": k, "check": "strictly decreasing"})
        prev = lo
    out.append(_simple("zeta_in_(1,2)", f"1<=k<={k_max}", fails))
    fails = []
    ratios = [asymptotics.stirling_check(k) for k in range(1, k_max + 1)]
    for k, r in enumerate(ratios, 1):
        if not r > 1 or (k > 1 and not r < ratios[k - 2]):
            fails.append({"k": k, "ratio": r})
    out.append(_simple("stirling", f"1<=k<={k_max}", fails))
    resid = [asymptotics.radical_residual(k) for k in range(1, k_max + 1)]
    out.append(_simple("radical_residual", f"1<=k<={k_max}", [],
                       [f"residual range [{min(resid):.6f}, {max(resid):.6f}] (empirical, not asserted)"]))
    return out


def claim_predictions(n_max: int) -> VerdictReport:
    fails = [
        {"n": n, "predict_c": asymptotics.predict_c(n), "predict_y": asymptotics.predict_y(n)}
        for n in range(1, n_max + 1)
        if abs(asymptotics.predict_c(n) - 4 * asymptotics.predict_y(n)) > 1e-12 * asymptotics.predict_c(n)
    ]
    return _simple("predict_c_equals_4_predict_y", f"1<=n<={n_max}", fails)


def _residual_note(n_max: int, jobs: int) -> VerdictReport:
    rows = pmap(_table_row_job, [(n, roots.DEFAULT_EPS) for n in range(1, n_max + 1)], jobs)
    yr = [r["y_resid"] for r in rows]
    cr = [r["c_resid"] for r in rows]
    note = f"y_resid in [{min(yr):.6f}, {max(yr):.6f}], c_resid in [{min(cr):.6f}, {max(cr):.6f}] (empirical)"
    finite = [r for r in rows if not (math.isfinite(r["y_resid"]) and math.isfinite(r["c_resid"]))]
    return _simple("residuals_finite", f"1<=n<={n_max}", [{"n": r["n"]} for r in finite], [note])


def run_suite(suite: str, n_max: int, k_max: int, jobs: int) -> list[VerdictReport]:
    out: list[VerdictReport] = []
    want = (lambda s: True) if suite == "all" else (lambda s: s == suite)
    bernoulli_numbers(max(n_max, 4 * k_max + 1, 4))
    if want("identities"):
        out.append(claim_vsc(n_max))
        out.append(claim_number_invariants(n_max))
        out.append(claim_constructions(n_max))
        out.append(claim_identities(n_max, jobs))
    if want("lemma") and n_max >= 2:
        ns = list(range(2, n_max + 1))
        out.append(_aggregate("lemma", f"2<=n<={n_max}", pmap(verifier.check_lemma, ns, jobs)))
        out.append(_aggregate("corollary", f"1<=n<={n_max}",
                              pmap(verifier.check_corollary, list(range(1, n_max + 1)), jobs)))
    if want("statement1") and n_max >= 2:
        out.append(verifier.check_statement1(n_max))
        out.extend(claim_roots(n_max, jobs))
    if want("statement2") and k_max >= 1:
        out.append(_aggregate("statement2", f"1<=k<={k_max}",
                              pmap(verifier.check_statement2, list(range(1, k_max + 1)), jobs)))
    if want("theorem2"):
        ks = [k for k in range(0, n_max) if 4 * k + 1 <= n_max]
        out.append(_aggregate("theorem2", f"0<=k<={ks[-1]}" if ks else "empty",
                              pmap(verifier.check_theorem2, ks, jobs)))
    if want("zeta"):
        out.extend(claim_zeta(max(k_max, 1)))
        out.append(claim_predictions(n_max))
        if suite == "all":
            out.append(_residual_note(n_max, jobs))
    return out


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}", file=sys.stderr)
        return EXIT_USAGE
    n_max = args.nmax
    k_max = args.kmax if args.kmax is not None else (
        max(1, n_max // 4) if args.suite != "zeta" else ZETA_K_MAX)
    _check_degree(max(n_max, 4 * k_max if args.suite in ("statement2", "all") else 0), args.max_degree)
    reports = run_suite(args.suite, n_max, k_max, args.jobs)
    ok = all(r.passed for r in reports)
    payload = {
        "suite": args.suite,
        "nmax": n_max,
        "kmax": k_max,
        "all_pass": ok,
        "claims": [r.to_dict() for r in reports],
    }
    print(json.dumps(payload, indent=2, default=str))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_cache(args) -> int:
    cache = bernoulli.get_default_cache()
    if args.action == "fill":
        bernoulli_numbers(args.to)
        print(f"{len(cache.entries)} entries")
    elif args.action == "check":
        if cache.path is None or not cache.path.exists():
            print("no cache file")
            return EXIT_OK
        cache_load(cache.path, rederive=True)
        print(f"{cache.path}: {len(cache.entries)} entries verified")
    else:
        for n, B in cache.as_sorted():
            print(f"{n}\t{frac_str(B)}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", help=f"Bernoulli cache file (env BERNPOLY_CACHE, default {DEFAULT_CACHE})")
    common.add_argument("--jobs", type=pos_int, default=1, help="worker processes")
    common.add_argument("--max-degree", type=pos_int, default=DEFAULT_DEGREE_CAP,
                        help="refuse degrees above this (exit 3)")
    common.add_argument("--eps", type=parse_eps, default=roots.DEFAULT_EPS,
                        help="enclosure width, e.g. 1e-6 or 2^-40")
    common.add_argument("--no-store", action="store_true", help="do not write the cache back")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="bernpoly", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("number", parents=[common], help="print B_n(0) exactly")
    p.add_argument("n", type=nonneg_int)
    p.set_defaults(func=cmd_number)

    p = sub.add_parser("roots", parents=[common], help="root statistics of B_n as JSON")
    p.add_argument("n", type=pos_int)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)}")
    p.add_argument("--nmax", "--to", dest="nmax", type=pos_int, default=DEFAULT_N_MAX)
    p.add_argument("--kmax", type=nonneg_int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", parents=[common], help="residual table for the asymptotics")
    p.add_argument("--from", dest="from_", type=pos_int, default=1)
    p.add_argument("--to", type=pos_int, default=DEFAULT_N_MAX)
    p.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    p.add_argument("--output", "-o", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("cache", parents=[common], help="inspect or fill the cache")
    p.add_argument("action", choices=("show", "fill", "check"))
    p.add_argument("--to", type=nonneg_int, default=DEFAULT_N_MAX)
    p.set_defaults(func=cmd_cache)
    return parser


def resolve_cache_path(flag: str | None) -> Path:
    return Path(flag or os.environ.get("BERNPOLY_CACHE") or DEFAULT_CACHE)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.max_degree > DEFAULT_DEGREE_CAP:
        log.warning("degree cap %d above %d: exact Sturm work grows steeply", args.max_degree,
                    DEFAULT_DEGREE_CAP)
    path = resolve_cache_path(args.cache)
    try:
        cache = cache_load(path)
    except CacheFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    previous = set_default_cache(cache)
    try:
        code = args.func(args)
        if cache.dirty and not args.no_store:
            try:
                cache_store(cache, path)
            except OSError as exc:
                log.warning("could not store cache at %s: %s", path, exc)
        return code
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CacheChecksumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except argparse.ArgumentTypeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        set_default_cache(previous)


if __name__ == "__main__":
    sys.exit(main())
