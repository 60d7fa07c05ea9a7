"""Command-line interface: ``expand``, ``verify``, ``wick``, ``inclexcl``, ``bench``.

Exit codes: 0 success, 1 identity violation, 2 usage or parse error,
3 field-capability error.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from itertools import combinations
from math import comb

from .campaign import ALL_METHODS, run_campaign
from .errors import CharacteristicDividesFactorial, CharacteristicTwo, PolarizationError
from .inclexcl import (SetSystem, complement_intersection_count, inclusion_exclusion,
                       verify_indicator_identity)
from .polarize import OpCounter, polarize_subset_sum, polarize_subset_sum_gray
from .rng import SplitMix64
from .scalar import GF, QQ, scalar_to_json
from .symtensor import diagonal, multi_indices, random_symmetric
from .vector import random_vector
from .wick import Covariance, isserlis, monte_carlo_estimate

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_FIELD = 0, 1, 2, 3

TILDE_U = "ũ"
MINUS = "−"


# -- expand -------------------------------------------------------------------

def _args(n: int) -> str:
    return ",".join(f"x{i}" for i in range(1, n + 1))


def _join_terms(terms) -> str:
    parts = []
    for sign, body in terms:
        if not parts:
            parts.append(body if sign > 0 else f"{MINUS}{body}")
        else:
            parts.append(f"+ {body}" if sign > 0 else f"{MINUS} {body}")
    return " ".join(parts)


def expand_terms(n: int, style: str = "subset") -> tuple[str, list]:
    """Left-hand side and ``(sign, mask, text)`` terms of the chosen identity."""
    if not 1 <= n <= 8:
        raise ValueError("expand supports 1 <= n <= 8")
    terms = []
    if style in ("subset", "offset"):
        k_min = 0 if style == "offset" else 1
        for k in range(n, k_min - 1, -1):
            sign = -1 if (n - k) % 2 else 1
            for J in combinations(range(1, n + 1), k):
                parts = (["x0"] if style == "offset" else []) + [f"x{i}" for i in J]
                mask = sum(1 << (i - 1) for i in J)
                terms.append((sign, mask, f"{TILDE_U}({'+'.join(parts)})"))
        lhs = f"{n}! u({_args(n)})"
    elif style == "signed":
        for w in range(n + 1):
            sign = -1 if w % 2 else 1
            for neg in combinations(range(1, n + 1), w):
                arg = ""
                for i in range(1, n + 1):
                    if i in neg:
                        arg += f"{MINUS}x{i}"
                    else:
                        arg += f"+x{i}" if arg else f"x{i}"
                mask = sum(1 << (i - 1) for i in neg)
                terms.append((sign, mask, f"{TILDE_U}({arg})"))
        lhs = f"2^{n}·{n}! u({_args(n)})"
    else:
        raise ValueError(f"unknown style {style!r}")
    return lhs, terms


def cmd_expand(n: int, style: str = "subset") -> str:
    lhs, terms = expand_terms(n, style)
    return f"{lhs} = {_join_terms((s, t) for s, _, t in terms)}"


# -- bench --------------------------------------------------------------------

def bench_instance(n: int, d: int, seed: int, terms: int = 8):
    """Deterministic rational instance; about ``terms`` nonzero coefficients."""
    rng = SplitMix64(seed)
    density = min(1.0, terms / len(multi_indices(n, d)))
    u = random_symmetric(n, d, QQ, seed=rng.next_u64(), density=density)
    xs = [random_vector(rng, d, QQ) for _ in range(n)]
    return u, xs


def bench_row(n: int, d: int, repetitions: int, seed: int, terms: int = 8) -> dict:
    u, xs = bench_instance(n, d, seed, terms)
    diag = diagonal(u)
    naive_c, gray_c = OpCounter(), OpCounter()
    naive = polarize_subset_sum(diag, xs, counter=naive_c)
    gray = polarize_subset_sum_gray(diag, xs, counter=gray_c)
    row = {"n": n, "d": d, "equal": naive == gray,
           "naive_additions": naive_c.vector_ops, "gray_updates": gray_c.vector_ops,
           "naive_ns": [], "gray_ns": []}
    for _ in range(repetitions):
        t0 = time.perf_counter_ns()
        polarize_subset_sum(diag, xs)
        t1 = time.perf_counter_ns()
        polarize_subset_sum_gray(diag, xs)
        t2 = time.perf_counter_ns()
        row["naive_ns"].append(t1 - t0)
        row["gray_ns"].append(t2 - t1)
    row["naive_median_ns"] = int(statistics.median(row["naive_ns"]))
    row["gray_median_ns"] = int(statistics.median(row["gray_ns"]))
    row["expected_naive_additions"] = sum(k * comb(n, k) for k in range(n + 1))
    return row


def cmd_bench(n_min: int, n_max: int, d: int, repetitions: int, seed: int, terms: int = 8) -> list:
    if not 1 <= n_min <= n_max <= 20:
        raise ValueError("need 1 <= n_min <= n_max <= 20")
    return [bench_row(n, d, repetitions, seed, terms) for n in range(n_min, n_max + 1)]


def format_bench(rows: list) -> str:
    lines = [f"{'n':>3} {'naive ms':>10} {'gray ms':>10} {'speedup':>8} "
             f"{'naive adds':>11} {'gray upd':>9} eq"]
    for r in rows:
        nm, gm = r["naive_median_ns"] / 1e6, r["gray_median_ns"] / 1e6
        speed = nm / gm if gm else float("inf")
        lines.append(f"{r['n']:>3} {nm:>10.3f} {gm:>10.3f} {speed:>8.2f} "
                     f"{r['naive_additions']:>11} {r['gray_updates']:>9} "
                     f"{'✓' if r['equal'] else '✗'}")
    return "\n".join(lines)


# -- argument parsing ---------------------------------------------------------

def parse_field(text: str):
    text = text.strip().lower()
    if text in ("rational", "q", "qq"):
        return QQ
    for prefix in ("gf:", "gf(", "gf"):
        if text.startswith(prefix):
            return GF(int(text[len(prefix):].rstrip(")")))
    raise ValueError(f"unknown field {text!r}; use 'rational' or 'gf:P'")


def parse_methods(text: str) -> list:
    if text == "all":
        return list(ALL_METHODS)
    return [m.strip() for m in text.split(",") if m.strip()]


def parse_range(text: str) -> tuple[int, int]:
    if "-" in text:
        a, b = text.split("-", 1)
        return int(a), int(b)
    return int(text), int(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (unsigned 64-bit)")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="polarization", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="print a polarization identity")
    p.add_argument("n", type=int)
    p.add_argument("--style", choices=("subset", "offset", "signed"), default="subset")

    p = sub.add_parser("verify", parents=[common], help="randomised engine agreement campaign")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--field", default="rational", help="'rational' or 'gf:P'")
    p.add_argument("--methods", "--method", dest="methods", default="all",
                   help=f"comma list from {','.join(ALL_METHODS)} or 'all'")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("wick", parents=[common], help="Gaussian moment by pair partitions")
    p.add_argument("--cov", required=True, help="covariance JSON file")
    p.add_argument("--indices", required=True, help="comma-separated variable indices")
    p.add_argument("--mc", type=int, default=None, metavar="SAMPLES")

    p = sub.add_parser("inclexcl", parents=[common], help="inclusion-exclusion on a set system")
    p.add_argument("--sets", required=True, help="set-system JSON file")

    p = sub.add_parser("bench", parents=[common], help="naive vs Gray-code enumeration")
    p.add_argument("--n", dest="n_range", default="4-12", help="n or n_min-n_max")
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--terms", type=int, default=8, help="approximate nonzero coefficients")
    return parser


def _emit(args, payload, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(text)


def _run(args) -> int:
    if args.command == "expand":
        lhs, terms = expand_terms(args.n, args.style)
        text = f"{lhs} = {_join_terms((s, t) for s, _, t in terms)}"
        _emit(args, {"n": args.n, "style": args.style, "lhs": lhs, "text": text,
                     "terms": [{"sign": s, "mask": m, "term": t} for s, m, t in terms]}, text)
        return EXIT_OK

    if args.command == "verify":
        field = parse_field(args.field)
        methods = parse_methods(args.methods)
        command = (f"verify --n {args.n} --d {args.d} --trials {args.trials} "
                   f"--field {args.field} --methods {','.join(methods)} --seed {args.seed}")
        report = run_campaign(args.n, args.d, args.trials, field, methods, args.seed,
                              jobs=args.jobs, command=command)
        totals = report.timing_totals()
        lines = [f"command: {command}", f"seed: {report.seed}",
                 f"trials: {len(report.trials)}",
                 f"agreeing: {sum(t.agree for t in report.trials)}"]
        lines += [f"time[{m}]: {totals[m] / 1e6:.3f} ms" for m in methods if m in totals]
        if report.failure:
            lines.append("MISMATCH; reproducer:")
            lines.append(json.dumps(report.failure, indent=2))
        lines.append("result: " + ("all engines agree" if report.ok else "IDENTITY VIOLATION"))
        _emit(args, report.to_json(), "\n".join(lines))
        return EXIT_OK if report.ok else EXIT_VIOLATION

    if args.command == "wick":
        cov = Covariance.load(args.cov)
        idx = [int(i) for i in args.indices.split(",") if i.strip()]
        exact = isserlis(cov, idx)
        payload = {"indices": idx, "exact": scalar_to_json(exact)}
        text = str(exact)
        if args.mc is not None:
            mc = monte_carlo_estimate(cov, idx, args.mc, args.seed)
            z = mc.zscore(exact)
            payload.update({"estimate": mc.mean, "stderr": mc.stderr, "samples": mc.samples,
                            "seed": args.seed, "z": z})
            text += (f"\nestimate: {mc.mean:.6f} ± {mc.stderr:.6f} "
                     f"({mc.samples} samples, seed {args.seed})\n|exact − estimate|/stderr: {z:.3f}")
        _emit(args, payload, text)
        return EXIT_OK

    if args.command == "inclexcl":
        system = SetSystem.load(args.sets)
        direct = complement_intersection_count(system)
        alternating = inclusion_exclusion(system)
        pointwise = verify_indicator_identity(system)
        ok = direct == alternating and pointwise
        _emit(args, {"direct": direct, "alternating": alternating,
                     "indicator_identity": pointwise, "ok": ok},
              f"direct count: {direct}\nalternating sum: {alternating}\n"
              f"indicator identity: {'holds' if pointwise else 'FAILS'}\n"
              f"verdict: {'PASS' if ok else 'FAIL'}")
        return EXIT_OK if ok else EXIT_VIOLATION

    if args.command == "bench":
        lo, hi = parse_range(args.n_range)
        rows = cmd_bench(lo, hi, args.d, args.repetitions, args.seed, args.terms)
        _emit(args, {"seed": args.seed, "rows": rows},
              f"seed: {args.seed}\n" + format_bench(rows))
        return EXIT_OK if all(r["equal"] for r in rows) else EXIT_VIOLATION

    raise AssertionError(args.command)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except (CharacteristicDividesFactorial, CharacteristicTwo) as exc:
        print(f"field capability error: {exc}", file=sys.stderr)
        return EXIT_FIELD
    except (OSError, ValueError, KeyError, TypeError, PolarizationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
