"""Command-line front end: ``shapeavoid <command> [options]``.

Exit codes: 0 success, 1 domain or precondition error, 2 usage error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Optional

from . import enumeration as enum
from .cache import DEFAULT_PATH, CountCache
from .core import (
    Partition,
    Permutation,
    conjugate,
    contains,
    dominates,
    rsk,
    shape_of,
)
from .errors import BudgetExceeded, PreconditionError, ShapeAvoidError
from .greene import extract_chain_union, greene_prefix
from .verify import SUITES, run_suite
from .witness import (
    brute_force_find_shape,
    extract_hook,
    extract_shape,
    hook_counterexample,
    square_counterexample,
)

SCHEMA = 1


class UsageError(Exception):
    pass


def _perm_arg(text: str) -> Permutation:
    try:
        return Permutation.parse(text)
    except ShapeAvoidError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _shape_arg(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except ShapeAvoidError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonneg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON object")
    common.add_argument("--jobs", type=_positive, default=None, help="worker processes")
    common.add_argument("--budget", type=_positive, default=enum.DEFAULT_BUDGET,
                        help="max enumeration work units")
    common.add_argument("--cache", default=DEFAULT_PATH, help="count cache file")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")

    parser = argparse.ArgumentParser(prog="shapeavoid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def cmd(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    p = cmd("rsk", "print the insertion and recording tableaux")
    p.add_argument("perm", type=_perm_arg)

    p = cmd("shape", "print the RSK shape of a permutation")
    p.add_argument("perm", type=_perm_arg)

    p = cmd("contains-shape", "is the first shape contained in the second?")
    p.add_argument("inner", type=_shape_arg)
    p.add_argument("outer", type=_shape_arg)

    p = cmd("dominates", "does the first shape dominate the second?")
    p.add_argument("upper", type=_shape_arg)
    p.add_argument("lower", type=_shape_arg)

    p = cmd("conjugate", "print the conjugate shape")
    p.add_argument("shape", type=_shape_arg)

    p = cmd("greene", "Greene prefix sums, optionally with an explicit chain union")
    p.add_argument("perm", type=_perm_arg)
    p.add_argument("--k", type=_positive, help="also extract a union of k chains")
    p.add_argument("--direction", choices=("increasing", "decreasing"), default="increasing")

    p = cmd("cell", "list all permutations of a given shape")
    p.add_argument("--shape", type=_shape_arg, required=True)

    p = cmd("avoids", "does a permutation avoid a shape (or a single pattern)?")
    p.add_argument("--perm", type=_perm_arg, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--shape", type=_shape_arg)
    g.add_argument("--pattern", type=_perm_arg)

    p = cmd("count", "count avoiders in S_n")
    p.add_argument("--n", type=_nonneg, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--shape", type=_shape_arg)
    g.add_argument("--pattern", type=_perm_arg)
    p.add_argument("--method", choices=("brute", "hook", "two-two", "bound"), default="brute")

    p = cmd("witness", "extract a subsequence of a given shape")
    p.add_argument("--perm", type=_perm_arg, required=True)
    p.add_argument("--shape", type=_shape_arg, required=True)
    p.add_argument("--oracle", action="store_true",
                   help="skip the constructions and search exhaustively "
                        "(the search is also the fallback when no construction applies)")

    p = cmd("counterexample", "hook counterexample (--m, --k) or padded square example (--n)")
    p.add_argument("--m", type=_positive)
    p.add_argument("--k", type=_positive)
    p.add_argument("--n", type=_positive)

    p = cmd("verify", "run a named exhaustive property suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--n", type=_positive, help="largest n to enumerate")

    p = cmd("growth", "series count^(1/2n) for plotting")
    p.add_argument("--shape", type=_shape_arg, required=True)
    p.add_argument("--n", type=_positive, required=True, help="largest n")
    p.add_argument("--from", dest="start", type=_positive, default=1, help="smallest n")
    p.add_argument("--method", choices=("brute", "hook", "two-two", "bound"), default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


# --- command implementations --------------------------------------------------
# each returns (result, text, method, cached)


_METHOD_TAGS = {"brute": "brute", "hook": "hook-formula", "two-two": "two-two-formula",
                "bound": "cell-sum-bound"}


def _count_many(args, ns: list[int], method: str, target):
    """[(record, cached)] for each n, computing misses in one batch."""

    def compute_one(n):
        if isinstance(target, Permutation):
            if method != "brute":
                raise UsageError("single patterns can only be counted with --method brute")
            return enum.single_pattern_avoid_count(n, target, jobs=args.jobs, budget=args.budget)
        if method == "brute":
            return enum.avoid_count_brute(n, target, jobs=args.jobs, budget=args.budget)
        if method == "hook":
            return enum.avoid_count_hook(n, target[0], len(target))
        return enum.cell_sum_bound(n, target)

    def compute(missing):
        if method == "two-two":
            return enum.avoid_count_22_series(max(missing), min(missing)) if missing else []
        return [compute_one(n) for n in missing]

    if isinstance(target, Partition):
        if method == "hook" and (not target.parts or not target.is_hook()):
            raise UsageError(f"--method hook needs a hook shape, got {target}")
        if method == "two-two" and target != Partition((2, 2)):
            raise UsageError(f"--method two-two only applies to shape 2,2, got {target}")
    if args.no_cache:
        return [(rec, False) for rec in compute(ns) if rec.n in set(ns)]
    return CountCache(args.cache).fetch_many(
        ns, target, _METHOD_TAGS[method],
        lambda missing: [r for r in compute(missing) if r.n in set(missing)],
    )


def _count(args, n: int, method: str):
    target = args.shape if args.shape is not None else args.pattern
    return _count_many(args, [n], method, target)[0]


def run_command(args) -> tuple[Any, str, Optional[str], Optional[bool]]:
    c = args.command
    if c == "rsk":
        pair = rsk(args.perm)
        result = {"p": [list(r) for r in pair.p.rows], "q": [list(r) for r in pair.q.rows],
                  "shape": list(pair.shape.parts)}
        return result, f"P:\n{pair.p}\nQ:\n{pair.q}", None, None
    if c == "shape":
        shape = shape_of(args.perm)
        return list(shape.parts), str(shape), None, None
    if c == "contains-shape":
        ok = contains(args.inner, args.outer)
        return ok, str(ok).lower(), None, None
    if c == "dominates":
        ok = dominates(args.upper, args.lower)
        return ok, str(ok).lower(), None, None
    if c == "conjugate":
        conj = conjugate(args.shape)
        return list(conj.parts), str(conj), None, None
    if c == "greene":
        shape = shape_of(args.perm)
        n = len(args.perm)
        rows = []
        for i in range(1, max(len(shape), len(conjugate(shape))) + 1):
            rows.append({"i": i,
                         "increasing": greene_prefix(args.perm, i, "increasing"),
                         "decreasing": greene_prefix(args.perm, i, "decreasing")})
        lines = ["i\tincreasing\tdecreasing"] + [
            f"{r['i']}\t{r['increasing']}\t{r['decreasing']}" for r in rows
        ]
        result = {"n": n, "shape": list(shape.parts), "prefix": rows}
        if args.k is not None:
            union = extract_chain_union(args.perm, args.k, args.direction)
            result["chains"] = [list(ch) for ch in union.chains]
            result["total_size"] = union.total_size
            lines.append(f"{args.k} {args.direction} chains (total {union.total_size}):")
            lines += [" ".join(str(args.perm[p]) for p in ch) for ch in union.chains]
        return result, "\n".join(lines), None, None
    if c == "cell":
        cell = enum.knuth_cell(args.shape, budget=args.budget)
        return [list(p.word) for p in cell], "\n".join(map(str, cell)), None, None
    if c == "avoids":
        if args.shape is not None:
            ok = enum.avoids_shape(args.perm, args.shape, budget=args.budget)
        else:
            ok = not enum.contains_pattern(args.perm, args.pattern, budget=args.budget)
        return ok, str(ok).lower(), None, None
    if c == "count":
        rec, cached = _count(args, args.n, args.method)
        result = {"n": rec.n, "count": str(rec.count), "upper_bound": rec.is_upper_bound}
        return result, str(rec.count), rec.method, cached
    if c == "witness":
        return _witness(args)
    if c == "counterexample":
        if args.m is not None and args.k is not None:
            perm = hook_counterexample(args.m, args.k)
        elif args.n is not None and args.m is None and args.k is None:
            perm = square_counterexample(args.n)
        else:
            raise UsageError("give either --m and --k, or --n alone")
        shape = shape_of(perm)
        return ({"perm": list(perm.word), "shape": list(shape.parts)},
                f"{perm}\nshape {shape}", None, None)
    if c == "verify":
        res = run_suite(args.suite, n_max=args.n, seed=args.seed, jobs=args.jobs)
        text = f"{res.name}: {'PASS' if res.ok else 'FAIL'} ({res.checked} checks)"
        if res.failures:
            text += "\n" + "\n".join(res.failures)
        result = {"suite": res.name, "ok": res.ok, "checked": res.checked,
                  "failures": res.failures}
        return result, text, None, None
    if c == "growth":
        return _growth(args)
    raise UsageError(f"unknown command {c!r}")


def _witness(args):
    perm, mu = args.perm, args.shape
    shape = shape_of(perm)
    witness, construction = None, None
    if not args.oracle:
        if mu.parts and contains(Partition.rectangle(mu[0], len(mu)), shape):
            witness, construction = extract_shape(perm, mu), "rectangle"
        elif mu.parts and mu.is_hook():
            try:
                witness, construction = extract_hook(perm, mu[0], len(mu)), "hook"
            except PreconditionError:
                pass
    if construction is None:
        witness, construction = brute_force_find_shape(perm, mu, budget=args.budget), "oracle"
    if witness is None:
        result = {"found": False, "shape": list(mu.parts)}
        return result, f"no subsequence of shape {mu}", construction, None
    result = {
        "found": True,
        "positions": [p + 1 for p in witness.positions],
        "values": list(witness.values(perm.word)),
        "pattern": list(witness.pattern.word),
        "shape": list(witness.shape.parts),
        "construction": construction,
    }
    text = (f"positions {','.join(str(p + 1) for p in witness.positions)}\n"
            f"values {','.join(map(str, witness.values(perm.word)))}\n"
            f"pattern {witness.pattern}\nshape {witness.shape}")
    return result, text, construction, None


def _growth(args):
    mu = args.shape
    method = args.method
    if method is None:
        method = "two-two" if mu == Partition((2, 2)) else "hook" if mu.is_hook() else "bound"
    ns = [n for n in range(args.start, args.n + 1)
          if method != "hook" or enum.hook_formula_regime(n, mu[0], len(mu)) is None]
    if not ns:
        raise PreconditionError(f"no n in {args.start}..{args.n} where --method {method} applies")
    fetched = _count_many(args, ns, method, mu)
    records = [rec for rec, _ in fetched]
    all_cached = all(cached for _, cached in fetched)
    series = enum.growth_series(records, mu)
    counts = {r.n: r.count for r in records}
    result = {
        "shape": list(mu.parts),
        "lower_ref": series.lower_ref,
        "upper_ref": series.upper_ref,
        "hook_limit": series.hook_limit,
        "points": [{"n": n, "count": str(counts[n]), "root": round(r, 6)} for n, r in series.points],
    }
    if args.format == "json" and not args.json:
        return result, json.dumps(result, indent=1), method, all_cached
    lines = ["n,count,root"] + [f"{n},{counts[n]},{r:.6f}" for n, r in series.points]
    return result, "\n".join(lines), method, all_cached


def main(argv: Optional[list[str]] = None) -> int:
    # growth series print exact counts with thousands of digits
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        result, text, method, cached = run_command(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"shapeavoid: error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"shapeavoid: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except ShapeAvoidError as exc:
        print(f"shapeavoid: {exc}", file=sys.stderr)
        return 1
    elapsed = (time.perf_counter() - start) * 1000
    if args.json:
        inputs = {k: (str(v) if isinstance(v, (Partition, Permutation)) else v)
                  for k, v in sorted(vars(args).items())
                  if k not in ("json", "command", "cache", "no_cache", "jobs", "budget")
                  and v is not None}
        payload = {"schema": SCHEMA, "command": args.command, "inputs": inputs,
                   "result": result, "method": method, "cached": cached,
                   "elapsed_ms": round(elapsed, 3)}
        print(json.dumps(payload))
    else:
        print(text)
    if args.command == "verify" and not result["ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
