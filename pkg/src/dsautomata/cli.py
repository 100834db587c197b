"""Command-line entry point: ``dsa <command> ...``.

Exit codes: 0 ok, 1 usage or I/O error, 2 invalid input, 3 negative decision,
4 state cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import sys
import time
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import io
from .algebra import OPS, compose
from .analysis import approx_compare_geq
from .approx import (
    Precision,
    approx_determinize_rounding,
    min_unfold_depth_generic,
    rounding_state_bound,
    unfold,
    unfold_error_bound,
)
from .core import INF, DSAError, tail_bounds, validate, word_value
from .determinize import DEFAULT_CAP, CapExceeded, determinize_exact, theoretical_state_bound
from .families import FAMILIES, FamilySpec, generate

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_NO, EXIT_CAP = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def rational(x) -> str:
    if x == INF:
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def decimal(x, digits: int = 12) -> str:
    if x == INF:
        return "inf"
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = digits + len(str(abs(x.numerator) // x.denominator)) + 5
        return f"{Decimal(x.numerator) / Decimal(x.denominator):.{digits}f}"


def both(x) -> str:
    return f"{rational(x)} ({decimal(x)})"


def parse_word(text: str) -> tuple[str, ...]:
    return tuple(s for s in text.split(",")) if text else ()


def parse_params(text: str) -> dict[str, list]:
    """``k=4..8,lambda=2`` -> {"k": [4, ..., 8], "lambda": [2]}."""
    out = {}
    for item in filter(None, (p.strip() for p in (text or "").split(","))):
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"bad parameter {item!r}; expected key=value")
        try:
            if ".." in value:
                lo, hi = value.split("..")
                out[key.strip()] = [Fraction(v) for v in range(int(lo), int(hi) + 1)]
            else:
                out[key.strip()] = [Fraction(value)]
        except ValueError:
            raise UsageError(f"bad value in {item!r}") from None
    return out


def single_params(text: str) -> dict:
    params = parse_params(text)
    multi = [k for k, v in params.items() if len(v) != 1]
    if multi:
        raise UsageError(f"ranges are only accepted by bench: {', '.join(multi)}")
    return {k: v[0] for k, v in params.items()}


def _stats_metadata(res, extra: Optional[dict] = None) -> dict:
    stats = {k: (rational(v) if isinstance(v, Fraction) else v) for k, v in res.stats.items()}
    stats.update(extra or {})
    return {
        "stats": stats,
        "state_map": {name: [io.gap_to_json(g) for g in gv] for name, gv in res.state_map.items()},
    }


# commands


def cmd_validate(args) -> int:
    a = io.load(args.path)
    rep = validate(a)
    print(f"complete: {str(rep.complete).lower()}")
    print(f"deterministic: {str(rep.deterministic).lower()}")
    print(f"lambda_ok: {str(rep.lambda_ok).lower()}")
    for issue in rep.issues:
        print(f"issue: {issue}")
    return EXIT_OK if rep.ok else 1


def cmd_value(args) -> int:
    a = io.load(args.path)
    w = parse_word(args.word)
    if args.prefix_with_tail:
        rep = tail_bounds(a, w)
        print(f"value: {both(rep.exact)}")
        print(f"tail_low: {both(rep.tail_low)}")
        print(f"tail_high: {both(rep.tail_high)}")
    else:
        print(f"value: {both(word_value(a, w))}")
    return EXIT_OK


def cmd_determinize(args) -> int:
    a = io.load(args.path)
    t0 = time.perf_counter()
    res = determinize_exact(a, args.cap)
    elapsed = time.perf_counter() - t0
    bound = res.stats.get("bound_m_to_n")
    io.save(res.automaton, args.out, _stats_metadata(res, {"wall_time": round(elapsed, 6)}))
    print(f"states: {res.states_created}")
    print(f"bound: {bound if bound is not None else 'n/a (nonintegral factor)'}")
    print(f"time: {elapsed:.6f}")
    return EXIT_OK


def cmd_approx_det(args) -> int:
    a = io.load(args.path)
    prec = Precision(args.precision)
    t0 = time.perf_counter()
    if args.method == "unfold":
        depth = args.depth if args.depth is not None else min_unfold_depth_generic(a, prec.epsilon)
        d = unfold(a, depth)
        err = unfold_error_bound(a, depth)
        meta = {"stats": {"depth": depth, "states_created": len(d.states), "error_bound": rational(err)}}
        states = len(d.states)
        print(f"depth: {depth}")
    else:
        if args.depth is not None:
            raise UsageError("--depth applies to the unfold method only")
        res = approx_determinize_rounding(a, prec, args.cap)
        d, err, states = res.automaton, prec.epsilon, res.states_created
        meta = _stats_metadata(res, {"error_bound": rational(err)})
        print(f"bound: {rounding_state_bound(a, prec)}")
    elapsed = time.perf_counter() - t0
    io.save(d, args.out, meta)
    print(f"states: {states}")
    print(f"error_bound: {both(err)}")
    print(f"time: {elapsed:.6f}")
    return EXIT_OK


def cmd_compose(args) -> int:
    operands = [io.load(p) for p in args.inputs]
    scalar = Fraction(args.scalar) if args.scalar is not None else None
    c = compose(args.op, operands, scalar, args.cap)
    io.save(c, args.out)
    print(f"states: {len(c.states)}")
    print(f"deterministic: {str(c.deterministic).lower()}")
    return EXIT_OK


def cmd_compare(args) -> int:
    a, b = io.load(args.a), io.load(args.b)
    dec = approx_compare_geq(a, b, Precision(args.precision), args.cap)
    print(dec.answer)
    print(f"sup_value: {both(dec.sup_value)}")
    print(f"epsilon: {rational(dec.epsilon)}")
    return EXIT_OK if dec else EXIT_NO


def cmd_generate(args) -> int:
    spec = FamilySpec(args.family, single_params(args.params))
    out = generate(spec)
    if isinstance(out, tuple):
        path = Path(args.out)
        for tag, auto in zip("AB", out):
            target = path.with_name(f"{path.stem}_{tag}{path.suffix or '.json'}")
            io.save(auto, target)
            print(f"wrote {target}")
    else:
        io.save(out, args.out)
        print(f"wrote {args.out}")
    return EXIT_OK


BENCH_DEFAULTS = {"determinization": "weight_lb", "approximation": "discount_lb"}
BENCH_COLUMNS = ("family", "params", "states", "bound", "time")


def bench_rows(suite: str, family: str, grid: dict[str, list], precision: int, cap: int):
    keys = sorted(grid)
    for combo in itertools.product(*(grid[k] for k in keys)):
        params = dict(zip(keys, combo))
        label = ";".join(f"{k}={rational(v) if v.denominator != 1 else v.numerator}" for k, v in params.items())
        auto = generate(FamilySpec(family, params))
        if isinstance(auto, tuple):
            raise UsageError(f"{family} produces a pair and cannot be benchmarked")
        t0 = time.perf_counter()
        if suite == "determinization":
            res = determinize_exact(auto, cap)
            bound = theoretical_state_bound(auto) if auto.lam.is_integral else "n/a"
        else:
            prec = Precision(precision)
            res = approx_determinize_rounding(auto, prec, cap)
            bound = rounding_state_bound(auto, prec)
        yield {
            "family": family,
            "params": label,
            "states": res.states_created,
            "bound": bound,
            "time": f"{time.perf_counter() - t0:.6f}",
        }


def cmd_bench(args) -> int:
    family = args.family or BENCH_DEFAULTS[args.suite]
    grid = parse_params(args.params)
    writer = csv.DictWriter(sys.stdout, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    rows = []
    for row in bench_rows(args.suite, family, grid, args.precision, args.cap):
        writer.writerow(row)
        rows.append(row)
    sys.stdout.flush()
    if args.plot:
        from .plotting import plot_state_counts

        plot_state_counts(rows, args.plot, f"{args.suite}: {family}")
        print(f"plot written to {args.plot}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dsa", description="Discounted-sum automata: determinization, approximation and comparison.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check completeness, determinism and the discount factor")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("value", help="exact value of a finite word")
    s.add_argument("path")
    s.add_argument("--word", default="", help="comma-separated letters; empty for the empty word")
    s.add_argument("--prefix-with-tail", action="store_true", help="also bound every infinite continuation")
    s.set_defaults(func=cmd_value)

    s = sub.add_parser("determinize", help="exact determinization")
    s.add_argument("path")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_determinize)

    s = sub.add_parser("approx-det", help="approximate determinization")
    s.add_argument("path")
    s.add_argument("--method", choices=("unfold", "round"), required=True)
    s.add_argument("--precision", type=int, required=True, help="p, for epsilon = 2^-p")
    s.add_argument("--depth", type=int)
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_approx_det)

    s = sub.add_parser("compose", help="closure operations")
    s.add_argument("--op", choices=OPS, required=True)
    s.add_argument("inputs", nargs="+")
    s.add_argument("--scalar")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("compare", help="approximately decide A >= B over infinite words")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--precision", type=int, required=True)
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("generate", help="write a family member")
    s.add_argument("--family", choices=FAMILIES, required=True)
    s.add_argument("--params", default="")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("bench", help="state counts over a parameter sweep, as CSV")
    s.add_argument("--suite", choices=tuple(BENCH_DEFAULTS), required=True)
    s.add_argument("--params", required=True, help="e.g. k=4..8,lambda=2")
    s.add_argument("--family", choices=FAMILIES)
    s.add_argument("--precision", type=int, default=3)
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--plot", help="also render the sweep to this image file")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DSAError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
