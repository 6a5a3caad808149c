"""Command-line interface.

Subcommands:
  bell    evaluate a complete Bell polynomial
  derive  one mixed partial of exp(f) (or of g via its log-derivatives)
  bench   timing sweep, optionally written as CSV plus a rendered figure
  check   corpus correctness report, exit status 0/1
"""

import argparse
import sys
from pathlib import Path

from . import bell, bench, multidiff, symbolic


def _floats(text):
    if not text:
        return ()
    return tuple(float(part) for part in text.split(","))


def _ints(text):
    if not text:
        return ()
    return tuple(int(part) for part in text.split(","))


def _cmd_bell(args):
    z = _floats(args.z)
    if len(z) != args.n:
        raise SystemExit(f"expected {args.n} values, got {len(z)}")
    print(bell.complete_bell(z))
    return 0


def _cmd_derive(args):
    point = _floats(args.point)
    orders = _ints(args.order)
    arity = args.arity if args.arity is not None else len(point)
    if arity < 1:
        raise SystemExit("empty point; pass --point or --arity")
    if len(point) != arity or len(orders) != arity:
        raise SystemExit(
            f"arity {arity} needs {arity} point coordinates and {arity} orders,"
            f" got {len(point)} and {len(orders)}"
        )
    expr = symbolic.parse(args.expr, arity)
    cache = multidiff.YCache()
    if args.log_form:
        g_value = symbolic.evaluate(expr, point)
        provider = symbolic.make_provider(symbolic.Log(expr), point)
        value = multidiff.general_derivative(orders, g_value, provider, cache)
    else:
        provider = symbolic.make_provider(expr, point)
        value = multidiff.exp_derivative(orders, provider, cache)
    print(value)
    return 0


def _print_records(records):
    print(f"{'function':10s} {'method':10s} {'orders':14s} {'seconds':>12s}"
          f" {'value':>24s} {'calls':>7s} match")
    for r in records:
        orders = ";".join(str(o) for o in r.orders)
        value = "skipped" if r.value is None else f"{r.value:.12e}"
        calls = "" if r.provider_calls is None else str(r.provider_calls)
        match = "" if r.match is None else ("true" if r.match else "false")
        print(f"{r.function[:10]:10s} {r.method:10s} {orders:14s} {r.seconds:12.6f}"
              f" {value:>24s} {calls:>7s} {match}")


def _cmd_bench(args):
    spec = bench.BenchmarkSpec(
        function=args.function,
        point=_floats(args.point) if args.point else None,
        sweep_var=args.sweep_var,
        sweep_max=args.sweep_max,
        fixed=_ints(args.fixed) if args.fixed else None,
        repetitions=args.reps,
        clear_cache=not args.no_clear_cache,
        oracle_budget=args.oracle_budget,
    )
    records = bench.run_benchmark(spec)
    if args.csv:
        bench.emit_csv(records, args.csv)
        print(f"wrote {args.csv}")
    else:
        _print_records(records)

    plot_path = args.plot
    if plot_path is None and args.csv and not args.no_plot:
        plot_path = str(Path(args.csv).with_suffix(".png"))
    if plot_path and not args.no_plot:
        from . import plotting

        title = f"derivatives of exp({records[0].function})"
        plotting.save_timing_figure(records, plot_path, sweep_var=spec.sweep_var, title=title)
        print(f"wrote {plot_path}")

    mismatched = [r for r in records if r.match is False]
    if mismatched:
        print(f"WARNING: {len(mismatched)} records disagree beyond tolerance", file=sys.stderr)
    return 0


def _cmd_check(args):
    report = bench.check_corpus()
    print(report.format())
    return 0 if report.ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="expderiv",
        description="high-order mixed partial derivatives of exp(f) by memoized recursion",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bell = sub.add_parser("bell", help="evaluate the complete Bell polynomial Y_n")
    p_bell.add_argument("n", type=int, help="order n")
    p_bell.add_argument("z", nargs="?", default="", help="comma-separated z1,...,zn")
    p_bell.set_defaults(func=_cmd_bell)

    p_derive = sub.add_parser("derive", help="one mixed partial derivative")
    p_derive.add_argument("--expr", required=True, help="inner function f (or g with --log-form)")
    p_derive.add_argument("--arity", type=int, default=None, help="number of variables")
    p_derive.add_argument("--point", required=True, help="evaluation point p1,...,pn")
    p_derive.add_argument("--order", required=True, help="derivative orders k1,...,kn")
    p_derive.add_argument(
        "--log-form",
        action="store_true",
        help="treat --expr as g itself and differentiate via log(g)",
    )
    p_derive.set_defaults(func=_cmd_derive)

    p_bench = sub.add_parser("bench", help="timing sweep over one variable's order")
    p_bench.add_argument("--function", default="F", help="F, G, or expr:<text>")
    p_bench.add_argument("--sweep-var", type=int, default=1, help="1-based swept variable")
    p_bench.add_argument("--sweep-max", type=int, default=6, help="sweep order 0..K")
    p_bench.add_argument("--fixed", default=None, help="orders of the other variables")
    p_bench.add_argument("--point", default=None, help="evaluation point (default all ones)")
    p_bench.add_argument("--reps", type=int, default=3, help="best-of repetitions")
    p_bench.add_argument(
        "--no-clear-cache",
        action="store_true",
        help="let memo caches persist across repetitions and sweep points",
    )
    p_bench.add_argument("--csv", default=None, help="write records to this CSV file")
    p_bench.add_argument(
        "--oracle-budget",
        type=float,
        default=120.0,
        help="seconds before the brute-force path is skipped",
    )
    p_bench.add_argument(
        "--plot",
        default=None,
        help="figure file (default: CSV path with .png, when --csv is given)",
    )
    p_bench.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p_bench.set_defaults(func=_cmd_bench)

    p_check = sub.add_parser("check", help="corpus correctness report")
    p_check.set_defaults(func=_cmd_check)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
