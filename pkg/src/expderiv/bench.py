"""Benchmark harness: recursive accumulation vs brute-force symbolic path.

Reproduces the measurement protocol the library was built around: sweep
the derivative order of one variable while holding the others fixed,
time both methods on the exponential of the chosen inner function, and
start every measured point from cold caches so neither method gets to
keep state between points.  Results serialize to CSV; the companion
`plotting` module renders them as timing figures.

Two inner functions are built in.  "F" is a four-variable polynomial
(degree three in every variable), "G" is its non-polynomial sibling with
one sine per term; both are evaluated at the all-ones point with fixed
orders (4, 4, 4) on the non-swept variables, which is where the
brute-force path stops being viable long before the sweep ends.
"""

import csv
import itertools
import time
from dataclasses import dataclass

from . import multidiff, symbolic

BUILTIN_EXPONENTS = {
    "F": "x1*x2*x3*x4 + x1^2*x2^2*x3^2*x4^2 + x1^3*x2^3*x3^3*x4^3",
    "G": "x1*x2*x3*sin(x4) + x1*x2*sin(x3)*x4 + x1*sin(x2)*x3*x4 + sin(x1)*x2*x3*x4",
}

MATCH_RTOL = 1e-9
CSV_HEADER = ("function", "method", "orders", "seconds", "value", "provider_calls", "match")


def relative_error(a, b):
    """|a - b| scaled by the larger magnitude; equal values (incl. 0, 0) give 0."""
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(a), abs(b))


@dataclass(frozen=True)
class BenchmarkSpec:
    """One sweep configuration.

    `function` is "F", "G", or "expr:<text>" over variables x1..xn.
    The sweep variable's order runs 0..sweep_max while the remaining
    variables keep the `fixed` orders (all fours when omitted); `point`
    defaults to all ones.  `clear_cache` rebuilds provider and cache for
    every measured repetition; switching it off lets the memo persist
    across repetitions and sweep points.
    """

    function: str = "F"
    point: tuple = None
    sweep_var: int = 1
    sweep_max: int = 6
    fixed: tuple = None
    repetitions: int = 3
    clear_cache: bool = True
    oracle_budget: float = 120.0
    oracle_node_cap: int = symbolic.DEFAULT_NODE_CAP


@dataclass
class BenchmarkRecord:
    """One timed measurement (or an explicit skip) of one method."""

    function: str
    method: str  # "recursive" | "oracle"
    orders: tuple
    seconds: float
    value: float | None  # None means skipped
    provider_calls: int | None  # recursive only
    match: bool | None  # set when both methods produced a value

    def __post_init__(self):
        if self.seconds < 0:
            raise ValueError("wall time must be non-negative")


def _infer_arity(text):
    indices = [
        int(tok[1:])
        for tok in text.replace("(", " ").replace(")", " ").split()
        if tok.startswith("x") and tok[1:].isdigit()
    ]
    return max(indices, default=0)


def resolve_function(function):
    """Map a spec's `function` field to (label, expression, arity)."""
    if function in BUILTIN_EXPONENTS:
        return function, symbolic.parse(BUILTIN_EXPONENTS[function], 4), 4
    if function.startswith("expr:"):
        text = function[len("expr:"):]
        arity = _infer_arity(text)
        if arity < 1:
            raise ValueError(f"could not find any variable x<i> in {text!r}")
        return text, symbolic.parse(text, arity), arity
    raise ValueError(f"unknown function {function!r}; use F, G or expr:<text>")


def _resolve(spec):
    label, expr, arity = resolve_function(spec.function)
    point = (1.0,) * arity if spec.point is None else tuple(float(p) for p in spec.point)
    if len(point) != arity:
        raise ValueError(f"point has {len(point)} coordinates, function arity is {arity}")
    fixed = (4,) * (arity - 1) if spec.fixed is None else tuple(int(o) for o in spec.fixed)
    if len(fixed) != arity - 1:
        raise ValueError(f"need {arity - 1} fixed orders, got {len(fixed)}")
    if any(o < 0 for o in fixed):
        raise ValueError(f"negative fixed order in {fixed}")
    if not (1 <= spec.sweep_var <= arity):
        raise ValueError(f"sweep variable {spec.sweep_var} outside 1..{arity}")
    if spec.sweep_max < 0:
        raise ValueError("sweep range is empty")
    if spec.repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    return label, expr, arity, point, fixed


def _orders_for(k, sweep_var, fixed, arity):
    orders = list(fixed)
    orders.insert(sweep_var - 1, k)
    assert len(orders) == arity
    return tuple(orders)


def run_benchmark(spec):
    """Execute one sweep; returns records in sweep order, recursive first.

    Per sweep value the recursive method is timed best-of-repetitions
    (fresh provider and cache each repetition when `clear_cache`), then
    the brute-force path likewise.  Once the brute-force path exceeds
    its time budget at a sweep point, or aborts on its tree-size cap,
    later points carry explicit skip records instead of measurements.
    """
    label, expr, arity, point, fixed = _resolve(spec)
    records = []
    oracle_alive = True
    provider = None
    cache = None
    for k in range(spec.sweep_max + 1):
        orders = _orders_for(k, spec.sweep_var, fixed, arity)

        best = None
        value = None
        calls_in_rep = 0
        for _ in range(spec.repetitions):
            if spec.clear_cache or provider is None:
                provider = symbolic.make_provider(expr, point)
                cache = multidiff.YCache()
            calls_before = cache.provider_calls
            start = time.perf_counter()
            value = multidiff.exp_derivative(orders, provider, cache)
            elapsed = time.perf_counter() - start
            calls_in_rep = cache.provider_calls - calls_before
            best = elapsed if best is None else min(best, elapsed)
        recursive = BenchmarkRecord(label, "recursive", orders, best, value, calls_in_rep, None)
        records.append(recursive)

        if oracle_alive:
            obest = None
            ovalue = None
            try:
                for _ in range(spec.repetitions):
                    start = time.perf_counter()
                    ovalue = symbolic.oracle_derivative(
                        expr, orders, point, node_cap=spec.oracle_node_cap
                    )
                    elapsed = time.perf_counter() - start
                    obest = elapsed if obest is None else min(obest, elapsed)
                if obest > spec.oracle_budget:
                    oracle_alive = False
            except symbolic.TreeSizeError:
                ovalue = None
                obest = None
                oracle_alive = False
            if ovalue is None:
                records.append(BenchmarkRecord(label, "oracle", orders, 0.0, None, None, None))
            else:
                matched = relative_error(value, ovalue) <= MATCH_RTOL
                recursive.match = matched
                records.append(
                    BenchmarkRecord(label, "oracle", orders, obest, ovalue, None, matched)
                )
        else:
            records.append(BenchmarkRecord(label, "oracle", orders, 0.0, None, None, None))
    return records


# ---------------------------------------------------------------------------
# CSV serialization

def _format_row(record):
    return (
        record.function,
        record.method,
        ";".join(str(o) for o in record.orders),
        repr(record.seconds),
        "skipped" if record.value is None else repr(record.value),
        "" if record.provider_calls is None else str(record.provider_calls),
        "" if record.match is None else ("true" if record.match else "false"),
    )


def emit_csv(records, destination):
    """Write records to `destination` in a stable, re-parseable layout."""
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    with open(destination, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER)
        for record in records:
            writer.writerow(_format_row(record))


def read_csv(source):
    """Parse a file produced by emit_csv back into records."""
    records = []
    with open(source, newline="") as handle:
        reader = csv.reader(handle)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected header {header!r}")
        for row in reader:
            function, method, orders, seconds, value, calls, match = row
            records.append(
                BenchmarkRecord(
                    function=function,
                    method=method,
                    orders=tuple(int(o) for o in orders.split(";")),
                    seconds=float(seconds),
                    value=None if value == "skipped" else float(value),
                    provider_calls=None if calls == "" else int(calls),
                    match=None if match == "" else (match == "true"),
                )
            )
    return records


# ---------------------------------------------------------------------------
# correctness report

CORPUS = (
    ("x1^2", 1),
    ("x1^3 + x1", 1),
    ("sin(x1)", 1),
    ("x1*sin(x1)", 1),
    ("x1*x2", 2),
    ("x1^2 + x2", 2),
    ("x1*sin(x2)", 2),
    ("x1*x2*x3", 3),
    ("F", 4),
    ("G", 4),
)


@dataclass
class CorpusEntry:
    label: str
    arity: int
    checks: int
    max_rel_error: float
    worst_orders: tuple


@dataclass
class CorpusReport:
    entries: list
    tolerance: float

    @property
    def ok(self):
        return all(entry.max_rel_error <= self.tolerance for entry in self.entries)

    def format(self):
        lines = []
        for entry in self.entries:
            verdict = "ok" if entry.max_rel_error <= self.tolerance else "FAIL"
            lines.append(
                f"{verdict:4s} {entry.label:12s} arity={entry.arity}"
                f" checks={entry.checks:4d}"
                f" max_rel_error={entry.max_rel_error:.3e} at {entry.worst_orders}"
            )
        lines.append(
            f"corpus {'PASSED' if self.ok else 'FAILED'}"
            f" (tolerance {self.tolerance:g}, {len(self.entries)} functions)"
        )
        return "\n".join(lines)


def _multi_indices(arity, max_total):
    for orders in itertools.product(range(max_total + 1), repeat=arity):
        if sum(orders) <= max_total:
            yield orders


def check_corpus(max_total_order=8, tolerance=MATCH_RTOL):
    """Compare both derivative paths over the built-in corpus.

    For every corpus function and every order tuple up to the total
    order bound, the recursive value is checked against the brute-force
    one at the all-ones point; the report carries the worst relative
    error per function.
    """
    entries = []
    for name, arity in CORPUS:
        if name in BUILTIN_EXPONENTS:
            label, expr = name, symbolic.parse(BUILTIN_EXPONENTS[name], arity)
        else:
            label, expr = name, symbolic.parse(name, arity)
        point = (1.0,) * arity
        provider = symbolic.make_provider(expr, point)
        cache = multidiff.YCache()
        oracle_ctx = symbolic.ExprContext(arity, point)
        worst = 0.0
        worst_orders = (0,) * arity
        checks = 0
        for orders in _multi_indices(arity, max_total_order):
            checks += 1
            recursive = multidiff.exp_derivative(orders, provider, cache)
            brute = symbolic.oracle_derivative(expr, orders, point, ctx=oracle_ctx)
            err = relative_error(recursive, brute)
            if err > worst:
                worst, worst_orders = err, orders
        entries.append(CorpusEntry(label, arity, checks, worst, worst_orders))
    return CorpusReport(entries, tolerance)
