"""Arbitrary-order mixed partial derivatives of exp(f(x1, ..., xn)).

The accumulation recursion lives in `multidiff`, its univariate base
case (complete Bell polynomials) in `bell`, the independent brute-force
cross-check and the expression-backed derivative provider in `symbolic`,
and the timing harness in `bench`/`plotting`/`cli`.
"""

from .bell import (
    binomial,
    complete_bell,
    incomplete_bell,
    incomplete_bell_oracle,
    riordan_compose,
    set_partitions,
)
from .bench import (
    BenchmarkRecord,
    BenchmarkSpec,
    CorpusReport,
    check_corpus,
    emit_csv,
    read_csv,
    run_benchmark,
)
from .multidiff import (
    DerivativeProvider,
    YCache,
    clear,
    exp_derivative,
    general_derivative,
    provider_call_count,
    t_tensor,
    y_tensor,
)
from .symbolic import (
    DomainError,
    Expr,
    ExprContext,
    ParseError,
    TreeSizeError,
    differentiate,
    evaluate,
    make_provider,
    node_count,
    oracle_derivative,
    parse,
    to_string,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkRecord",
    "BenchmarkSpec",
    "CorpusReport",
    "DerivativeProvider",
    "DomainError",
    "Expr",
    "ExprContext",
    "ParseError",
    "TreeSizeError",
    "YCache",
    "binomial",
    "check_corpus",
    "clear",
    "complete_bell",
    "differentiate",
    "emit_csv",
    "evaluate",
    "exp_derivative",
    "general_derivative",
    "incomplete_bell",
    "incomplete_bell_oracle",
    "make_provider",
    "node_count",
    "oracle_derivative",
    "parse",
    "provider_call_count",
    "read_csv",
    "riordan_compose",
    "run_benchmark",
    "set_partitions",
    "t_tensor",
    "to_string",
    "y_tensor",
]
