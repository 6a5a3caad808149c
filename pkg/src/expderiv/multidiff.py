"""Memoized recursive accumulation of mixed partials of exp(f).

The mixed partial of exp(f) of order (k1, ..., kn) equals exp(f) times a
scalar Y indexed by that order tuple.  Y satisfies a binomial recursion
over the box of index tuples below (k1, ..., kn): pick the rightmost
nonzero position p, then

    Y[k] = sum over j (j_i = 0..k_i for i != p, j_p = 0..k_p-1) of
           prod_i C(k_i, j_i) * C(k_p - 1, j_p) / (i == p picks the
           shifted row) * Y[j] * fpartial(k - j)

with Y[0,...,0] = 1; trailing zero orders pass straight through to the
lower-arity case, which is why the pivot is the rightmost nonzero index.
In one variable this is exactly the complete Bell polynomial ladder in
`bell`.

All Y entries and all inner-function partials are memoized in a YCache,
so each distinct partial of f is evaluated exactly once per cache
lifetime.  One cache belongs to one (provider, point) context; nothing
is ever shared implicitly.
"""

import itertools
import math

from .bell import MAX_ORDER, binomial_row

DEFAULT_ORDER_CAP = MAX_ORDER

_MISSING = object()


class DerivativeProvider:
    """Evaluated mixed partials of a fixed inner function at a fixed point.

    `eval_fn` maps an order tuple (j1, ..., jn) to the value of the
    corresponding partial; the all-zero tuple must give the function
    value itself, and repeated queries must return identical values.
    `vanishing_hint`, when given, is a per-variable bound: if
    vanishing_hint[i] == m (not None), every query with orders[i] > m is
    promised to be exactly zero, and callers may skip it without asking.
    """

    def __init__(self, arity, eval_fn, vanishing_hint=None):
        if arity < 1:
            raise ValueError(f"arity must be >= 1, got {arity}")
        if vanishing_hint is not None:
            vanishing_hint = tuple(vanishing_hint)
            if len(vanishing_hint) != arity:
                raise ValueError(
                    f"vanishing hint has {len(vanishing_hint)} entries, arity is {arity}"
                )
        self.arity = arity
        self.vanishing_hint = vanishing_hint
        self._eval_fn = eval_fn

    def eval(self, orders):
        return self._eval_fn(tuple(orders))


class YCache:
    """Memo for one (provider, point) evaluation context.

    `entries` maps order tuples to accumulated Y (or T) values;
    `provider_calls` counts actual provider evaluations, which by
    construction equals the number of distinct partials queried.  Writes
    are idempotent (a key always receives the same value), so concurrent
    use only ever duplicates work, never corrupts results.
    """

    def __init__(self):
        self.entries = {}
        self.hits = 0
        self.misses = 0
        self.provider_calls = 0
        self._f_values = {}

    @property
    def distinct_provider_indices(self):
        """Number of distinct partial-derivative orders asked of the provider."""
        return len(self._f_values)

    def clear(self):
        """Drop all entries and zero every counter."""
        self.entries.clear()
        self._f_values.clear()
        self.hits = 0
        self.misses = 0
        self.provider_calls = 0


def provider_call_count(cache):
    """Provider evaluations recorded since the cache was created or cleared."""
    return cache.provider_calls


def clear(cache):
    """Empty `cache` and reset its counters."""
    cache.clear()


def _validated(orders, provider, order_cap):
    k = tuple(int(o) for o in orders)
    if len(k) != provider.arity:
        raise ValueError(
            f"order tuple has {len(k)} entries, provider arity is {provider.arity}"
        )
    if any(o < 0 for o in k):
        raise ValueError(f"negative derivative order in {k}")
    total = sum(k)
    if total > order_cap:
        raise ValueError(f"total order {total} exceeds cap {order_cap}")
    return k


def _f_value(orders, provider, cache):
    value = cache._f_values.get(orders, _MISSING)
    if value is _MISSING:
        value = provider.eval(orders)
        cache.provider_calls += 1
        cache._f_values[orders] = value
    return value


def _accumulate(k, provider, cache):
    entry = cache.entries.get(k, _MISSING)
    if entry is not _MISSING:
        cache.hits += 1
        return entry
    cache.misses += 1
    if not any(k):
        cache.entries[k] = 1
        return 1
    pivot = max(i for i, o in enumerate(k) if o > 0)
    rows = []
    ranges = []
    for i, ki in enumerate(k):
        if i == pivot:
            rows.append(binomial_row(ki - 1))
            ranges.append(range(ki))
        else:
            rows.append(binomial_row(ki))
            ranges.append(range(ki + 1))
    hint = provider.vanishing_hint
    total = 0
    for j in itertools.product(*ranges):
        f_orders = tuple(ki - ji for ki, ji in zip(k, j))
        if hint is not None and any(
            h is not None and o > h for o, h in zip(f_orders, hint)
        ):
            continue
        fval = _f_value(f_orders, provider, cache)
        if fval == 0.0:
            continue
        coeff = 1
        for row, ji in zip(rows, j):
            coeff *= row[ji]
        total += coeff * _accumulate(j, provider, cache) * fval
    cache.entries[k] = total
    return total


def y_tensor(orders, provider, cache, order_cap=DEFAULT_ORDER_CAP):
    """The scalar Y with exp-partial(orders) = exp(f(point)) * Y.

    Sums the recursion in lexicographic index order with plain floating
    addition; every intermediate Y lands in `cache`.  With only the
    first variable active this reduces, bit for bit, to
    `bell.complete_bell` on the sequence of pure x1-partials.
    """
    k = _validated(orders, provider, order_cap)
    return _accumulate(k, provider, cache)


def exp_derivative(orders, provider, cache, order_cap=DEFAULT_ORDER_CAP):
    """Mixed partial of exp(f) at the provider's point, of the given orders."""
    k = _validated(orders, provider, order_cap)
    y = _accumulate(k, provider, cache)
    f0 = _f_value((0,) * provider.arity, provider, cache)
    value = math.exp(f0) * y
    if not math.isfinite(value):
        raise OverflowError(f"derivative of exp(f) is not finite: {value!r}")
    return value


def t_tensor(orders, log_provider, cache, order_cap=DEFAULT_ORDER_CAP):
    """The scalar T with partial(orders) g = g(point) * T.

    `log_provider` must supply the partials of log(g) at the point.  T
    obeys the same recursion as Y, so this delegates outright and the
    results are bit-identical given identical providers.
    """
    return y_tensor(orders, log_provider, cache, order_cap)


def general_derivative(orders, g_value, log_provider, cache, order_cap=DEFAULT_ORDER_CAP):
    """Mixed partial of a nonvanishing g from its value and log-derivatives.

    `g_value` is g at the evaluation point and must be nonzero (positive
    in the usual real-log setting); the order-zero case returns it
    unchanged.
    """
    if g_value == 0:
        raise ValueError("g must be nonzero at the evaluation point")
    return g_value * t_tensor(orders, log_provider, cache, order_cap)
