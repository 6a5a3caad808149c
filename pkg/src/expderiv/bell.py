"""Complete and incomplete exponential Bell polynomials.

Everything here evaluates numerically (no symbolic coefficients): the
complete polynomial Y_n through its binomial ladder recurrence, the
incomplete polynomials B_{n,k} through the standard triangular
recurrence, and a brute-force evaluator that sums directly over set
partitions.  The brute-force path exists purely as an independent
cross-check for the recurrences and for anything built on top of them.
"""

MAX_ORDER = 60
ORACLE_MAX_N = 15

# Pascal's triangle up to row MAX_ORDER, exact integers.  Derivative
# orders beyond this are rejected everywhere rather than silently
# losing precision.
_PASCAL = [(1,)]
for _n in range(1, MAX_ORDER + 1):
    _prev = _PASCAL[-1]
    _PASCAL.append((1,) + tuple(_prev[_i] + _prev[_i + 1] for _i in range(_n - 1)) + (1,))
del _n, _prev


def binomial(n, k):
    """Binomial coefficient C(n, k) as an exact integer; 0 outside 0 <= k <= n."""
    if n < 0 or n > MAX_ORDER:
        raise ValueError(f"binomial row {n} outside the supported range 0..{MAX_ORDER}")
    if k < 0 or k > n:
        return 0
    return _PASCAL[n][k]


def binomial_row(n):
    """Row n of Pascal's triangle as a tuple (C(n,0), ..., C(n,n))."""
    if n < 0 or n > MAX_ORDER:
        raise ValueError(f"binomial row {n} outside the supported range 0..{MAX_ORDER}")
    return _PASCAL[n]


def set_partitions(items, k):
    """Yield every partition of `items` into exactly k non-empty blocks.

    Blocks come out as lists in a deterministic order.  This is plain
    backtracking (place each item into an existing block or open a new
    one), so the yield count is the Stirling number S(len(items), k).
    """
    items = list(items)
    n = len(items)
    if k < 0 or k > n:
        return
    if n == 0:
        yield []
        return

    blocks = []

    def place(i):
        if i == n:
            if len(blocks) == k:
                yield [block[:] for block in blocks]
            return
        # Not enough items left to open the blocks still missing.
        if len(blocks) + (n - i) < k:
            return
        for block in blocks:
            block.append(items[i])
            yield from place(i + 1)
            block.pop()
        if len(blocks) < k:
            blocks.append([items[i]])
            yield from place(i + 1)
            blocks.pop()

    yield from place(0)


def incomplete_bell_oracle(n, k, z):
    """B_{n,k}(z_1, ..., z_{n-k+1}) summed directly over set partitions.

    Each partition of {1, ..., n} into k blocks contributes the product
    of z_{block size} over its blocks.  Exponentially slow by design
    (it is the independent definition-level check for incomplete_bell);
    n above ORACLE_MAX_N is refused outright.
    """
    if k < 0 or k > n:
        raise ValueError(f"require 0 <= k <= n, got n={n}, k={k}")
    if n > ORACLE_MAX_N:
        raise ValueError(
            f"partition enumeration is capped at n={ORACLE_MAX_N}, got n={n}"
        )
    if k == 0:
        return 1 if n == 0 else 0
    z = tuple(z)
    if len(z) < n - k + 1:
        raise ValueError(f"need at least n-k+1={n - k + 1} values, got {len(z)}")
    total = 0
    for blocks in set_partitions(range(1, n + 1), k):
        term = 1
        for block in blocks:
            term *= z[len(block) - 1]
        total += term
    return total


def complete_bell(z):
    """Complete exponential Bell polynomial Y_n evaluated at z = (z1, ..., zn).

    Computed by the ladder Y_m = sum_{k=0}^{m-1} C(m-1, k) Y_k z_{m-k}
    starting from Y_0 = 1; every rung is kept for the duration of the
    call.  The empty sequence is the Y_0 case and gives 1.
    """
    z = tuple(z)
    n = len(z)
    if n > MAX_ORDER:
        raise ValueError(f"order {n} exceeds the supported maximum {MAX_ORDER}")
    ladder = [1]
    for m in range(1, n + 1):
        row = _PASCAL[m - 1]
        total = 0
        for k in range(m):
            total += row[k] * ladder[k] * z[m - k - 1]
        ladder.append(total)
    return ladder[n]


def incomplete_bell(n, k, z):
    """Incomplete exponential Bell polynomial B_{n,k}(z_1, ..., z_{n-k+1}).

    Uses the recurrence B_{n,k} = sum_i C(n-1, i-1) z_i B_{n-i,k-1} with
    B_{0,0} = 1 and B_{n,0} = 0 for n >= 1.  Agrees exactly with
    incomplete_bell_oracle on integer inputs.
    """
    if k < 0 or k > n:
        raise ValueError(f"require 0 <= k <= n, got n={n}, k={k}")
    if n > MAX_ORDER:
        raise ValueError(f"order {n} exceeds the supported maximum {MAX_ORDER}")
    if k == 0:
        return 1 if n == 0 else 0
    z = tuple(z)
    if len(z) < n - k + 1:
        raise ValueError(f"need at least n-k+1={n - k + 1} values, got {len(z)}")
    # Column-by-column fill; column j only needs rows j..n-k+j, which
    # also keeps every z subscript within the n-k+1 values promised.
    prev = [0] * (n + 1)
    prev[0] = 1
    for j in range(1, k + 1):
        cur = [0] * (n + 1)
        for m in range(j, n - k + j + 1):
            row = _PASCAL[m - 1]
            total = 0
            for i in range(1, m - j + 2):
                total += row[i - 1] * z[i - 1] * prev[m - i]
            cur[m] = total
        prev = cur
    return prev[n]


def riordan_compose(g_derivs, f_derivs, n):
    """n-th derivative of a composition g(f(x)) from the two jet sequences.

    `g_derivs` holds g', g'', ... evaluated at f(x); `f_derivs` holds
    f', f'', ... at x; both need at least n entries.  Returns
    sum_{k=1}^{n} g^(k) B_{n,k}(f', ..., f^(n-k+1)).
    """
    if n < 1:
        raise ValueError(f"require n >= 1, got n={n}")
    g_derivs = tuple(g_derivs)
    f_derivs = tuple(f_derivs)
    if len(g_derivs) < n:
        raise ValueError(f"need {n} derivatives of g, got {len(g_derivs)}")
    if len(f_derivs) < n:
        raise ValueError(f"need {n} derivatives of f, got {len(f_derivs)}")
    total = 0
    for k in range(1, n + 1):
        total += g_derivs[k - 1] * incomplete_bell(n, k, f_derivs)
    return total
