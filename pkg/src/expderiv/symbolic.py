"""Minimal symbolic expression engine: parse, differentiate, evaluate.

Two jobs only.  First, a brute-force derivative path (`oracle_derivative`)
that differentiates exp(f) node by node and evaluates the resulting tree;
it shares no machinery with the recursive accumulator in `multidiff` and
is used to cross-check it.  Second, `make_provider` wraps symbolic
differentiation of f as a DerivativeProvider so the accumulator can be
driven from a plain expression string.

Simplification is deliberately limited to constant folding and identity
elimination (0+a, 0*a, 1*a, a^0, a/1).  The brute-force path is supposed
to be dumb; anything cleverer would weaken it as an independent check.
"""

import math

from .multidiff import DerivativeProvider

DEFAULT_NODE_CAP = 10_000_000

_FUNCTIONS = ("sin", "cos", "exp", "log")


class ParseError(ValueError):
    """Malformed expression text; `position` is the 0-based offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DomainError(ValueError):
    """Evaluation left the real domain (log of non-positive, x/0)."""

    def __init__(self, message, expr):
        super().__init__(f"{message}: {_describe(expr)}")
        self.expr = expr


def _describe(e):
    # keep error messages bounded even when the offender sits in a
    # multi-million-node derivative tree
    if node_count(e) > 200:
        return f"<{type(e).__name__} subtree with {node_count(e)} nodes>"
    return e._fmt()


class TreeSizeError(RuntimeError):
    """A symbolic derivative outgrew the configured node budget."""


class Expr:
    """Immutable expression node; subclasses define the actual kinds."""

    __slots__ = ()
    precedence = 5

    def __str__(self):
        return self._fmt()

    def __repr__(self):
        return f"{type(self).__name__}({self._fmt()!r})"

    def _children(self):
        return ()


class Constant(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        object.__setattr__(self, "value", float(value))

    def __setattr__(self, name, value):
        raise AttributeError("expression nodes are immutable")

    def _eval(self, point):
        return self.value

    def _diff(self, var, ctx):
        return _ZERO

    def _fmt(self):
        v = self.value
        if v == int(v) and abs(v) < 1e16:
            return str(int(v))
        return repr(v)


class Variable(Expr):
    __slots__ = ("index",)

    def __init__(self, index):
        object.__setattr__(self, "index", index)

    def __setattr__(self, name, value):
        raise AttributeError("expression nodes are immutable")

    def _eval(self, point):
        return point[self.index - 1]

    def _diff(self, var, ctx):
        return _ONE if self.index == var else _ZERO

    def _fmt(self):
        return f"x{self.index}"


class _Binary(Expr):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def __setattr__(self, name, value):
        raise AttributeError("expression nodes are immutable")

    def _children(self):
        return (self.left, self.right)

    def _fmt(self):
        lhs = self.left._fmt()
        if self.left.precedence < self.precedence:
            lhs = f"({lhs})"
        rhs = self.right._fmt()
        # parenthesize same-precedence right children so reparsing keeps
        # the association (and hence the exact floating-point result)
        if self.right.precedence <= self.precedence:
            rhs = f"({rhs})"
        return f"{lhs} {self.symbol} {rhs}"


class Add(_Binary):
    __slots__ = ()
    precedence = 1
    symbol = "+"

    def _eval(self, point):
        return self.left._eval(point) + self.right._eval(point)

    def _diff(self, var, ctx):
        return _add(differentiate(self.left, var, ctx), differentiate(self.right, var, ctx))


class Sub(_Binary):
    __slots__ = ()
    precedence = 1
    symbol = "-"

    def _eval(self, point):
        return self.left._eval(point) - self.right._eval(point)

    def _diff(self, var, ctx):
        return _sub(differentiate(self.left, var, ctx), differentiate(self.right, var, ctx))


class Mul(_Binary):
    __slots__ = ()
    precedence = 2
    symbol = "*"

    def _eval(self, point):
        return self.left._eval(point) * self.right._eval(point)

    def _diff(self, var, ctx):
        dl = differentiate(self.left, var, ctx)
        dr = differentiate(self.right, var, ctx)
        return _add(_mul(dl, self.right), _mul(self.left, dr))


class Div(_Binary):
    __slots__ = ()
    precedence = 2
    symbol = "/"

    def _eval(self, point):
        denom = self.right._eval(point)
        if denom == 0.0:
            raise DomainError("division by zero", self)
        return self.left._eval(point) / denom

    def _diff(self, var, ctx):
        dl = differentiate(self.left, var, ctx)
        dr = differentiate(self.right, var, ctx)
        num = _sub(_mul(dl, self.right), _mul(self.left, dr))
        return _div(num, _pow(self.right, 2))


class Pow(Expr):
    """Integer power; the exponent is a plain non-negative int, not a node."""

    __slots__ = ("base", "exponent")
    precedence = 4

    def __init__(self, base, exponent):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("expression nodes are immutable")

    def _children(self):
        return (self.base,)

    def _eval(self, point):
        return self.base._eval(point) ** self.exponent

    def _diff(self, var, ctx):
        db = differentiate(self.base, var, ctx)
        scaled = _mul(Constant(self.exponent), _pow(self.base, self.exponent - 1))
        return _mul(scaled, db)

    def _fmt(self):
        base = self.base._fmt()
        if self.base.precedence <= self.precedence:
            base = f"({base})"
        return f"{base}^{self.exponent}"


class _Function(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        object.__setattr__(self, "arg", arg)

    def __setattr__(self, name, value):
        raise AttributeError("expression nodes are immutable")

    def _children(self):
        return (self.arg,)

    def _fmt(self):
        return f"{self.name}({self.arg._fmt()})"


class Sin(_Function):
    __slots__ = ()
    name = "sin"

    def _eval(self, point):
        return math.sin(self.arg._eval(point))

    def _diff(self, var, ctx):
        return _mul(Cos(self.arg), differentiate(self.arg, var, ctx))


class Cos(_Function):
    __slots__ = ()
    name = "cos"

    def _eval(self, point):
        return math.cos(self.arg._eval(point))

    def _diff(self, var, ctx):
        return _mul(_NEG_ONE, _mul(Sin(self.arg), differentiate(self.arg, var, ctx)))


class Exp(_Function):
    __slots__ = ()
    name = "exp"

    def _eval(self, point):
        return math.exp(self.arg._eval(point))

    def _diff(self, var, ctx):
        # reuse this very node so repeated differentiation shares the factor
        return _mul(self, differentiate(self.arg, var, ctx))


class Log(_Function):
    __slots__ = ()
    name = "log"

    def _eval(self, point):
        v = self.arg._eval(point)
        if v <= 0.0:
            raise DomainError("log of non-positive argument", self)
        return math.log(v)

    def _diff(self, var, ctx):
        return _div(differentiate(self.arg, var, ctx), self.arg)


_ZERO = Constant(0.0)
_ONE = Constant(1.0)
_NEG_ONE = Constant(-1.0)


def _is_const(e, value=None):
    return isinstance(e, Constant) and (value is None or e.value == value)


def _add(l, r):
    if _is_const(l) and _is_const(r):
        return Constant(l.value + r.value)
    if _is_const(l, 0.0):
        return r
    if _is_const(r, 0.0):
        return l
    return Add(l, r)


def _sub(l, r):
    if _is_const(l) and _is_const(r):
        return Constant(l.value - r.value)
    if _is_const(r, 0.0):
        return l
    return Sub(l, r)


def _mul(l, r):
    if _is_const(l) and _is_const(r):
        return Constant(l.value * r.value)
    if _is_const(l, 0.0) or _is_const(r, 0.0):
        return _ZERO
    if _is_const(l, 1.0):
        return r
    if _is_const(r, 1.0):
        return l
    return Mul(l, r)


def _div(l, r):
    if _is_const(r, 1.0):
        return l
    if _is_const(l) and _is_const(r) and r.value != 0.0:
        return Constant(l.value / r.value)
    return Div(l, r)


def _pow(base, exponent):
    if exponent < 0:
        raise ValueError(f"negative exponent {exponent}")
    if exponent == 0:
        return _ONE
    if exponent == 1:
        return base
    if _is_const(base):
        return Constant(base.value ** exponent)
    return Pow(base, exponent)


class ExprContext:
    """Per-use bookkeeping: declared arity, evaluation point, and a memo
    of single-variable derivative trees keyed by node identity.

    The memo holds a strong reference to each differentiated node, so an
    id is never recycled while its entry is alive.  Inserts are
    idempotent (same node and variable always map to the same tree),
    which is what makes sharing a context across threads harmless.
    """

    def __init__(self, arity, point=None):
        if arity < 1:
            raise ValueError(f"arity must be >= 1, got {arity}")
        if point is not None:
            point = tuple(point)
            if len(point) != arity:
                raise ValueError(f"point has {len(point)} coordinates, arity is {arity}")
        self.arity = arity
        self.point = point
        self._memo = {}

    def clear(self):
        self._memo.clear()


def differentiate(e, var, ctx=None):
    """Partial derivative tree of `e` with respect to variable `var` (1-based).

    Results are memoized in `ctx` per (node, variable), so repeated
    differentiation of shared subtrees costs one pass each.
    """
    if ctx is None:
        ctx = ExprContext(arity=max(var, 1))
    if var < 1 or var > ctx.arity:
        raise ValueError(f"variable index {var} outside 1..{ctx.arity}")
    return _diff_memo(e, var, ctx)


def _diff_memo(e, var, ctx):
    key = (id(e), var)
    hit = ctx._memo.get(key)
    if hit is not None:
        return hit[1]
    d = e._diff(var, ctx)
    ctx._memo[key] = (e, d)
    return d


def evaluate(e, point):
    """Evaluate `e` at `point` (one coordinate per variable), as a float."""
    return float(e._eval(tuple(point)))


def to_string(e):
    """Render `e` in the same grammar `parse` accepts (round-trippable)."""
    return e._fmt()


def node_count(e):
    """Size of `e` as a fully unrolled tree; shared subtrees count once
    per occurrence.  Computed in time proportional to the number of
    distinct nodes, so it is safe to call on huge derivative trees."""
    counts = {}

    def count(node):
        c = counts.get(id(node))
        if c is None:
            c = 1
            for child in node._children():
                c += count(child)
            counts[id(node)] = c
        return c

    return count(e)


# ---------------------------------------------------------------------------
# parsing

_DIGITS = "0123456789"


class _Tokenizer:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def tokens(self):
        text = self.text
        n = len(text)
        i = 0
        while i < n:
            ch = text[i]
            if ch in " \t\r\n":
                i += 1
                continue
            if ch in "+-*/^()":
                yield (ch, None, i)
                i += 1
                continue
            if ch in _DIGITS or ch == ".":
                start = i
                while i < n and text[i] in _DIGITS:
                    i += 1
                if i < n and text[i] == ".":
                    i += 1
                    while i < n and text[i] in _DIGITS:
                        i += 1
                if i < n and text[i] in "eE":  # tolerate scientific notation
                    j = i + 1
                    if j < n and text[j] in "+-":
                        j += 1
                    if j < n and text[j] in _DIGITS:
                        i = j
                        while i < n and text[i] in _DIGITS:
                            i += 1
                lexeme = text[start:i]
                if lexeme == ".":
                    raise ParseError("invalid number", start)
                yield ("number", lexeme, start)
                continue
            if ch.isalpha() or ch == "_":
                start = i
                while i < n and (text[i].isalnum() or text[i] == "_"):
                    i += 1
                yield ("ident", text[start:i], start)
                continue
            raise ParseError(f"unexpected character {ch!r}", i)
        yield ("end", None, n)


class _Parser:
    """Recursive descent over: +/- < */ < unary - < ^ < atoms."""

    def __init__(self, text, arity):
        self.text = text
        self.arity = arity
        self._toks = list(_Tokenizer(text).tokens())
        self._i = 0

    def peek(self):
        return self._toks[self._i]

    def advance(self):
        tok = self._toks[self._i]
        self._i += 1
        return tok

    def expect(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}", tok[2])
        return self.advance()

    def parse(self):
        e = self.sum_expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError("unexpected trailing input", tok[2])
        return e

    def sum_expr(self):
        e = self.product()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.product()
            e = _add(e, rhs) if op == "+" else _sub(e, rhs)
        return e

    def product(self):
        e = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            rhs = self.unary()
            e = _mul(e, rhs) if op == "*" else _div(e, rhs)
        return e

    def unary(self):
        if self.peek()[0] == "-":
            self.advance()
            return _mul(_NEG_ONE, self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] != "^":
            return base
        self.advance()
        tok = self.peek()
        exponent = self.unary()  # right-associative: x^2^3 == x^(2^3)
        if not isinstance(exponent, Constant):
            raise ParseError("exponent must be a constant", tok[2])
        v = exponent.value
        if v != int(v) or v < 0:
            raise ParseError(f"non-integer or negative exponent {exponent}", tok[2])
        return _pow(base, int(v))

    def atom(self):
        kind, value, pos = self.peek()
        if kind == "number":
            self.advance()
            return Constant(float(value))
        if kind == "(":
            self.advance()
            e = self.sum_expr()
            self.expect(")")
            return e
        if kind == "ident":
            self.advance()
            if value in _FUNCTIONS:
                self.expect("(")
                arg = self.sum_expr()
                self.expect(")")
                return {"sin": Sin, "cos": Cos, "exp": Exp, "log": Log}[value](arg)
            if value.startswith("x") and value[1:].isdigit():
                index = int(value[1:])
                if index < 1 or index > self.arity:
                    raise ParseError(
                        f"variable {value} outside declared arity {self.arity}", pos
                    )
                return Variable(index)
            raise ParseError(f"unknown identifier {value!r}", pos)
        raise ParseError("syntax error", pos)


def parse(text, arity):
    """Parse expression text over variables x1..x<arity>.

    Grammar: numbers, variables, + - * / ^, sin/cos/exp/log, parentheses.
    ^ binds tightest (right-associative, constant non-negative integer
    exponents only), then unary minus, then * /, then + -.
    """
    if arity < 1:
        raise ValueError(f"arity must be >= 1, got {arity}")
    return _Parser(text, arity).parse()


# ---------------------------------------------------------------------------
# brute-force derivative path and the provider backend

def oracle_derivative(f, orders, point, node_cap=DEFAULT_NODE_CAP, ctx=None):
    """Mixed partial of exp(f) at `point`, computed the brute-force way.

    Wraps f in an exp node, differentiates symbolically order by order
    (all x1 derivatives first, then x2, ...), and evaluates whatever
    tree results.  No accumulation recurrences anywhere: this is the
    independent check for `multidiff.exp_derivative`, and it is expected
    to blow up on high orders.  When the unrolled tree passes `node_cap`
    nodes a TreeSizeError is raised instead of grinding on.
    """
    orders = tuple(int(o) for o in orders)
    point = tuple(point)
    if len(orders) != len(point):
        raise ValueError(f"{len(orders)} orders for a {len(point)}-coordinate point")
    if any(o < 0 for o in orders):
        raise ValueError(f"negative derivative order in {orders}")
    if ctx is None:
        ctx = ExprContext(arity=len(point), point=point)
    tree = Exp(f)
    for var in range(1, len(orders) + 1):
        for _ in range(orders[var - 1]):
            tree = _diff_memo(tree, var, ctx)
            size = node_count(tree)
            if size > node_cap:
                raise TreeSizeError(
                    f"derivative tree reached {size} nodes (cap {node_cap})"
                )
    return evaluate(tree, point)


def _poly_degree(e, var):
    """Degree of `e` in x_var when `e` is polynomial in that variable,
    else None.  Upper bound only; cancellation may lower the true degree."""
    if isinstance(e, Constant):
        return 0
    if isinstance(e, Variable):
        return 1 if e.index == var else 0
    if isinstance(e, (Add, Sub)):
        dl = _poly_degree(e.left, var)
        dr = _poly_degree(e.right, var)
        if dl is None or dr is None:
            return None
        return max(dl, dr)
    if isinstance(e, Mul):
        dl = _poly_degree(e.left, var)
        dr = _poly_degree(e.right, var)
        if dl is None or dr is None:
            return None
        return dl + dr
    if isinstance(e, Div):
        dl = _poly_degree(e.left, var)
        dr = _poly_degree(e.right, var)
        if dl is None or dr != 0:
            return None
        return dl
    if isinstance(e, Pow):
        db = _poly_degree(e.base, var)
        if db is None:
            return None
        return db * e.exponent
    # sin/cos/exp/log: constant in x_var iff the argument is
    if _poly_degree(e.arg, var) == 0:
        return 0
    return None


def make_provider(f, point, ctx=None):
    """DerivativeProvider backed by symbolic differentiation of `f`.

    Derivative trees are built incrementally: the tree for a mixed order
    comes from the tree one order lower in its highest-indexed nonzero
    variable, so x1 derivatives sit innermost and repeated queries share
    as much structure as possible.  When `f` is polynomial in some
    variable, the per-variable degree becomes a vanishing hint and
    higher queries short-circuit to 0.0 without building anything.
    """
    point = tuple(point)
    arity = len(point)
    if ctx is None:
        ctx = ExprContext(arity=arity, point=point)
    elif ctx.arity != arity:
        raise ValueError(f"context arity {ctx.arity} != point length {arity}")
    hint = tuple(_poly_degree(f, var) for var in range(1, arity + 1))
    if all(h is None for h in hint):
        hint = None
    trees = {(0,) * arity: f}

    def tree_for(orders):
        tree = trees.get(orders)
        if tree is None:
            var = max(i for i, o in enumerate(orders) if o > 0) + 1
            lower = list(orders)
            lower[var - 1] -= 1
            tree = _diff_memo(tree_for(tuple(lower)), var, ctx)
            trees[orders] = tree
        return tree

    def eval_orders(orders):
        if hint is not None and any(
            h is not None and o > h for o, h in zip(orders, hint)
        ):
            return 0.0
        return evaluate(tree_for(orders), point)

    return DerivativeProvider(arity, eval_orders, vanishing_hint=hint)
