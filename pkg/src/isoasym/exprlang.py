"""
A small expression language for scalar functions of ``s``, ``t`` and ``q``.

Grammar (whitespace is ignored)::

    expr  := term (('+'|'-') term)*
    term  := unary (('*'|'/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := NUMBER | 's' | 't' | 'q' | 'pi' | FUNC '(' expr ')' | '(' expr ')'
    FUNC  := sin | cos | tan | exp | ln | sqrt

``^`` binds tighter than unary minus (``-2^2 == -4``) and is right
associative. Exponents must be constant expressions.

Evaluation broadcasts with numpy, so ``s``, ``t``, ``q`` may be arrays.
"""

import math
import re
from dataclasses import dataclass

import numpy as np

VARIABLES = ("s", "t", "q")
FUNCTIONS = ("sin", "cos", "tan", "exp", "ln", "sqrt")


class ExprSyntaxError(ValueError):
    """Malformed expression text; ``offset`` is a byte offset into the UTF-8 source."""

    def __init__(self, message, offset, text=""):
        super().__init__(f"{message} at offset {offset}")
        self.reason = message
        self.offset = offset
        self.text = text


class DomainError(ArithmeticError):
    """Evaluation left the real domain of an operation; ``expr`` is the culprit."""

    def __init__(self, message, expr):
        super().__init__(f"{message} in '{expr}'")
        self.expr = expr


class UnsupportedNode(TypeError):
    pass


# ---------------------------------------------------------------------------
# AST


class Expr:
    __slots__ = ()

    def __str__(self):
        return to_string(self)


@dataclass(frozen=True, eq=True, repr=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Const(Expr):
    name: str

    @property
    def value(self):
        return math.pi


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr


ZERO = Num(0.0)
ONE = Num(1.0)


def free_vars(e):
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Num, Const)):
        return set()
    if isinstance(e, (Neg, Call)):
        return free_vars(e.arg)
    return free_vars(e.left) | free_vars(e.right)


def is_constant(e):
    return not free_vars(e)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos), text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


def _byte_offset(text, pos):
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message, pos=None):
        if pos is None:
            pos = self.tok[2]
        return ExprSyntaxError(message, _byte_offset(self.text, pos), self.text)

    def accept(self, value):
        kind, val, _ = self.tok
        if kind == "op" and val == value:
            self.i += 1
            return True
        return False

    def expect(self, value):
        if not self.accept(value):
            found = self.tok[1] or "end of input"
            raise self.error(f"expected '{value}', found {found!r}")

    def parse(self):
        e = self.expr()
        if self.tok[0] != "eof":
            raise self.error(f"unexpected {self.tok[1]!r}")
        return e

    def expr(self):
        e = self.term()
        while True:
            if self.accept("+"):
                e = BinOp("+", e, self.term())
            elif self.accept("-"):
                e = BinOp("-", e, self.term())
            else:
                return e

    def term(self):
        e = self.unary()
        while True:
            if self.accept("*"):
                e = BinOp("*", e, self.unary())
            elif self.accept("/"):
                e = BinOp("/", e, self.unary())
            else:
                return e

    def unary(self):
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            pos = self.tok[2]
            exponent = self.unary()
            if not is_constant(exponent):
                raise self.error("exponent must be a constant expression", pos)
            return BinOp("^", base, exponent)
        return base

    def atom(self):
        kind, val, pos = self.tok
        if kind == "number":
            self.i += 1
            return Num(float(val))
        if kind == "ident":
            self.i += 1
            if val in VARIABLES:
                return Var(val)
            if val == "pi":
                return Const("pi")
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            raise self.error(f"unknown identifier {val!r}", pos)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if kind == "eof":
            raise self.error("unexpected end of input, expected an operand")
        raise self.error(f"unexpected {val!r}, expected an operand")


def parse(text):
    """Parse ``text`` into an :class:`Expr`. Raises :class:`ExprSyntaxError`."""
    if not isinstance(text, str):
        raise TypeError(f"expression must be a string, not {type(text).__name__}")
    if not text.strip():
        raise ExprSyntaxError("empty expression", 0, text)
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_NEG_PREC = 3
_ATOM_PREC = 5


def _prec(e):
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg) or (isinstance(e, Num) and e.value < 0):
        return _NEG_PREC
    return _ATOM_PREC


def _format_number(v):
    v = abs(v)
    if v.is_integer() and v < 1e16:
        return str(int(v))
    return repr(v)


def to_string(e):
    """Render ``e`` back to source text accepted by :func:`parse`."""
    if isinstance(e, Num):
        text = _format_number(e.value)
        return "-" + text if e.value < 0 or math.copysign(1.0, e.value) < 0 else text
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({to_string(e.arg)})"
    if isinstance(e, Neg):
        inner = to_string(e.arg)
        return "-" + (f"({inner})" if _prec(e.arg) < _NEG_PREC else inner)
    p = _PREC[e.op]
    left = to_string(e.left)
    right = to_string(e.right)
    if e.op == "^":
        # the base of a power must be an atom
        if _prec(e.left) < _ATOM_PREC:
            left = f"({left})"
        if _prec(e.right) < _NEG_PREC:
            right = f"({right})"
    else:
        if _prec(e.left) < p:
            left = f"({left})"
        # right operands of equal precedence keep their parentheses so that
        # printing and re-parsing reproduces the same tree
        if _prec(e.right) <= p:
            right = f"({right})"
    return f"{left}{e.op}{right}"


# ---------------------------------------------------------------------------
# Evaluation


def _check(bad, message, e):
    if np.any(bad):
        raise DomainError(message, e)


def _eval(e, env):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Neg):
        return -_eval(e.arg, env)
    if isinstance(e, Call):
        a = _eval(e.arg, env)
        f = e.func
        if f == "ln":
            _check(np.asarray(a) <= 0, "logarithm of a non-positive number", e)
            return np.log(a)
        if f == "sqrt":
            _check(np.asarray(a) < 0, "square root of a negative number", e)
            return np.sqrt(a)
        r = getattr(np, f)(a)
        _check(~np.isfinite(r), f"non-finite result of {f}", e)
        return r
    a = _eval(e.left, env)
    b = _eval(e.right, env)
    op = e.op
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        _check(np.asarray(b) == 0, "division by zero", e)
        return a / b
    a_arr = np.asarray(a)
    b_arr = np.asarray(b)
    _check((a_arr < 0) & (b_arr != np.round(b_arr)), "negative base with non-integer exponent", e)
    _check((a_arr == 0) & (b_arr < 0), "zero raised to a negative power", e)
    r = np.power(np.asarray(a, dtype=float), b)
    _check(~np.isfinite(r), "non-finite power", e)
    return r


def evaluate(e, s=0.0, t=0.0, q=0.0):
    """
    Evaluate ``e`` at ``(s, t, q)``.

    Arguments broadcast against each other; scalar inputs give a float and
    array inputs give an array of the broadcast shape (constant expressions
    are broadcast too). Raises :class:`DomainError` outside the real domain.
    """
    env = {"s": s, "t": t, "q": q}
    with np.errstate(all="ignore"):
        r = _eval(e, env)
    shape = np.broadcast(np.asarray(s), np.asarray(t), np.asarray(q)).shape
    if shape == ():
        return float(r)
    return np.broadcast_to(np.asarray(r, dtype=float), shape).copy()


# ---------------------------------------------------------------------------
# Simplification and differentiation


def _num(e):
    return e.value if isinstance(e, Num) else None


def _fold(make, *values):
    with np.errstate(all="ignore"):
        try:
            r = float(make(*values))
        except (ArithmeticError, ValueError):
            return None
    return Num(r) if math.isfinite(r) else None


def _simplify_binop(op, a, b):
    x, y = _num(a), _num(b)
    if x is not None and y is not None:
        folded = None
        if op == "+":
            folded = Num(x + y)
        elif op == "-":
            folded = Num(x - y)
        elif op == "*":
            folded = Num(x * y)
        elif op == "/" and y != 0:
            folded = _fold(lambda m, n: m / n, x, y)
        elif op == "^" and not (x < 0 and not float(y).is_integer()) and not (x == 0 and y < 0):
            folded = _fold(math.pow, x, y)
        if folded is not None:
            return folded
    if op == "+":
        if x == 0:
            return b
        if y == 0:
            return a
        if isinstance(b, Neg):
            return _simplify_binop("-", a, b.arg)
    elif op == "-":
        if y == 0:
            return a
        if x == 0:
            return simplify(Neg(b))
        if isinstance(b, Neg):
            return _simplify_binop("+", a, b.arg)
    elif op == "*":
        if x == 0 or y == 0:
            return ZERO
        if x == 1:
            return b
        if y == 1:
            return a
        if x == -1:
            return simplify(Neg(b))
        if y == -1:
            return simplify(Neg(a))
    elif op == "/":
        if y == 1:
            return a
    elif op == "^":
        if y == 1:
            return a
        if y == 0:
            return ONE
    return BinOp(op, a, b)


def simplify(e):
    """Constant folding plus the identities x*0=0, x*1=x, x+0=x, x-0=x, x^1=x."""
    if isinstance(e, (Num, Var, Const)):
        return e
    if isinstance(e, Neg):
        a = simplify(e.arg)
        if isinstance(a, Num):
            return Num(-a.value)
        if isinstance(a, Neg):
            return a.arg
        return Neg(a)
    if isinstance(e, Call):
        a = simplify(e.arg)
        if isinstance(a, Num):
            try:
                folded = _fold(lambda v: evaluate(Call(e.func, Num(v))), a.value)
            except DomainError:
                folded = None
            if folded is not None:
                return folded
        return Call(e.func, a)
    return _simplify_binop(e.op, simplify(e.left), simplify(e.right))


def _d(e, var):
    if isinstance(e, (Num, Const)):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == var else ZERO
    if isinstance(e, Neg):
        return Neg(_d(e.arg, var))
    if isinstance(e, Call):
        a = e.arg
        da = _d(a, var)
        if e.func == "sin":
            return BinOp("*", da, Call("cos", a))
        if e.func == "cos":
            return Neg(BinOp("*", da, Call("sin", a)))
        if e.func == "tan":
            return BinOp("/", da, BinOp("^", Call("cos", a), Num(2.0)))
        if e.func == "exp":
            return BinOp("*", da, Call("exp", a))
        if e.func == "ln":
            return BinOp("/", da, a)
        if e.func == "sqrt":
            return BinOp("/", da, BinOp("*", Num(2.0), Call("sqrt", a)))
        raise UnsupportedNode(f"unknown function {e.func!r}")
    if not isinstance(e, BinOp):
        raise UnsupportedNode(f"cannot differentiate {type(e).__name__}")
    a, b, op = e.left, e.right, e.op
    if op in "+-":
        return BinOp(op, _d(a, var), _d(b, var))
    if op == "*":
        return BinOp("+", BinOp("*", _d(a, var), b), BinOp("*", a, _d(b, var)))
    if op == "/":
        num = BinOp("-", BinOp("*", _d(a, var), b), BinOp("*", a, _d(b, var)))
        return BinOp("/", num, BinOp("^", b, Num(2.0)))
    if op == "^":
        if not is_constant(b):
            raise UnsupportedNode(f"non-constant exponent in '{to_string(e)}'")
        reduced = simplify(BinOp("-", b, ONE))
        return BinOp("*", BinOp("*", b, BinOp("^", a, reduced)), _d(a, var))
    raise UnsupportedNode(f"unknown operator {op!r}")


def differentiate(e, var):
    """Symbolic partial derivative of ``e`` with respect to ``var`` (one of s, t, q)."""
    if var not in VARIABLES:
        raise ValueError(f"unknown variable {var!r}")
    return simplify(_d(e, var))
