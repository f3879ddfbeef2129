"""Scalar expression language for metric entries and potentials.

Grammar, lowest to highest precedence::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?          right-associative
    atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

Recognized functions: exp, ln, sqrt, sin, cos.  Any other identifier is a
free symbol, resolved against an environment at evaluation time, so the
same AST evaluates over plain floats, jets, or a mixture of coordinate
seeds and bound constants.  Out-of-domain evaluations raise DomainError
rather than producing NaN.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import DomainError, ParseError
from .jets import Jet, jet_apply

FUNCTIONS = ("exp", "ln", "sqrt", "sin", "cos")


class Expr:
    """Base AST node."""

    __slots__ = ()

    def __str__(self):
        return to_str(self)


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Sym(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr


_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?"
                    r"|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*/^]))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1) is not None:
            tokens.append(("num", float(m.group(0)), pos))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), pos))
        else:
            tokens.append(("op", m.group(3), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, symbol):
        kind, val, pos = self.take()
        if kind != "op" or val != symbol:
            raise ParseError(f"expected {symbol!r}", pos)

    def parse(self):
        e = self.expr()
        kind, val, pos = self.peek()
        if kind is not None:
            raise ParseError(f"unexpected trailing input {val!r}", pos)
        return e

    def expr(self):
        e = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                e = Add(e, rhs) if val == "+" else Sub(e, rhs)
            else:
                return e

    def term(self):
        e = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.factor()
                e = Mul(e, rhs) if val == "*" else Div(e, rhs)
            else:
                return e

    def factor(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            return Pow(base, self.factor())
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Num(val)
        if kind == "name":
            nkind, nval, _ = self.peek()
            if nkind == "op" and nval == "(":
                if val not in FUNCTIONS:
                    raise ParseError(f"unknown function {val!r}", pos)
                self.take()
                arg = self.expr()
                self.expect_op(")")
                return Call(val, arg)
            return Sym(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise ParseError("expected a number, name or '('", pos)


def parse(text):
    """Parse an expression string into an AST."""
    return _Parser(text).parse()


# -- printing ---------------------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4, Num: 5, Sym: 5, Call: 5}


def _wrap(e, parent_prec, right_side=False):
    s = to_str(e)
    prec = _PREC[type(e)]
    if prec < parent_prec or (prec == parent_prec and right_side):
        return f"({s})"
    return s


def to_str(e):
    """Render an AST; parse(to_str(e)) reproduces e."""
    if isinstance(e, Num):
        v = e.value
        return repr(int(v)) if float(v).is_integer() and abs(v) < 1e16 else repr(v)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, _PREC[Neg])
    if isinstance(e, Add):
        return f"{_wrap(e.left, 1)} + {_wrap(e.right, 1, True)}"
    if isinstance(e, Sub):
        return f"{_wrap(e.left, 1)} - {_wrap(e.right, 1, True)}"
    if isinstance(e, Mul):
        return f"{_wrap(e.left, 2)}*{_wrap(e.right, 2, True)}"
    if isinstance(e, Div):
        return f"{_wrap(e.left, 2)}/{_wrap(e.right, 2, True)}"
    if isinstance(e, Pow):
        # exponent binds through factor, so negatives need no parentheses
        return f"{_wrap(e.base, 5)}^{_wrap(e.exponent, 4)}"
    if isinstance(e, Call):
        return f"{e.func}({to_str(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def symbols(e):
    """Free symbol names appearing in an AST."""
    if isinstance(e, Sym):
        return {e.name}
    if isinstance(e, (Num,)):
        return set()
    if isinstance(e, Neg):
        return symbols(e.arg)
    if isinstance(e, Call):
        return symbols(e.arg)
    if isinstance(e, Pow):
        return symbols(e.base) | symbols(e.exponent)
    return symbols(e.left) | symbols(e.right)


# -- evaluation ---------------------------------------------------------------

def _scalar_call(func, v):
    if func == "exp":
        return math.exp(v)
    if func == "ln":
        if v <= 0.0:
            raise DomainError(f"ln of non-positive value {v}")
        return math.log(v)
    if func == "sqrt":
        if v < 0.0:
            raise DomainError(f"sqrt of negative value {v}")
        return math.sqrt(v)
    if func == "sin":
        return math.sin(v)
    return math.cos(v)


def _scalar_pow(base, e):
    if float(e).is_integer():
        if base == 0.0 and e < 0:
            raise DomainError("zero base with negative exponent")
        return base ** e
    if base <= 0.0:
        raise DomainError(f"fractional power of non-positive base {base}")
    return base ** e


def eval_expr(e, env):
    """Evaluate an AST over an environment of floats and/or jets."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Sym):
        try:
            return env[e.name]
        except KeyError:
            raise ParseError(f"unknown identifier {e.name!r}") from None
    if isinstance(e, Neg):
        return -eval_expr(e.arg, env)
    if isinstance(e, Add):
        return eval_expr(e.left, env) + eval_expr(e.right, env)
    if isinstance(e, Sub):
        return eval_expr(e.left, env) - eval_expr(e.right, env)
    if isinstance(e, Mul):
        return eval_expr(e.left, env) * eval_expr(e.right, env)
    if isinstance(e, Div):
        num, den = eval_expr(e.left, env), eval_expr(e.right, env)
        if not isinstance(den, Jet) and den == 0.0:
            raise DomainError("division by zero")
        return num / den
    if isinstance(e, Pow):
        base, ex = eval_expr(e.base, env), eval_expr(e.exponent, env)
        if isinstance(base, Jet) or isinstance(ex, Jet):
            if not isinstance(base, Jet):
                if base <= 0.0:
                    raise DomainError(f"power with non-positive base {base} and jet exponent")
                return jet_apply("exp", ex * math.log(base))
            return base ** ex
        return _scalar_pow(base, ex)
    if isinstance(e, Call):
        arg = eval_expr(e.arg, env)
        if isinstance(arg, Jet):
            return jet_apply(e.func, arg)
        return _scalar_call(e.func, arg)
    raise TypeError(f"not an expression node: {e!r}")
