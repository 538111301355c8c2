"""Coefficient expressions: parsing, complex evaluation, symbolic derivatives.

The grammar is deliberately small and purely analytic, so every expression
can be evaluated at complex arguments (needed when the independent variable
is rotated into the complex plane) and differentiated structurally:

    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := '-' factor | power
    power    := atom ('^' exponent)?      right-associative
    exponent := '-' exponent | power      must not depend on x
    atom     := NUMBER | 'i' | 'x' | name | func '(' expr ')' | '(' expr ')'

NUMBER is a decimal with optional fraction and exponent part (a trailing
``i`` makes it an imaginary literal: ``2+3i``), ``i`` alone is the
imaginary unit and ``x`` the free variable; any other name is a parameter
and must be declared at parse time.  Functions: exp, sin, cos, sqrt, log.
Non-analytic operations (abs, Re, Im, conj) are intentionally absent; fold
such constants into parameter values before parsing.  ``^`` and ``log``
use the principal branch, with the cut along the negative real axis.

ASTs are immutable after parsing; evaluation is pure and safe to call from
concurrent code.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass


class ExprSyntaxError(ValueError):
    """Malformed source text; ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class ExprEvalError(ArithmeticError):
    """Evaluation hit a declared singular operation (x/0, log 0)."""


class Expr:
    __slots__ = ()

    def __str__(self):
        return to_source(self)


@dataclass(frozen=True)
class Const(Expr):
    value: complex


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Param(Expr):
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
class Func(Expr):
    name: str
    arg: Expr


FUNCTIONS = ("exp", "sin", "cos", "sqrt", "log")

_CFUNCS = {
    "exp": cmath.exp,
    "sin": cmath.sin,
    "cos": cmath.cos,
    "sqrt": cmath.sqrt,
    "log": cmath.log,
}


# ---------------------------------------------------------------- tokenizer

_OPS = "+-*/^()"


def _tokenize(source: str):
    tokens = []
    n = len(source)
    pos = 0
    while pos < n:
        ch = source[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch in _OPS:
            tokens.append((ch, ch, pos))
            pos += 1
            continue
        if ch.isdigit() or (ch == "." and pos + 1 < n and source[pos + 1].isdigit()):
            start = pos
            while pos < n and source[pos].isdigit():
                pos += 1
            if pos < n and source[pos] == ".":
                pos += 1
                while pos < n and source[pos].isdigit():
                    pos += 1
            if pos < n and source[pos] in "eE":
                mark = pos
                pos += 1
                if pos < n and source[pos] in "+-":
                    pos += 1
                if pos < n and source[pos].isdigit():
                    while pos < n and source[pos].isdigit():
                        pos += 1
                else:
                    pos = mark  # 'e' belongs to a following identifier, not the number
            # trailing 'i' makes an imaginary literal: 3i, 2.5i, 1e-3i
            if pos < n and source[pos] == "i" and (
                    pos + 1 >= n or not (source[pos + 1].isalnum()
                                         or source[pos + 1] == "_")):
                tokens.append(("imag", source[start:pos], start))
                pos += 1
                continue
            tokens.append(("num", source[start:pos], start))
            continue
        if ch.isalpha() or ch == "_":
            start = pos
            while pos < n and (source[pos].isalnum() or source[pos] == "_"):
                pos += 1
            tokens.append(("name", source[start:pos], start))
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", pos)
    tokens.append(("end", "", n))
    return tokens


# ------------------------------------------------------------------- parser


class _Parser:
    def __init__(self, source: str, params):
        self.tokens = _tokenize(source)
        self.pos = 0
        self.params = frozenset(params)

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}", tok[2])
        return tok

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            rhs = self.factor()
            e = Mul(e, rhs) if op == "*" else Div(e, rhs)
        return e

    def factor(self) -> Expr:
        if self.peek()[0] == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "^":
            caret = self.advance()
            exponent = self.exponent()
            if contains_var(exponent):
                raise ExprSyntaxError("exponent must not depend on x", caret[2])
            return Pow(base, exponent)
        return base

    def exponent(self) -> Expr:
        if self.peek()[0] == "-":
            self.advance()
            return Neg(self.exponent())
        return self.power()

    def atom(self) -> Expr:
        tok = self.advance()
        kind, text, offset = tok
        if kind == "num":
            return Const(complex(float(text), 0.0))
        if kind == "imag":
            return Const(complex(0.0, float(text)))
        if kind == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "name":
            if text == "i":
                return Const(1j)
            if text == "x":
                return Var()
            if self.peek()[0] == "(":
                if text not in FUNCTIONS:
                    raise ExprSyntaxError(f"unknown function {text!r}", offset)
                self.advance()
                arg = self.expr()
                self.expect(")")
                return Func(text, arg)
            if text in FUNCTIONS:
                raise ExprSyntaxError(f"function {text!r} needs an argument list", offset)
            if text not in self.params:
                raise ExprSyntaxError(f"unknown identifier {text!r}", offset)
            return Param(text)
        raise ExprSyntaxError("expected expression", offset)


def parse(source: str, params=()) -> Expr:
    """Parse ``source`` over the grammar above.

    ``params`` lists the parameter names the expression may reference.
    Raises :class:`ExprSyntaxError` with a byte offset on malformed input
    or undeclared identifiers.
    """
    return _Parser(source, params).parse()


# --------------------------------------------------------------- evaluation


def evaluate(e: Expr, x: complex = 0j, params=None) -> complex:
    """Evaluate ``e`` at the complex point ``x`` with parameter bindings."""
    match e:
        case Const(value):
            return value
        case Var():
            return complex(x)
        case Param(name):
            if params is None or name not in params:
                raise ExprEvalError(f"unbound parameter {name!r}")
            return complex(params[name])
        case Neg(arg):
            return -evaluate(arg, x, params)
        case Add(l, r):
            return evaluate(l, x, params) + evaluate(r, x, params)
        case Sub(l, r):
            return evaluate(l, x, params) - evaluate(r, x, params)
        case Mul(l, r):
            return evaluate(l, x, params) * evaluate(r, x, params)
        case Div(l, r):
            den = evaluate(r, x, params)
            if den == 0:
                raise ExprEvalError("division by zero")
            return evaluate(l, x, params) / den
        case Pow(base, exponent):
            b = evaluate(base, x, params)
            p = evaluate(exponent, x, params)
            try:
                return b ** p
            except ZeroDivisionError:
                raise ExprEvalError("zero raised to a negative power") from None
        case Func(name, arg):
            v = evaluate(arg, x, params)
            if name == "log" and v == 0:
                raise ExprEvalError("log of zero")
            return _CFUNCS[name](v)
    raise TypeError(f"not an expression node: {e!r}")


def contains_var(e: Expr) -> bool:
    match e:
        case Var():
            return True
        case Const(_) | Param(_):
            return False
        case Neg(arg) | Func(_, arg):
            return contains_var(arg)
        case Add(l, r) | Sub(l, r) | Mul(l, r) | Div(l, r):
            return contains_var(l) or contains_var(r)
        case Pow(b, p):
            return contains_var(b) or contains_var(p)
    raise TypeError(f"not an expression node: {e!r}")


def substitute_var(e: Expr, replacement: Expr) -> Expr:
    """Replace every occurrence of the free variable by ``replacement``."""
    match e:
        case Var():
            return replacement
        case Const(_) | Param(_):
            return e
        case Neg(arg):
            return Neg(substitute_var(arg, replacement))
        case Add(l, r):
            return Add(substitute_var(l, replacement), substitute_var(r, replacement))
        case Sub(l, r):
            return Sub(substitute_var(l, replacement), substitute_var(r, replacement))
        case Mul(l, r):
            return Mul(substitute_var(l, replacement), substitute_var(r, replacement))
        case Div(l, r):
            return Div(substitute_var(l, replacement), substitute_var(r, replacement))
        case Pow(b, p):
            return Pow(substitute_var(b, replacement), p)
        case Func(name, arg):
            return Func(name, substitute_var(arg, replacement))
    raise TypeError(f"not an expression node: {e!r}")


# ------------------------------------------------------------ differentiate

_ONE = Const(1 + 0j)
_TWO = Const(2 + 0j)


def differentiate(e: Expr) -> Expr:
    """Structural derivative d/dx.  No simplification is attempted."""
    match e:
        case Const(_) | Param(_):
            return Const(0j)
        case Var():
            return _ONE
        case Neg(arg):
            return Neg(differentiate(arg))
        case Add(l, r):
            return Add(differentiate(l), differentiate(r))
        case Sub(l, r):
            return Sub(differentiate(l), differentiate(r))
        case Mul(l, r):
            return Add(Mul(differentiate(l), r), Mul(l, differentiate(r)))
        case Div(l, r):
            num = Sub(Mul(differentiate(l), r), Mul(l, differentiate(r)))
            return Div(num, Pow(r, _TWO))
        case Pow(base, exponent):
            # exponent is x-free by construction: d u^c = c u^(c-1) u'
            return Mul(Mul(exponent, Pow(base, Sub(exponent, _ONE))), differentiate(base))
        case Func(name, arg):
            u = differentiate(arg)
            if name == "exp":
                return Mul(Func("exp", arg), u)
            if name == "sin":
                return Mul(Func("cos", arg), u)
            if name == "cos":
                return Neg(Mul(Func("sin", arg), u))
            if name == "sqrt":
                return Div(u, Mul(_TWO, Func("sqrt", arg)))
            if name == "log":
                return Div(u, arg)
    raise TypeError(f"not an expression node: {e!r}")


# ----------------------------------------------------------------- printing

# precedence levels used for parenthesisation
_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(e: Expr) -> int:
    match e:
        case Add(_, _) | Sub(_, _):
            return _PREC_ADD
        case Mul(_, _) | Div(_, _):
            return _PREC_MUL
        case Neg(_):
            return _PREC_NEG
        case Pow(_, _):
            return _PREC_POW
        case Const(v) if v.real < 0 or (v.real == 0 and v.imag < 0):
            return _PREC_NEG
        case Const(v) if v.real != 0 and v.imag != 0:
            return _PREC_ADD
        case _:
            return _PREC_ATOM


def _fmt_real(v: float) -> str:
    s = repr(v)
    return s


def _const_source(v: complex) -> str:
    if v.imag == 0:
        return _fmt_real(v.real)
    if v.real == 0:
        if v.imag == 1:
            return "i"
        return f"{_fmt_real(v.imag)}*i"
    return f"{_fmt_real(v.real)}+{_fmt_real(v.imag)}*i" if v.imag >= 0 else \
        f"{_fmt_real(v.real)}-{_fmt_real(-v.imag)}*i"


def _wrap(e: Expr, minimum: int) -> str:
    s = to_source(e)
    return f"({s})" if _prec(e) < minimum else s


def to_source(e: Expr) -> str:
    """Render back to grammar text.  parse(to_source(e)) evaluates identically
    to ``e``: operands are fully parenthesised where float arithmetic would
    otherwise be re-associated."""
    match e:
        case Const(value):
            return _const_source(value)
        case Var():
            return "x"
        case Param(name):
            return name
        case Neg(arg):
            return "-" + _wrap(arg, _PREC_NEG)
        case Add(l, r):
            return _wrap(l, _PREC_ADD) + "+" + _wrap(r, _PREC_ADD + 1)
        case Sub(l, r):
            return _wrap(l, _PREC_ADD) + "-" + _wrap(r, _PREC_ADD + 1)
        case Mul(l, r):
            return _wrap(l, _PREC_MUL) + "*" + _wrap(r, _PREC_MUL + 1)
        case Div(l, r):
            return _wrap(l, _PREC_MUL) + "/" + _wrap(r, _PREC_MUL + 1)
        case Pow(b, p):
            return _wrap(b, _PREC_ATOM) + "^" + _wrap(p, _PREC_NEG)
        case Func(name, arg):
            return f"{name}({to_source(arg)})"
    raise TypeError(f"not an expression node: {e!r}")


# ------------------------------------------------------------------ codegen


def to_python_source(e: Expr, params=None, var: str = "z") -> str:
    """Emit a Python expression over ``var`` with parameters folded in.

    The output uses only complex literals, arithmetic and cmath calls, so
    the same text compiles under both the interpreted and the jitted
    coefficient paths.
    """
    match e:
        case Const(value):
            return repr(complex(value))
        case Var():
            return var
        case Param(name):
            if params is None or name not in params:
                raise ExprEvalError(f"unbound parameter {name!r}")
            return repr(complex(params[name]))
        case Neg(arg):
            return f"(-{to_python_source(arg, params, var)})"
        case Add(l, r):
            return f"({to_python_source(l, params, var)}+{to_python_source(r, params, var)})"
        case Sub(l, r):
            return f"({to_python_source(l, params, var)}-{to_python_source(r, params, var)})"
        case Mul(l, r):
            return f"({to_python_source(l, params, var)}*{to_python_source(r, params, var)})"
        case Div(l, r):
            return f"({to_python_source(l, params, var)}/{to_python_source(r, params, var)})"
        case Pow(b, p):
            return f"({to_python_source(b, params, var)}**{to_python_source(p, params, var)})"
        case Func(name, arg):
            return f"cmath.{name}({to_python_source(arg, params, var)})"
    raise TypeError(f"not an expression node: {e!r}")
