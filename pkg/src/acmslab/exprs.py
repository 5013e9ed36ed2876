"""Arithmetic expression trees with exact partial derivatives.

A deliberately small language carries chart tensor components: numeric
literals, coordinates x1..xk, the four arithmetic operators, integer powers,
unary minus and the functions sin, cos, sqrt, exp. Derivatives are produced
symbolically so Christoffel data can be evaluated without finite-difference
noise; simplification is limited to constant folding and the 0/1 identities,
which keeps printed output predictable.

``parse(to_text(e)) == e`` holds for every tree built by ``parse`` or
``differentiate`` (the canonical forms): the parser folds a unary minus on a
bare literal into the literal, and the printer parenthesizes negative
literals appearing as operands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

Expr = Union["Num", "Var", "Bin", "Pow", "Neg", "Call"]


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    index: int  # 1-based, prints as x<index>


@dataclass(frozen=True)
class Bin:
    op: str  # one of + - * /
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow:
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Neg:
    arg: Expr


@dataclass(frozen=True)
class Call:
    func: str
    arg: Expr


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class EvalError(ValueError):
    def __init__(self, message: str, where: str):
        super().__init__(f"{message} in {where!r}")
        self.message = message
        self.where = where


# ---------------------------------------------------------------------------
# smart constructors: constant folding plus 0/1 identities, nothing more

def num(value: float) -> Num:
    return Num(float(value))


def var(index: int) -> Var:
    if index < 1:
        raise ValueError(f"variable index must be >= 1, got {index}")
    return Var(index)


def _is_const(e: Expr, value: float | None = None) -> bool:
    return isinstance(e, Num) and (value is None or e.value == value)


def add(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return num(a.value + b.value)
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Bin("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return num(a.value - b.value)
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return neg(b)
    return Bin("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return num(a.value * b.value)
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return num(0.0)
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    return Bin("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b) and b.value != 0.0:
        return num(a.value / b.value)
    if _is_const(a, 0.0) and not _is_const(b, 0.0):
        return num(0.0)
    if _is_const(b, 1.0):
        return a
    return Bin("/", a, b)


def neg(a: Expr) -> Expr:
    if _is_const(a):
        return num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def pow_(base: Expr, exponent: int) -> Expr:
    exponent = int(exponent)
    if exponent == 0:
        return num(1.0)
    if exponent == 1:
        return base
    if _is_const(base):
        return num(base.value ** exponent)
    return Pow(base, exponent)


def call(func: str, arg: Expr) -> Expr:
    if func not in FUNCTIONS:
        raise ValueError(f"unknown function {func!r}")
    return Call(func, arg)


def _d_sqrt(a: Expr, da: Expr) -> Expr:
    return div(da, mul(num(2.0), Call("sqrt", a)))


FUNCTIONS: dict[str, tuple[Callable[[float], float], Callable[[Expr, Expr], Expr]]] = {
    "sin": (math.sin, lambda a, da: mul(Call("cos", a), da)),
    "cos": (math.cos, lambda a, da: neg(mul(Call("sin", a), da))),
    "sqrt": (math.sqrt, _d_sqrt),
    "exp": (math.exp, lambda a, da: mul(Call("exp", a), da)),
}


# ---------------------------------------------------------------------------
# tokenizer / parser

_OPERATORS = set("+-*/^()")


@dataclass(frozen=True)
class _Token:
    kind: str  # num | name | op | end
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_col = col
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            lexeme = text[i:j]
            try:
                float(lexeme)
            except ValueError:
                raise ParseError(f"malformed number {lexeme!r}", line, start_col)
            tokens.append(_Token("num", lexeme, line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in _OPERATORS:
            tokens.append(_Token("op", ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(_Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, text: str, *, context: _Token | None = None):
        tok = self.peek()
        if tok.kind == "op" and tok.text == text:
            return self.next()
        if context is not None and tok.kind == "end":
            raise ParseError("unclosed parenthesis", context.line, context.column)
        raise ParseError(f"expected {text!r}", tok.line, tok.column)

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next().text
            right = self.parse_term()
            node = Bin(op, node, right)
        return node

    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.next().text
            right = self.parse_unary()
            node = Bin(op, node, right)
        return node

    def parse_unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.next()
            inner = self.parse_unary()
            # fold a minus on a bare literal into the literal (canonical form)
            if isinstance(inner, Num):
                return Num(-inner.value)
            return Neg(inner)
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.next()
            sign = 1
            if self.peek().kind == "op" and self.peek().text == "-":
                self.next()
                sign = -1
            exp_tok = self.peek()
            if exp_tok.kind != "num" or not exp_tok.text.isdigit():
                raise ParseError("exponent must be an integer literal",
                                 exp_tok.line, exp_tok.column)
            self.next()
            return Pow(base, sign * int(exp_tok.text))
        return base

    def parse_atom(self) -> Expr:
        tok = self.next()
        if tok.kind == "num":
            return Num(float(tok.text))
        if tok.kind == "name":
            if tok.text in FUNCTIONS:
                open_tok = self.expect_op("(")
                arg = self.parse_expr()
                self.expect_op(")", context=open_tok)
                return Call(tok.text, arg)
            if tok.text[0] == "x" and tok.text[1:].isdigit():
                index = int(tok.text[1:])
                if index < 1:
                    raise ParseError("variable indices start at x1", tok.line, tok.column)
                return Var(index)
            raise ParseError(f"unknown variable name {tok.text!r}", tok.line, tok.column)
        if tok.kind == "op" and tok.text == "(":
            if self.peek().kind == "end":
                raise ParseError("unclosed parenthesis", tok.line, tok.column)
            inner = self.parse_expr()
            self.expect_op(")", context=tok)
            return inner
        if tok.kind == "end":
            raise ParseError("unexpected end of input", tok.line, tok.column)
        raise ParseError(f"unexpected token {tok.text!r}", tok.line, tok.column)


def parse(text: str) -> Expr:
    parser = _Parser(_tokenize(text))
    node = parser.parse_expr()
    trailing = parser.peek()
    if trailing.kind != "end":
        raise ParseError(f"unexpected trailing input {trailing.text!r}",
                         trailing.line, trailing.column)
    return node


# ---------------------------------------------------------------------------
# printing

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 10, 20, 25, 30, 100


def _precedence(e: Expr) -> int:
    if isinstance(e, Bin):
        return _PREC_ADD if e.op in "+-" else _PREC_MUL
    if isinstance(e, Neg):
        return _PREC_NEG
    if isinstance(e, Pow):
        return _PREC_POW
    if isinstance(e, Num) and (e.value < 0 or math.copysign(1.0, e.value) < 0):
        return _PREC_NEG  # negative literals read like a unary minus
    return _PREC_ATOM


def _format_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _wrap(e: Expr, parent_prec: int) -> str:
    text = to_text(e)
    if _precedence(e) < parent_prec:
        return f"({text})"
    return text


def to_text(e: Expr) -> str:
    """Canonical textual form; reparsing it reproduces the tree."""
    if isinstance(e, Num):
        return _format_number(e.value)
    if isinstance(e, Var):
        return f"x{e.index}"
    if isinstance(e, Bin):
        left = _wrap(e.left, _precedence(e))
        right = _wrap(e.right, _precedence(e) + 1)
        return f"{left} {e.op} {right}"
    if isinstance(e, Neg):
        return f"-{_wrap(e.arg, _PREC_NEG)}"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _PREC_POW + 1)}^{e.exponent}"
    if isinstance(e, Call):
        return f"{e.func}({to_text(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# evaluation

def evaluate(e: Expr, values) -> float:
    """Evaluate with values[i-1] bound to xi. Domain problems raise EvalError
    naming the offending subexpression."""
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        if e.index > len(values):
            raise EvalError(f"unbound variable x{e.index}", to_text(e))
        return float(values[e.index - 1])
    if isinstance(e, Bin):
        a = evaluate(e.left, values)
        b = evaluate(e.right, values)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if b == 0.0:
            raise EvalError("division by zero", to_text(e))
        return a / b
    if isinstance(e, Neg):
        return -evaluate(e.arg, values)
    if isinstance(e, Pow):
        base = evaluate(e.base, values)
        if base == 0.0 and e.exponent < 0:
            raise EvalError("zero raised to a negative power", to_text(e))
        try:
            return float(base ** e.exponent)
        except OverflowError as exc:
            raise EvalError(f"math error: {exc}", to_text(e)) from exc
    if isinstance(e, Call):
        arg = evaluate(e.arg, values)
        if e.func == "sqrt" and arg < 0.0:
            raise EvalError(f"square root of negative value {arg:.6g}", to_text(e))
        fn = FUNCTIONS[e.func][0]
        try:
            return fn(arg)
        except (ValueError, OverflowError) as exc:
            raise EvalError(f"math error: {exc}", to_text(e)) from exc
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# differentiation

def differentiate(e: Expr, index: int) -> Expr:
    """Exact partial derivative with respect to x<index>."""
    if isinstance(e, Num):
        return num(0.0)
    if isinstance(e, Var):
        return num(1.0 if e.index == index else 0.0)
    if isinstance(e, Bin):
        da = differentiate(e.left, index)
        db = differentiate(e.right, index)
        if e.op == "+":
            return add(da, db)
        if e.op == "-":
            return sub(da, db)
        if e.op == "*":
            return add(mul(da, e.right), mul(e.left, db))
        return div(sub(mul(da, e.right), mul(e.left, db)), pow_(e.right, 2))
    if isinstance(e, Neg):
        return neg(differentiate(e.arg, index))
    if isinstance(e, Pow):
        da = differentiate(e.base, index)
        return mul(mul(num(float(e.exponent)), pow_(e.base, e.exponent - 1)), da)
    if isinstance(e, Call):
        da = differentiate(e.arg, index)
        if _is_const(da, 0.0):
            return num(0.0)
        return FUNCTIONS[e.func][1](e.arg, da)
    raise TypeError(f"not an expression node: {e!r}")


def free_variables(e: Expr) -> set[int]:
    if isinstance(e, Num):
        return set()
    if isinstance(e, Var):
        return {e.index}
    if isinstance(e, Bin):
        return free_variables(e.left) | free_variables(e.right)
    if isinstance(e, (Neg,)):
        return free_variables(e.arg)
    if isinstance(e, Pow):
        return free_variables(e.base)
    if isinstance(e, Call):
        return free_variables(e.arg)
    raise TypeError(f"not an expression node: {e!r}")
