"""Tiny recursive-descent parser for polynomial / rational expressions.

Grammar (EBNF):

    expr    := term { ("+" | "-") term }
    term    := factor { ("*" | "/") factor }
    factor  := "-" factor | power
    power   := atom [ "^" integer ]
    atom    := integer | symbol | "(" expr ")"
    symbol  := letter { letter | digit | "_" }

Only integer literals; no implicit multiplication (write 2*z, not 2z).
Parsing builds an AST; evaluation plugs in any value algebra supporting
+, -, *, /, ** and a symbol resolver, so the same grammar serves the CLI's
rational functions in z and the jet-coordinate expressions of scenarios.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union


class ExpressionError(ValueError):
    """Malformed expression text."""


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "-", "*", "/"
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Num, Sym, Neg, BinOp, Pow]

_SYMBOL_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
_SYMBOL_BODY = _SYMBOL_START | set("0123456789_")


def _tokenize(text: str) -> list[str]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append(ch)
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
            continue
        if ch in _SYMBOL_START:
            j = i
            while j < len(text) and text[j] in _SYMBOL_BODY:
                j += 1
            tokens.append(text[i:j])
            i = j
            continue
        raise ExpressionError(f"unexpected character {ch!r} at position {i}")
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ExpressionError("unexpected end of expression")
        self.pos += 1
        return tok

    def expect(self, token: str) -> None:
        tok = self.take()
        if tok != token:
            raise ExpressionError(f"expected {token!r}, got {tok!r}")

    def parse_expr(self) -> Node:
        node = self.parse_term()
        while self.peek() in ("+", "-"):
            op = self.take()
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> Node:
        node = self.parse_factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            node = BinOp(op, node, self.parse_factor())
        return node

    def parse_factor(self) -> Node:
        if self.peek() == "-":
            self.take()
            return Neg(self.parse_factor())
        if self.peek() == "+":
            self.take()
            return self.parse_factor()
        return self.parse_power()

    def parse_power(self) -> Node:
        base = self.parse_atom()
        if self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            tok = self.take()
            if not tok.isdigit():
                raise ExpressionError(f"exponent must be an integer, got {tok!r}")
            exp = -int(tok) if neg else int(tok)
            return Pow(base, exp)
        return base

    def parse_atom(self) -> Node:
        tok = self.take()
        if tok == "(":
            node = self.parse_expr()
            self.expect(")")
            return node
        if tok.isdigit():
            return Num(int(tok))
        if tok[0] in _SYMBOL_START:
            return Sym(tok)
        raise ExpressionError(f"unexpected token {tok!r}")


def parse_expression(text: str) -> Node:
    tokens = _tokenize(text)
    if not tokens:
        raise ExpressionError("empty expression")
    parser = _Parser(tokens)
    node = parser.parse_expr()
    if parser.peek() is not None:
        raise ExpressionError(f"trailing input from token {parser.peek()!r}")
    return node


def evaluate_node(node: Node, const: Callable, symbol: Callable):
    """Evaluate an AST over any algebra with +, -, *, /, **.

    `const(int)` embeds integer literals, `symbol(name)` resolves names.
    """
    if isinstance(node, Num):
        return const(node.value)
    if isinstance(node, Sym):
        return symbol(node.name)
    if isinstance(node, Neg):
        return -evaluate_node(node.operand, const, symbol)
    if isinstance(node, Pow):
        return evaluate_node(node.base, const, symbol) ** node.exponent
    if isinstance(node, BinOp):
        left = evaluate_node(node.left, const, symbol)
        right = evaluate_node(node.right, const, symbol)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            return left / right
    raise ExpressionError(f"bad AST node {node!r}")  # pragma: no cover


def parse_rational_function(text: str):
    """Parse a closed-form expression in the single symbol z."""
    from .algebra import RationalFunction

    node = parse_expression(text)

    def symbol(name: str):
        if name == "z":
            return RationalFunction.z()
        raise ExpressionError(f"unknown symbol {name!r}; only z is allowed")

    return evaluate_node(node, RationalFunction.from_scalar, symbol)
