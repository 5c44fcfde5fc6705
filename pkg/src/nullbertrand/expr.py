"""Tokenizer, recursive-descent parser and evaluator for curve expressions.

Grammar (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = primary [ "^" unary ] ;
    primary = number | identifier | func "(" expr ")" | "(" expr ")" ;
    func    = "sin" | "cos" | "sinh" | "cosh" | "exp" | "sqrt" | "ln" ;
    number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
            | "." digits [ exponent ] ;

So ``^`` binds tighter than unary minus (``-s^2`` is ``-(s^2)``) and is
right-associative; ``*``/``/`` and ``+``/``-`` associate to the left.
Error positions are 0-based character offsets into the source.
"""

import math
import re
from dataclasses import dataclass
from typing import Union

from . import jets
from .errors import LexError, ParseError, SpecError

FUNCTIONS = ("sin", "cos", "sinh", "cosh", "exp", "sqrt", "ln")
PARAMETER = "s"


@dataclass(frozen=True)
class Token:
    kind: str  # number | identifier | operator | paren | comma
    lexeme: str
    position: int


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    child: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"


Expr = Union[Const, Var, Neg, BinOp, Call]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<identifier>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<operator>[-+*/^])
  | (?P<paren>[()])
  | (?P<comma>,)
    """,
    re.VERBOSE,
)


def tokenize(source):
    if not source or not source.strip():
        raise LexError("empty expression", 0)
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise LexError(f"unexpected character {source[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = list(tokens)
        self.i = 0
        last = self.tokens[-1] if self.tokens else None
        self.end = last.position + len(last.lexeme) if last else 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def position(self):
        tok = self.peek()
        return tok.position if tok else self.end

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at(self, lexeme):
        tok = self.peek()
        return tok is not None and tok.lexeme == lexeme and tok.kind in ("operator", "paren", "comma")

    def expect(self, lexeme):
        if not self.at(lexeme):
            tok = self.peek()
            found = repr(tok.lexeme) if tok else "end of input"
            raise ParseError(f"found {found}", self.position(), expected=lexeme)
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek().lexeme!r}", self.position(),
                             expected="end of input")
        return node

    def expr(self):
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().lexeme
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.at("*") or self.at("/"):
            op = self.advance().lexeme
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.at("-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.primary()
        if self.at("^"):
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def primary(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.end, expected="operand")
        if tok.kind == "number":
            self.advance()
            return Const(float(tok.lexeme))
        if tok.kind == "identifier":
            self.advance()
            if tok.lexeme in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(tok.lexeme, arg)
            if self.at("("):
                raise ParseError(f"unknown function {tok.lexeme!r}", tok.position)
            return Var(tok.lexeme)
        if self.at("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {tok.lexeme!r}", tok.position, expected="operand")


def parse(tokens):
    if not tokens:
        raise ParseError("empty token sequence", 0, expected="operand")
    return _Parser(tokens).parse()


def parse_expression(source):
    return parse(tokenize(source))


# binding strength used by the printer: + - < * / < neg < ^ < atoms
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_NEG, _ATOM = 3, 5


def _prec(node):
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _NEG
    return _ATOM


def to_source(node):
    """Render an AST with the minimum parentheses needed to parse back to it."""

    def wrap(child, minimum):
        text = to_source(child)
        return f"({text})" if _prec(child) < minimum else text

    if isinstance(node, Const):
        if node.value < 0 or not math.isfinite(node.value):
            raise ValueError(f"constant {node.value!r} has no source form")
        return repr(float(node.value))
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return "-" + wrap(node.child, _NEG)
    if isinstance(node, Call):
        return f"{node.fn}({to_source(node.arg)})"
    if node.op == "^":
        return f"{wrap(node.left, _ATOM)}^{wrap(node.right, _NEG)}"
    p = _PREC[node.op]
    return f"{wrap(node.left, p)} {node.op} {wrap(node.right, p + 1)}"


def free_variables(node):
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Const):
        return set()
    if isinstance(node, (Neg, Call)):
        return free_variables(node.child if isinstance(node, Neg) else node.arg)
    return free_variables(node.left) | free_variables(node.right)


def check_bound(node, constants):
    unbound = free_variables(node) - {PARAMETER} - set(constants)
    if unbound:
        raise SpecError(f"unbound names: {', '.join(sorted(unbound))}")
    clash = set(constants) & (set(FUNCTIONS) | {PARAMETER})
    if clash:
        raise SpecError(f"constant names shadow reserved names: {', '.join(sorted(clash))}")


def evaluate(node, s, constants):
    """Evaluate ``node`` at parameter value ``s`` (float, mpmath number or Jet)."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        if node.name == PARAMETER:
            return s
        try:
            return float(constants[node.name])
        except KeyError:
            raise SpecError(f"unbound name {node.name!r}") from None
    if isinstance(node, Neg):
        return -evaluate(node.child, s, constants)
    if isinstance(node, Call):
        return jets.ELEMENTARY[node.fn](evaluate(node.arg, s, constants))
    left = evaluate(node.left, s, constants)
    right = evaluate(node.right, s, constants)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        return jets.divide(left, right)
    return jets.power(left, right)
