"""Plain-text expressions in ``t`` and ``r``, parsed to an immutable AST.

Grammar (loosest to tightest)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right-associative
    atom   := NUMBER | 'pi' | VAR | FUNC '(' expr ')' | '(' expr ')'

``-x^2`` therefore means ``-(x^2)`` and ``2^3^2`` means ``2^(3^2)``.
Error offsets are 0-based byte offsets into the UTF-8 source.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from . import jet
from .errors import DomainError, ExprSyntaxError, UnknownIdentifier
from .jet import Jet2

DEFAULT_VARIABLES = ("t", "r")
ANGULAR_VARIABLES = ("t", "r", "theta", "phi")
CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Num:
    value: float
    integral: bool = False
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Const:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: Expr
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Expr
    right: Expr
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: Expr
    pos: int = field(default=0, compare=False)


Expr = Num | Var | Const | Neg | BinOp | Call

ZERO = Num(0.0, True)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

_ATOM_START = frozenset({"number", "identifier", "'('", "'-'"})


@dataclass
class _Token:
    kind: str  # number | ident | op | eof
    text: str
    pos: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    i = 0
    while i < len(source):
        m = _TOKEN_RE.match(source, i)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[i]!r}", _byte_offset(source, i),
                                  _ATOM_START, source)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), _byte_offset(source, i)))
        i = m.end()
    tokens.append(_Token("eof", "", _byte_offset(source, len(source))))
    return tokens


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


class _Parser:
    def __init__(self, source: str, variables: tuple[str, ...]):
        self.source = source
        self.variables = variables
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def _fail(self, expected) -> None:
        tok = self.tok
        what = "end of input" if tok.kind == "eof" else f"token {tok.text!r}"
        raise ExprSyntaxError(f"unexpected {what}", tok.pos, frozenset(expected), self.source)

    def _is_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "eof":
            self._fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"})
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self._is_op("+", "-"):
            tok = self.tok
            self.i += 1
            node = BinOp(tok.text, node, self.term(), tok.pos)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self._is_op("*", "/"):
            tok = self.tok
            self.i += 1
            node = BinOp(tok.text, node, self.unary(), tok.pos)
        return node

    def unary(self) -> Expr:
        if self._is_op("-"):
            tok = self.tok
            self.i += 1
            return Neg(self.unary(), tok.pos)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self._is_op("^"):
            tok = self.tok
            self.i += 1
            return BinOp("^", base, self.unary(), tok.pos)
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            value = float(tok.text)
            if not math.isfinite(value):
                raise ExprSyntaxError("numeric literal out of range", tok.pos, source=self.source)
            integral = re.fullmatch(r"\d+", tok.text) is not None
            return Num(value, integral, tok.pos)
        if tok.kind == "ident":
            self.i += 1
            name = tok.text
            if name in jet.FUNCTIONS:
                if not self._is_op("("):
                    self._fail({"'('"})
                self.i += 1
                arg = self.expr()
                if not self._is_op(")"):
                    self._fail({"')'"} | {"'+'", "'-'", "'*'", "'/'", "'^'"})
                self.i += 1
                return Call(name, arg, tok.pos)
            if name in CONSTANTS:
                return Const(name, tok.pos)
            if name in self.variables:
                return Var(name, tok.pos)
            raise UnknownIdentifier(name, tok.pos, self.source)
        if self._is_op("("):
            self.i += 1
            node = self.expr()
            if not self._is_op(")"):
                self._fail({"')'", "'+'", "'-'", "'*'", "'/'", "'^'"})
            self.i += 1
            return node
        self._fail(_ATOM_START)


def parse(source: str, variables: tuple[str, ...] = DEFAULT_VARIABLES) -> Expr:
    """Parse ``source`` into an :data:`Expr`.

    Raises :class:`ExprSyntaxError` (with byte offset and expected-token set)
    or :class:`UnknownIdentifier`.
    """
    if not isinstance(source, str):
        raise TypeError(f"expression source must be str, not {type(source).__name__}")
    return _Parser(source, variables).parse()


def serialize(e: Expr) -> str:
    """Render ``e`` as fully parenthesised text that re-parses to an equal tree."""
    if isinstance(e, Num):
        return str(int(e.value)) if e.integral else repr(e.value)
    if isinstance(e, (Var, Const)):
        return e.name
    if isinstance(e, Neg):
        return f"(-{serialize(e.operand)})"
    if isinstance(e, BinOp):
        return f"({serialize(e.left)} {e.op} {serialize(e.right)})"
    if isinstance(e, Call):
        return f"{e.func}({serialize(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def free_variables(e: Expr) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset({e.name})
    if isinstance(e, (Num, Const)):
        return frozenset()
    if isinstance(e, Neg):
        return free_variables(e.operand)
    if isinstance(e, BinOp):
        return free_variables(e.left) | free_variables(e.right)
    return free_variables(e.arg)


def _integer_exponent(e: Expr) -> int | None:
    if isinstance(e, Num) and e.integral:
        return int(e.value)
    if isinstance(e, Neg) and isinstance(e.operand, Num) and e.operand.integral:
        return -int(e.operand.value)
    return None


def evaluate(e: Expr, env: dict[str, Jet2]) -> Jet2:
    """Evaluate ``e`` with variables bound to jets in ``env``."""
    if isinstance(e, Num):
        return Jet2(e.value)
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Const):
        return Jet2(CONSTANTS[e.name])
    if isinstance(e, Neg):
        return -evaluate(e.operand, env)
    try:
        if isinstance(e, Call):
            return jet.FUNCTIONS[e.func](evaluate(e.arg, env))
        left = evaluate(e.left, env)
        if e.op == "^":
            n = _integer_exponent(e.right)
            if n is not None:
                return jet.int_power(left, n)
            if left.v <= 0.0:
                raise DomainError("non-integer power of a non-positive base")
            return jet.exp(jet.log(left) * evaluate(e.right, env))
        right = evaluate(e.right, env)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        return left / right
    except DomainError as exc:
        if exc.offset is None:
            raise DomainError(str(exc), e.pos) from None
        raise


def eval_jet(e: Expr, t: float, r: float) -> Jet2:
    """Exact second-order jet of ``e`` at ``(t, r)``."""
    return evaluate(e, {"t": Jet2.var_t(t), "r": Jet2.var_r(r)})


def eval_value(e: Expr, **coords: float) -> float:
    """Plain value of ``e``; coordinates are passed by name (t, r, theta, phi)."""
    return evaluate(e, {k: Jet2(v) for k, v in coords.items()}).v


def as_expr(x, variables: tuple[str, ...] = DEFAULT_VARIABLES) -> Expr:
    """Accept an Expr, a source string or a number."""
    if isinstance(x, (Num, Var, Const, Neg, BinOp, Call)):
        return x
    if isinstance(x, str):
        return parse(x, variables)
    if isinstance(x, (int, float)):
        return parse(repr(float(x)), variables) if x >= 0 else Neg(parse(repr(-float(x)), variables))
    raise TypeError(f"cannot interpret {x!r} as an expression")
