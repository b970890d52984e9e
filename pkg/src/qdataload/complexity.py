"""Asymptotic complexity formulas: parsing, serialization and numeric evaluation.

Grammar::

    formula := ("O" | "Theta") "(" sum ")"
    sum     := prod {"+" prod}
    prod    := pow {("*" | juxtaposition) pow}
    pow     := atom ["^" number]
    atom    := number | "n" | "N" | "r" | "log" "(" sum ")" | "(" sum ")"

``log`` is always the binary logarithm and ``N`` is shorthand for ``2**n``.
Values are "order values": the implicit leading constant is 1 and the
asymptotic wrapper does not change the number.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Union

__all__ = [
    "BIG_O",
    "BIG_THETA",
    "Bindings",
    "ComplexityDomainError",
    "ComplexityExpr",
    "ComplexitySyntaxError",
    "Add",
    "Const",
    "Log",
    "Mul",
    "Pow",
    "UnboundVariableError",
    "UnknownIdentifierError",
    "Var",
    "evaluate_complexity",
    "free_variables",
    "parse_complexity",
    "serialize_complexity",
]

BIG_O = "O"
BIG_THETA = "Theta"
VARIABLES = ("n", "N", "r")


class ComplexitySyntaxError(ValueError):
    """Malformed formula. ``offset`` is a byte offset into the UTF-8 text."""

    def __init__(self, message: str, offset: int, expected: frozenset = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at byte offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class UnknownIdentifierError(ComplexitySyntaxError):
    pass


class UnboundVariableError(ValueError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"variable {name!r} is not bound")


class ComplexityDomainError(ArithmeticError):
    pass


# --- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    terms: tuple


@dataclass(frozen=True)
class Mul:
    factors: tuple


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: float


@dataclass(frozen=True)
class Log:
    arg: "Node"


Node = Union[Const, Var, Add, Mul, Pow, Log]


@dataclass(frozen=True)
class ComplexityExpr:
    wrapper: str
    body: Node

    def __str__(self) -> str:
        return serialize_complexity(self)


@dataclass(frozen=True)
class Bindings:
    """Variable values. ``N`` is never bound; it is derived as ``2**n``."""

    n: int
    r: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if self.r is not None and (
            isinstance(self.r, bool) or not isinstance(self.r, int) or self.r < 1
        ):
            raise ValueError(f"r must be a positive integer, got {self.r!r}")


# --- lexer -------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|\.\d+)
  | (?P<word>[A-Za-z_Θθ][A-Za-z_0-9]*)
  | (?P<op>[()+*^])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number" | "var" | "log" | "wrapper" | one of "()+*^" | "end"
    text: str
    offset: int  # byte offset


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    byte_pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ComplexitySyntaxError(f"unexpected character {text[pos]!r}", byte_pos)
        chunk = m.group(0)
        if m.lastgroup == "number":
            tokens.append(_Token("number", chunk, byte_pos))
        elif m.lastgroup == "op":
            tokens.append(_Token(chunk, chunk, byte_pos))
        elif m.lastgroup == "word":
            tokens.extend(_split_word(chunk, byte_pos))
        pos = m.end()
        byte_pos += len(chunk.encode("utf-8"))
    tokens.append(_Token("end", "", byte_pos))
    return tokens


def _split_word(word: str, offset: int) -> list[_Token]:
    # Juxtaposed single-letter variables ("nr") arrive as one word.
    if word in ("O", "Theta", "Θ", "θ"):
        return [_Token("wrapper", BIG_THETA if word != "O" else BIG_O, offset)]
    out = []
    i = 0
    while i < len(word):
        if word.startswith("log", i):
            out.append(_Token("log", "log", offset + i))
            i += 3
        elif word[i] in VARIABLES:
            out.append(_Token("var", word[i], offset + i))
            i += 1
        else:
            raise UnknownIdentifierError(
                f"unknown identifier {word!r}", offset, frozenset({"n", "N", "r", "log"})
            )
    return out


# --- parser ------------------------------------------------------------------

_ATOM_START = frozenset({"number", "var", "log", "("})


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def expect(self, kind: str) -> _Token:
        tok = self.tok
        if tok.kind != kind:
            self.fail({kind})
        self.i += 1
        return tok

    def fail(self, expected):
        tok = self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ComplexitySyntaxError(f"unexpected {found}", tok.offset, frozenset(expected))

    def formula(self) -> ComplexityExpr:
        wrapper = self.expect("wrapper").text
        self.expect("(")
        body = self.sum()
        self.expect(")")
        if self.tok.kind != "end":
            self.fail({"end of input"})
        return ComplexityExpr(wrapper, body)

    def sum(self) -> Node:
        terms = [self.prod()]
        while self.tok.kind == "+":
            self.i += 1
            terms.append(self.prod())
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def prod(self) -> Node:
        factors = [self.pow()]
        while True:
            if self.tok.kind == "*":
                self.i += 1
                factors.append(self.pow())
            elif self.tok.kind in _ATOM_START:
                factors.append(self.pow())
            else:
                break
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def pow(self) -> Node:
        base = self.atom()
        if self.tok.kind == "^":
            self.i += 1
            return Pow(base, float(self.expect("number").text))
        return base

    def atom(self) -> Node:
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            return Const(float(tok.text))
        if tok.kind == "var":
            self.i += 1
            return Var(tok.text)
        if tok.kind == "log":
            self.i += 1
            self.expect("(")
            arg = self.sum()
            self.expect(")")
            return Log(arg)
        if tok.kind == "(":
            self.i += 1
            inner = self.sum()
            self.expect(")")
            return inner
        self.fail(_ATOM_START)


def parse_complexity(text: str) -> ComplexityExpr:
    """Parse ``text`` such as ``"O(n r^2 log(r))"`` into a :class:`ComplexityExpr`."""
    return _Parser(text).formula()


# --- serialization -----------------------------------------------------------


def _fmt_number(x: float) -> str:
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _ser(node: Node) -> str:
    if isinstance(node, Const):
        return _fmt_number(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Log):
        return f"log({_ser(node.arg)})"
    if isinstance(node, Add):
        return " + ".join(
            f"({_ser(t)})" if isinstance(t, Add) else _ser(t) for t in node.terms
        )
    if isinstance(node, Mul):
        return "*".join(
            f"({_ser(f)})" if isinstance(f, (Add, Mul)) else _ser(f) for f in node.factors
        )
    if isinstance(node, Pow):
        base = _ser(node.base)
        if isinstance(node.base, (Add, Mul, Pow)):
            base = f"({base})"
        return f"{base}^{_fmt_number(node.exponent)}"
    raise TypeError(f"not a complexity node: {node!r}")


def serialize_complexity(expr: ComplexityExpr) -> str:
    return f"{expr.wrapper}({_ser(expr.body)})"


# --- analysis / evaluation ---------------------------------------------------


def _vars(node: Node, acc: set):
    if isinstance(node, Var):
        acc.add(node.name)
    elif isinstance(node, (Add, Mul)):
        for child in node.terms if isinstance(node, Add) else node.factors:
            _vars(child, acc)
    elif isinstance(node, Pow):
        _vars(node.base, acc)
    elif isinstance(node, Log):
        _vars(node.arg, acc)


def free_variables(expr: ComplexityExpr) -> frozenset:
    """Variables that must be bound to evaluate ``expr``.

    ``N`` is reported as ``n`` because it is derived from the qubit count.
    """
    acc: set = set()
    _vars(expr.body, acc)
    if "N" in acc:
        acc.discard("N")
        acc.add("n")
    return frozenset(acc)


def _eval(node: Node, b: Bindings) -> float:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        if node.name == "r":
            if b.r is None:
                raise UnboundVariableError("r")
            return float(b.r)
        if node.name == "N":
            return 2.0 ** b.n
        return float(b.n)
    if isinstance(node, Add):
        return math.fsum(_eval(t, b) for t in node.terms)
    if isinstance(node, Mul):
        out = 1.0
        for f in node.factors:
            out *= _eval(f, b)
        return out
    if isinstance(node, Pow):
        return _eval(node.base, b) ** node.exponent
    if isinstance(node, Log):
        arg = _eval(node.arg, b)
        if not arg > 0:
            raise ComplexityDomainError(f"log of non-positive value {arg!r}")
        return math.log2(arg)
    raise TypeError(f"not a complexity node: {node!r}")


def evaluate_complexity(expr: ComplexityExpr, b: Bindings) -> float:
    """Order value of ``expr`` under ``b`` (leading constant 1, log base 2)."""
    value = _eval(expr.body, b)
    if not math.isfinite(value):
        raise ComplexityDomainError(f"{serialize_complexity(expr)} is not finite at {b}")
    return value
