"""Tokenizer and recursive-descent parser for the polynomial text grammar.

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' nonneg-integer)?
    atom   := identifier | rational | '(' expr ')'

Juxtaposition is not multiplication.  A leading sign is accepted as a
convenience.  ``extra_atoms`` lets the geometry DSL plug function-call
atoms such as ``lensq(P,Q)`` into the same grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from gmpy2 import mpq

from ..poly import RESERVED_PREFIX, ParametricRing, Polynomial


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class UndeclaredSymbolError(ParseError):
    pass


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_@][A-Za-z0-9_@']*(?:\[\d+\])*)
  | (?P<op>==|[-+*/^(),;=\[\]{}])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int
    line: int
    col: int


def tokenize(text: str, base_line: int = 1, base_col: int = 1) -> list[Token]:
    out = []
    pos = 0
    line, line_start = base_line, 0
    first_line_offset = base_col - 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1 + (first_line_offset if line == base_line else 0)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            out.append(Token(kind, tok, pos, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = pos + tok.rfind("\n") + 1
        pos = m.end()
    end_col = pos - line_start + 1 + (first_line_offset if line == base_line else 0)
    out.append(Token("eof", "", pos, line, end_col))
    return out


class ExprParser:
    """Parses expressions from a token stream into polynomials of ``ring``."""

    def __init__(
        self,
        tokens: list[Token],
        ring: ParametricRing,
        extra_atoms: dict[str, Callable[["ExprParser"], Polynomial]] | None = None,
        allow_reserved: bool = False,
    ):
        self.toks = tokens
        self.i = 0
        self.ring = ring
        self.extra_atoms = extra_atoms or {}
        self.allow_reserved = allow_reserved

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None, cls=ParseError):
        t = tok or self.tok
        raise cls(msg, t.line, t.col)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("op",):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            self.error(f"expected identifier, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    def expr(self) -> Polynomial:
        sign = 1
        if self.tok.text in ("+", "-"):
            sign = -1 if self.tok.text == "-" else 1
            self.i += 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.tok.text in ("+", "-"):
            op = self.tok.text
            self.i += 1
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.accept("*"):
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.accept("^"):
            t = self.tok
            if t.kind != "num":
                self.error("exponent must be a non-negative integer")
            self.i += 1
            base = base ** int(t.text)
        return base

    def atom(self) -> Polynomial:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            value = mpq(int(t.text))
            if self.tok.text == "/":
                self.i += 1
                d = self.tok
                if d.kind != "num" or int(d.text) == 0:
                    self.error("denominator must be a positive integer", d)
                self.i += 1
                value = mpq(int(t.text), int(d.text))
            return self.ring.const(value)
        if t.kind == "ident":
            if t.text in self.extra_atoms and self.toks[self.i + 1].text == "(":
                self.i += 1
                return self.extra_atoms[t.text](self)
            self.i += 1
            if t.text.startswith(RESERVED_PREFIX) and not self.allow_reserved:
                self.error(f"symbol {t.text!r} uses the reserved prefix {RESERVED_PREFIX!r}", t)
            if t.text not in self.ring.index:
                self.error(f"undeclared symbol {t.text!r}", t, UndeclaredSymbolError)
            return self.ring.var(t.text)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        self.error(f"unexpected {t.text or 'end of input'!r} in expression")


def parse_polynomial(text: str, ring: ParametricRing, *, allow_reserved: bool = True) -> Polynomial:
    toks = tokenize(text)
    p = ExprParser(toks, ring, allow_reserved=allow_reserved)
    out = p.expr()
    if p.tok.kind != "eof":
        p.error(f"trailing input {p.tok.text!r}")
    return out
