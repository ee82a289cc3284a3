"""Reader for problem files holding raw polynomial ideals.

    ring vars = [x, y] params = [a, b];
    order vars = lex; order params = lex;
    H = [x^2 + y^2 - 1, a*x - y];
    T = [x - y];
    null = [...]; notnull = [...]; U = [a, b]; Uprime = [a];

Statements end with ``;``.  Only ``ring`` and ``H`` are required; the
ring statement must come first so polynomials can be resolved.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..gb import Ideal
from ..poly import RESERVED_PREFIX, ParametricRing, Polynomial
from .parser import ExprParser, ParseError, Token, UndeclaredSymbolError, tokenize


class DuplicateDeclarationError(ParseError):
    pass


@dataclass
class Problem:
    """A fully resolved discovery problem."""

    ring: ParametricRing
    H: Ideal
    T: Ideal
    null: tuple[Polynomial, ...] = ()
    nonnull: tuple[Polynomial, ...] = ()
    U: tuple[str, ...] = ()
    Uprime: tuple[str, ...] | None = None
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.ring, self.H, self.T, self.null, self.nonnull, self.U, self.Uprime))


class _Reader:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None, cls=ParseError):
        t = tok or self.tok
        raise cls(msg, t.line, t.col)

    def take(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.take()

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            self.error(f"expected identifier, found {self.tok.text or 'end of input'!r}")
        return self.take()

    def symbol_list(self) -> list[Token]:
        self.expect("[")
        out = []
        if self.tok.text != "]":
            out.append(self.ident())
            while self.tok.text == ",":
                self.take()
                out.append(self.ident())
        self.expect("]")
        return out

    def poly_list(self, ring: ParametricRing) -> list[Polynomial]:
        self.expect("[")
        out = []
        p = ExprParser(self.toks, ring)
        if self.tok.text != "]":
            while True:
                p.i = self.i
                out.append(p.expr())
                self.i = p.i
                if self.tok.text != ",":
                    break
                self.take()
        self.expect("]")
        return out


def _check_names(r: _Reader, toks: list[Token], seen: set[str]) -> tuple[str, ...]:
    for t in toks:
        if t.text.startswith(RESERVED_PREFIX):
            r.error(f"symbol {t.text!r} uses the reserved prefix {RESERVED_PREFIX!r}", t)
        if t.text in seen:
            r.error(f"symbol {t.text!r} declared twice", t, DuplicateDeclarationError)
        seen.add(t.text)
    return tuple(t.text for t in toks)


def parse_ideal_file(text: str) -> Problem:
    """Parse a problem file; errors carry line and column."""
    r = _Reader(text)
    variables = parameters = None
    orders = {"vars": "lex", "params": "lex"}
    ring = None
    seen: set[str] = set()
    lists: dict[str, list[Polynomial]] = {}
    syms: dict[str, tuple[str, ...]] = {}

    def need_ring(t: Token) -> ParametricRing:
        nonlocal ring
        if ring is None:
            if not variables:
                r.error("the ring must be declared before any polynomial", t)
            ring = ParametricRing(variables, parameters or (), orders["vars"], orders["params"])
        return ring

    while r.tok.kind != "eof":
        head = r.ident()
        key = head.text
        if key == "ring":
            if variables is not None:
                r.error("ring declared twice", head, DuplicateDeclarationError)
            variables, parameters = (), ()
            while r.tok.text in ("vars", "params"):
                which = r.take().text
                r.expect("=")
                names = _check_names(r, r.symbol_list(), seen)
                if which == "vars":
                    variables = names
                else:
                    parameters = names
            if not variables:
                r.error("ring needs at least one variable", head)
        elif key in ("vars", "params"):
            # standalone form: vars = [...]; params = [...];
            if ring is not None:
                r.error("symbols must be declared before the first polynomial", head)
            r.expect("=")
            names = _check_names(r, r.symbol_list(), seen)
            if key == "vars":
                variables = (variables or ()) + names
            else:
                parameters = (parameters or ()) + names
        elif key == "order":
            if ring is not None:
                r.error("term orders must be given before the first polynomial", head)
            which = r.ident()
            if which.text not in orders:
                r.error("expected 'vars' or 'params'", which)
            r.expect("=")
            tag = r.ident()
            if tag.text not in ("lex", "grevlex"):
                r.error(f"unknown term order {tag.text!r}", tag)
            orders[which.text] = tag.text
        elif key in ("H", "T", "null", "notnull"):
            r.expect("=")
            if key in lists:
                r.error(f"{key} given twice", head, DuplicateDeclarationError)
            R = need_ring(head)
            lists[key] = r.poly_list(R)
        elif key in ("U", "Uprime"):
            r.expect("=")
            if key in syms:
                r.error(f"{key} given twice", head, DuplicateDeclarationError)
            names = r.symbol_list()
            known = set((variables or ()) + (parameters or ()))
            for t in names:
                if t.text not in known:
                    r.error(f"undeclared symbol {t.text!r}", t, UndeclaredSymbolError)
            syms[key] = tuple(t.text for t in names)
        else:
            r.error(f"unknown statement {key!r}", head)
        r.expect(";")

    if not variables:
        r.error("missing ring declaration")
    R = need_ring(r.tok)
    if not lists.get("H"):
        r.error("hypotheses required")
    for key in ("null", "notnull"):
        for p in lists.get(key, []):
            if not p.is_parametric_only:
                r.error(f"{key} constraints may only involve parameters: {p}")
    U = syms.get("U", R.parameters)
    return Problem(
        R,
        Ideal(lists["H"], R),
        Ideal(lists.get("T", []), R),
        tuple(lists.get("null", [])),
        tuple(lists.get("notnull", [])),
        tuple(U),
        syms.get("Uprime"),
    )
