"""Planar geometry constructions compiled to polynomial hypotheses.

    var x1, x2;                         # optional: fixes the variable order
    param u1, u2;                       # optional: fixes the parameter order
    point A = (u1, u2) free;            # new symbols become parameters
    point E = (x1, x2) dep;             # new symbols become variables
    point D = (2, 0);                   # no new symbols
    hypothesis perpendicular((E, A), (E, (1, 0)));
    hypothesis lensq(E, (1, 0)) == 1;
    avoid u1 == 2;
    avoid u1 == 0 and u2 == 0;
    thesis lensq(A, E) == lensq(A, F);
    U = [u1, u2]; Uprime = [u2];

Points are referenced by name or written inline as ``(expr, expr)``.
``lensq(P, Q)`` may appear anywhere inside an expression.  Hypotheses are
saturated by the product of the avoid clauses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..discover import saturated_hypotheses
from ..gb import Ideal
from ..poly import RESERVED_PREFIX, ParametricRing, Polynomial
from .ideal_file import DuplicateDeclarationError, Problem
from .parser import ExprParser, ParseError, Token, UndeclaredSymbolError, tokenize

Point = tuple[Polynomial, Polynomial]

PREDICATES = ("collinear", "perpendicular", "parallel", "on_circle")
KINDS = ("free", "dep", "fixed")
_KEYWORDS = {"point", "hypothesis", "avoid", "thesis", "var", "param", "order", "U", "Uprime", "and"}


@dataclass(frozen=True)
class Constraint:
    predicate: str
    args: tuple

    def polynomials(self) -> list[Polynomial]:
        p = self.predicate
        a = self.args
        if p == "collinear":
            (px, py), (qx, qy), (rx, ry) = a
            return [(qx - px) * (ry - py) - (qy - py) * (rx - px)]
        if p == "perpendicular":
            ((px, py), (qx, qy)), ((rx, ry), (sx, sy)) = a
            return [(qx - px) * (sx - rx) + (qy - py) * (sy - ry)]
        if p == "parallel":
            ((px, py), (qx, qy)), ((rx, ry), (sx, sy)) = a
            return [(qx - px) * (sy - ry) - (qy - py) * (sx - rx)]
        if p == "on_circle":
            (px, py), (cx, cy), r2 = a
            return [(px - cx) ** 2 + (py - cy) ** 2 - r2]
        if p == "raw":
            left, right = a
            return [left - right]
        if p == "same_point":
            (px, py), (qx, qy) = a
            return [px - qx, py - qy]
        raise ValueError(f"unknown predicate {p!r}")


@dataclass
class GeometryProgram:
    ring: ParametricRing
    points: list[tuple[str, Point, str]] = field(default_factory=list)
    hypotheses: list[Constraint] = field(default_factory=list)
    avoid_clauses: list[list[Constraint]] = field(default_factory=list)
    theses: list[Constraint] = field(default_factory=list)
    U: tuple[str, ...] | None = None
    Uprime: tuple[str, ...] | None = None


def lensq(p: Point, q: Point) -> Polynomial:
    return (q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2


# -- declarations pass ---------------------------------------------------------


def _statements(toks: list[Token]) -> list[list[Token]]:
    out, cur = [], []
    for t in toks:
        if t.kind == "eof":
            break
        if t.text == ";":
            out.append(cur)
            cur = []
        else:
            cur.append(t)
    if cur:
        t = cur[-1]
        raise ParseError("missing ';' at end of statement", t.line, t.col + len(t.text))
    return out


def _declare(stmts: list[list[Token]]) -> tuple[list[str], list[str], dict[str, str]]:
    variables: list[str] = []
    parameters: list[str] = []
    orders = {"vars": "lex", "params": "lex"}
    seen: set[str] = set()
    point_names: set[str] = set()

    def add(t: Token, where: list[str]):
        if t.text.startswith(RESERVED_PREFIX):
            raise ParseError(f"symbol {t.text!r} uses the reserved prefix {RESERVED_PREFIX!r}", t.line, t.col)
        if t.text in _KEYWORDS or t.text in PREDICATES or t.text == "lensq":
            raise ParseError(f"{t.text!r} is a reserved word", t.line, t.col)
        if t.text in seen:
            raise DuplicateDeclarationError(f"symbol {t.text!r} declared twice", t.line, t.col)
        seen.add(t.text)
        where.append(t.text)

    for st in stmts:
        head = st[0]
        if head.text in ("var", "param"):
            where = variables if head.text == "var" else parameters
            for t in st[1:]:
                if t.text == ",":
                    continue
                if t.kind != "ident":
                    raise ParseError(f"expected identifier, found {t.text!r}", t.line, t.col)
                add(t, where)
        elif head.text == "order":
            if len(st) != 4 or st[1].text not in orders or st[2].text != "=" or st[3].text not in ("lex", "grevlex"):
                raise ParseError("expected 'order vars|params = lex|grevlex'", head.line, head.col)
            orders[st[1].text] = st[3].text
    for st in stmts:
        head = st[0]
        if head.text != "point":
            continue
        if len(st) < 2 or st[1].kind != "ident":
            raise ParseError("expected point name", head.line, head.col)
        name = st[1]
        if name.text in point_names:
            raise DuplicateDeclarationError(f"point {name.text!r} declared twice", name.line, name.col)
        point_names.add(name.text)
        kind = st[-1].text if st[-1].text in KINDS else "free"
        where = parameters if kind == "free" else variables
        for k, t in enumerate(st[2:], start=2):
            if t.kind != "ident" or t.text in KINDS and k == len(st) - 1:
                continue
            if k + 1 < len(st) and st[k + 1].text == "(":
                continue
            if t.text in seen:
                continue
            if kind == "fixed":
                raise UndeclaredSymbolError(f"undeclared symbol {t.text!r} in fixed point", t.line, t.col)
            add(t, where)
    clash = point_names & seen
    if clash:
        raise DuplicateDeclarationError(f"names used both as point and symbol: {sorted(clash)}")
    return variables, parameters, orders


# -- statement pass ------------------------------------------------------------------


class _GeoParser(ExprParser):
    def __init__(self, tokens, ring, points: dict[str, Point]):
        super().__init__(tokens, ring, extra_atoms={"lensq": _GeoParser._lensq})
        self.points = points

    def _lensq(self) -> Polynomial:
        self.expect("(")
        p = self.point()
        self.expect(",")
        q = self.point()
        self.expect(")")
        return lensq(p, q)

    def atom(self) -> Polynomial:
        t = self.tok
        if t.kind == "ident" and t.text in self.points:
            self.error(f"point {t.text!r} used where a number is expected")
        return super().atom()

    def point(self) -> Point:
        t = self.tok
        if t.kind == "ident":
            if t.text not in self.points:
                self.error(f"unknown point {t.text!r}", t, UndeclaredSymbolError)
            self.i += 1
            return self.points[t.text]
        self.expect("(")
        x = self.expr()
        self.expect(",")
        y = self.expr()
        if self.tok.text == ",":
            self.error("points are planar: expected 2 coordinates")
        self.expect(")")
        return (x, y)

    def segment(self) -> tuple[Point, Point]:
        self.expect("(")
        p = self.point()
        self.expect(",")
        q = self.point()
        self.expect(")")
        return (p, q)

    def constraint(self) -> Constraint:
        t = self.tok
        nxt = self.toks[self.i + 1]
        if t.kind == "ident" and t.text in PREDICATES and nxt.text == "(":
            self.i += 2
            if t.text == "collinear":
                args = [self.point()]
                for _ in range(2):
                    self.expect(",")
                    args.append(self.point())
            elif t.text in ("perpendicular", "parallel"):
                args = [self.segment()]
                self.expect(",")
                args.append(self.segment())
            else:
                args = [self.point()]
                self.expect(",")
                args.append(self.point())
                self.expect(",")
                args.append(self.expr())
            self.expect(")")
            return Constraint(t.text, tuple(args))
        if t.kind == "ident" and t.text in self.points and nxt.text == "==":
            p = self.point()
            self.expect("==")
            return Constraint("same_point", (p, self.point()))
        left = self.expr()
        self.expect("==")
        right = self.expr()
        return Constraint("raw", (left, right))


def parse_geometry(text: str) -> GeometryProgram:
    toks = tokenize(text)
    stmts = _statements(toks)
    variables, parameters, orders = _declare(stmts)
    if not variables:
        raise ParseError("no dependent points or variables declared")
    ring = ParametricRing(tuple(variables), tuple(parameters), orders["vars"], orders["params"])
    prog = GeometryProgram(ring)
    points: dict[str, Point] = {}
    for st in stmts:
        head = st[0]
        body = st + [Token("eof", "", 0, st[-1].line, st[-1].col + len(st[-1].text))]
        p = _GeoParser(body, ring, points)
        p.i = 1
        kw = head.text
        if kw in ("var", "param", "order"):
            continue
        if kw == "point":
            name = p.expect_ident().text
            p.expect("=")
            pt = p.point()
            kind = "free"
            if p.tok.kind == "ident" and p.tok.text in KINDS:
                kind = p.tok.text
                p.i += 1
            points[name] = pt
            prog.points.append((name, pt, kind))
        elif kw == "hypothesis":
            prog.hypotheses.append(p.constraint())
        elif kw == "thesis":
            prog.theses.append(p.constraint())
        elif kw == "avoid":
            clause = [p.constraint()]
            while p.tok.text == "and":
                p.i += 1
                clause.append(p.constraint())
            prog.avoid_clauses.append(clause)
        elif kw in ("U", "Uprime"):
            p.expect("=")
            p.expect("[")
            names = []
            while p.tok.kind == "ident":
                t = p.expect_ident()
                if t.text not in ring.index:
                    p.error(f"undeclared symbol {t.text!r}", t, UndeclaredSymbolError)
                names.append(t.text)
                if p.tok.text != ",":
                    break
                p.i += 1
            p.expect("]")
            setattr(prog, kw, tuple(names))
        else:
            p.error(f"unknown statement {kw!r}", head)
        if p.tok.kind != "eof":
            p.error(f"trailing input {p.tok.text!r}")
    if not prog.hypotheses:
        raise ParseError("hypotheses required")
    return prog


def compile_geometry(prog: GeometryProgram | str) -> Problem:
    """Hypothesis ideal (saturated by the avoid clauses), thesis ideal and U."""
    if isinstance(prog, str):
        prog = parse_geometry(prog)
    ring = prog.ring
    gens = [g for c in prog.hypotheses for g in c.polynomials()]
    degeneracies = [Ideal([g for c in clause for g in c.polynomials()], ring) for clause in prog.avoid_clauses]
    H = saturated_hypotheses(gens, degeneracies) if degeneracies else Ideal(gens, ring)
    if degeneracies:
        H = Ideal(H.groebner().elements, ring)
    T = Ideal([g for c in prog.theses for g in c.polynomials()], ring)
    U = prog.U if prog.U is not None else ring.parameters
    return Problem(ring, H, T, (), (), tuple(U), prog.Uprime)
