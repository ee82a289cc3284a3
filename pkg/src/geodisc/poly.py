"""Exact sparse multivariate polynomials over the rationals.

Monomials are packed into a single Python int: one 16-bit field per ring
symbol, the first symbol in the most significant field.  With that layout

* monomial multiplication is integer addition,
* divisibility is one subtraction and a mask test (the top bit of every
  field is a guard bit that catches borrows),
* for the all-lex block order, the term order is plain integer comparison.

Coefficients are ``gmpy2.mpq`` values, always reduced with a positive
denominator.  Polynomials are immutable; their term dict is stored in
descending term order so that iteration and printing are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from gmpy2 import mpq, mpz

FIELD_BITS = 16
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1

LEX = "lex"
GREVLEX = "grevlex"
_ORDER_TAGS = {LEX: LEX, "grevlex": GREVLEX, "degrevlex": GREVLEX, "drl": GREVLEX}

RESERVED_PREFIX = "@"


class RingMismatchError(ValueError):
    pass


class ZeroPolynomialError(ValueError):
    pass


def order_tag(tag: str) -> str:
    try:
        return _ORDER_TAGS[tag.lower()]
    except KeyError:
        raise ValueError(f"unknown term order {tag!r}; expected lex or grevlex") from None


def as_rational(value) -> mpq:
    if isinstance(value, str):
        return mpq(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    return mpq(value)


def format_rational(c) -> str:
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class TermOrder:
    """A block order: earlier blocks dominate, each block is lex or grevlex."""

    blocks: tuple[tuple[tuple[str, ...], str], ...]

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for names, _ in self.blocks for s in names)

    @property
    def is_plain_lex(self) -> bool:
        return all(tag == LEX or len(names) <= 1 for names, tag in self.blocks)


@dataclass(frozen=True)
class ParametricRing:
    """Q[u][x] with the block order x >> u.

    ``elim`` is an optional leading block of auxiliary symbols ranked above
    everything else; it is only used internally for elimination-style
    computations and never appears in user-facing rings.
    """

    variables: tuple[str, ...]
    parameters: tuple[str, ...] = ()
    variable_order: str = LEX
    parameter_order: str = LEX
    elim: tuple[str, ...] = ()
    elim_order: str = GREVLEX

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "parameters", tuple(self.parameters))
        object.__setattr__(self, "elim", tuple(self.elim))
        object.__setattr__(self, "variable_order", order_tag(self.variable_order))
        object.__setattr__(self, "parameter_order", order_tag(self.parameter_order))
        object.__setattr__(self, "elim_order", order_tag(self.elim_order))
        syms = self.elim + self.variables + self.parameters
        for s in syms:
            if not isinstance(s, str) or not s:
                raise ValueError(f"invalid symbol name {s!r}")
        if len(set(syms)) != len(syms):
            raise ValueError(f"duplicate symbols in ring: {syms}")

    # -- layout ---------------------------------------------------------

    @cached_property
    def symbols(self) -> tuple[str, ...]:
        return self.elim + self.variables + self.parameters

    @cached_property
    def nsymbols(self) -> int:
        return len(self.symbols)

    @cached_property
    def index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.symbols)}

    @cached_property
    def order(self) -> TermOrder:
        blocks = []
        if self.elim:
            blocks.append((self.elim, self.elim_order))
        if self.variables:
            blocks.append((self.variables, self.variable_order))
        if self.parameters:
            blocks.append((self.parameters, self.parameter_order))
        return TermOrder(tuple(blocks))

    @cached_property
    def guard_mask(self) -> int:
        g = 0
        for i in range(self.nsymbols):
            g |= 1 << (FIELD_BITS * i + FIELD_BITS - 1)
        return g

    @cached_property
    def param_bits(self) -> int:
        return FIELD_BITS * len(self.parameters)

    @cached_property
    def param_mask(self) -> int:
        return (1 << self.param_bits) - 1

    @cached_property
    def elim_shift(self) -> int:
        return FIELD_BITS * (len(self.variables) + len(self.parameters))

    def shift(self, i: int) -> int:
        return FIELD_BITS * (self.nsymbols - 1 - i)

    def pack(self, exps: Sequence[int]) -> int:
        m = 0
        for e in exps:
            if e < 0 or e > MAX_EXPONENT:
                raise ValueError(f"exponent {e} out of range")
            m = (m << FIELD_BITS) | e
        return m

    def unpack(self, m: int) -> tuple[int, ...]:
        out = [0] * self.nsymbols
        mask = (1 << FIELD_BITS) - 1
        for i in range(self.nsymbols - 1, -1, -1):
            out[i] = m & mask
            m >>= FIELD_BITS
        return tuple(out)

    def symbol_monomial(self, name: str, exp: int = 1) -> int:
        return exp << self.shift(self.index[name])

    # -- order ----------------------------------------------------------

    @cached_property
    def key(self):
        """Sort key for packed monomials, or None when int order is the term order."""
        if self.order.is_plain_lex:
            return None
        spans = []
        start = 0
        for names, tag in self.order.blocks:
            spans.append((start, start + len(names), tag))
            start += len(names)
        cache: dict[int, tuple] = {}
        unpack = self.unpack

        def key(m: int) -> tuple:
            k = cache.get(m)
            if k is None:
                e = unpack(m)
                parts: list[int] = []
                for a, b, tag in spans:
                    if tag == LEX:
                        parts.extend(e[a:b])
                    else:
                        parts.append(sum(e[a:b]))
                        parts.extend(-v for v in reversed(e[a:b]))
                k = tuple(parts)
                cache[m] = k
            return k

        return key

    def max_monomial(self, monomials) -> int:
        k = self.key
        return max(monomials) if k is None else max(monomials, key=k)

    def greater(self, m1: int, m2: int) -> bool:
        k = self.key
        return m1 > m2 if k is None else k(m1) > k(m2)

    def sort_desc(self, monomials) -> list[int]:
        k = self.key
        return sorted(monomials, reverse=True) if k is None else sorted(monomials, key=k, reverse=True)

    # -- monomial predicates ----------------------------------------------

    def divides(self, a: int, b: int) -> bool:
        return not ((b - a) & self.guard_mask)

    def lcm(self, a: int, b: int) -> int:
        mask = (1 << FIELD_BITS) - 1
        out = 0
        for i in range(self.nsymbols):
            s = FIELD_BITS * i
            ea = (a >> s) & mask
            eb = (b >> s) & mask
            out |= (ea if ea > eb else eb) << s
        return out

    def degree(self, m: int) -> int:
        return sum(self.unpack(m))

    def x_part(self, m: int) -> int:
        """Monomial restricted to the variables (and elim) block."""
        return m & ~self.param_mask

    def u_part(self, m: int) -> int:
        return m & self.param_mask

    # -- constructors ---------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {0: mpq(1)})

    def const(self, c) -> "Polynomial":
        c = as_rational(c)
        return Polynomial(self, {0: c} if c else {})

    def var(self, name: str) -> "Polynomial":
        if name not in self.index:
            raise KeyError(f"symbol {name!r} not in ring")
        return Polynomial(self, {self.symbol_monomial(name): mpq(1)})

    def gens(self) -> list["Polynomial"]:
        return [self.var(s) for s in self.symbols]

    def poly(self, text: str) -> "Polynomial":
        from .frontend.parser import parse_polynomial

        return parse_polynomial(text, self)

    def polys(self, texts: Iterable[str]) -> list["Polynomial"]:
        return [self.poly(t) for t in texts]

    # -- derived rings ----------------------------------------------------

    def with_elim(self, names: Sequence[str], order: str = GREVLEX) -> "ParametricRing":
        return ParametricRing(
            self.variables, self.parameters, self.variable_order, self.parameter_order,
            elim=tuple(names) + self.elim, elim_order=order,
        )

    def without(self, names: Iterable[str]) -> "ParametricRing":
        drop = set(names)
        return ParametricRing(
            tuple(s for s in self.variables if s not in drop),
            tuple(s for s in self.parameters if s not in drop),
            self.variable_order,
            self.parameter_order,
            tuple(s for s in self.elim if s not in drop),
            self.elim_order,
        )

    def fresh_symbols(self, count: int, stem: str = "t") -> list[str]:
        out = []
        k = 0
        while len(out) < count:
            name = f"{RESERVED_PREFIX}{stem}{k}"
            if name not in self.index:
                out.append(name)
            k += 1
        return out

    def parameter_ring(self) -> "ParametricRing":
        """Q[u] alone, with the parameter order."""
        return ParametricRing((), self.parameters, parameter_order=self.parameter_order)

    def describe(self) -> dict:
        return {
            "variables": list(self.variables),
            "parameters": list(self.parameters),
            "variable_order": self.variable_order,
            "parameter_order": self.parameter_order,
        }


@dataclass(frozen=True)
class Monomial:
    """Exponent map; symbols with exponent zero are not stored."""

    exponents: tuple[tuple[str, int], ...] = field(default=())

    @classmethod
    def from_map(cls, exps: Mapping[str, int]) -> "Monomial":
        return cls(tuple((s, int(e)) for s, e in exps.items() if e))

    @classmethod
    def unpacked(cls, ring: ParametricRing, m: int) -> "Monomial":
        return cls(tuple((s, e) for s, e in zip(ring.symbols, ring.unpack(m)) if e))

    def as_dict(self) -> dict[str, int]:
        return dict(self.exponents)

    def pack(self, ring: ParametricRing) -> int:
        m = 0
        for s, e in self.exponents:
            if s not in ring.index:
                raise KeyError(f"symbol {s!r} not in ring")
            m += e << ring.shift(ring.index[s])
        return m

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        return "*".join(s if e == 1 else f"{s}^{e}" for s, e in self.exponents)


class Polynomial:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("ring", "_d", "_hash")

    def __init__(self, ring: ParametricRing, data: Mapping[int, mpq], *, ordered: bool = False):
        self.ring = ring
        if ordered:
            self._d = data
        else:
            self._d = {m: data[m] for m in ring.sort_desc(m for m, c in data.items() if c)}
        self._hash = None

    # -- construction helpers -----------------------------------------------

    @classmethod
    def from_terms(cls, ring: ParametricRing, terms: Iterable[tuple[object, Mapping[str, int]]]) -> "Polynomial":
        d: dict[int, mpq] = {}
        for c, exps in terms:
            m = Monomial.from_map(exps).pack(ring)
            d[m] = d.get(m, mpq(0)) + as_rational(c)
        return cls(ring, d)

    @classmethod
    def from_dict(cls, ring: ParametricRing, d: Mapping[int, object]) -> "Polynomial":
        return cls(ring, {m: as_rational(c) for m, c in d.items()})

    # -- inspection -----------------------------------------------------------

    @property
    def terms(self) -> list[tuple[mpq, Monomial]]:
        return [(c, Monomial.unpacked(self.ring, m)) for m, c in self._d.items()]

    def items(self):
        return self._d.items()

    def monomials(self) -> list[int]:
        return list(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def __iter__(self) -> Iterator[tuple[int, mpq]]:
        return iter(self._d.items())

    def __bool__(self) -> bool:
        return bool(self._d)

    @property
    def is_zero(self) -> bool:
        return not self._d

    @property
    def is_constant(self) -> bool:
        return not self._d or (len(self._d) == 1 and 0 in self._d)

    @property
    def is_one(self) -> bool:
        return len(self._d) == 1 and self._d.get(0) == 1

    @property
    def lm(self) -> int:
        if not self._d:
            raise ZeroPolynomialError("zero polynomial has no leading monomial")
        return next(iter(self._d))

    @property
    def lc(self) -> mpq:
        if not self._d:
            raise ZeroPolynomialError("zero polynomial has no leading coefficient")
        return next(iter(self._d.values()))

    @property
    def total_degree(self) -> int:
        return max((self.ring.degree(m) for m in self._d), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.ring.index[name]
        s = self.ring.shift(i)
        mask = (1 << FIELD_BITS) - 1
        return max(((m >> s) & mask for m in self._d), default=-1)

    @property
    def support(self) -> set[str]:
        acc = 0
        for m in self._d:
            acc |= m
        mask = (1 << FIELD_BITS) - 1
        return {s for i, s in enumerate(self.ring.symbols) if (acc >> self.ring.shift(i)) & mask}

    def involves_only(self, names: Iterable[str]) -> bool:
        return self.support <= set(names)

    @property
    def is_parametric_only(self) -> bool:
        """True when no variable (or elim symbol) occurs."""
        pm = self.ring.param_mask
        return all(not (m & ~pm) for m in self._d)

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise RingMismatchError("polynomials belong to different rings")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        d = dict(self._d)
        for m, c in other._d.items():
            v = d.get(m)
            if v is None:
                d[m] = c
            else:
                v = v + c
                if v:
                    d[m] = v
                else:
                    del d[m]
        return Polynomial(self.ring, d)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {m: -c for m, c in self._d.items()}, ordered=True)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = as_rational(other)
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, {m: v * c for m, v in self._d.items()}, ordered=True)
        self._check(other)
        a, b = self._d, other._d
        if len(a) < len(b):
            a, b = b, a
        d: dict[int, mpq] = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = ma + mb
                v = d.get(m)
                d[m] = ca * cb if v is None else v + ca * cb
        return Polynomial(self.ring, d)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_term(self, c, m: int) -> "Polynomial":
        c = as_rational(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {k + m: v * c for k, v in self._d.items()}, ordered=True)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._d == other._d
        if isinstance(other, (int, mpq)) or hasattr(other, "denominator"):
            return self._d == ({0: as_rational(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, tuple(self._d.items())))
        return self._hash

    # -- evaluation & substitution ---------------------------------------------

    def evaluate(self, point: Mapping[str, object]) -> mpq:
        """Value at a point assigning every symbol that occurs."""
        vals = [None] * self.ring.nsymbols
        for s in self.support:
            if s not in point:
                raise KeyError(f"no value for symbol {s!r}")
            vals[self.ring.index[s]] = as_rational(point[s])
        total = mpq(0)
        for m, c in self._d.items():
            t = c
            for i, e in enumerate(self.ring.unpack(m)):
                if e:
                    t *= vals[i] ** e
            total += t
        return total

    def substitute(self, values: Mapping[str, object]) -> "Polynomial":
        """Replace some symbols by rationals; the result stays in this ring."""
        ring = self.ring
        subs = []
        for s, v in values.items():
            if s not in ring.index:
                raise KeyError(f"symbol {s!r} not in ring")
            i = ring.index[s]
            subs.append((ring.shift(i), as_rational(v)))
        mask = (1 << FIELD_BITS) - 1
        d: dict[int, mpq] = {}
        for m, c in self._d.items():
            for sh, v in subs:
                e = (m >> sh) & mask
                if e:
                    c = c * v ** e
                    m -= e << sh
            if c:
                prev = d.get(m)
                if prev is None:
                    d[m] = c
                else:
                    d[m] = prev + c
        return Polynomial(ring, d)

    def specialize(self, point: Mapping[str, object]) -> "Polynomial":
        missing = [p for p in self.ring.parameters if p not in point]
        if missing:
            raise KeyError(f"specialization point lacks parameters {missing}")
        return self.substitute({p: point[p] for p in self.ring.parameters})

    def to_ring(self, ring: ParametricRing) -> "Polynomial":
        if ring == self.ring:
            return self
        src = self.ring
        idx = []
        for i, s in enumerate(src.symbols):
            idx.append((src.shift(i), ring.shift(ring.index[s]) if s in ring.index else None, s))
        mask = (1 << FIELD_BITS) - 1
        d: dict[int, mpq] = {}
        for m, c in self._d.items():
            out = 0
            for sh, dst, s in idx:
                e = (m >> sh) & mask
                if e:
                    if dst is None:
                        raise KeyError(f"symbol {s!r} not present in target ring")
                    out += e << dst
            d[out] = c
        return Polynomial(ring, d)

    def derivative(self, name: str) -> "Polynomial":
        sh = self.ring.shift(self.ring.index[name])
        mask = (1 << FIELD_BITS) - 1
        d = {}
        for m, c in self._d.items():
            e = (m >> sh) & mask
            if e:
                d[m - (1 << sh)] = c * e
        return Polynomial(self.ring, d)

    # -- parametric structure --------------------------------------------------

    def x_coefficients(self) -> dict[int, "Polynomial"]:
        """Group by variable monomial: {x-monomial: coefficient in Q[u]}."""
        ring = self.ring
        pm = ring.param_mask
        groups: dict[int, dict[int, mpq]] = {}
        for m, c in self._d.items():
            groups.setdefault(m & ~pm, {})[m & pm] = c
        return {xm: Polynomial(ring, g, ordered=True) for xm, g in groups.items()}

    def leading_term(self, wrt: str = "variables") -> tuple["Polynomial", int]:
        """(coefficient, monomial) of the leading term.

        ``wrt="variables"`` treats the polynomial as an element of Q[u][x]:
        the monomial is the leading x-monomial and the coefficient is its
        full cofactor in Q[u].  ``wrt="full"`` uses the whole block order.
        """
        if not self._d:
            raise ZeroPolynomialError("zero polynomial has no leading term")
        if wrt == "full":
            return self.ring.const(self.lc), self.lm
        if wrt != "variables":
            raise ValueError(f"unknown leading-term mode {wrt!r}")
        pm = self.ring.param_mask
        xm = self.lm & ~pm
        coeff = {m & pm: c for m, c in self._d.items() if m & ~pm == xm}
        return Polynomial(self.ring, coeff, ordered=True), xm

    def lc_x(self) -> "Polynomial":
        return self.leading_term("variables")[0]

    def lm_x(self) -> int:
        return self.lm & ~self.ring.param_mask

    # -- normalization ------------------------------------------------------------

    def integer_normalized(self) -> tuple[mpq, "Polynomial"]:
        """(unit, p) with self = unit * p, p integral, primitive, positive leading coefficient."""
        if not self._d:
            raise ZeroPolynomialError("cannot normalize the zero polynomial")
        den = mpz(1)
        for c in self._d.values():
            den = den * c.denominator // _gcd(den, c.denominator)
        nums = [c.numerator * (den // c.denominator) for c in self._d.values()]
        g = mpz(0)
        for n in nums:
            g = _gcd(g, n)
            if g == 1:
                break
        if self.lc < 0:
            g = -g
        unit = mpq(g, den)
        d = {m: mpq(n // g) for m, n in zip(self._d, nums)}
        return unit, Polynomial(self.ring, d, ordered=True)

    def canonical(self) -> "Polynomial":
        """Integer coprime coefficients, positive leading coefficient; zero stays zero."""
        if not self._d:
            return self
        return self.integer_normalized()[1]

    def monic(self) -> "Polynomial":
        if not self._d:
            return self
        inv = 1 / self.lc
        return Polynomial(self.ring, {m: c * inv for m, c in self._d.items()}, ordered=True)

    # -- printing -----------------------------------------------------------------

    def __str__(self) -> str:
        if not self._d:
            return "0"
        parts = []
        syms = self.ring.symbols
        for m, c in self._d.items():
            mono = "*".join(
                s if e == 1 else f"{s}^{e}" for s, e in zip(syms, self.ring.unpack(m)) if e
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = format_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_rational(a)}*{mono}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


def _gcd(a, b):
    import gmpy2

    return gmpy2.gcd(a, b)


def leading_term(f: Polynomial, wrt: str = "variables") -> tuple[Polynomial, int]:
    return f.leading_term(wrt)


def content_primitive(f: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Split f in Q[u][x] as content(u) * primitive(x; u).

    The content is the gcd over Q[u] of the x-coefficients; the rational
    unit is pushed into the content so that the primitive part is integral,
    coprime and has a positive leading coefficient.
    """
    if f.is_zero:
        raise ZeroPolynomialError("content of the zero polynomial")
    from .algebra import poly_gcd, exact_divide

    coeffs = list(f.x_coefficients().values())
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant:
            break
        g = poly_gcd(g, c)
    prim = exact_divide(f, g) if not g.is_constant else f
    unit, prim = prim.integer_normalized()
    content = (g if not g.is_constant else f.ring.one()) * unit
    return content, prim


def specialize(f: Polynomial, point: Mapping[str, object]) -> Polynomial:
    return f.specialize(point)


def squarefree_part(f: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors of f, canonically scaled."""
    if f.is_zero:
        raise ZeroPolynomialError("squarefree part of the zero polynomial")
    if f.is_constant:
        return f.ring.one()
    from .algebra import poly_gcd, exact_divide

    g = f
    for s in sorted(f.support, key=f.ring.index.__getitem__):
        if g.is_constant:
            break
        g = poly_gcd(g, f.derivative(s))
    return exact_divide(f, g).canonical()
