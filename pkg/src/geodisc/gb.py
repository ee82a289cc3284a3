"""Buchberger's algorithm over Q with exact arithmetic.

The engine works on raw ``{packed monomial: mpq}`` dicts; ``Ideal`` and
``GroebnerBasis`` wrap it with ``Polynomial`` values.  Pairs are pruned
with the Gebauer-Moeller installation of Buchberger's product and chain
criteria and selected by the normal strategy (smallest lcm in the term order); the
sugar strategy is available as an option.
"""

from __future__ import annotations

import contextlib
import contextvars
import heapq
import itertools
import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gmpy2 import mpq

from .poly import ParametricRing, Polynomial, TermOrder, ZeroPolynomialError

log = logging.getLogger(__name__)


class BudgetExceeded(RuntimeError):
    """Raised when a computation exceeds its pair budget."""


class UnitIdealError(ValueError):
    """The ideal is the whole ring, so its dimension is undefined."""


@dataclass
class Budget:
    """Cooperative cancellation hook: a cap on processed S-pairs per basis."""

    max_pairs: int | None = None

    def check(self, used: int) -> None:
        if self.max_pairs is not None and used > self.max_pairs:
            raise BudgetExceeded(f"pair budget of {self.max_pairs} exceeded")


_DEFAULT_BUDGET: contextvars.ContextVar[Budget] = contextvars.ContextVar("budget", default=Budget())


@contextlib.contextmanager
def budget_scope(budget: Budget):
    """Use ``budget`` for every basis computation in the block that passes none."""
    token = _DEFAULT_BUDGET.set(budget)
    try:
        yield budget
    finally:
        _DEFAULT_BUDGET.reset(token)

STRATEGY = "normal"

# -- raw engine ----------------------------------------------------------------


def _sub_scaled(f: dict, c, shift: int, g: dict) -> None:
    """f -= c * x^shift * g, in place."""
    for mg, cg in g.items():
        mm = mg + shift
        v = f.get(mm)
        if v is None:
            f[mm] = -c * cg
        else:
            v -= c * cg
            if v:
                f[mm] = v
            else:
                del f[mm]


def _reduce(f: dict, basis: Sequence[tuple[int, dict]], ring: ParametricRing, full: bool = True) -> dict:
    """Normal form of f modulo monic ``basis`` entries (lm, poly)."""
    key = ring.key
    guard = ring.guard_mask
    f = dict(f)
    r = {}
    while f:
        m = max(f) if key is None else max(f, key=key)
        c = f[m]
        for lmg, g in basis:
            d = m - lmg
            if not (d & guard):
                _sub_scaled(f, c, d, g)
                break
        else:
            r[m] = c
            del f[m]
            if not full:
                r.update(f)
                break
    return r


def _monic(f: dict, ring: ParametricRing) -> tuple[int, dict]:
    key = ring.key
    m = max(f) if key is None else max(f, key=key)
    inv = 1 / f[m]
    return m, {k: v * inv for k, v in f.items()}


def _degree(ring: ParametricRing, m: int) -> int:
    return sum(ring.unpack(m))


def _groebner_raw(
    polys: Iterable[dict],
    ring: ParametricRing,
    budget: Budget | None = None,
    strategy: str | None = None,
) -> list[tuple[int, dict]]:
    """Reduced monic Groebner basis; [(0, {0: 1})] for the unit ideal."""
    budget = budget or _DEFAULT_BUDGET.get()
    strategy = strategy or STRATEGY
    key = ring.key
    guard = ring.guard_mask
    lcm = ring.lcm

    def divides(a, b):
        return not ((b - a) & guard)

    def coprime(a, b):
        return lcm(a, b) == a + b

    basis: list[tuple[int, dict]] = []
    sugar: list[int] = []
    active: list[int] = []
    pairs: list = []
    counter = itertools.count()

    def order_key(m):
        return m if key is None else key(m)

    def pair_entry(i, j):
        li, lj = basis[i][0], basis[j][0]
        l = lcm(li, lj)
        if strategy == "sugar":
            s = max(sugar[i] + _degree(ring, l - li), sugar[j] + _degree(ring, l - lj))
            pri = (s, _degree(ring, l))
        else:
            pri = ()
        return (pri, _Key(order_key(l)), next(counter), i, j, l)

    def update(h: int) -> None:
        nonlocal active, pairs
        lh = basis[h][0]
        cands = list(active)
        kept: list[tuple[int, int]] = []
        while cands:
            g = cands.pop()
            lg = basis[g][0]
            l = lcm(lh, lg)
            if l == lh + lg:
                kept.append((g, l))
                continue
            if any(divides(lcm(lh, basis[o][0]), l) for o in cands):
                continue
            if any(divides(lk, l) for _, lk in kept):
                continue
            kept.append((g, l))
        survivors = []
        for entry in pairs:
            i, j, l = entry[3], entry[4], entry[5]
            if divides(lh, l) and lcm(basis[i][0], lh) != l and lcm(basis[j][0], lh) != l:
                continue
            survivors.append(entry)
        heapq.heapify(survivors)
        pairs = survivors
        for g, l in kept:
            if l != lh + basis[g][0]:
                heapq.heappush(pairs, pair_entry(g, h))
        active = [g for g in active if not divides(lh, basis[g][0])] + [h]

    def add(f: dict, s: int) -> bool:
        lm_, p = _monic(f, ring)
        basis.append((lm_, p))
        sugar.append(s)
        update(len(basis) - 1)
        return lm_ == 0

    inputs = []
    for f in polys:
        if f:
            inputs.append(dict(f))
    # small leading monomials first tends to keep early reductions cheap
    inputs.sort(key=lambda f: order_key(max(f) if key is None else max(f, key=key)))
    for f in inputs:
        r = _reduce(f, [basis[g] for g in active], ring)
        if r:
            if add(r, max(_degree(ring, m) for m in r)):
                return [(0, {0: mpq(1)})]

    used = 0
    while pairs:
        entry = heapq.heappop(pairs)
        i, j, l = entry[3], entry[4], entry[5]
        used += 1
        budget.check(used)
        li, fi = basis[i]
        lj, fj = basis[j]
        # S(fi, fj) with monic inputs: x^(l-li) fi - x^(l-lj) fj
        s = {m + (l - li): c for m, c in fi.items()}
        _sub_scaled(s, mpq(1), l - lj, fj)
        if not s:
            continue
        r = _reduce(s, [basis[g] for g in active], ring)
        if r:
            sg = max(sugar[i] + _degree(ring, l - li), sugar[j] + _degree(ring, l - lj))
            if add(r, sg):
                return [(0, {0: mpq(1)})]

    # minimalize, then interreduce
    lms = [(basis[g][0], g) for g in active]
    minimal = []
    for lmg, g in lms:
        if any(divides(lo, lmg) and (lo != lmg or o < g) for lo, o in lms if o != g):
            continue
        minimal.append(basis[g])
    out = []
    for idx, (lmg, g) in enumerate(minimal):
        others = [b for k, b in enumerate(minimal) if k != idx]
        tail = {m: c for m, c in g.items() if m != lmg}
        red = _reduce(tail, others, ring) if tail else {}
        red[lmg] = mpq(1)
        out.append((lmg, red))
    out.sort(key=lambda t: order_key(t[0]))
    return out


class _Key:
    """Wrap an order key so heap ties compare ascending by term order."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return self.k < other.k

    def __eq__(self, other):
        return self.k == other.k


# -- public types -----------------------------------------------------------


@dataclass(frozen=True)
class GroebnerBasis:
    elements: tuple[Polynomial, ...]
    order: TermOrder
    reduced: bool = True

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    @property
    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant

    @property
    def leading_monomials(self) -> list[int]:
        return [g.lm for g in self.elements]


_GB_CACHE: OrderedDict = OrderedDict()
_GB_CACHE_SIZE = 4096


def _cached_gb(ring: ParametricRing, gens: tuple[Polynomial, ...], budget: Budget | None) -> tuple[Polynomial, ...]:
    ck = (ring, frozenset(g.canonical() for g in gens))
    hit = _GB_CACHE.get(ck)
    if hit is not None:
        _GB_CACHE.move_to_end(ck)
        return hit
    raw = _groebner_raw((dict(g.items()) for g in gens), ring, budget)
    elems = tuple(Polynomial(ring, d).canonical() for _, d in raw)
    _GB_CACHE[ck] = elems
    if len(_GB_CACHE) > _GB_CACHE_SIZE:
        _GB_CACHE.popitem(last=False)
    return elems


def clear_cache() -> None:
    _GB_CACHE.clear()


class Ideal:
    """Finitely generated ideal of a ParametricRing; zero generators are dropped."""

    __slots__ = ("ring", "generators", "_gb")

    def __init__(self, generators: Iterable[Polynomial], ring: ParametricRing | None = None):
        gens = [g for g in generators]
        if ring is None:
            if not gens:
                raise ValueError("ring required for an ideal without generators")
            ring = gens[0].ring
        out = []
        for g in gens:
            if not isinstance(g, Polynomial):
                g = ring.const(g)
            if g.ring != ring:
                g = g.to_ring(ring)
            if not g.is_zero:
                out.append(g)
        self.ring = ring
        self.generators = tuple(out)
        self._gb = None

    @classmethod
    def unit(cls, ring: ParametricRing) -> "Ideal":
        return cls([ring.one()], ring)

    @classmethod
    def zero(cls, ring: ParametricRing) -> "Ideal":
        return cls([], ring)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def groebner(self, budget: Budget | None = None) -> GroebnerBasis:
        if self._gb is None:
            self._gb = GroebnerBasis(_cached_gb(self.ring, self.generators, budget), self.ring.order)
        return self._gb

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.groebner().elements)

    def contains(self, f: Polynomial) -> bool:
        return self.reduce(f.to_ring(self.ring)).is_zero

    def __contains__(self, f: Polynomial) -> bool:
        return self.contains(f)

    def is_unit(self) -> bool:
        return self.groebner().is_unit

    def issubset(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.groebner().elements == other.groebner().elements

    def __hash__(self) -> int:
        return hash((self.ring, self.groebner().elements))

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.generators + tuple(g.to_ring(self.ring) for g in other.generators), self.ring)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal([f * g.to_ring(self.ring) for f in self.generators for g in other.generators], self.ring)

    def to_ring(self, ring: ParametricRing) -> "Ideal":
        return Ideal([g.to_ring(ring) for g in self.generators], ring)

    def with_generators(self, extra: Iterable[Polynomial]) -> "Ideal":
        return Ideal(self.generators + tuple(extra), self.ring)


# -- public operations ------------------------------------------------------


def normal_form(
    f: Polynomial,
    G: Sequence[Polynomial],
    cofactors: bool = False,
):
    """Fully reduced remainder of f modulo G in f's ring order.

    With ``cofactors=True`` returns ``(remainder, quotients)`` where
    ``f == sum(q_i * G_i) + remainder``.
    """
    ring = f.ring
    G = [g.to_ring(ring) for g in G]
    if any(g.is_zero for g in G):
        raise ZeroPolynomialError("normal form modulo a zero polynomial")
    if not cofactors:
        basis = [(g.lm, {m: c / g.lc for m, c in g.items()}) for g in G]
        return Polynomial(ring, _reduce(dict(f.items()), basis, ring))
    guard = ring.guard_mask
    key = ring.key
    rest = dict(f.items())
    rem: dict = {}
    quots: list[dict] = [{} for _ in G]
    while rest:
        m = max(rest) if key is None else max(rest, key=key)
        c = rest[m]
        for k, g in enumerate(G):
            d = m - g.lm
            if not (d & guard):
                q = c / g.lc
                quots[k][d] = quots[k].get(d, 0) + q
                _sub_scaled(rest, q, d, dict(g.items()))
                break
        else:
            rem[m] = c
            del rest[m]
    return Polynomial(ring, rem), [Polynomial(ring, q) for q in quots]


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.is_zero or g.is_zero:
        raise ZeroPolynomialError("S-polynomial of a zero polynomial")
    if f.ring != g.ring:
        g = g.to_ring(f.ring)
    ring = f.ring
    l = ring.lcm(f.lm, g.lm)
    return f.mul_term(1 / f.lc, l - f.lm) - g.mul_term(1 / g.lc, l - g.lm)


def buchberger(
    I: Ideal | Sequence[Polynomial], budget: Budget | None = None, strategy: str | None = None
) -> GroebnerBasis:
    """Reduced Groebner basis; an explicit ``strategy`` ("normal" or "sugar") bypasses the cache."""
    if not isinstance(I, Ideal):
        I = Ideal(I)
    if strategy is None:
        return I.groebner(budget)
    raw = _groebner_raw((dict(g.items()) for g in I.generators), I.ring, budget, strategy)
    return GroebnerBasis(tuple(Polynomial(I.ring, d).canonical() for _, d in raw), I.ring.order)


def groebner_basis(polys: Sequence[Polynomial], ring: ParametricRing | None = None, budget: Budget | None = None) -> list[Polynomial]:
    return list(Ideal(polys, ring).groebner(budget).elements)


def is_groebner(G: Sequence[Polynomial]) -> bool:
    """S-pair criterion: every S-polynomial reduces to zero modulo G."""
    G = [g for g in G if not g.is_zero]
    for a, b in itertools.combinations(G, 2):
        if not normal_form(s_polynomial(a, b), G).is_zero:
            return False
    return True


def dimension(I: Ideal) -> tuple[int, tuple[str, ...]]:
    """Krull dimension of R/I and a maximal independent set of symbols.

    A set S is independent when no leading monomial of the reduced basis
    is supported inside S.  Larger sets are tried first, and among sets of
    one size those built from trailing symbols come first, so for block
    orders the parameters are preferred.
    """
    ring = I.ring
    G = I.groebner()
    if G.is_unit:
        raise UnitIdealError("dimension of the unit ideal is undefined")
    n = ring.nsymbols
    supports = []
    for g in G:
        e = ring.unpack(g.lm)
        supports.append(sum(1 << i for i in range(n) if e[i]))
    order = list(range(n - 1, -1, -1))
    for k in range(n, -1, -1):
        for combo in itertools.combinations(order, k):
            mask = sum(1 << i for i in combo)
            if all(s & ~mask for s in supports):
                return k, tuple(ring.symbols[i] for i in sorted(combo))
    return 0, ()
