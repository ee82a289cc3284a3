"""Elimination, saturation, intersection and radical membership.

Every operation that needs an auxiliary symbol takes a fresh ``@t<k>``
name, puts it in a leading elimination block and strips it before
returning.  Results are reduced Groebner bases in the input ring's order.
"""

from __future__ import annotations

from typing import Iterable

from .gb import Budget, Ideal
from .poly import GREVLEX, ParametricRing, Polynomial, ZeroPolynomialError


def _elim_ring(ring: ParametricRing, drop: list[str]) -> ParametricRing:
    # grevlex on both blocks: a lex tail block makes coefficients explode
    rest = tuple(s for s in ring.symbols if s not in set(drop))
    return ParametricRing((), rest, parameter_order=GREVLEX, elim=tuple(drop), elim_order=GREVLEX)


def _as_ideal(I) -> Ideal:
    return I if isinstance(I, Ideal) else Ideal(I)


def eliminate(I: Ideal, drop: Iterable[str], budget: Budget | None = None) -> Ideal:
    """Generators of I intersected with Q[remaining symbols].

    Computed with a block order whose leading block holds the dropped
    symbols; the survivors form a reduced basis of the contraction.
    """
    I = _as_ideal(I)
    ring = I.ring
    drop = set(drop)
    unknown = drop - set(ring.symbols)
    if unknown:
        raise KeyError(f"cannot eliminate unknown symbols {sorted(unknown)}")
    drop = [s for s in ring.symbols if s in drop]
    if not drop:
        return Ideal(I.groebner(budget).elements, ring)
    elim_ring = _elim_ring(ring, drop)
    J = I.to_ring(elim_ring)
    keep = set(ring.symbols) - set(drop)
    out = [g for g in J.groebner(budget).elements if g.support <= keep]
    return Ideal([g.to_ring(ring) for g in out], ring)


def saturate(I: Ideal, f: Polynomial, budget: Budget | None = None) -> Ideal:
    """I : f^inf via I + (1 - t f) and elimination of t."""
    I = _as_ideal(I)
    if f.is_zero:
        raise ZeroPolynomialError("saturation by the zero polynomial")
    ring = I.ring
    f = f.to_ring(ring)
    if f.is_constant:
        return Ideal(I.groebner(budget).elements, ring)
    (t,) = ring.fresh_symbols(1)
    big = _elim_ring(ring, [t])
    tt = big.var(t)
    J = Ideal([g.to_ring(big) for g in I.generators] + [big.one() - tt * f.to_ring(big)], big)
    out = [g for g in J.groebner(budget).elements if t not in g.support]
    return Ideal([g.to_ring(ring) for g in out], ring)


def intersect(I: Ideal, J: Ideal, budget: Budget | None = None) -> Ideal:
    """I cap J as the t-free part of t*I + (1 - t)*J."""
    I, J = _as_ideal(I), _as_ideal(J)
    ring = I.ring
    if J.ring != ring:
        from .poly import RingMismatchError

        raise RingMismatchError("intersect: ideals live in different rings")
    if I.is_zero or J.is_zero:
        return Ideal.zero(ring)
    (t,) = ring.fresh_symbols(1)
    big = _elim_ring(ring, [t])
    tt = big.var(t)
    gens = [tt * g.to_ring(big) for g in I.generators]
    gens += [(big.one() - tt) * g.to_ring(big) for g in J.generators]
    out = [g for g in Ideal(gens, big).groebner(budget).elements if t not in g.support]
    return Ideal([g.to_ring(ring) for g in out], ring)


def saturate_ideal(I: Ideal, J: Ideal, budget: Budget | None = None) -> Ideal:
    """I : J^inf as the intersection of I : f^inf over generators f of J."""
    I, J = _as_ideal(I), _as_ideal(J)
    if J.is_zero:
        raise ValueError("saturation by the zero ideal")
    ring = I.ring
    gens = [g.to_ring(ring) for g in J.groebner(budget).elements]
    if any(g.is_constant for g in gens):
        return Ideal(I.groebner(budget).elements, ring)
    acc = None
    for g in gens:
        s = saturate(I, g, budget)
        acc = s if acc is None else intersect(acc, s, budget)
    return Ideal(acc.groebner(budget).elements, ring)


def radical_member(f: Polynomial, I: Ideal, budget: Budget | None = None) -> bool:
    """True iff f vanishes on V(I): 1 in I + (1 - t f)."""
    I = _as_ideal(I)
    ring = I.ring
    f = f.to_ring(ring)
    if f.is_zero:
        return True
    if I.contains(f):
        return True
    if f.is_constant:
        return I.is_unit()
    (t,) = ring.fresh_symbols(1)
    big = _elim_ring(ring, [t])
    J = Ideal([g.to_ring(big) for g in I.generators] + [big.one() - big.var(t) * f.to_ring(big)], big)
    return J.groebner(budget).is_unit


def is_trivial(I: Ideal, budget: Budget | None = None) -> bool:
    """True iff the reduced basis of I is [1]."""
    return _as_ideal(I).groebner(budget).is_unit


def quotient_member_power(f: Polynomial, g: Polynomial, I: Ideal, max_power: int = 12) -> int | None:
    """Smallest k <= max_power with f^k * g in I, or None."""
    p = g
    for k in range(max_power + 1):
        if I.contains(p):
            return k
        p = p * f
    return None
