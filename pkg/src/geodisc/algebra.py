"""Multivariate gcd and exact division, delegated to sympy's sparse rings.

Only the symbols that actually occur are sent across, so the sympy ring
stays small.  Results come back canonically scaled (integral, primitive,
positive leading coefficient).
"""

from __future__ import annotations

from functools import lru_cache

from gmpy2 import mpq, mpz
from sympy.polys.domains import ZZ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

from .poly import Polynomial


@lru_cache(maxsize=None)
def _sympy_ring(n: int) -> PolyRing:
    return PolyRing([f"_s{i}" for i in range(n)], ZZ, lex)


def _to_sympy(polys: list[Polynomial]):
    ring = polys[0].ring
    support = set()
    for p in polys:
        support |= p.support
    idx = sorted(ring.index[s] for s in support)
    R = _sympy_ring(max(len(idx), 1))
    out = []
    for p in polys:
        _, ip = p.integer_normalized()
        terms = {}
        for m, c in ip.items():
            e = ring.unpack(m)
            key = tuple(e[i] for i in idx) if idx else (0,)
            terms[key] = ZZ(int(c.numerator))
        out.append(R.from_dict(terms))
    return out, idx


def _from_sympy(el, ring, idx) -> Polynomial:
    d = {}
    shifts = [ring.shift(i) for i in idx]
    for exps, c in el.items():
        m = 0
        for e, sh in zip(exps, shifts):
            m += e << sh
        d[m] = mpq(mpz(int(c)))
    return Polynomial(ring, d)


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """gcd over Q, canonically scaled; gcd(0, 0) is 0."""
    if f.is_zero:
        return g.canonical()
    if g.is_zero:
        return f.canonical()
    if f.is_constant or g.is_constant:
        return f.ring.one()
    (a, b), idx = _to_sympy([f, g])
    return _from_sympy(a.gcd(b), f.ring, idx).canonical()


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """f / g when g divides f exactly; raises ValueError otherwise."""
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if g.is_constant:
        return f * (1 / g.lc)
    if f.is_zero:
        return f
    uf, _ = f.integer_normalized()
    ug, _ = g.integer_normalized()
    (a, b), idx = _to_sympy([f, g])
    q, r = a.div(b)
    if r:
        raise ValueError("exact_divide: divisor does not divide dividend")
    return _from_sympy(q, f.ring, idx) * (uf / ug)


def gcd_free_basis(polys: list[Polynomial]) -> list[Polynomial]:
    """Pairwise coprime polynomials whose products recover each input's radical factors.

    Repeatedly splits any pair with a nontrivial gcd into gcd and cofactors;
    no irreducible factorization is involved.
    """
    basis: list[Polynomial] = []
    for p in polys:
        if p.is_constant:
            continue
        todo = [p.canonical()]
        while todo:
            q = todo.pop()
            if q.is_constant:
                continue
            for i, b in enumerate(basis):
                g = poly_gcd(q, b)
                if not g.is_constant:
                    basis.pop(i)
                    parts = [g, exact_divide(b, g), exact_divide(q, g)]
                    todo.extend(x for x in parts if not x.is_constant)
                    break
            else:
                basis.append(q)
    out = []
    for b in basis:
        if b not in out:
            out.append(b)
    return out
