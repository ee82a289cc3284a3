"""Finite unions of cells, enough set algebra to compare regions exactly.

A region is a list of ``Cell`` objects over one parameter ring.  Emptiness
is decided through the closure ideal of each cell, so equality of regions
reduces to emptiness of both differences.
"""

from geodisc.cgs import Cell


def V(ring, *eqs):
    return [Cell(ring, tuple(ring.poly(e) if isinstance(e, str) else e for e in eqs))]


def K(ring):
    return [Cell(ring)]


def _complement_cell(c):
    out = [Cell(c.ring, (), ((e,),)) for e in c.equations]
    out += [Cell(c.ring, tuple(h)) for h in c.holes]
    return out


def intersect(A, B):
    out = []
    for a in A:
        for b in B:
            c = a.intersect(b)
            if not c.is_empty():
                out.append(c)
    return out


def minus(A, B):
    for b in B:
        A = intersect(A, _complement_cell(b))
        if not A:
            break
    return A


def union(*regions):
    return [c for r in regions for c in r]


def is_empty(A):
    return all(c.is_empty() for c in A)


def equal(A, B):
    return is_empty(minus(A, B)) and is_empty(minus(B, A))


def contains(A, point):
    return any(c.contains(point) for c in A)
