"""Comprehensive Groebner systems over a disjoint cover of parameter space.

The construction is a disjoint variant of the Suzuki-Sato branching
scheme.  At a node with cell V(E) minus holes we take the reduced basis G
of I + E under the block order x >> u, split off G_u = G cap Q[u] and a
minimal subset of the rest by x-leading monomial.  By Kalkbrener's
specialization theorem that subset specializes to a Groebner basis
wherever G_u vanishes and no x-leading coefficient does.  The node emits

* the cell V(E) minus V(G_u) with basis [1],
* the cell V(G_u) minus V(prod lc) with the minimal subset, and
* recurses on V(G_u + lc_i) minus V(lc_1 ... lc_{i-1}) for each lc_i.

Holes make the children disjoint, so the output is a partition.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .gb import Budget, Ideal, dimension, UnitIdealError
from .idealops import eliminate, intersect, radical_member, saturate, saturate_ideal
from .poly import (
    GREVLEX,
    Monomial,
    ParametricRing,
    Polynomial,
    content_primitive,
    squarefree_part,
)

log = logging.getLogger(__name__)


class CGSError(RuntimeError):
    """Internal invariant violation during CGS construction."""


class DepthExceeded(CGSError):
    pass


# -- solution types -------------------------------------------------------------


@dataclass(frozen=True)
class SolutionType:
    kind: str
    value: int | None = None

    INCONSISTENT = "Inconsistent"
    UNIQUE = "UniquePoint"
    ZERO_DIM = "ZeroDimensional"
    POS_DIM = "PositiveDimensional"

    @classmethod
    def inconsistent(cls) -> "SolutionType":
        return cls(cls.INCONSISTENT)

    @classmethod
    def unique(cls) -> "SolutionType":
        return cls(cls.UNIQUE)

    @classmethod
    def zero_dimensional(cls, bound: int) -> "SolutionType":
        return cls(cls.ZERO_DIM, bound)

    @classmethod
    def positive_dimensional(cls, dim: int) -> "SolutionType":
        return cls(cls.POS_DIM, dim)

    def __str__(self) -> str:
        if self.value is None:
            return self.kind
        return f"{self.kind}({self.value})"


def classify_segment(lpp: Iterable[int], ring: ParametricRing, is_unit: bool = False) -> SolutionType:
    """Solution type read off the x-leading monomials of a reduced basis."""
    if is_unit:
        return SolutionType.inconsistent()
    nv = len(ring.variables)
    off = len(ring.elim)
    exps = [ring.unpack(m)[off : off + nv] for m in lpp]
    if any(sum(e) == 0 for e in exps):
        return SolutionType.inconsistent()
    pure: dict[int, int] = {}
    for e in exps:
        nz = [i for i, v in enumerate(e) if v]
        if len(nz) == 1:
            i = nz[0]
            pure[i] = min(pure.get(i, e[i]), e[i])
    if len(pure) == nv:
        if all(v == 1 for v in pure.values()):
            return SolutionType.unique()
        bound = 1
        for v in pure.values():
            bound *= v
        return SolutionType.zero_dimensional(bound)
    supports = [{i for i, v in enumerate(e) if v} for e in exps]
    for k in range(nv, -1, -1):
        for combo in itertools.combinations(range(nv), k):
            s = set(combo)
            if all(not sup <= s for sup in supports):
                return SolutionType.positive_dimensional(k)
    return SolutionType.positive_dimensional(0)


# -- cells -------------------------------------------------------------------


@dataclass(frozen=True)
class Cell:
    """V(equations) minus the union of V(hole) over the holes.

    Polynomials live in the parameter ring.  A point belongs to the cell
    iff every equation vanishes there and every hole has a generator that
    does not vanish.
    """

    ring: ParametricRing
    equations: tuple[Polynomial, ...] = ()
    holes: tuple[tuple[Polynomial, ...], ...] = ()

    def contains(self, point: Mapping[str, object]) -> bool:
        if any(e.evaluate(point) != 0 for e in self.equations):
            return False
        return all(any(h.evaluate(point) != 0 for h in hole) for hole in self.holes)

    def closure_ideal(self) -> Ideal:
        """E : (prod of hole ideals)^inf, whose variety is the Zariski closure."""
        E = Ideal(self.equations, self.ring)
        if not self.holes:
            return E
        if all(len(h) == 1 for h in self.holes):
            prod = self.ring.one()
            for (h,) in self.holes:
                prod = prod * h
            return saturate(E, prod)
        J = Ideal([self.ring.one()], self.ring)
        for h in self.holes:
            J = J * Ideal(h, self.ring)
        return saturate_ideal(E, J)

    def is_empty(self) -> bool:
        return self.closure_ideal().is_unit()

    def vanishes(self, f: Polynomial) -> bool:
        """f is zero at every point of the cell."""
        return radical_member(f.to_ring(self.ring), self.closure_ideal())

    def avoids(self, f: Polynomial) -> bool:
        """f is nonzero at every point of the cell."""
        f = f.to_ring(self.ring)
        if f.is_constant:
            return not f.is_zero
        return replace(self, equations=self.equations + (f,)).is_empty()

    def intersect(self, other: "Cell") -> "Cell":
        return Cell(self.ring, self.equations + other.equations, self.holes + other.holes)

    def describe(self) -> str:
        eqs = ", ".join(str(e) for e in self.equations)
        base = f"V({eqs})" if self.equations else "K^%d" % len(self.ring.parameters)
        if not self.holes:
            return base
        parts = []
        for h in self.holes:
            parts.append("V(" + ", ".join(str(g) for g in h) + ")")
        return base + " \\ (" + " u ".join(parts) + ")"

    def as_json(self) -> dict:
        return {
            "equations": [str(e) for e in self.equations],
            "holes": [[str(g) for g in h] for h in self.holes],
        }


def cell_is_empty(c: Cell) -> bool:
    return c.is_empty()


def _simplify_cell(ring: ParametricRing, E: Ideal, holes: Sequence[tuple[Polynomial, ...]]) -> Cell | None:
    """Reduce holes modulo E, drop vacuous ones; None if trivially empty."""
    if E.is_unit():
        return None
    out: list[tuple[Polynomial, ...]] = []
    for h in holes:
        red = []
        vacuous = False
        for g in h:
            r = E.reduce(g.to_ring(ring))
            if r.is_zero:
                continue
            if r.is_constant:
                vacuous = True
                break
            r = squarefree_part(r)
            if r not in red:
                red.append(r)
        if vacuous:
            continue
        if not red:
            return None
        t = tuple(red)
        if t not in out:
            out.append(t)
    return Cell(ring, tuple(E.groebner().elements), tuple(out))


# -- sampling ------------------------------------------------------------------


def _rational_roots(f: Polynomial, sym: str) -> list[mpq]:
    import sympy

    x = sympy.Symbol("x")
    deg = f.degree_in(sym)
    coeffs = [0] * (deg + 1)
    sh = f.ring.shift(f.ring.index[sym])
    mask = (1 << 16) - 1
    for m, c in f.items():
        e = (m >> sh) & mask
        coeffs[deg - e] = sympy.Rational(int(c.numerator), int(c.denominator))
    roots = sympy.Poly(coeffs, x, domain="QQ").ground_roots()
    return [mpq(int(r.p), int(r.q)) for r in sorted(roots, key=lambda r: (abs(r), r))]


def _random_rational(rng: random.Random, box: int) -> mpq:
    if rng.random() < 0.75:
        return mpq(rng.randint(-box, box))
    return mpq(rng.randint(-box, box), rng.randint(2, 4))


def _extend(polys: list[Polynomial], syms: list[str], rng: random.Random, box: int, depth: int = 0):
    G = Ideal(polys, polys[0].ring if polys else None).groebner().elements if polys else ()
    if len(G) == 1 and G[0].is_constant:
        return None
    if not syms:
        return {} if not G else None
    s = syms[-1]
    uni = [g for g in G if g.support and g.support <= {s}]
    if uni:
        cands = _rational_roots(uni[0], s)
        rng.shuffle(cands)
    else:
        cands = [_random_rational(rng, box) for _ in range(2)]
    for v in cands[:6]:
        rest = [g.substitute({s: v}) for g in G]
        rest = [g for g in rest if not g.is_zero]
        if any(g.is_constant for g in rest):
            continue
        r = _extend(rest, syms[:-1], rng, box, depth + 1) if rest else {t: _random_rational(rng, box) for t in syms[:-1]}
        if r is not None:
            r[s] = v
            return r
    return None


def sample_point(c: Cell, seed: int = 0, budget: int = 60, box: int = 6) -> dict[str, mpq] | None:
    """A rational point of the cell, or None when the search budget runs out.

    Free parameters (an independent set of the equations) are drawn at
    random; the rest are solved for through a lex basis, keeping only
    rational roots.  None is inconclusive.
    """
    rng = random.Random(seed)
    params = list(c.ring.parameters)
    lex_ring = ParametricRing((), tuple(params))
    eqs = [e.to_ring(lex_ring) for e in c.equations]
    if eqs:
        try:
            _, free = dimension(Ideal(eqs, lex_ring))
        except UnitIdealError:
            return None
    else:
        free = tuple(params)
    bound = [s for s in params if s not in free]
    for _ in range(budget):
        pt = {s: _random_rational(rng, box) for s in free}
        if bound:
            rest = [e.substitute(pt) for e in eqs]
            rest = [g for g in rest if not g.is_zero]
            if any(g.is_constant for g in rest):
                continue
            sol = _extend(rest, bound, rng, box) if rest else {s: _random_rational(rng, box) for s in bound}
            if sol is None:
                continue
            pt.update(sol)
        if c.contains(pt):
            return pt
    return None


# -- segments and systems ---------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    region: tuple[Cell, ...]
    basis: tuple[Polynomial, ...]
    lpp: tuple[int, ...]
    classification: SolutionType
    # basis elements met on the way to this segment; merging draws on them
    candidates: tuple[Polynomial, ...] = field(default=(), compare=False, repr=False)

    @property
    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant

    def contains(self, point: Mapping[str, object]) -> bool:
        return any(c.contains(point) for c in self.region)

    def lpp_strings(self) -> list[str]:
        if self.is_unit:
            return ["1"]
        if not self.basis:
            return []
        ring = self.basis[0].ring
        return [str(Monomial.unpacked(ring, m)) for m in self.lpp]

    def specialize(self, point: Mapping[str, object]) -> list[Polynomial]:
        return [b.specialize(point).canonical() for b in self.basis]


@dataclass(frozen=True)
class GroebnerSystem:
    segments: tuple[Segment, ...]
    ring: ParametricRing
    null_constraints: tuple[Polynomial, ...] = ()
    nonnull_constraints: tuple[Polynomial, ...] = ()
    ideal: Ideal | None = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def segments_at(self, point: Mapping[str, object]) -> list[Segment]:
        return [s for s in self.segments if s.contains(point)]

    def in_domain(self, point: Mapping[str, object]) -> bool:
        if any(n.evaluate(point) != 0 for n in self.null_constraints):
            return False
        return all(n.evaluate(point) != 0 for n in self.nonnull_constraints)


@dataclass
class CGSConfig:
    max_depth: int = 64
    budget: Budget | None = None
    merge: bool = True


def _sort_lpp(ring: ParametricRing, lms: Iterable[int]) -> tuple[int, ...]:
    # ascending, the way lpp lists are usually written
    return tuple(reversed(ring.sort_desc(set(lms))))


def _x_interreduce(basis: list[Polynomial]) -> list[Polynomial]:
    """Remove tail x-monomials divisible by another element's x-leading monomial.

    Uses pseudo-division, multiplying by x-leading coefficients that are
    nonzero on the current cell.
    """
    if len(basis) < 2:
        return basis
    ring = basis[0].ring
    heads = [(b.lm_x(), b.lc_x(), b) for b in basis]
    out = []
    for k, g in enumerate(basis):
        lmg = g.lm_x()
        changed = True
        while changed:
            changed = False
            coeffs = g.x_coefficients()
            for xm in ring.sort_desc(coeffs):
                if xm == lmg:
                    continue
                for j, (lmh, lch, h) in enumerate(heads):
                    if j == k or not ring.divides(lmh, xm):
                        continue
                    g = g * lch - h.mul_term(1, xm - lmh) * coeffs[xm]
                    changed = True
                    break
                if changed:
                    break
        out.append(g)
    return out


def _minimal_by_x(rest: list[Polynomial]) -> list[Polynomial]:
    ring = rest[0].ring
    rest = sorted(rest, key=lambda g: ring.key(g.lm) if ring.key else g.lm)
    chosen: list[Polynomial] = []
    for g in rest:
        lmx = g.lm_x()
        if any(ring.divides(c.lm_x(), lmx) for c in chosen):
            continue
        chosen.append(g)
    return chosen


class _Builder:
    def __init__(self, I: Ideal, ring: ParametricRing, null, nonnull, config: CGSConfig):
        self.ring = ring
        self.pring = ring.parameter_ring()
        self.config = config
        self.I = I
        self.null = tuple(n.to_ring(self.pring) for n in null)
        self.nonnull = tuple(n.to_ring(self.pring) for n in nonnull)
        self.out: list[Segment] = []
        self.nodes = 0

    def emit(self, basis: Sequence[Polynomial], cell: Cell | None, anc: Sequence[Polynomial] = ()) -> None:
        if cell is None or cell.is_empty():
            return
        ring = self.ring
        if len(basis) == 1 and basis[0].is_constant:
            seg = Segment((cell,), (ring.one(),), (), SolutionType.inconsistent())
        else:
            lpp = _sort_lpp(ring, (b.lm_x() for b in basis))
            basis = tuple(sorted(basis, key=lambda b: lpp.index(b.lm_x())))
            seg = Segment((cell,), basis, lpp, classify_segment(lpp, ring), tuple(anc))
        self.out.append(seg)

    def run(self) -> list[Segment]:
        E = Ideal(self.null, self.pring)
        holes = [(n,) for n in self.nonnull]
        self.node(list(self.I.generators), E, holes, 0, ())
        return self.out

    def node(self, gens: list[Polynomial], E: Ideal, holes: list[tuple[Polynomial, ...]], depth: int, anc: tuple) -> None:
        if depth > self.config.max_depth:
            raise DepthExceeded(f"CGS recursion deeper than {self.config.max_depth}")
        self.nodes += 1
        ring, pring = self.ring, self.pring
        here = _simplify_cell(pring, E, holes)
        if here is None or here.is_empty():
            return
        G = Ideal(gens + [e.to_ring(ring) for e in E.groebner().elements], ring).groebner(self.config.budget)
        # replace G cap Q[u] by squarefree generators with the same zero set
        while not G.is_unit:
            Gu = [g.to_ring(pring) for g in G if g.is_parametric_only]
            Er = Ideal([squarefree_part(g) for g in Gu], pring)
            if Er == Ideal(Gu, pring):
                break
            G = Ideal(list(G.elements) + [g.to_ring(ring) for g in Er.generators], ring).groebner(self.config.budget)
        if G.is_unit:
            self.emit([ring.one()], here)
            return
        rest = [g for g in G if not g.is_parametric_only]
        if not Er.issubset(E):
            self.emit([ring.one()], _simplify_cell(pring, E, holes + [tuple(Er.groebner().elements)]))
        if not rest:
            self.emit([], _simplify_cell(pring, Er, holes))
            return
        anc = anc + tuple(content_primitive(g)[1] for g in rest if content_primitive(g)[1] not in anc)
        chosen = _minimal_by_x(rest)
        lcs = [g.lc_x().to_ring(pring) for g in chosen]
        branch: list[Polynomial] = []
        for c in lcs:
            if c.is_constant:
                continue
            s = squarefree_part(Er.reduce(c))
            if not s.is_constant and s not in branch:
                branch.append(s)
        generic = _simplify_cell(pring, Er, holes + ([(_product(branch, pring),)] if branch else []))
        if generic is not None and not generic.is_empty():
            basis = _x_interreduce(chosen)
            Eg = Er.to_ring(ring)
            basis = [content_primitive(Eg.reduce(b))[1] for b in basis]
            self.emit(basis, generic, anc)
        for i, b in enumerate(branch):
            E2 = Ideal(Er.generators + (b,), pring)
            if E2 == Er:
                raise CGSError(f"branch on {b} does not refine the parent cell")
            self.node(list(G.elements), E2, holes + [(p,) for p in branch[:i]], depth + 1, anc)


def _product(polys: Sequence[Polynomial], ring: ParametricRing) -> Polynomial:
    p = ring.one()
    for q in polys:
        p = p * q
    return p


def compute_cgs(
    I: Ideal | Sequence[Polynomial],
    ring: ParametricRing | None = None,
    null: Sequence[Polynomial] = (),
    nonnull: Sequence[Polynomial] = (),
    config: CGSConfig | None = None,
) -> GroebnerSystem:
    """Disjoint comprehensive Groebner system of I over the constrained parameter space."""
    config = config or CGSConfig()
    if not isinstance(I, Ideal):
        I = Ideal(I, ring)
    ring = ring or I.ring
    I = I.to_ring(ring)
    params = set(ring.parameters)
    for c in list(null) + list(nonnull):
        bad = c.support - params
        if bad:
            raise ValueError(f"constraint {c} involves non-parameter symbols {sorted(bad)}")
    null_r = tuple(c.to_ring(ring) for c in null)
    nonnull_r = tuple(c.to_ring(ring) for c in nonnull)
    b = _Builder(I, ring, null_r, nonnull_r, config)
    segs = b.run()
    log.debug("cgs: %d nodes, %d raw segments", b.nodes, len(segs))
    gs = GroebnerSystem(tuple(segs), ring, null_r, nonnull_r, I)
    if config.merge:
        gs = merge_segments(gs)
    return gs


# -- merging -------------------------------------------------------------------------


def _element_valid_on(b: Polynomial, ref: Polynomial, cell: Cell) -> bool:
    """b and ref specialize to the same monic polynomial all over ``cell``.

    ``ref`` is known to have a nonvanishing x-leading coefficient there.
    """
    pring = cell.ring
    if b.lm_x() != ref.lm_x():
        return False
    if not cell.avoids(b.lc_x().to_ring(pring)):
        return False
    diff = b * ref.lc_x() - ref * b.lc_x()
    return all(cell.vanishes(c.to_ring(pring)) for c in diff.x_coefficients().values())


def bases_agree_on(basis: Sequence[Polynomial], ref: Sequence[Polynomial], cell: Cell) -> bool:
    """Both bases specialize to the same reduced basis at every point of ``cell``.

    Elements are paired by x-leading monomial; both leading coefficients
    must stay nonzero on the cell.
    """
    basis = [b for b in basis if not b.is_zero]
    ref = [r.to_ring(basis[0].ring) if basis else r for r in ref if not r.is_zero]
    if sorted(b.lm_x() for b in basis) != sorted(r.lm_x() for r in ref):
        return False
    by_lm = {b.lm_x(): b for b in basis}
    for r in ref:
        if not cell.avoids(r.lc_x().to_ring(cell.ring)):
            return False
        if not _element_valid_on(by_lm[r.lm_x()], r, cell):
            return False
    return True


def _region_candidates(I: Ideal, cells: Sequence[Cell], lpp: Sequence[int]) -> list[Polynomial]:
    """Basis elements of I + P, P the ideal of the union of ``cells``.

    A grevlex parameter order favours low-degree x-leading coefficients,
    which are the ones most likely to stay nonzero across several cells.
    For a pure-power leading monomial the other variables are eliminated
    first so the candidate carries no foreign tail terms.
    """
    ring = I.ring
    P = None
    for c in cells:
        Q = c.closure_ideal()
        P = Q if P is None else intersect(P, Q)
    alt = ParametricRing(ring.variables, ring.parameters, ring.variable_order, GREVLEX)
    J = Ideal([g.to_ring(alt) for g in I.generators] + [g.to_ring(alt) for g in P.generators], alt)
    found: list[Polynomial] = []
    nv = len(ring.variables)
    for m in lpp:
        e = ring.unpack(m)[:nv]
        nz = [i for i, v in enumerate(e) if v]
        if len(nz) != 1:
            continue
        others = [v for i, v in enumerate(ring.variables) if i != nz[0]]
        K = eliminate(J, others) if others else J
        found += [g for g in K.groebner().elements if g.lm_x() == m]
    found += list(J.groebner().elements)
    out = []
    for g in found:
        if g.is_parametric_only:
            continue
        h = content_primitive(g.to_ring(ring))[1]
        if h not in out:
            out.append(h)
    return out


def _common_basis(a: Segment, b: Segment, I: Ideal | None = None) -> tuple[Polynomial, ...] | None:
    """A basis serving both segments, or None."""
    if a.lpp != b.lpp or a.is_unit != b.is_unit:
        return None
    if a.is_unit or not a.basis or a.basis == b.basis:
        return a.basis
    ref_a = {g.lm_x(): g for g in a.basis}
    ref_b = {g.lm_x(): g for g in b.basis}
    pool = list(a.basis) + list(b.basis)
    extra = [g for g in a.candidates + b.candidates if g not in pool]
    extra.sort(key=lambda g: (len(g), g.total_degree))
    pool += extra
    out = _pick(a, b, pool, ref_a, ref_b)
    if out is None and I is not None:
        extra = [g for g in _region_candidates(I, a.region + b.region, a.lpp) if g not in pool]
        extra.sort(key=lambda g: (len(g), g.total_degree))
        out = _pick(a, b, extra + pool, ref_a, ref_b)
    return out


def _pick(a: Segment, b: Segment, pool, ref_a, ref_b) -> tuple[Polynomial, ...] | None:
    out = []
    for m in a.lpp:
        for g in pool:
            if g.lm_x() != m:
                continue
            if all(_element_valid_on(g, ref_a[m], c) for c in a.region) and all(
                _element_valid_on(g, ref_b[m], c) for c in b.region
            ):
                out.append(g)
                break
        else:
            return None
    return tuple(out)


def merge_segments(gs: GroebnerSystem) -> GroebnerSystem:
    """Merge same-lpp segments that admit one common basis.

    A merge happens when one segment's basis specializes correctly on the
    other's whole region; the basis-[1] segments collapse into one.  This
    is a best-effort reduction of the segment count, not a minimality
    guarantee.
    """
    merged: list[Segment] = []
    for s in gs.segments:
        for k, m in enumerate(merged):
            basis = _common_basis(m, s, gs.ideal)
            if basis is not None:
                cands = m.candidates + tuple(g for g in s.candidates if g not in m.candidates)
                merged[k] = Segment(m.region + s.region, basis, m.lpp, m.classification, cands)
                break
        else:
            merged.append(s)
    return replace(gs, segments=tuple(merged))


def check_point(gs: GroebnerSystem, point: Mapping[str, object]) -> str | None:
    """None if exactly one segment holds the point and its basis specializes
    to the reduced basis of the specialized ideal; a description otherwise."""
    segs = gs.segments_at(point)
    if len(segs) != 1:
        return f"point lies in {len(segs)} segments"
    seg = segs[0]
    ring = gs.ring
    spec = [g.specialize(point).to_ring(ring) for g in gs.ideal.generators]
    direct = sorted((g.canonical() for g in Ideal(spec, ring).groebner().elements), key=str)
    claimed = sorted((b.specialize(point).canonical() for b in seg.basis), key=str)
    claimed = [b for b in claimed if not b.is_zero]
    if direct != claimed:
        return f"basis {[str(b) for b in claimed]} but reduced basis is {[str(b) for b in direct]}"
    return None


def verify_system(gs: GroebnerSystem, samples: int = 5, seed: int = 0) -> list[str]:
    """Specialization soundness at sampled points of every cell."""
    problems = []
    for i, seg in enumerate(gs.segments):
        for j, cell in enumerate(seg.region):
            for k in range(samples):
                pt = sample_point(cell, seed=seed * 1000 + k)
                if pt is None:
                    break
                msg = check_point(gs, pt)
                if msg:
                    problems.append(f"segment {i} cell {j} at {dict((s, str(v)) for s, v in pt.items())}: {msg}")
    return problems


def generic_segment(gs: GroebnerSystem) -> Segment:
    """The segment holding a cell whose equations are just the null constraints."""
    pring = gs.ring.parameter_ring()
    base = Ideal([n.to_ring(pring) for n in gs.null_constraints], pring)
    for s in gs.segments:
        for c in s.region:
            if Ideal(c.equations, pring) == base:
                return s
    raise CGSError("system has no generic segment")
