"""Discovery protocol: necessary conditions, sufficient segments, statement classes.

Hypotheses H and thesis T live in one ring whose symbols are split into
parameters U (the independent data of the construction) and the remaining
variables.  Adding T to H and projecting onto U yields the equality
conditions under which the thesis can hold; the CGS of H + T over U refines
this into segments, and those with a unique solution are sufficient.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cgs import (
    Cell,
    CGSConfig,
    GroebnerSystem,
    Segment,
    SolutionType,
    compute_cgs,
    generic_segment,
)
from .gb import Budget, BudgetExceeded, Ideal, UnitIdealError, dimension
from .idealops import eliminate, radical_member, saturate, saturate_ideal
from .poly import ParametricRing, Polynomial

log = logging.getLogger(__name__)


class IndependenceError(ValueError):
    """U is not an independent set of full dimension for H."""


class IndependenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class VariablePartition:
    parameters: tuple[str, ...]
    subparameters: tuple[str, ...]
    variables: tuple[str, ...]

    @classmethod
    def of(cls, ring: ParametricRing, U: Iterable[str] | None = None, Uprime: Iterable[str] | None = None):
        syms = ring.symbols
        missing = (set(U or ()) | set(Uprime or ())) - set(syms)
        if missing:
            raise KeyError(f"unknown symbols {sorted(missing)}")
        U = tuple(ring.parameters) if U is None else tuple(s for s in syms if s in set(U))
        Up = U if Uprime is None else tuple(s for s in syms if s in set(Uprime))
        if not set(Up) <= set(U):
            raise ValueError("U' must be a subset of U")
        return cls(U, Up, tuple(s for s in syms if s not in set(U)))

    def ring(self, base: ParametricRing) -> ParametricRing:
        """The ring with these variables and parameters, keeping base's block orders."""
        return ParametricRing(self.variables, self.parameters, base.variable_order, base.parameter_order)


@dataclass(frozen=True)
class IndependenceCertificate:
    independent: bool
    contraction: Ideal
    dim: int
    witness: tuple[str, ...]
    size: int

    @property
    def full_dimension(self) -> bool:
        """|U| = dim(H), the hypothesis of the classification tests."""
        return self.independent and self.size == self.dim

    def __bool__(self) -> bool:
        return self.independent


@dataclass(frozen=True)
class StatementClass:
    kind: str
    region: tuple[Cell, ...] = ()

    GENERALLY_TRUE = "GenerallyTrue"
    GENERALLY_FALSE = "GenerallyFalse"
    TRUE_UNDER_CONDITIONS = "TrueUnderConditions"
    UNDECIDABLE = "Undecidable"

    def __str__(self) -> str:
        return self.kind


# severity for combining several thesis generators
_RANK = {
    StatementClass.GENERALLY_TRUE: 0,
    StatementClass.TRUE_UNDER_CONDITIONS: 1,
    StatementClass.GENERALLY_FALSE: 2,
    StatementClass.UNDECIDABLE: 3,
}

NO_SOLUTION = "NoSolution"
UNIQUE_SOLUTION = "UniqueSolution"
NOT_SUFFICIENT = "NotSufficient"


@dataclass
class DiscoveryReport:
    partition: VariablePartition
    independence: IndependenceCertificate
    hprime: Ideal
    gs: GroebnerSystem
    segments: list[tuple[Segment, str]]
    statement_class: StatementClass | None = None
    nondegeneracy: Ideal | None = None
    proofs: list[tuple[Cell, bool]] = field(default_factory=list)
    complementary: bool | None = None

    @property
    def independence_ok(self) -> bool:
        return self.independence.independent

    def sufficient(self) -> list[Segment]:
        return [s for s, v in self.segments if v == UNIQUE_SOLUTION]


def _ideal(x, ring: ParametricRing | None = None) -> Ideal:
    return x if isinstance(x, Ideal) else Ideal(list(x), ring)


def check_independent(H: Ideal, U: Iterable[str]) -> IndependenceCertificate:
    """Whether H contains no nonzero polynomial in U alone.

    The certificate carries the contraction H cap Q[U] and the dimension of
    H, so callers can also test the stronger |U| = dim(H).
    """
    H = _ideal(H)
    U = set(U)
    drop = [s for s in H.ring.symbols if s not in U]
    contraction = eliminate(H, drop)
    try:
        dim, witness = dimension(H)
    except UnitIdealError:
        dim, witness = -1, ()
    return IndependenceCertificate(contraction.is_zero, contraction, dim, witness, len(U))


def saturated_hypotheses(gens: Sequence[Polynomial], degeneracies: Sequence[Ideal]) -> Ideal:
    """(gens) : (D_1 * ... * D_k)^inf, closing up the constraints off the degenerate loci."""
    I = _ideal(gens)
    if not degeneracies:
        return I
    J = None
    for D in degeneracies:
        D = _ideal(D, I.ring)
        J = D if J is None else J * D
    return saturate_ideal(I, J)


def _move(I: Ideal, ring: ParametricRing) -> Ideal:
    return Ideal([g.to_ring(ring) for g in I.generators], ring)


def necessary_conditions(
    H: Ideal,
    T: Ideal,
    U: Iterable[str] | None = None,
    null: Sequence[Polynomial] = (),
    nonnull: Sequence[Polynomial] = (),
    config: CGSConfig | None = None,
) -> tuple[Ideal, GroebnerSystem]:
    """H' = (H + T) cap Q[U] and the CGS of H + T with U as parameters.

    Points of V(H') are where the thesis can hold at all; the non-[1]
    segments of the system split V(H') by solution type.
    """
    H, T = _ideal(H), _ideal(T, _ideal(H).ring)
    part = VariablePartition.of(H.ring, U)
    cert = check_independent(H, part.parameters)
    if not cert.independent:
        warnings.warn(
            f"{list(part.parameters)} are not independent for H: contraction {cert.contraction.generators}",
            IndependenceWarning,
            stacklevel=2,
        )
    ring = part.ring(H.ring)
    HT = _move(H + T, ring)
    extra = [c.to_ring(ring) for c in null]
    hp = eliminate(Ideal(list(HT.generators) + extra, ring), part.variables)
    hprime = _move(Ideal(hp.groebner().elements, ring), ring.parameter_ring())
    gs = compute_cgs(HT, ring, null, nonnull, config)
    return hprime, gs


def complementary_conditions_exist(hprime: Ideal, nondeg: Ideal) -> bool:
    """Experimental test 1 not in H' : (H'')^inf, both read in Q[U].

    True suggests that equality conditions from H' and the inequality
    conditions from H'' are compatible, so the statement can be repaired.
    The criterion is used as stated without an independent proof.
    """
    ring = hprime.ring
    if nondeg.is_zero:
        # saturating by the zero ideal gives the whole ring
        return False
    return not saturate_ideal(hprime, _move(nondeg, ring)).is_unit()


def sufficient_segments(gs: GroebnerSystem) -> list[Segment]:
    return [s for s in gs.segments if s.classification.kind == SolutionType.UNIQUE]


def _verdict(s: Segment) -> str:
    if s.is_unit:
        return NO_SOLUTION
    if s.classification.kind == SolutionType.UNIQUE:
        return UNIQUE_SOLUTION
    return NOT_SUFFICIENT


def _classify_one(H: Ideal, g: Polynomial, ring: ParametricRing, config: CGSConfig | None) -> StatementClass:
    (z,) = H.ring.fresh_symbols(1, "z")
    zring = ParametricRing(ring.variables + (z,), ring.parameters, ring.variable_order, ring.parameter_order)
    Hz = _move(H, zring)
    gz = g.to_ring(zring)
    gs1 = compute_cgs(Hz.with_generators([gz * zring.var(z) - zring.one()]), zring, config=config)
    if generic_segment(gs1).is_unit:
        return StatementClass(StatementClass.GENERALLY_TRUE)
    gs2 = compute_cgs(_move(H, ring).with_generators([g.to_ring(ring)]), ring, config=config)
    if generic_segment(gs2).is_unit:
        return StatementClass(StatementClass.GENERALLY_FALSE)
    unit = [s for s in gs1.segments if s.is_unit]
    if unit:
        return StatementClass(StatementClass.TRUE_UNDER_CONDITIONS, unit[0].region)
    return StatementClass(StatementClass.UNDECIDABLE)


def _meet(a: StatementClass, b: StatementClass) -> StatementClass:
    if _RANK[a.kind] != _RANK[b.kind]:
        return a if _RANK[a.kind] > _RANK[b.kind] else b
    if a.kind != StatementClass.TRUE_UNDER_CONDITIONS:
        return a
    cells = tuple(x.intersect(y) for x in a.region for y in b.region)
    return StatementClass(a.kind, tuple(c for c in cells if not c.is_empty()))


def classify_statement(
    H: Ideal,
    T: Ideal,
    U: Iterable[str] | None = None,
    config: CGSConfig | None = None,
) -> StatementClass:
    """Generally true, generally false, true under conditions, or undecidable.

    For each thesis generator g, the CGS of H + (g*z - 1) says where g can
    be nonzero on V(H) and the CGS of H + g says where it can vanish; the
    classes of the generators are combined conjunctively.  U must be an
    independent set whose size is dim(H).
    """
    H = _ideal(H)
    T = _ideal(T, H.ring)
    part = VariablePartition.of(H.ring, U)
    cert = check_independent(H, part.parameters)
    if not cert.full_dimension:
        raise IndependenceError(
            f"{list(part.parameters)} must be independent with size dim(H) = {cert.dim}"
        )
    ring = part.ring(H.ring)
    out = None
    for g in T.generators:
        c = _classify_one(H, g, ring, config)
        out = c if out is None else _meet(out, c)
    return out or StatementClass(StatementClass.GENERALLY_TRUE)


def prove_on_cell(H: Ideal, T: Ideal, cell: Cell) -> bool:
    """Every thesis generator vanishes on V(H) over the cell.

    The hypothesis variety is restricted to the cell by adding its
    equations and saturating by the product of its holes.
    """
    H = _ideal(H)
    ring = H.ring
    J = H.with_generators([e.to_ring(ring) for e in cell.equations])
    for hole in cell.holes:
        if len(hole) == 1:
            J = saturate(J, hole[0].to_ring(ring))
        else:
            J = saturate_ideal(J, Ideal([h.to_ring(ring) for h in hole], ring))
    if J.is_unit():
        return True
    return all(radical_member(g.to_ring(ring), J) for g in _ideal(T, ring).generators)


def discover(
    H: Ideal,
    T: Ideal,
    U: Iterable[str] | None = None,
    Uprime: Iterable[str] | None = None,
    null: Sequence[Polynomial] = (),
    nonnull: Sequence[Polynomial] = (),
    classify: bool = False,
    config: CGSConfig | None = None,
    budget: Budget | None = None,
) -> DiscoveryReport:
    """Run the whole discovery step and collect the results in a report.

    With ``classify`` the statement is also classified and each sufficient
    segment's cells are checked by a proving pass.
    """
    H = _ideal(H)
    T = _ideal(T, H.ring)
    part = VariablePartition.of(H.ring, U, Uprime)
    cert = check_independent(H, part.parameters)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IndependenceWarning)
        hprime, gs = necessary_conditions(H, T, part.parameters, null, nonnull, config)
    if not cert.independent:
        log.warning("parameters %s are not independent for H", list(part.parameters))
    segments = [(s, _verdict(s)) for s in gs.segments]

    nondeg = None
    try:
        ext = H.with_generators([g.to_ring(H.ring) for g in hprime.generators])
        sat = saturate_ideal(ext, T, budget)
        keep = set(part.subparameters)
        nondeg = eliminate(sat, [s for s in H.ring.symbols if s not in keep], budget)
        nondeg = _move(Ideal(nondeg.groebner().elements, H.ring), ParametricRing((), part.subparameters))
    except BudgetExceeded:
        log.warning("nondegeneracy ideal skipped: budget exceeded")
    complementary = None
    if nondeg is not None:
        try:
            complementary = complementary_conditions_exist(hprime, nondeg)
        except BudgetExceeded:
            log.warning("complementary-condition test skipped: budget exceeded")

    statement = None
    proofs: list[tuple[Cell, bool]] = []
    if classify:
        if cert.full_dimension:
            statement = classify_statement(H, T, part.parameters, config)
        for s in sufficient_segments(gs):
            for c in s.region:
                proofs.append((c, prove_on_cell(H, T, c)))
    elif generic_segment(gs).is_unit and cert.independent:
        # the thesis fails generically; no second system needed
        statement = StatementClass(StatementClass.GENERALLY_FALSE)
    return DiscoveryReport(part, cert, hprime, gs, segments, statement, nondeg, proofs, complementary)
