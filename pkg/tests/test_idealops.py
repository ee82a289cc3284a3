import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodisc.gb import Ideal, dimension
from geodisc.idealops import (
    eliminate,
    intersect,
    is_trivial,
    quotient_member_power,
    radical_member,
    saturate,
    saturate_ideal,
)
from geodisc.poly import ParametricRing, RingMismatchError, ZeroPolynomialError
from strategies import RING_XY, RING_XYZ, polys

XA = ParametricRing(("x",), ("a",))
XY = ParametricRing(("x", "y"), ())
XYA = ParametricRing(("x", "y"), ("a",))
U = ParametricRing(("x1", "x2", "x3", "x4"), ("u1", "u2"))
X4 = ("x1", "x2", "x3", "x4")


def test_eliminate_examples():
    assert eliminate(Ideal([XA.poly("x - a"), XA.poly("x")]), ["x"]) == Ideal([XA.poly("a")])
    assert eliminate(Ideal([XY.poly("x^2"), XY.poly("y")]), ["y"]) == Ideal([XY.poly("x^2")])


def test_eliminate_unknown_symbol():
    with pytest.raises(KeyError):
        eliminate(Ideal([XY.poly("x")]), ["z"])


def test_eliminate_tangent_contraction(problem):
    H, T = problem("tangent_circle.ideal").H, problem("tangent_circle.ideal").T
    hp = eliminate(H + T, X4)
    expected = U.poly("-1/2*u1^5 - 1/2*u1^3*u2^2 + u1^4")
    assert len(hp.generators) == 1
    assert hp.generators[0].canonical() == expected.canonical()
    assert dimension(H + hp)[0] == 1


def test_eliminate_soundness_and_completeness():
    I = Ideal([XYA.poly("x - a*y"), XYA.poly("x^2 - a")])
    J = eliminate(I, ["x"])
    for g in J.generators:
        assert "x" not in g.support and I.contains(g)
    # y^2 a^2 - a lies in the contraction
    assert J.contains(XYA.poly("a^2*y^2 - a"))


def test_saturate_examples():
    assert saturate(Ideal([XA.poly("x*a")]), XA.poly("a")) == Ideal([XA.poly("x")])
    I = Ideal([U.poly("u2^3*x1")])
    S = saturate(I, U.poly("u2"))
    assert S == Ideal([U.poly("x1")])
    for g in S.generators:
        assert quotient_member_power(U.poly("u2"), g, I) is not None


def test_saturate_zero():
    with pytest.raises(ZeroPolynomialError):
        saturate(Ideal([XY.poly("x")]), XY.zero())


def test_saturate_ideal_examples():
    I = Ideal([XA.poly("x*a")])
    assert saturate_ideal(I, Ideal.unit(XA)) == I
    R = ParametricRing(("x", "y"), ("a",))
    assert saturate_ideal(Ideal([R.poly("x*a"), R.poly("y*a")]), Ideal([R.poly("a")])) == Ideal(
        [R.poly("x"), R.poly("y")]
    )
    with pytest.raises(ValueError):
        saturate_ideal(I, Ideal.zero(XA))


def test_tangent_double_saturation(problem):
    H, T = problem("tangent_circle.ideal").H, problem("tangent_circle.ideal").T
    S = saturate_ideal(H, T)
    assert not is_trivial(S)
    assert is_trivial(saturate_ideal(H, S))


def test_tangent_nondegeneracy(problem):
    H, T = problem("tangent_circle.ideal").H, problem("tangent_circle.ideal").T
    hp = eliminate(H + T, X4)
    H2 = eliminate(saturate_ideal(H + hp, T), X4 + ("u1",))
    assert H2 == Ideal([U.poly("u2^3")])
    assert radical_member(U.poly("u2"), H2)


def test_intersect_examples():
    assert intersect(Ideal([XY.poly("x")]), Ideal([XY.poly("y")])) == Ideal([XY.poly("x*y")])
    assert intersect(Ideal([XY.poly("x")]), Ideal([XY.poly("x")])) == Ideal([XY.poly("x")])
    K = intersect(Ideal([U.poly("u1 - 2")]), Ideal([U.poly("u1"), U.poly("u2")]))
    assert K.contains(U.poly("(u1 - 2)*u1")) and K.contains(U.poly("(u1 - 2)*u2"))
    assert not K.contains(U.poly("u1"))


def test_intersect_ring_mismatch():
    with pytest.raises(RingMismatchError):
        intersect(Ideal([XY.poly("x")]), Ideal([XA.poly("x")]))


def test_product_and_intersection_saturate_alike():
    H = Ideal([U.poly("u1*x1 - u2*x2"), U.poly("(u1 - 2)*x3")])
    A, B = Ideal([U.poly("u1 - 2")]), Ideal([U.poly("u1"), U.poly("u2")])
    assert saturate_ideal(H, A * B) == saturate_ideal(H, intersect(A, B))


def test_radical_member_examples():
    assert radical_member(XY.poly("x"), Ideal([XY.poly("x^2")]))
    assert radical_member(U.poly("u2"), Ideal([U.poly("u2^3")]))
    assert not radical_member(XY.poly("x"), Ideal([XY.poly("y")]))


def test_is_trivial_examples():
    assert is_trivial(Ideal([XY.poly("x"), XY.poly("1 - x")]))
    assert not is_trivial(Ideal.zero(XY))


@settings(max_examples=25)
@given(polys(RING_XY, max_terms=2, max_deg=2, nonzero=True), polys(RING_XY, max_terms=2, max_deg=2, nonzero=True))
def test_saturate_idempotent_and_contains(f, g):
    I = Ideal([f * g])
    S = saturate(I, g)
    assert saturate(S, g) == S
    assert I.issubset(S)


@settings(max_examples=25)
@given(
    polys(RING_XY, max_terms=2, max_deg=2, nonzero=True),
    st.lists(polys(RING_XY, max_terms=2, max_deg=2, nonzero=True), min_size=1, max_size=2),
    st.integers(-3, 3).filter(bool),
)
def test_radical_member_invariance(f, gens, c):
    I = Ideal(gens)
    r = radical_member(f, I)
    assert radical_member(f * f, I) == r
    assert radical_member(f * c, I) == r


@settings(max_examples=20)
@given(
    polys(RING_XYZ, max_terms=2, max_deg=2, nonzero=True),
    polys(RING_XYZ, max_terms=2, max_deg=2, nonzero=True),
    polys(RING_XYZ, max_terms=2, max_deg=2, nonzero=True),
)
def test_intersect_commutative_associative(f, g, h):
    I, J, K = Ideal([f]), Ideal([g]), Ideal([h])
    assert intersect(I, J) == intersect(J, I)
    assert intersect(intersect(I, J), K) == intersect(I, intersect(J, K))
    for p in intersect(I, J).generators:
        assert I.contains(p) and J.contains(p)


@settings(max_examples=25)
@given(polys(XA, max_terms=2, max_deg=2, nonzero=True), st.integers(-4, 4))
def test_saturate_ideal_pointwise(g, av):
    # points of V(I) outside V(J) stay on V(I : J^inf)
    I = Ideal([XA.poly("x - a") * g])
    J = Ideal([g])
    S = saturate_ideal(I, J)
    pt = {"x": av, "a": av}
    if g.evaluate(pt) != 0:
        assert all(s.evaluate(pt) == 0 for s in S.generators)
    assert I.issubset(S)
