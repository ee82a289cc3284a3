import json

import pydot
import pytest
from hypothesis import given

from geodisc.cgs import GroebnerSystem, compute_cgs
from geodisc.frontend.cli import main
from geodisc.frontend.geometry import compile_geometry, parse_geometry
from geodisc.frontend.ideal_file import DuplicateDeclarationError, parse_ideal_file
from geodisc.frontend.parser import ParseError, UndeclaredSymbolError, parse_polynomial
from geodisc.frontend.render import render_report
from geodisc.gb import Ideal, clear_cache
from geodisc.poly import ParametricRing
from strategies import RING_GREVLEX, RING_XY_A, polys

from conftest import PROBLEMS

U = ParametricRing(("x1", "x2", "x3", "x4"), ("u1", "u2"))


# -- polynomial grammar -----------------------------------------------------------


def test_parse_basic():
    R = ParametricRing(("x", "y"), ("a",))
    assert parse_polynomial("(x + a)^2 - 1/2*y", R) == R.poly("x^2 + 2*x*a + a^2 - 1/2*y")
    assert parse_polynomial("-x", R) == R.poly("0 - x")


@pytest.mark.parametrize(
    "text, col",
    [("x y", 3), ("x + ", 5), ("x^-1", 3), ("2/0", 3), ("(x", 3)],
)
def test_parse_errors_carry_position(text, col):
    R = ParametricRing(("x", "y"), ())
    with pytest.raises(ParseError) as e:
        parse_polynomial(text, R)
    assert e.value.line == 1
    assert e.value.column == col


def test_parse_undeclared_and_reserved():
    R = ParametricRing(("x",), ("a",))
    with pytest.raises(UndeclaredSymbolError):
        parse_polynomial("x + b", R)
    with pytest.raises(ParseError):
        parse_polynomial("@t0 + x", R)


@given(polys(RING_XY_A, max_terms=4))
def test_print_parse_roundtrip(f):
    assert parse_polynomial(str(f), f.ring) == f


@given(polys(RING_GREVLEX, max_terms=4))
def test_print_parse_roundtrip_grevlex(f):
    assert parse_polynomial(str(f), f.ring) == f


# -- ideal files -----------------------------------------------------------------


def test_ideal_file_conics():
    prob = parse_ideal_file((PROBLEMS / "singular_conics.ideal").read_text())
    assert prob.ring.variables == ("x", "y") and prob.ring.parameters == ("a", "b", "c", "d")
    assert len(prob.H.generators) == 3 and prob.T.is_zero
    assert prob.U == ("a", "b", "c", "d") and prob.Uprime is None


def test_ideal_file_undeclared():
    with pytest.raises(UndeclaredSymbolError) as e:
        parse_ideal_file("params = [a]; vars = [x]; H = [a*x - b];")
    assert (e.value.line, e.value.column) == (1, 38)


def test_ideal_file_errors():
    with pytest.raises(ParseError, match="hypotheses required"):
        parse_ideal_file("ring vars = [x] params = [a]; H = [];")
    with pytest.raises(DuplicateDeclarationError):
        parse_ideal_file("ring vars = [x, x] params = [a]; H = [x];")
    with pytest.raises(DuplicateDeclarationError):
        parse_ideal_file("ring vars = [x] params = [a]; H = [x]; H = [a];")
    with pytest.raises(ParseError, match="reserved"):
        parse_ideal_file("ring vars = [@t0] params = [a]; H = [a];")
    with pytest.raises(ParseError, match="only involve parameters"):
        parse_ideal_file("ring vars = [x] params = [a]; H = [x]; null = [x - a];")
    with pytest.raises(ParseError) as e:
        parse_ideal_file("ring vars = [x] params = [a];\nH = [x + ];")
    assert e.value.line == 2
    with pytest.raises(ParseError):
        parse_ideal_file("ring vars = [x] params = [a]; H = [x]")


def test_ideal_file_constraints_and_orders():
    prob = parse_ideal_file((PROBLEMS / "skaters.ideal").read_text())
    assert len(prob.null) == 2 and len(prob.nonnull) == 3
    prob = parse_ideal_file("ring vars = [x, y] params = [a]; order vars = grevlex; H = [x*y^2 + x^2]; U = [a];")
    assert prob.ring.variable_order == "grevlex"
    assert str(prob.H.generators[0]) == "x*y^2 + x^2"


# -- geometry --------------------------------------------------------------------


TANGENT_HEAD = """
point A = (u1, u2) free;
point E = (x1, x2) dep;
point F = (x3, x4) dep;
"""


def _compile(body, head=TANGENT_HEAD):
    return compile_geometry("var x1, x2, x3, x4; param u1, u2;" + head + body)


def test_geometry_predicates():
    p = _compile("hypothesis perpendicular((E, A), (E, (1, 0)));")
    # equal up to sign
    assert p.H.generators[0] == -p.ring.poly("(x1 - 1)*(u1 - x1) + x2*(u2 - x2)")
    p = _compile("hypothesis collinear((0, 0), A, F);")
    assert p.H.generators[0] == p.ring.poly("u1*x4 - u2*x3")
    p = _compile("hypothesis lensq(E, (1, 0)) == 1;")
    assert p.H.generators[0] == p.ring.poly("(x1 - 1)^2 + x2^2 - 1")
    p = _compile("hypothesis on_circle(E, (1, 0), 1);")
    assert p.H.generators[0] == p.ring.poly("(x1 - 1)^2 + x2^2 - 1")
    p = _compile("hypothesis parallel((E, F), (A, (0, 0)));")
    assert p.H.generators[0] == p.ring.poly("(x3 - x1)*(0 - u2) - (x4 - x2)*(0 - u1)")
    p = _compile("hypothesis x1 + x2 == u1;")
    assert p.H.generators[0] == p.ring.poly("x1 + x2 - u1")
    p = _compile("hypothesis E == F;")
    assert set(p.H.generators) == {p.ring.poly("x1 - x3"), p.ring.poly("x2 - x4")}


def test_geometry_matches_ideal_file(problem):
    for name in ("tangent_circle", "aligned_points", "orthic_isosceles"):
        geo, raw = problem(name + ".geo"), problem(name + ".ideal")
        assert geo.ring == raw.ring
        assert geo.H == raw.H and geo.T == raw.T
        assert geo.U == raw.U and geo.Uprime == raw.Uprime


def test_geometry_renaming_invariant():
    text = (PROBLEMS / "tangent_circle.geo").read_text()
    renamed = text
    for old, new in (("A", "Pa"), ("E", "Pe"), ("F", "Pf"), ("C", "Pc"), ("D", "Pd")):
        renamed = renamed.replace(f"point {old} ", f"point {new} ")
        for ch in ",)":
            renamed = renamed.replace(f"{old}{ch}", f"{new}{ch}")
        renamed = renamed.replace(f"({old},", f"({new},").replace(f" {old},", f" {new},")
    assert renamed != text
    a, b = compile_geometry(text), compile_geometry(renamed)
    assert a.H == b.H and a.T == b.T


def test_geometry_infers_kinds():
    prog = parse_geometry("point P = (p, q); point X = (x, y) dep; hypothesis X == P;")
    assert prog.ring.parameters == ("p", "q") and prog.ring.variables == ("x", "y")


def test_geometry_errors():
    with pytest.raises(ParseError, match="hypotheses required"):
        parse_geometry("point X = (x, y) dep;")
    with pytest.raises(ParseError, match="planar"):
        parse_geometry("point X = (x, y, z) dep; hypothesis x == 0;")
    with pytest.raises(UndeclaredSymbolError):
        parse_geometry("point X = (x, y) dep; point Z = (w, 0) fixed; hypothesis x == 0;")
    with pytest.raises(UndeclaredSymbolError):
        parse_geometry("point X = (x, y) dep; hypothesis collinear(X, Y, X);")
    with pytest.raises(DuplicateDeclarationError):
        parse_geometry("point X = (x, y) dep; point X = (x, y) dep; hypothesis x == 0;")
    with pytest.raises(ParseError, match="reserved"):
        parse_geometry("point X = (@z, y) dep; hypothesis y == 0;")
    with pytest.raises(ParseError, match="missing ';'"):
        parse_geometry("point X = (x, y) dep; hypothesis x == 0")


def test_geometry_avoid_saturates():
    p = compile_geometry(
        "point X = (x, y) dep; point A = (a, b) free;"
        "hypothesis a*x == 0; hypothesis y == 0; avoid a == 0;"
    )
    assert p.H == Ideal([p.ring.poly("x"), p.ring.poly("y")])


# -- rendering ---------------------------------------------------------------------


def _gs(problem, name):
    prob = problem(name)
    I = prob.H + prob.T if prob.T.generators else prob.H
    return compute_cgs(I, prob.ring)


def test_render_table(problem):
    text = render_report(_gs(problem, "singular_conics.ideal"), "table")
    lines = text.splitlines()
    assert lines[0].split("|")[0].strip() == "lpp"
    lpps = {ln.split("|")[0].strip() for ln in lines[2:] if ln.split("|")[0].strip()}
    assert lpps == {"[1]", "[y, x]", "[x]"}


def test_render_json_empty_and_stable(problem):
    empty = json.loads(render_report(GroebnerSystem((), ParametricRing(("x",), ())), "json"))
    assert empty["segments"] == []
    assert json.loads(render_report(None, "json"))["segments"] == []
    gs = _gs(problem, "aligned_points.ideal")
    a, b = render_report(gs, "json"), render_report(_gs(problem, "aligned_points.ideal"), "json")
    assert a == b
    doc = json.loads(a)
    assert {"ring", "segments", "hprime", "statement_class"} <= set(doc)
    seg = doc["segments"][0]
    assert set(seg) == {"lpp", "basis", "cells", "classification"}
    assert set(seg["cells"][0]) == {"equations", "holes"}


def test_render_dot_parses(problem):
    gs = _gs(problem, "aligned_points.ideal")
    (graph,) = pydot.graph_from_dot_data(render_report(gs, "dot"))
    names = [n.get_name() for n in graph.get_nodes()]
    assert sum(n.startswith("lpp") for n in names) == 3
    assert "ideal" in names
    cells = sum(len(s.region) for s in gs)
    assert sum(n.startswith("cell") for n in names) == cells
    assert len(graph.get_edges()) == 3 + cells


def test_render_unknown_format(problem):
    with pytest.raises(ValueError):
        render_report(_gs(problem, "toy_ax_b.ideal"), "yaml")


# -- command line ------------------------------------------------------------------


def test_cli_gb(capsys):
    assert main(["gb", str(PROBLEMS / "toy_ax_xy.ideal")]) == 0
    out = capsys.readouterr().out
    assert "# dimension" in out


def test_cli_cgs_json_and_dot(tmp_path, capsys):
    dot = tmp_path / "out.dot"
    assert main(["cgs", str(PROBLEMS / "toy_ax_b.ideal"), "--json", "--dot", str(dot), "--verify", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["segments"]) == 3
    assert pydot.graph_from_dot_data(dot.read_text())


def test_cli_cgs_no_merge(capsys):
    assert main(["cgs", str(PROBLEMS / "singular_conics.ideal"), "--no-merge", "--json"]) == 0
    assert len(json.loads(capsys.readouterr().out)["segments"]) >= 3


def test_cli_discover_and_prove(capsys):
    assert main(["discover", str(PROBLEMS / "tangent_circle.geo"), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["statement_class"] == "GenerallyFalse"
    assert doc["nondegeneracy"] == ["u2^3"]
    assert main(["prove", str(PROBLEMS / "undecidable.ideal")]) == 0
    assert capsys.readouterr().out.startswith("Undecidable")


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.ideal"
    bad.write_text("ring vars = [x] params = [a]; H = [x + ];")
    assert main(["gb", str(bad)]) == 1
    assert main(["gb", str(tmp_path / "missing.ideal")]) == 1
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 1
    assert main(["prove", str(PROBLEMS / "singular_conics.ideal")]) == 1
    # cached bases cost no pairs; a fresh process starts cold
    clear_cache()
    assert main(["cgs", str(PROBLEMS / "tangent_circle.ideal"), "--budget-pairs", "1"]) == 2
    assert main(["cgs", str(PROBLEMS / "toy_ax_b.ideal"), "--depth", "0"]) == 3
    capsys.readouterr()
