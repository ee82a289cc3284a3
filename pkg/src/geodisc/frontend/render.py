"""Text, JSON and DOT renderings of Groebner systems and discovery reports."""

from __future__ import annotations

import json

from ..cgs import GroebnerSystem, Segment
from ..discover import DiscoveryReport


def _lpp_text(s: Segment) -> str:
    return "[" + ", ".join(s.lpp_strings()) + "]"


def _basis_text(s: Segment) -> str:
    return "[" + ", ".join(str(b) for b in s.basis) + "]"


def _region_text(s: Segment) -> list[str]:
    return [c.describe() for c in s.region]


def _table(gs: GroebnerSystem, report: DiscoveryReport | None) -> str:
    rows = [("lpp", "basis", "region")]
    for s in gs.segments:
        cells = _region_text(s)
        rows.append((_lpp_text(s), _basis_text(s), cells[0] if cells else ""))
        for c in cells[1:]:
            rows.append(("", "", "u " + c))
    w0 = max(len(r[0]) for r in rows)
    w1 = max(len(r[1]) for r in rows)
    lines = []
    for k, (a, b, c) in enumerate(rows):
        lines.append(f"{a:<{w0}} | {b:<{w1}} | {c}".rstrip())
        if k == 0:
            lines.append("-" * (w0 + 1) + "+" + "-" * (w1 + 2) + "+" + "-" * 8)
    if report is not None:
        lines.append("")
        lines.append(f"parameters U: {', '.join(report.partition.parameters)}")
        cert = report.independence
        lines.append(f"independent: {cert.independent} (dim H = {cert.dim})")
        lines.append("H': " + ", ".join(str(g) for g in report.hprime.generators) if not report.hprime.is_zero else "H': 0")
        for s, verdict in report.segments:
            lines.append(f"  {_lpp_text(s)}: {s.classification}, {verdict}")
        if report.nondegeneracy is not None:
            gens = report.nondegeneracy.generators
            lines.append(
                f"H'' over {', '.join(report.partition.subparameters)}: "
                + (", ".join(str(g) for g in gens) if gens else "0")
            )
        if report.complementary is not None:
            lines.append(f"complementary conditions exist (experimental): {report.complementary}")
        if report.statement_class is not None:
            lines.append(f"statement: {report.statement_class}")
        for cell, ok in report.proofs:
            lines.append(f"  proof on {cell.describe()}: {'holds' if ok else 'fails'}")
    return "\n".join(lines) + "\n"


def _segment_json(s: Segment) -> dict:
    return {
        "lpp": s.lpp_strings(),
        "basis": [str(b) for b in s.basis],
        "cells": [c.as_json() for c in s.region],
        "classification": str(s.classification),
    }


def _json(gs: GroebnerSystem | None, report: DiscoveryReport | None) -> str:
    doc = {
        "ring": gs.ring.describe() if gs is not None else {},
        "segments": [_segment_json(s) for s in gs.segments] if gs is not None else [],
        "hprime": [],
        "statement_class": None,
        "verdicts": [],
        "nondegeneracy": None,
    }
    if report is not None:
        doc["hprime"] = [str(g) for g in report.hprime.generators]
        doc["statement_class"] = str(report.statement_class) if report.statement_class else None
        doc["verdicts"] = [v for _, v in report.segments]
        doc["nondegeneracy"] = (
            [str(g) for g in report.nondegeneracy.generators] if report.nondegeneracy is not None else None
        )
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot(gs: GroebnerSystem) -> str:
    lines = ["digraph cgs {", "  node [shape=box];"]
    root = "ideal"
    if gs.ideal is not None:
        label = "(" + ", ".join(str(g) for g in gs.ideal.generators) + ")"
    else:
        label = "I"
    lines.append(f"  {root} [label={_quote(label)}, color=red];")
    for i, s in enumerate(gs.segments):
        node = f"lpp{i}"
        lines.append(f"  {node} [label={_quote(_lpp_text(s))}, color=red];")
        lines.append(f"  {root} -> {node};")
        for j, c in enumerate(s.region):
            leaf = f"cell{i}_{j}"
            lines.append(f"  {leaf} [label={_quote(c.describe())}, color=blue];")
            lines.append(f"  {node} -> {leaf};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_report(obj: GroebnerSystem | DiscoveryReport | None, fmt: str = "table") -> str:
    """Render a system or a report as ``table``, ``json`` or ``dot``."""
    report = obj if isinstance(obj, DiscoveryReport) else None
    gs = report.gs if report is not None else obj
    if fmt == "json":
        return _json(gs, report)
    if gs is None:
        return "digraph cgs {\n}\n" if fmt == "dot" else "lpp | basis | region\n"
    if fmt == "dot":
        return _dot(gs)
    if fmt == "table":
        return _table(gs, report)
    raise ValueError(f"unknown format {fmt!r}")
