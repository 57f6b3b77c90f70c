"""Render every result type as text, JSON, LaTeX, or DOT.

All emitters are deterministic: iteration always follows stored insertion
order (which the builders sort) or an explicit sort, never raw set order,
and nothing here looks at the clock.  JSON carries polynomials as canonical
strings so they can be parsed back exactly.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .charts import FiberComponent
from .derivations import Derivation
from .errors import UsageError
from .mlcomb import CombNormalForm, MlReport, QHPData
from .poly import H, Poly, poly_str
from .presentation import (
    Presentation,
    expand_factors,
    gen_name,
    parent_var,
    q_factors,
    q_rel_factors,
    var_of,
)
from .transform import ChartExpansion, ConversionTrace
from .treedsl import TreeDocument, print_tree
from .verify import VerifyReport

_TRAILING_DIGITS = re.compile(r"([A-Za-z]+)(\d+)\Z")


def _latex_name(name: str) -> str:
    if "_" in name:
        base, _, sub = name.partition("_")
        return f"{base}_{{{sub}}}"
    m = _TRAILING_DIGITS.match(name)
    if m:
        return f"{m.group(1)}_{{{m.group(2)}}}"
    return name


def latex_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    chunks = []
    for i, (exp, coef) in enumerate(sorted(p.terms.items(), reverse=True)):
        neg = coef < 0
        mag = -coef if neg else coef
        factors = []
        if mag != 1 or not any(exp):
            if mag.denominator == 1:
                factors.append(str(mag))
            else:
                factors.append(f"\\tfrac{{{mag.numerator}}}{{{mag.denominator}}}")
        for v, e in zip(p.ring.vars, exp):
            if e == 0:
                continue
            name = _latex_name(v.name)
            factors.append(name if e == 1 else f"{name}^{{{e}}}")
        body = "\\,".join(factors)
        if i == 0:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f" - {body}" if neg else f" + {body}")
    return "".join(chunks)


def _rat(x: Fraction) -> str:
    return str(x)


def _json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


# -- trees ---------------------------------------------------------------


def _tree_rows(doc: TreeDocument) -> list[dict]:
    tree = doc.tree
    values = doc.data.labels if doc.kind == "labelled" else doc.data.weights
    key = "label" if doc.kind == "labelled" else "weight"
    rows = []
    for node in tree.nodes:
        row = {"id": node, "parent": tree.parent(node)}
        if node != tree.root:
            row[key] = _rat(values[node])
        rows.append(row)
    return rows


def _emit_tree(doc: TreeDocument, fmt: str) -> str:
    if fmt == "text":
        return print_tree(doc)
    if fmt == "json":
        return _json(
            {
                "kind": doc.kind,
                "name": doc.name,
                "root": doc.tree.root,
                "nodes": _tree_rows(doc),
            }
        )
    if fmt == "latex":
        key = "label" if doc.kind == "labelled" else "weight"
        lines = [
            "\\begin{tabular}{lll}",
            f"node & parent & {key} \\\\",
            "\\hline",
        ]
        for row in _tree_rows(doc):
            value = row.get(key, "--")
            parent = row["parent"] if row["parent"] is not None else "--"
            lines.append(
                f"{_latex_name(row['id'])} & {_latex_name(parent) if parent != '--' else '--'}"
                f" & ${value}$ \\\\"
            )
        lines.append("\\end{tabular}")
        return "\n".join(lines) + "\n"
    if fmt == "dot":
        return _tree_dot(doc)
    raise UsageError(f"unknown format {fmt!r}")


def _tree_dot(doc: TreeDocument) -> str:
    tree = doc.tree
    values = doc.data.labels if doc.kind == "labelled" else doc.data.weights
    lines = [f"digraph {doc.name} {{"]
    for node in tree.nodes:
        if doc.kind == "labelled" and node != tree.root:
            lines.append(f'  "{node}" [label="{node} : {values[node]}"];')
        else:
            lines.append(f'  "{node}" [label="{node}"];')
    for node in tree.nodes:
        for child in tree.children(node):
            if doc.kind == "weighted":
                lines.append(f'  "{node}" -> "{child}" [label="{values[child]}"];')
            else:
                lines.append(f'  "{node}" -> "{child}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- presentation ------------------------------------------------------------


def _presentation_sides(pres: Presentation) -> list[tuple[str, Poly, Poly]]:
    """(name, lhs, rhs) with generator == lhs - rhs, for display."""
    tree = pres.tree
    ring = pres.ring
    labels = pres.labelled.labels
    h = ring.var(H)
    out = []
    for name, _ in pres.generators():
        if name.startswith("D0_"):
            node = name[len("D0_") :]
            lhs = h * ring.var(var_of(tree, node))
            rhs = expand_factors(ring, q_factors(tree, labels, node))
        else:
            upper, node = name[len("D_") :].split("_", 1)
            c = tree.child_on_path(upper, node)
            lhs = (ring.var(parent_var(tree, upper)) - labels[c]) * ring.var(
                var_of(tree, node)
            )
            rhs = ring.var(var_of(tree, upper)) * expand_factors(
                ring, q_rel_factors(tree, labels, upper, node)
            )
        out.append((name, lhs, rhs))
    return out


def _emit_presentation(pres: Presentation, fmt: str) -> str:
    if fmt == "text":
        lines = ["variables: " + " ".join(v.name for v in pres.ring.vars)]
        for name, gen in pres.generators():
            lines.append(f"{name}: {poly_str(gen)}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return _json(
            {
                "kind": "presentation",
                "variables": [v.name for v in pres.ring.vars],
                "generators": [
                    {"name": name, "poly": poly_str(gen)}
                    for name, gen in pres.generators()
                ],
            }
        )
    if fmt == "latex":
        lines = ["\\begin{aligned}"]
        for name, lhs, rhs in _presentation_sides(pres):
            lines.append(f"{latex_poly(lhs)} &= {latex_poly(rhs)} \\\\")
        lines.append("\\end{aligned}")
        return "\n".join(lines) + "\n"
    if fmt == "dot":
        raise UsageError("dot output applies to trees; emit the tree document instead")
    raise UsageError(f"unknown format {fmt!r}")


# -- charts, fiber, derivation ------------------------------------------------


def _emit_charts(charts: list[ChartExpansion], fmt: str) -> str:
    if fmt == "text":
        lines = []
        for chart in charts:
            lines.append(f"chart over leaf {chart.leaf}:")
            for v, img in chart.images.items():
                lines.append(f"  {v.name} -> {poly_str(img)}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return _json(
            {
                "kind": "charts",
                "parameter": "T",
                "charts": [
                    {
                        "leaf": chart.leaf,
                        "images": {v.name: poly_str(img) for v, img in chart.images.items()},
                    }
                    for chart in charts
                ],
            }
        )
    if fmt == "latex":
        lines = []
        for chart in charts:
            lines.append(f"% leaf {chart.leaf}")
            lines.append("\\begin{aligned}")
            for v, img in chart.images.items():
                lines.append(f"{_latex_name(v.name)} &\\mapsto {latex_poly(img)} \\\\")
            lines.append("\\end{aligned}")
        return "\n".join(lines) + "\n"
    if fmt == "dot":
        raise UsageError("dot output applies to trees; emit the tree document instead")
    raise UsageError(f"unknown format {fmt!r}")


def _emit_fiber(components: list[FiberComponent], fmt: str) -> str:
    if fmt == "text":
        lines = []
        for comp in components:
            lines.append(
                f"component over leaf {comp.leaf} (parameter {comp.coordinate.name}):"
            )
            lines.append(
                "  relations: " + ", ".join(poly_str(r) for r in comp.ideal_relations)
            )
            for v, img in comp.point_map.items():
                lines.append(f"  {v.name} -> {poly_str(img)}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return _json(
            {
                "kind": "fiber",
                "components": [
                    {
                        "leaf": comp.leaf,
                        "coordinate": comp.coordinate.name,
                        "point_map": {
                            v.name: poly_str(img) for v, img in comp.point_map.items()
                        },
                        "ideal_relations": [poly_str(r) for r in comp.ideal_relations],
                    }
                    for comp in components
                ],
            }
        )
    if fmt == "latex":
        lines = []
        for comp in components:
            lines.append(f"% component over leaf {comp.leaf}")
            lines.append("\\begin{aligned}")
            for v, img in comp.point_map.items():
                lines.append(f"{_latex_name(v.name)} &\\mapsto {latex_poly(img)} \\\\")
            lines.append("\\end{aligned}")
        return "\n".join(lines) + "\n"
    if fmt == "dot":
        raise UsageError("dot output applies to trees; emit the tree document instead")
    raise UsageError(f"unknown format {fmt!r}")


def _emit_derivation(d: Derivation, fmt: str) -> str:
    images = [(v, d.images[v]) for v in d.presentation.ring.vars]
    if fmt == "text":
        lines = [f"m: {d.m}", f"multiplier: {poly_str(d.multiplier)}"]
        for v, img in images:
            lines.append(f"D({v.name}) = {poly_str(img)}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return _json(
            {
                "kind": "derivation",
                "m": d.m,
                "multiplier": poly_str(d.multiplier),
                "images": {v.name: poly_str(img) for v, img in images},
            }
        )
    if fmt == "latex":
        lines = ["\\begin{aligned}"]
        for v, img in images:
            lines.append(f"{_latex_name(v.name)} &\\mapsto {latex_poly(img)} \\\\")
        lines.append("\\end{aligned}")
        return "\n".join(lines) + "\n"
    if fmt == "dot":
        raise UsageError("dot output applies to trees; emit the tree document instead")
    raise UsageError(f"unknown format {fmt!r}")


# -- conversion trace ----------------------------------------------------------


def _emit_trace(trace: ConversionTrace, fmt: str) -> str:
    if fmt == "text":
        lines = [f"direction: {trace.direction}"]
        for s in trace.steps:
            lines.append(
                f"{s.node}: value {s.value} via leaf {s.leaf} "
                f"(slope {s.slope}, offset {s.offset})"
            )
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return _json(
            {
                "kind": "conversion-trace",
                "direction": trace.direction,
                "steps": [
                    {
                        "node": s.node,
                        "leaf": s.leaf,
                        "slope": _rat(s.slope),
                        "offset": _rat(s.offset),
                        "value": _rat(s.value),
                    }
                    for s in trace.steps
                ],
            }
        )
    raise UsageError("conversion traces support text and json output")


# -- comb and quotient data ------------------------------------------------------


def _emit_ml(report: MlReport, fmt: str) -> str:
    if fmt == "text":
        lines = [
            f"comb: {'yes' if report.comb else 'no'}",
            f"ml trivial: {'yes' if report.trivial else 'no'}",
        ]
        if report.normal_form is not None:
            nf = report.normal_form
            lines.append(f"normal form (n = {nf.n}):")
            for i, lvl in enumerate(nf.levels, start=1):
                lines.append(
                    f"  level {i}: P = {poly_str(lvl.full)}, root {lvl.root}, "
                    f"cofactor {poly_str(lvl.cofactor)}"
                )
        if report.equations is not None:
            lines.append("equations:")
            for name, gen in report.equations:
                lines.append(f"  {name}: {poly_str(gen)}")
        if report.ordinary is None:
            lines.append("ordinary form: not applicable")
        else:
            n, p = report.ordinary
            lines.append(f"ordinary form: n = {n}, P = {poly_str(p)}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        nf = None
        if report.normal_form is not None:
            nf = {
                "n": report.normal_form.n,
                "levels": [
                    {
                        "poly": poly_str(lvl.full),
                        "root": _rat(lvl.root),
                        "cofactor": poly_str(lvl.cofactor),
                    }
                    for lvl in report.normal_form.levels
                ],
            }
        equations = None
        if report.equations is not None:
            equations = [
                {"name": name, "poly": poly_str(gen)} for name, gen in report.equations
            ]
        ordinary = None
        if report.ordinary is not None:
            ordinary = {"n": report.ordinary[0], "poly": poly_str(report.ordinary[1])}
        return _json(
            {
                "kind": "ml",
                "comb": report.comb,
                "trivial": report.trivial,
                "normal_form": nf,
                "equations": equations,
                "ordinary_form": ordinary,
            }
        )
    if fmt == "latex":
        lines = ["\\begin{aligned}"]
        for name, gen in report.equations or []:
            lines.append(f"0 &= {latex_poly(gen)} \\\\")
        lines.append("\\end{aligned}")
        return "\n".join(lines) + "\n"
    raise UsageError("ml reports support text, json, and latex output")


def _emit_qhp(data: QHPData, fmt: str) -> str:
    if fmt == "text":
        x, t, z = data.action_exponents
        lines = [
            f"surface: {poly_str(data.surface)}",
            f"group order m: {data.m}",
            f"exponents on (x, t, z): {x}, {t}, {z}",
            "divisibility n | m: ok",
            "coprimality gcd(q, m/n) = 1: ok",
            f"invariance q*n = 0 (mod m): {'ok' if data.invariance_ok else 'FAILS'}",
        ]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return _json(
            {
                "kind": "qhp",
                "m": data.m,
                "n": data.n,
                "q": data.q,
                "surface": poly_str(data.surface),
                "action_exponents": list(data.action_exponents),
                "conditions": {
                    "divisibility": True,
                    "coprimality": True,
                    "invariance_congruence": data.invariance_ok,
                },
            }
        )
    if fmt == "latex":
        return f"$ {latex_poly(data.surface)} = 0 $\n"
    raise UsageError("quotient data supports text, json, and latex output")


# -- verification reports ----------------------------------------------------------


def _emit_report(report: VerifyReport, fmt: str) -> str:
    if fmt == "text":
        lines = []
        for c in report.checks:
            status = "PASS" if c.ok else "FAIL"
            suffix = f": {c.detail}" if (c.detail and not c.ok) else ""
            lines.append(f"{status} {c.name} [{c.target}]{suffix}")
        passed = sum(1 for c in report.checks if c.ok)
        lines.append(
            f"{'ok' if report.ok else 'FAILED'}: {passed}/{len(report.checks)} checks passed"
        )
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return _json(
            {
                "kind": "verify",
                "ok": report.ok,
                "checks": [
                    {
                        "name": c.name,
                        "target": c.target,
                        "ok": c.ok,
                        "detail": c.detail,
                    }
                    for c in report.checks
                ],
            }
        )
    raise UsageError("verification reports support text and json output")


def emit(obj: object, fmt: str = "text") -> str:
    """Render a result object in the requested format."""
    if fmt not in ("text", "json", "latex", "dot"):
        raise UsageError(f"unknown format {fmt!r}")
    if isinstance(obj, TreeDocument):
        return _emit_tree(obj, fmt)
    if isinstance(obj, Presentation):
        return _emit_presentation(obj, fmt)
    if isinstance(obj, Derivation):
        return _emit_derivation(obj, fmt)
    if isinstance(obj, ConversionTrace):
        return _emit_trace(obj, fmt)
    if isinstance(obj, MlReport):
        return _emit_ml(obj, fmt)
    if isinstance(obj, QHPData):
        return _emit_qhp(obj, fmt)
    if isinstance(obj, VerifyReport):
        return _emit_report(obj, fmt)
    if isinstance(obj, list) and obj and isinstance(obj[0], ChartExpansion):
        return _emit_charts(obj, fmt)
    if isinstance(obj, list) and obj and isinstance(obj[0], FiberComponent):
        return _emit_fiber(obj, fmt)
    raise UsageError(f"cannot emit object of type {type(obj).__name__}")
