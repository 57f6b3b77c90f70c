"""Run every mechanical check the library promises, over any tree.

A verification produces an ordered list of named PASS/FAIL results; nothing
here is sampled or approximate, so two runs over the same input (seed
included) produce identical reports.  Failures carry a short detail string.
Checks that cannot even start (for example a labelling that is not fine)
short-circuit the rest for that tree.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from . import charts as charts_mod
from . import derivations as deriv_mod
from .corpus import random_labelled_tree, random_weighted_tree
from .errors import GdsError
from .mlcomb import comb_equations, comb_normal_form, ml_trivial
from .poly import H, T, X0
from .presentation import (
    build_presentation,
    expand_factors,
    generator_values_at,
    incomparable_minor,
    incomparable_pairs,
    parent_var,
    q_factors,
    syzygy_check,
)
from .transform import labelled_to_weighted, sigma, weighted_to_labelled
from .treedsl import TreeDocument
from .trees import LabelledTree, WeightedTree


@dataclass
class CheckResult:
    name: str
    target: str
    ok: bool
    detail: str = ""


@dataclass
class VerifyReport:
    ok: bool
    checks: list[CheckResult] = field(default_factory=list)


def _run(
    out: list[CheckResult], target: str, name: str, fn: Callable[[], list[str] | None]
) -> bool:
    try:
        failures = fn()
    except GdsError as exc:
        out.append(CheckResult(name, target, False, str(exc)))
        return False
    if failures:
        out.append(CheckResult(name, target, False, "; ".join(failures[:3])))
        return False
    out.append(CheckResult(name, target, True))
    return True


def checks_for_labelled(
    lt: LabelledTree,
    target: str,
    deep: bool = True,
    wt: WeightedTree | None = None,
) -> list[CheckResult]:
    """Full check battery for one labelled tree.

    ``wt`` may hand in the already-computed weight recovery for ``lt``; the
    conversion is deterministic, so this only saves time.
    """
    out: list[CheckResult] = []
    tree = lt.tree

    if not _run(out, target, "fine-labelling", lambda: (lt.require_fine(), None)[1]):
        return out

    pres = build_presentation(lt)
    expected = len(tree.internal_nodes()) + sum(
        len(tree.ancestors(e)) for e in tree.internal_nodes()
    )
    _run(
        out,
        target,
        "presentation",
        lambda: []
        if len(pres.generators()) == expected
        else [f"expected {expected} generators, built {len(pres.generators())}"],
    )
    _run(out, target, "syzygies", lambda: syzygy_check(pres))

    def minors() -> list[str]:
        for a, b in incomparable_pairs(tree):
            incomparable_minor(pres, a, b)
        return []

    _run(out, target, "incomparable-minors", minors)
    _run(
        out,
        target,
        "generic-trivialization",
        lambda: charts_mod.trivialization_failures(pres),
    )

    if wt is None:
        wt, _ = labelled_to_weighted(lt)
    lt_back, chart_list, _ = weighted_to_labelled(wt)

    def round_trip() -> list[str]:
        failures = []
        if lt_back != lt:
            failures.append("labels changed after a round trip through weights")
            wt_back, _ = labelled_to_weighted(lt_back)
        else:
            # equal input to a deterministic conversion; reuse the result
            wt_back = wt
        if wt_back != wt:
            failures.append("weights changed after a round trip through labels")
        return failures

    _run(out, target, "round-trip", round_trip)

    def chart_embedding() -> list[str]:
        # the h-leading family is evaluated directly; the ancestor family
        # follows once the syzygies hold (checked above), because h times an
        # ancestor generator is a combination of h-leading ones and the
        # chart ring is an integral domain where h is not zero
        failures = []
        for chart in chart_list:
            ring = chart.images[X0].ring
            h = ring.var(H)
            for name, value in generator_values_at(pres, chart.images, h, top_only=True):
                if not value.is_zero():
                    failures.append(f"{name} survives on the chart over {chart.leaf!r}")
        return failures

    _run(out, target, "chart-embedding", chart_embedding)

    def chart_shape() -> list[str]:
        failures = []
        for chart in chart_list:
            ring = chart.images[X0].ring
            h = ring.var(H)
            expected_x0 = h ** tree.level(chart.leaf) * ring.var(T) + sigma(
                wt, chart.leaf, ring
            )
            if chart.images[X0] != expected_x0:
                failures.append(f"X_0 expansion over {chart.leaf!r} has the wrong shape")
        return failures

    _run(out, target, "chart-shape", chart_shape)

    components = None

    def fiber() -> list[str]:
        nonlocal components
        components = charts_mod.fiber_components(pres, chart_list)
        if len(components) != len(tree.leaves()):
            return ["one component per leaf expected"]
        return []

    _run(out, target, "fiber-components", fiber)
    if components is not None:
        _run(
            out,
            target,
            "fiber-separation",
            lambda: charts_mod.separation_failures(pres, components),
        )
        _run(
            out,
            target,
            "leaf-cover",
            lambda: charts_mod.leaf_cover_failures(pres, components),
        )

    d = deriv_mod.build_derivation(pres)
    _run(out, target, "derivation-kernel", lambda: deriv_mod.kernel_failures(d))
    _run(out, target, "derivation-stability", lambda: deriv_mod.stability_failures(d))
    _run(
        out,
        target,
        "derivation-triangular",
        lambda: deriv_mod.triangularity_failures(d),
    )
    _run(out, target, "derivation-h-order", lambda: deriv_mod.h_order_failures(d))

    if deep:

        def nilpotency() -> list[str]:
            for v in pres.ring.vars:
                if v == H:
                    continue
                deriv_mod.nilpotency_trace(d, pres.ring.var(v))
            return []

        _run(out, target, "nilpotency", nilpotency)

    if components is not None:

        def fixed_points() -> list[str]:
            failures = []
            for comp in components:
                order = deriv_mod.fixed_point_order(d, comp)
                want = d.m - tree.level(comp.leaf)
                if order != want:
                    failures.append(
                        f"vanishing order {order} over {comp.leaf!r}, expected {want}"
                    )
            return failures

        _run(out, target, "fixed-points", fixed_points)

    def comb_consistency() -> list[str]:
        failures = []
        if ml_trivial(lt) != tree.is_comb():
            failures.append("comb criterion disagrees with the tree shape")
        if tree.is_comb() and tree.height >= 1:
            nf = comb_normal_form(lt)
            eqs = comb_equations(nf)
            want = nf.n + nf.n * (nf.n - 1) // 2
            if len(eqs) != want:
                failures.append(f"{len(eqs)} comb equations, expected {want}")
        return failures

    _run(out, target, "comb-criterion", comb_consistency)

    def ordinary_form() -> list[str]:
        from .mlcomb import ordinary_danielewski_form

        result = ordinary_danielewski_form(lt)
        if result is None:
            return []
        n, p = result
        chain = tree.internal_nodes()
        last = chain[-1]
        ring = pres.ring
        y = ring.var(parent_var(tree, last))
        collapsed = p.substitute({T: y}, ring=ring)
        q = expand_factors(ring, q_factors(tree, lt.labels, last))
        if q != collapsed:
            return ["collapsed equation disagrees with the presentation"]
        return []

    _run(out, target, "ordinary-form", ordinary_form)
    return out


def checks_for_weighted(
    wt: WeightedTree, target: str, deep: bool = True
) -> list[CheckResult]:
    """Forward conversion first, then the labelled battery on the result."""
    out: list[CheckResult] = []
    try:
        lt, _, _ = weighted_to_labelled(wt)
    except GdsError as exc:
        out.append(CheckResult("weights-to-labels", target, False, str(exc)))
        return out
    out.append(CheckResult("weights-to-labels", target, True))

    recovered: list[WeightedTree] = []

    def back() -> list[str]:
        wt_back, _ = labelled_to_weighted(lt)
        recovered.append(wt_back)
        return [] if wt_back == wt else ["weights changed after a round trip"]

    _run(out, target, "weights-round-trip", back)
    out.extend(
        checks_for_labelled(
            lt, target, deep=deep, wt=recovered[0] if recovered else None
        )
    )
    return out


def checks_for_document(
    doc: TreeDocument, target: str | None = None, deep: bool = True
) -> list[CheckResult]:
    target = target or doc.name
    if doc.kind == "labelled":
        return checks_for_labelled(doc.data, target, deep=deep)
    return checks_for_weighted(doc.data, target, deep=deep)


def run_verify(
    doc: TreeDocument,
    fuzz: int = 0,
    seed: int = 0,
    deep: bool = True,
    parallel: bool = False,
) -> VerifyReport:
    """Verify one document plus ``fuzz`` seeded random trees.

    The fuzz stream alternates labelled and weighted trees and depends only
    on ``seed``, so the whole report is reproducible byte for byte.
    """
    rng = random.Random(seed)
    jobs: list[tuple[str, Callable[[], list[CheckResult]]]] = [
        (doc.name, lambda: checks_for_document(doc, deep=deep))
    ]
    for k in range(fuzz):
        if k % 2 == 0:
            lt = random_labelled_tree(rng)
            jobs.append(
                (
                    f"fuzz-{k}",
                    lambda lt=lt, k=k: checks_for_labelled(lt, f"fuzz-{k}", deep=deep),
                )
            )
        else:
            wt = random_weighted_tree(rng)
            jobs.append(
                (
                    f"fuzz-{k}",
                    lambda wt=wt, k=k: checks_for_weighted(wt, f"fuzz-{k}", deep=deep),
                )
            )
    if parallel:
        with ThreadPoolExecutor() as pool:
            batches = list(pool.map(lambda job: job[1](), jobs))
    else:
        batches = [job[1]() for job in jobs]
    checks = [c for batch in batches for c in batch]
    return VerifyReport(all(c.ok for c in checks), checks)
