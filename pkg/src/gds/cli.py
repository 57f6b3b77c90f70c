"""Command line front end.

Every subcommand reads a tree document from a file (or stdin via ``-``),
except ``qhp`` (numeric arguments) and ``corpus`` (built-in trees).  Output
is deterministic for a fixed input and seed: iteration orders are pinned and
no timestamps are emitted.  Exit codes: 0 on success, 1 when a verification
fails, 2 on parse or validation errors, 3 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .corpus import CORPUS
from .charts import charts_for, fiber_components
from .derivations import build_derivation
from .emit import emit
from .errors import CheckError, InputError, ParseError, UsageError, ValidationError
from .mlcomb import ml_report, qhp_quotient_data
from .poly import H, Ring, parse_poly
from .presentation import build_presentation
from .transform import labelled_to_weighted, weighted_to_labelled
from .treedsl import TreeDocument, parse_tree, print_tree
from .trees import LabelledTree
from .verify import checks_for_document, run_verify, VerifyReport


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise UsageError(message)


def _read_document(path: str) -> TreeDocument:
    if path == "-":
        text = sys.stdin.read()
    else:
        p = Path(path)
        if not p.exists():
            raise UsageError(f"no such file: {path}")
        text = p.read_text()
    return parse_tree(text)


def _labelled(doc: TreeDocument) -> LabelledTree:
    if doc.kind == "labelled":
        return doc.data
    lt, _, _ = weighted_to_labelled(doc.data)
    return lt


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _add_io(sub: argparse.ArgumentParser, formats=("text", "json", "latex", "dot")) -> None:
    sub.add_argument("input", help="tree file, or - for stdin")
    sub.add_argument(
        "--format",
        "-f",
        choices=formats,
        default="text",
        help="output format (default: text)",
    )
    sub.add_argument("--out", "-o", default=None, help="write output to this file")


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="gds",
        description="Polynomial surfaces from labelled trees: presentations, "
        "charts, derivations, and mechanical verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("equations", help="print the generators of the defining ideal")
    _add_io(p)

    p = sub.add_parser("convert", help="convert between labelled and weighted encodings")
    _add_io(p, formats=("text", "json", "latex", "dot"))
    p.add_argument(
        "--trace",
        action="store_true",
        help="emit the per-node recovery trace instead of the converted tree",
    )

    p = sub.add_parser("derivation", help="build the canonical locally nilpotent derivation")
    _add_io(p)
    p.add_argument("--m", type=int, default=None, help="h-exponent (default: tree height)")
    p.add_argument(
        "--g",
        default=None,
        help="multiplier, a polynomial in h with nonzero constant term (default: 1)",
    )

    p = sub.add_parser("fiber", help="decompose the fiber over h = 0")
    _add_io(p)

    p = sub.add_parser("charts", help="print the per-leaf chart expansions")
    _add_io(p)

    p = sub.add_parser("verify", help="run every mechanical check")
    _add_io(p, formats=("text", "json"))
    p.add_argument("--fuzz", type=int, default=0, help="also verify N seeded random trees")
    p.add_argument("--seed", type=int, default=0, help="seed for the fuzz stream")
    p.add_argument(
        "--parallel", action="store_true", help="fan the checks out over worker threads"
    )

    p = sub.add_parser("ml", help="comb criterion, normal form, and equations")
    _add_io(p, formats=("text", "json", "latex"))

    p = sub.add_parser("qhp", help="validate cyclic quotient data (m, n, q)")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("q", type=int)
    p.add_argument(
        "--format", "-f", choices=("text", "json", "latex"), default="text"
    )
    p.add_argument("--out", "-o", default=None)

    p = sub.add_parser("corpus", help="list, check, or write the built-in trees")
    p.add_argument("--write", default=None, metavar="DIR", help="write .tree files here")
    p.add_argument("--format", "-f", choices=("text", "json"), default="text")
    p.add_argument("--out", "-o", default=None)

    return parser


def _cmd_corpus(args) -> tuple[str, int]:
    import json as json_mod

    from .errors import GdsError

    rows = []
    ok = True
    for entry in CORPUS:
        if entry.expect_valid:
            doc = parse_tree(entry.text)
            checks = checks_for_document(doc, target=entry.name)
            good = all(c.ok for c in checks)
            status = "ok" if good else "FAILED"
            ok = ok and good
        else:
            try:
                parse_tree(entry.text)
            except (ParseError, ValidationError):
                status = "rejected as expected"
            else:
                status = "unexpectedly accepted"
                ok = False
        rows.append({"name": entry.name, "file": entry.filename, "status": status, "note": entry.note})
    if args.write is not None:
        out_dir = Path(args.write)
        out_dir.mkdir(parents=True, exist_ok=True)
        for entry in CORPUS:
            (out_dir / entry.filename).write_text(entry.text)
    if args.format == "json":
        text = json_mod.dumps({"kind": "corpus", "ok": ok, "entries": rows}, indent=2) + "\n"
    else:
        lines = [f"{row['name']}: {row['status']} ({row['note']})" for row in rows]
        lines.append("ok" if ok else "FAILED")
        text = "\n".join(lines) + "\n"
    return text, 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "qhp":
            data = qhp_quotient_data(args.m, args.n, args.q)
            _write(emit(data, args.format), args.out)
            return 0
        if args.command == "corpus":
            text, code = _cmd_corpus(args)
            _write(text, args.out)
            return code

        doc = _read_document(args.input)
        if args.command == "equations":
            pres = build_presentation(_labelled(doc))
            _write(emit(pres, args.format), args.out)
            return 0
        if args.command == "convert":
            if doc.kind == "labelled":
                wt, trace = labelled_to_weighted(doc.data)
                converted = TreeDocument("weighted", doc.name, wt)
            else:
                lt, _, trace = weighted_to_labelled(doc.data)
                converted = TreeDocument("labelled", doc.name, lt)
            obj = trace if args.trace else converted
            _write(emit(obj, args.format), args.out)
            return 0
        if args.command == "derivation":
            pres = build_presentation(_labelled(doc))
            g = None
            if args.g is not None:
                g = parse_poly(args.g, Ring([H]))
            d = build_derivation(pres, m=args.m, multiplier=g)
            _write(emit(d, args.format), args.out)
            return 0
        if args.command == "fiber":
            pres = build_presentation(_labelled(doc))
            _write(emit(fiber_components(pres), args.format), args.out)
            return 0
        if args.command == "charts":
            if doc.kind == "weighted":
                charts = charts_for(doc.data)
            else:
                wt, _ = labelled_to_weighted(doc.data)
                charts = charts_for(wt)
            _write(emit(charts, args.format), args.out)
            return 0
        if args.command == "verify":
            report = run_verify(doc, fuzz=args.fuzz, seed=args.seed, parallel=args.parallel)
            _write(emit(report, args.format), args.out)
            return 0 if report.ok else 1
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CheckError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
