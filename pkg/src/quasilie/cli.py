"""Command-line verification driver.

Exit codes: 0 all checks pass, 1 a mathematical identity failed, 2 input
error (bad file, bad document, or a dimension above the cap).
"""

from __future__ import annotations

import argparse
import sys

from .documents import (
    DocumentError,
    example_catalog,
    catalog_names,
    parse,
    report_to_json,
    run_check,
    run_double,
    run_rep_verify,
    serialize,
)

EXIT_OK = 0
EXIT_MATH_FAILURE = 1
EXIT_INPUT_ERROR = 2


def _add_common(sub):
    sub.add_argument("--max-dim", type=int, default=5, metavar="K",
                     help="refuse inputs of dimension above K (default 5)")
    sub.add_argument("--report", metavar="PATH", help="write the JSON report to PATH")
    sub.add_argument("--quiet", action="store_true", help="suppress the summary lines")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasilie",
        description="Verify quasi-Lie bialgebra structure-constant documents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="validate axioms and identity suites")
    p_check.add_argument("file")
    _add_common(p_check)

    p_double = sub.add_parser("double", help="build and verify the double; emit its document")
    p_double.add_argument("file")
    p_double.add_argument("--out", metavar="PATH", help="write the double's document to PATH")
    _add_common(p_double)

    p_rep = sub.add_parser("rep-verify", help="verify the action of the double and the module map")
    p_rep.add_argument("file")
    _add_common(p_rep)

    p_ex = sub.add_parser("example", help="show or emit a catalog fixture")
    p_ex.add_argument("name", help=f"one of: {', '.join(catalog_names())}")
    p_ex.add_argument("--emit", action="store_true", help="print the document instead of a summary")

    return parser


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    return parse(text)


def _finish(report: dict, args) -> int:
    if args.report:
        with open(args.report, "w", encoding="utf-8") as handle:
            handle.write(report_to_json(report))
    if not args.quiet:
        for check in report["checks"]:
            status = "ok" if check["passed"] else "FAIL"
            line = f"{status:4} {check['name']}"
            if not check["passed"] and check.get("detail"):
                line += f"  [{check['detail']}]"
            print(line)
        print("PASS" if report["ok"] else "FAIL")
    return EXIT_OK if report["ok"] else EXIT_MATH_FAILURE


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return _finish(run_check(_load(args.file), args.max_dim), args)
        if args.command == "double":
            report, emitted = run_double(_load(args.file), args.max_dim)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as handle:
                    handle.write(serialize(emitted))
            elif not args.quiet:
                print(serialize(emitted), end="")
            return _finish(report, args)
        if args.command == "rep-verify":
            return _finish(run_rep_verify(_load(args.file), args.max_dim), args)
        if args.command == "example":
            doc = example_catalog(args.name)
            if args.emit:
                print(serialize(doc), end="")
            else:
                print(f"{args.name}: dim {doc.dim}, basis {', '.join(doc.basis)}, mode {doc.mode}")
            return EXIT_OK
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
