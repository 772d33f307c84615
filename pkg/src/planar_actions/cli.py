"""Command line interface.

Exit codes: 0 success, 1 verification failure (or a non-empty diff),
2 input error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import braid_action as ba
from . import census
from .catalog import Catalog, load_catalog_file, resolve_group
from .epimorphisms import count_epimorphisms, epimorphism_array
from .errors import PlanarActionsError
from .group_engine import element_words
from .signatures import Signature, genus_of, solve_signatures

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


def _load_catalog(path: str | None) -> Catalog | None:
    return load_catalog_file(path) if path else None


def cmd_solve_rh(args) -> int:
    for sig in solve_signatures(args.genus, args.order):
        print(sig)
    return EXIT_OK


def cmd_classify(args) -> int:
    catalog = _load_catalog(args.catalog)
    sig = Signature.parse(args.signature)
    G = resolve_group(args.group, catalog)
    if G.order != args.order:
        raise PlanarActionsError(f"group {args.group} has order {G.order}, not {args.order}")
    if genus_of(sig, args.order) != args.genus:
        raise PlanarActionsError(
            f"signature {sig} with order {args.order} gives genus {genus_of(sig, args.order)}, "
            f"not {args.genus}")
    print(f"genus {args.genus}  order {G.order}  signature {sig}  group {G.label}")
    if args.mode == "epi" and not args.reps:
        print(f"epi {count_epimorphisms(G, sig)}")
        return EXIT_OK
    E = epimorphism_array(G, sig)
    print(f"epi {len(E)}")
    part = None
    if args.mode in ("sequi", "equiv"):
        part = ba.strong_classes(G, E)
        print(f"sequi {part.count}")
    if args.mode == "equiv":
        part = ba.equivalence_classes(G, sig, E)
        print(f"equiv {part.count}")
    if args.reps:
        words = element_words(G)
        vectors = part.representatives if part is not None else [tuple(v) for v in E.tolist()]
        for v in vectors:
            print("  (" + ", ".join(map(str, v)) + ")  [" + ", ".join(words[y] for y in v) + "]")
    return EXIT_OK


def cmd_census(args) -> int:
    catalog = _load_catalog(args.catalog)
    options = census.CensusOptions(include_empty=args.include_empty, words=args.words)
    rows = census.run_census(args.genus_min, args.genus_max, catalog, options, jobs=args.jobs)
    text = census.dumps(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    catalog = _load_catalog(args.catalog)
    rows = census.load(args.infile)
    report = census.verify_rows(rows, catalog, deep=not args.shallow)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_diff(args) -> int:
    report = census.diff(args.a, args.b)
    for line in report.lines():
        print(line)
    print(f"{len(report.added)} added, {len(report.removed)} removed, "
          f"{len(report.changed)} changed")
    return EXIT_OK if report.empty else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planar-actions",
        description="Classify finite group actions on surfaces with planar signatures.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-rh", help="list admissible signatures for a genus and group order")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=cmd_solve_rh)

    p = sub.add_parser("classify", help="count and classify actions of one group")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--signature", required=True, help="e.g. 0;2,2,3,3")
    p.add_argument("--group", required=True,
                   help="built-in spec such as dihedral:5 or a catalog id order:id")
    p.add_argument("--catalog")
    p.add_argument("--mode", choices=("epi", "sequi", "equiv"), default="equiv")
    p.add_argument("--reps", action="store_true", help="print class representatives")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("census", help="run the census over a genus range")
    p.add_argument("--genus-min", type=int, required=True)
    p.add_argument("--genus-max", type=int, required=True)
    p.add_argument("--catalog")
    p.add_argument("--out")
    p.add_argument("--include-empty", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--words", action="store_true", help="add generator words to representatives")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("verify", help="re-check a census file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--catalog")
    p.add_argument("--shallow", action="store_true", help="skip checks that rebuild groups")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("diff", help="compare two census files")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_diff)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (PlanarActionsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
