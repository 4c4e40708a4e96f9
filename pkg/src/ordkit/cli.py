"""Command line surface.

Exit codes: 0 success, 2 parse error, 3 mathematical precondition failure or
refuted verification (structured witness on stderr), so CI can distinguish
bad input from a failed theorem check.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .completion import completion_sidecar, dm_completion
from .congruence import (
    all_congruences,
    is_convex,
    is_strong,
    partition_from_json,
    partition_to_json,
    quotient,
)
from .errors import OrdkitError, ParseError
from .ordinal_sum import build_sum, load_sum_family, verify_sum_completion, verify_sum_secpc
from .poset import format_poset_text, load_poset, to_dot
from .reports import format_report
from .search import PREDICATES, find_counterexample, run_census
from .secpc import (
    classification_to_json,
    classify,
    format_classification,
    format_table_grid,
    sec_table,
    table_to_json,
)


def _poset_json(P, name):
    return {
        "name": name,
        "elements": list(P.names),
        "covers": [[P.names[a], P.names[b]] for a, b in P.hasse_covers()],
    }


def cmd_check(args) -> int:
    name, P = load_poset(args.input)
    rep = classify(P)
    if args.format == "json":
        print(json.dumps({"name": name, **classification_to_json(rep)}, indent=2))
    else:
        print(format_classification(rep, name), end="")
    return 0


def cmd_table(args) -> int:
    name, P = load_poset(args.input)
    T = sec_table(P)
    if args.format == "json":
        print(json.dumps(table_to_json(T), indent=2))
    else:
        print(format_table_grid(T), end="")
    return 0


def cmd_complete(args) -> int:
    name, P = load_poset(args.input)
    dm = dm_completion(P)
    sidecar = completion_sidecar(dm)
    text = format_poset_text(dm.lattice, f"DM_{name}")
    if args.format == "json":
        print(
            json.dumps(
                {"poset": _poset_json(dm.lattice, f"DM_{name}"), "cuts": sidecar["cuts"]},
                indent=2,
            )
        )
    else:
        print(text, end="")
    if args.sidecar:
        with open(args.sidecar, "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=2)
    return 0


def cmd_sum(args) -> int:
    family = load_sum_family(args.input)
    sp = build_sum(family)
    if args.format == "json":
        payload = {"poset": _poset_json(sp.poset, "sum")}
    else:
        print(format_poset_text(sp.poset, "sum"), end="")
    failed = False
    if args.verify_dm:
        rep = verify_sum_completion(family)
        failed |= not rep.passed
        if args.format == "json":
            payload["verify_dm"] = rep.to_json()
        else:
            print(format_report(rep))
    if args.verify_secpc:
        rep = verify_sum_secpc(family)
        failed |= not rep.passed
        dm = dm_completion(sp.poset)
        if args.format == "json":
            payload["verify_secpc"] = rep.to_json()
            payload["completion_table"] = table_to_json(sec_table(dm.lattice))
        else:
            print(format_report(rep))
            print(format_table_grid(sec_table(dm.lattice)), end="")
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    return 3 if failed else 0


def cmd_quotient(args) -> int:
    name, P = load_poset(args.input)
    with open(args.partition, "r", encoding="utf-8") as fh:
        part = partition_from_json(json.load(fh), P)
    T = sec_table(P)
    q = quotient(P, T, part)
    if args.format == "json":
        out = {"poset": _poset_json(q.poset, f"{name}_quotient")}
        out["one_class"] = q.poset.names[q.one_class]
        if q.star is not None:
            nm = q.poset.names
            out["star"] = [[nm[v] for v in row] for row in q.star]
        print(json.dumps(out, indent=2))
    else:
        print(format_poset_text(q.poset, f"{name}_quotient"), end="")
    return 0


def cmd_congruences(args) -> int:
    name, P = load_poset(args.input)
    T = sec_table(P)
    rows = []
    for theta in all_congruences(T):
        convex = is_convex(P, theta)[0]
        try:
            strong = is_strong(P, T, theta)[0]
        except OrdkitError:
            strong = False
        rows.append((theta, convex, strong))
    if args.format == "json":
        print(
            json.dumps(
                [
                    {**partition_to_json(theta, P), "convex": cv, "strong": st}
                    for theta, cv, st in rows
                ],
                indent=2,
            )
        )
    else:
        for theta, cv, st in rows:
            classes = " ".join(
                "{" + ",".join(P.names[x] for x in members) + "}"
                for members in theta.classes()
            )
            print(f"{classes} convex={'yes' if cv else 'no'} strong={'yes' if st else 'no'}")
    return 0


def cmd_enumerate(args) -> int:
    if args.predicate:
        witness = find_counterexample(args.n, args.predicate, jobs=args.jobs)
        if witness is None:
            print("absent")
        else:
            print(format_poset_text(witness, args.predicate.replace("-", "_")), end="")
        return 0
    censuses = [run_census(k, jobs=args.jobs) for k in range(1, args.n + 1)]
    if args.report_dir:
        from .report import write_census_report

        paths = write_census_report(censuses, args.report_dir)
        for kind, path in paths.items():
            print(f"{kind}: {path}")
    if args.format == "json":
        from .search import census_to_json

        print(json.dumps([census_to_json(c) for c in censuses], indent=2))
    else:
        from .report import census_summary_row

        for c in censuses:
            row = census_summary_row(c)
            print(
                f"n={row['n']}: {row['classes']} classes, "
                f"{row['sec_pc']} sec-pc, {row['strongly_sec_pc']} strongly, "
                f"{row['rel_pc']} rel-pc, {row['lattices']} lattices"
            )
    return 0


def cmd_export_dot(args) -> int:
    name, P = load_poset(args.input)
    text = to_dot(P, name)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordkit",
        description="Workbench for finite sectionally pseudocomplemented posets.",
    )
    parser.add_argument("--version", action="version", version=f"ordkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("check", help="classify a poset file")
    p.add_argument("input")
    add_format(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("table", help="print the section operation table")
    p.add_argument("input")
    add_format(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("complete", help="Dedekind-MacNeille completion")
    p.add_argument("input")
    p.add_argument("--sidecar", help="write the cut sidecar JSON to this path")
    add_format(p)
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("sum", help="build a generalized ordinal sum")
    p.add_argument("input")
    p.add_argument("--verify-dm", action="store_true", help="check the completion theorem")
    p.add_argument(
        "--verify-secpc", action="store_true", help="check the section complement theorem"
    )
    add_format(p)
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("quotient", help="quotient by a congruence partition")
    p.add_argument("input")
    p.add_argument("partition", help="partition JSON file")
    add_format(p)
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("congruences", help="list all congruences with flags")
    p.add_argument("input")
    add_format(p)
    p.set_defaults(func=cmd_congruences)

    p = sub.add_parser("enumerate", help="census of posets up to isomorphism")
    p.add_argument("n", type=int)
    p.add_argument("--predicate", choices=sorted(PREDICATES))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report-dir", help="write census.json/csv/png here")
    add_format(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("export-dot", help="Hasse diagram in DOT format")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)

    return parser


def _json_witness(witness):
    if witness is None:
        return None
    if isinstance(witness, (list, tuple)):
        return [_json_witness(w) for w in witness]
    if isinstance(witness, (str, int, float, bool)):
        return witness
    return str(witness)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OrdkitError as exc:
        payload = {
            "error": type(exc).__name__,
            "message": str(exc),
            "witness": _json_witness(exc.witness),
        }
        print(json.dumps(payload), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
