"""Command line interface.

Exit codes: 0 all pass, 1 some claim or step failed, 2 inconclusive
results present, 3 input error.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .catalog import CatalogError, load_catalog, selfcheck_report
from .freeobject import is_isoterm, word_class_count
from .harness import (SearchSpec, parse_manifest, parse_monoid_expression,
                      run_manifest, witness_search)
from .identities import parse_proof_script, verify_proof_script
from .monoids import (aperiodicity, green, idempotents_central,
                      idempotents_commute, is_completely_regular, is_j_trivial)
from .render import render_manifest
from .satisfaction import DEFAULT_BUDGET
from .words import parse_word

SHIPPED_MANIFESTS = ("core-checks", "fig-a0vq", "fig-h", "fig-p", "fig-i",
                     "fig-k", "fig-y", "fig-z")


def _shipped(kind, name, suffix):
    item = resources.files("varcross").joinpath("data", kind, name + suffix)
    return item.read_text() if item.is_file() else None


def _load_manifest(arg):
    text = _shipped("manifests", arg, ".manifest")
    if text is not None:
        return parse_manifest(text, arg)
    path = Path(arg)
    return parse_manifest(path.read_text(), path.stem)


def _load_proof(arg):
    text = _shipped("proofs", arg, ".proof")
    if text is not None:
        return parse_proof_script(text, arg)
    path = Path(arg)
    return parse_proof_script(path.read_text(), path.stem)


def shipped_proof_names():
    proofs = resources.files("varcross").joinpath("data", "proofs")
    return [item.name[:-6] for item in sorted(proofs.iterdir(), key=lambda p: p.name)
            if item.name.endswith(".proof")]


def cmd_selfcheck(args):
    ok, lines = selfcheck_report()
    for line in lines:
        print(line)
    report = run_manifest(_load_manifest("core-checks"), jobs=args.jobs)
    for line in report.human_lines():
        print(line)
    if not ok:
        return 1
    return report.exit_code


def cmd_manifest(args):
    names = list(args.file)
    if args.all_shipped:
        names = [n for n in SHIPPED_MANIFESTS if n != "core-checks"] + names
    if not names:
        print("no manifest given; use --all-shipped or name one", file=sys.stderr)
        return 3
    exit_code = 0
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    for name in names:
        try:
            manifest = _load_manifest(name)
        except (OSError, ValueError) as exc:
            print(f"error loading {name}: {exc}", file=sys.stderr)
            return 3
        report = run_manifest(manifest, jobs=args.jobs, budget=args.budget)
        for line in report.human_lines(timings=args.timings):
            print(line)
        if out_dir:
            records = out_dir / f"{manifest.name}.records"
            records.write_text("\n".join(report.record_lines(timings=args.timings)) + "\n")
            render_manifest(manifest, report, out_dir / f"{manifest.name}.png")
        exit_code = max(exit_code, report.exit_code)
    return exit_code


def cmd_proof(args):
    names = list(args.file)
    if args.all_shipped:
        names = shipped_proof_names() + names
    if not names:
        print("no proof script given; use --all-shipped or name one", file=sys.stderr)
        return 3
    exit_code = 0
    for name in names:
        try:
            script = _load_proof(name)
        except (OSError, ValueError) as exc:
            print(f"error loading {name}: {exc}", file=sys.stderr)
            return 3
        report = verify_proof_script(script, budget=args.budget, lax=args.lax)
        for line in report.lines():
            print(line)
        if not report.valid:
            exit_code = max(exit_code, 1)
        if any(step.inconclusive for step in report.steps):
            exit_code = max(exit_code, 2)
    return exit_code


def cmd_probe(args):
    catalog = load_catalog()
    monoid = parse_monoid_expression(" ".join(args.expr), catalog)
    if args.what == "props":
        aper = aperiodicity(monoid)
        data = green(monoid)
        print(f"monoid {monoid.name}: order {monoid.order}")
        print(f"  identity {monoid.labels[monoid.identity]}"
              + (f", zero {monoid.labels[monoid.zero]}" if monoid.zero is not None else ", no zero"))
        print(f"  jtrivial {is_j_trivial(monoid)}")
        print(f"  aperiodic {aper.aperiodic}"
              + (f" at index {aper.index}" if aper.aperiodic
                 else f", witness {monoid.labels[aper.witness]}"))
        print(f"  completely regular {is_completely_regular(monoid)}")
        print(f"  idempotents commute {idempotents_commute(monoid)},"
              f" central {idempotents_central(monoid)}")
        print(f"  class counts: L={len(data.l_classes)} R={len(data.r_classes)}"
              f" J={len(data.j_classes)} H={len(data.h_classes)}")
        return 0
    word = parse_word(args.word)
    result = is_isoterm(monoid, word)
    print(f"{word} for var({monoid.name}): {result.status}"
          + (f" (second word {result.witness})" if result.witness else "")
          + f" [{result.states} states]")
    if result.status == "inconclusive":
        return 2
    count = word_class_count(monoid, word)
    print(f"  word class size: {count}")
    return 0


def _read_identities(path):
    from .identities import parse_identity
    out = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        label, body = line.split(":", 1) if ":" in line else (None, line)
        out.append(parse_identity(body, label.strip() if label else None))
    return out


def cmd_search(args):
    must_satisfy = _read_identities(args.satisfy) if args.satisfy else []
    must_fail = _read_identities(args.fail) if args.fail else []
    spec = SearchSpec(must_satisfy, must_fail, max_order=args.max_order)
    outcome = witness_search(spec)
    if outcome.monoid is None:
        kind = "inconclusive (budget)" if outcome.inconclusive else "none"
        print(f"no witness up to order {args.max_order}: {kind}"
              f" ({outcome.tables_tried} tables tried)")
        return 2 if outcome.inconclusive else 1
    monoid = outcome.monoid
    print(f"witness of order {monoid.order} after {outcome.tables_tried} tables:")
    for row in monoid.table:
        print("  " + " ".join(str(v) for v in row))
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="varcross",
                                     description="finite-monoid identity toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("selfcheck", help="validate the whole catalog")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_selfcheck)

    p = sub.add_parser("manifest", help="run claim manifests")
    p.add_argument("file", nargs="*", help="shipped manifest name or path")
    p.add_argument("--all-shipped", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=int, default=None,
                   help="satisfaction budget in evaluated products")
    p.add_argument("--out", help="directory for record files and figures")
    p.add_argument("--timings", action="store_true",
                   help="include wall-clock millis (records stop being reproducible)")
    p.set_defaults(func=cmd_manifest)

    p = sub.add_parser("proof", help="verify proof scripts")
    p.add_argument("file", nargs="*", help="shipped proof name or path")
    p.add_argument("--all-shipped", action="store_true")
    p.add_argument("--lax", action="store_true",
                   help="demote non-adjacent chain collisions to warnings")
    p.add_argument("--budget", type=int, default=10**6,
                   help="per-step match node budget")
    p.set_defaults(func=cmd_proof)

    p = sub.add_parser("probe", help="inspect a monoid expression")
    p.add_argument("what", choices=("props", "iso"))
    p.add_argument("expr", nargs="+", help="monoid expression")
    p.add_argument("--word", help="word for the isoterm probe")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("search", help="search small monoids for a witness")
    p.add_argument("--satisfy", help="file of identities that must hold")
    p.add_argument("--fail", help="file of identities that must fail")
    p.add_argument("--max-order", type=int, default=6)
    p.set_defaults(func=cmd_search)

    args = parser.parse_args(argv)
    if args.command == "probe" and args.what == "iso":
        if args.word is None and len(args.expr) >= 2:
            args.word = args.expr.pop()
        if args.word is None:
            parser.error("probe iso needs a word")
    try:
        return args.func(args)
    except CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
