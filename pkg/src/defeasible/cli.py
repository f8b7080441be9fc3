"""Command-line interface: ``defeasible <command> ...``.

Exit status is 0 on success, 1 when a check finds a mismatch or violation,
and 2 for usage or parse errors.  A theory argument of the form ``@name``
reads the bundled fixture ``name`` (see ``defeasible examples --list``).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .engine import ALL_TAGS, Tag, least_fixpoint
from .golden import FIXTURES, fixture_text, run_golden_checks
from .harness import (AdditionKind, GenConfig, SimCheckConfig, UnsupportedClaim,
                      check_coherence, check_inclusion_theorem, check_simulation, gen_theory,
                      shrink_counterexample)
from .syntax import LabelClash, add_theories, validate_theory
from .textformat import (ParseErrors, conclusions_to_json, parse_theory, print_conclusions,
                         print_theory)
from .transforms import TransformKind, transform

OK, FOUND, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path.startswith("@"):
        try:
            return fixture_text(path[1:])
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str, loose: bool = False):
    text = _read(path)
    try:
        return parse_theory(text, loose=loose)
    except ParseErrors as exc:
        raise UsageError("\n".join(f"{path}:{e}" for e in exc.errors)) from None


def _tag(text: str) -> Tag:
    try:
        return Tag.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _tags(values) -> frozenset:
    if not values:
        return ALL_TAGS
    tags = set()
    for value in values:
        for part in value.split(","):
            if part.strip():
                tags.add(_tag(part))
    return frozenset(tags)


def _kind(text: str) -> TransformKind:
    try:
        return TransformKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# -- commands ----------------------------------------------------------------

def cmd_parse(args, out) -> int:
    D = _load(args.theory, args.loose)
    if args.json:
        validation = validate_theory(D)
        out.write(json.dumps({"theory": print_theory(D), "notes": validation.notes}, indent=2) + "\n")
    else:
        out.write(print_theory(D))
    return OK


def cmd_infer(args, out) -> int:
    D = _load(args.theory, args.loose)
    tags = _tags(args.tags)
    lfp = least_fixpoint(D, tags)
    out.write(conclusions_to_json(lfp) + "\n" if args.json else print_conclusions(lfp))
    return OK


def cmd_transform(args, out) -> int:
    D = _load(args.theory, args.loose)
    try:
        TD = transform(args.kind, D, literal=args.literal)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write(print_theory(TD))
    return OK


def cmd_add(args, out) -> int:
    D, A = _load(args.theory, args.loose), _load(args.addition, True)
    try:
        out.write(print_theory(add_theories(D, A)))
    except LabelClash as exc:
        sys.stderr.write(f"LabelClash: {exc}\n")
        return FOUND
    return OK


def cmd_check_sim(args, out) -> int:
    D = _load(args.theory, args.loose)
    fixtures = [_load(path) for path in args.fixture]
    trials = args.trials if args.trials is not None else (len(fixtures) or 5)
    if trials > len(fixtures) and args.seed is None:
        raise UsageError("randomized trials need an explicit --seed")
    try:
        cfg = SimCheckConfig(args.transform, args.source, args.target, args.additions,
                             trials=trials, seed=args.seed or 0, literal=args.literal)
    except (UnsupportedClaim, ValueError) as exc:
        raise UsageError(str(exc)) from None
    try:
        report = check_simulation(D, cfg, fixtures)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = report.to_dict(args.theory, list(args.fixture))
    if args.shrink and report.mismatches:
        m = report.mismatches[0]
        d, a = shrink_counterexample(D, m.A, cfg, (m.literal, m.sign))
        payload["shrunk"] = {"D": print_theory(d), "A": print_theory(a),
                             "literal": str(m.literal), "sign": m.sign.value}
    out.write(json.dumps(payload, indent=2) + "\n")
    return OK if report.passed else FOUND


def cmd_check_props(args, out) -> int:
    if args.theories:
        subjects = [(path, _load(path, args.loose)) for path in args.theories]
    else:
        if args.seed is None:
            raise UsageError("random theories need an explicit --seed")
        subjects = [(f"random#{i}", gen_theory(GenConfig(), args.seed + i)) for i in range(args.count)]
    rows, failed = [], 0
    for name, D in subjects:
        lfp = least_fixpoint(D, ALL_TAGS)
        inc, coh = check_inclusion_theorem(D, lfp), check_coherence(D, lfp)
        failed += not (inc and coh)
        rows.append({"theory": name, "inclusion": [str(c) for c, _ in inc.violations],
                     "coherence": [f"{t.value} {q}" for t, q in coh.violations]})
    if args.json:
        out.write(json.dumps({"theories": len(rows), "failed": failed, "results": rows}, indent=2) + "\n")
    else:
        for row in rows:
            status = "ok" if not (row["inclusion"] or row["coherence"]) else "VIOLATION"
            out.write(f"{status:9} {row['theory']}\n")
        out.write(f"{len(rows) - failed}/{len(rows)} theories satisfy inclusion and coherence\n")
    return FOUND if failed else OK


def cmd_examples(args, out) -> int:
    if args.list:
        out.write("".join(f"@{name}\n" for name in FIXTURES))
        return OK
    checks = run_golden_checks()
    if args.json:
        out.write(json.dumps([{"name": c.name, "passed": c.passed, "detail": c.detail}
                              for c in checks], indent=2) + "\n")
    else:
        width = max(len(c.name) for c in checks)
        for c in checks:
            out.write(f"{'PASS' if c.passed else 'FAIL'}  {c.name.ljust(width)}  {c.detail}\n")
    return OK if all(c.passed for c in checks) else FOUND


# -- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="defeasible",
                                     description="Defeasible logic inference and simulation checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def theory_cmd(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("theory", help="theory file (.dfl) or @fixture")
        p.add_argument("--loose", action="store_true", help="accept generated '$' names")
        return p

    p = theory_cmd("parse", "check a theory and print its canonical form")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_parse)

    p = theory_cmd("infer", "print all conclusions for the given tags")
    p.add_argument("--tags", action="append", metavar="TAGS",
                   help="comma-separated tags among D, pd, pd*, d, s, d*, s* (default: all)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_infer)

    p = theory_cmd("transform", "print the transformed theory")
    p.add_argument("--kind", type=_kind, required=True,
                   help="block-for-prop, prop-for-block, team-for-individual-base, "
                        "team-for-individual or individual-for-team (def2..def6 also accepted)")
    p.add_argument("--literal", action="store_true", help="unrepaired construction")
    p.set_defaults(func=cmd_transform)

    p = theory_cmd("add", "print D + A")
    p.add_argument("addition", help="addition file (.dfl) or @fixture")
    p.set_defaults(func=cmd_add)

    p = theory_cmd("check-sim", "compare D + A with T(D) + A over several additions")
    p.add_argument("--transform", type=_kind, required=True)
    p.add_argument("--source", type=_tag, required=True)
    p.add_argument("--target", type=_tag, required=True)
    p.add_argument("--additions", type=AdditionKind, choices=list(AdditionKind), required=True,
                   metavar="{facts,rules}")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--fixture", action="append", default=[], metavar="PATH",
                   help="explicit addition used for the first trials (repeatable)")
    p.add_argument("--literal", action="store_true", help="unrepaired construction")
    p.add_argument("--shrink", action="store_true", help="shrink the first mismatch")
    p.set_defaults(func=cmd_check_sim)

    p = sub.add_parser("check-props", help="inclusion and coherence on theories")
    p.add_argument("theories", nargs="*", help="theory files; random theories when omitted")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int)
    p.add_argument("--loose", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check_props)

    p = sub.add_parser("examples", help="run the bundled golden examples")
    p.add_argument("--list", action="store_true", help="list bundled fixtures")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
