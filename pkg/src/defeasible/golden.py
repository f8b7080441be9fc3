"""Bundled fixture theories and the golden checks run by ``defeasible examples``."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Callable

from .engine import ALL_TAGS, Sign, SignedConclusion, Tag, least_fixpoint
from .harness import (AdditionKind, SimCheckConfig, check_coherence, check_inclusion_theorem,
                      simulation_mismatches)
from .syntax import Literal, Theory, add_theories
from .textformat import parse_theory
from .transforms import TransformKind, transform

FIXTURES = ("ex1", "ex2", "ex13", "ex13_addition", "ex15", "ex15_addition",
            "ex16", "ex16_addition", "ex16_prime")


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise KeyError(f"no fixture {name!r}; known: {', '.join(FIXTURES)}")
    return resources.files(__package__).joinpath("fixtures", f"{name}.dfl").read_text()


def load_fixture(name: str) -> Theory:
    return parse_theory(fixture_text(name))


def _c(text: str) -> SignedConclusion:
    sign, tag, lit = text[0], text[1:].split()[0], text.split()[1]
    return SignedConclusion(Sign(sign), Tag(tag), Literal.of(lit))


def restricted(lfp, tag: Tag, literals) -> set[SignedConclusion]:
    """The members of ``lfp`` with ``tag`` on the given literals."""
    wanted = {Literal.of(x) if isinstance(x, str) else x for x in literals}
    return {c for c in lfp if c.tag is tag and c.literal in wanted}


@dataclass(frozen=True)
class GoldenCheck:
    name: str
    passed: bool
    detail: str


def _expect(name: str, got: set, expected: set) -> GoldenCheck:
    if got == expected:
        return GoldenCheck(name, True, ", ".join(sorted(str(c) for c in got)))
    missing = sorted(str(c) for c in expected - got)
    extra = sorted(str(c) for c in got - expected)
    return GoldenCheck(name, False, f"missing {missing}, unexpected {extra}")


PQ = ("p", "~p", "q", "~q")


def _ex1_tags() -> list[GoldenCheck]:
    lfp = least_fixpoint(load_fixture("ex1"), ALL_TAGS)
    want = {
        Tag.PARTIAL_STAR: {"-pd* p", "-pd* ~p", "+pd* q", "-pd* ~q"},
        Tag.DELTA_STAR: {"-d* p", "-d* ~p", "-d* q", "-d* ~q"},
        Tag.SIGMA_STAR: {"+s* p", "+s* ~p", "+s* q", "+s* ~q"},
    }
    return [_expect(f"ex1 {tag.value}", restricted(lfp, tag, PQ), {_c(x) for x in want[tag]})
            for tag in want]


def _ex1_block_for_prop() -> list[GoldenCheck]:
    lfp = least_fixpoint(transform(TransformKind.BLOCK_FOR_PROP, load_fixture("ex1")),
                         {Tag.PARTIAL_STAR})
    strict = {f"$strict({q})" for q in PQ} | {f"~$strict({q})" for q in PQ}
    supp = {f"$supp({q})" for q in PQ}
    want = ({f"+pd* ~$strict({q})" for q in PQ} | {f"-pd* $strict({q})" for q in PQ}
            | {f"+pd* $supp({q})" for q in PQ} | {f"-pd* {q}" for q in PQ})
    got = restricted(lfp, Tag.PARTIAL_STAR, set(PQ) | strict)
    got |= {c for c in restricted(lfp, Tag.PARTIAL_STAR, supp) if c.sign is Sign.PLUS}
    return [_expect("ex1 block-for-prop", got, {_c(x) for x in want})]


def _ex2_prop_for_block() -> list[GoldenCheck]:
    lfp = least_fixpoint(transform(TransformKind.PROP_FOR_BLOCK, load_fixture("ex2")),
                         {Tag.DELTA_STAR})
    probe = ("$undefeated(~p)",) + PQ
    want = {"-d* $undefeated(~p)", "-d* ~p", "-d* p", "-d* ~q", "+d* q"}
    return [_expect("ex2 prop-for-block", restricted(lfp, Tag.DELTA_STAR, probe),
                    {_c(x) for x in want})]


def _pair(d: str, a: str, kind: TransformKind, source: Tag, target: Tag):
    D, A = load_fixture(d), load_fixture(a)
    src = least_fixpoint(add_theories(D, A), {source})
    tgt = least_fixpoint(add_theories(transform(kind, D), A), {target})
    return src, tgt


def _ex13() -> list[GoldenCheck]:
    src, tgt = _pair("ex13", "ex13_addition", TransformKind.TEAM_FOR_INDIVIDUAL_BASE,
                     Tag.PARTIAL_STAR, Tag.PARTIAL)
    base = (_c("-pd* p") in src and _c("+pd p") in tgt)
    _, fixed = _pair("ex13", "ex13_addition", TransformKind.TEAM_FOR_INDIVIDUAL,
                     Tag.PARTIAL_STAR, Tag.PARTIAL)
    cfg = SimCheckConfig(TransformKind.TEAM_FOR_INDIVIDUAL, Tag.PARTIAL_STAR, Tag.PARTIAL,
                         AdditionKind.RULES, trials=1)
    D, A = load_fixture("ex13"), load_fixture("ex13_addition")
    clean = not simulation_mismatches(D, cfg.apply(D), A, cfg)
    return [
        GoldenCheck("ex13 team-for-individual-base breaks", base,
                    "D+A -pd* p, T(D)+A +pd p" if base else "expected mismatch not found"),
        GoldenCheck("ex13 team-for-individual repairs", _c("-pd p") in fixed and clean,
                    "T(D)+A -pd p, no mismatch" if clean else "mismatch remains"),
    ]


def _ex15() -> list[GoldenCheck]:
    src, tgt = _pair("ex15", "ex15_addition", TransformKind.TEAM_FOR_INDIVIDUAL_BASE,
                     Tag.DELTA_STAR, Tag.DELTA_AMB)
    ok = _c("-d* p") in src and _c("+d p") in tgt
    return [GoldenCheck("ex15 team-for-individual-base breaks", ok,
                        "D+A -d* p, T(D)+A +d p" if ok else "expected mismatch not found")]


def _ex16() -> list[GoldenCheck]:
    A = load_fixture("ex16_addition")
    src = least_fixpoint(add_theories(load_fixture("ex16"), A), {Tag.PARTIAL})
    prime = least_fixpoint(add_theories(load_fixture("ex16_prime"), A), {Tag.PARTIAL_STAR})
    ok = _c("-pd p") in src and _c("+pd* p") in prime
    return [GoldenCheck("ex16 older encoding breaks", ok,
                        "D+A -pd p, D'+A +pd* p" if ok else "expected mismatch not found")]


def _properties() -> list[GoldenCheck]:
    bad = []
    for name in FIXTURES:
        D = load_fixture(name)
        lfp = least_fixpoint(D, ALL_TAGS)
        if not (check_inclusion_theorem(D, lfp) and check_coherence(D, lfp)):
            bad.append(name)
    return [GoldenCheck("fixtures inclusion and coherence", not bad,
                        f"violations in {bad}" if bad else f"{len(FIXTURES)} fixtures clean")]


GOLDEN_GROUPS: tuple[Callable[[], list[GoldenCheck]], ...] = (
    _ex1_tags, _ex1_block_for_prop, _ex2_prop_for_block, _ex13, _ex15, _ex16, _properties)


def run_golden_checks() -> list[GoldenCheck]:
    return [check for group in GOLDEN_GROUPS for check in group()]
