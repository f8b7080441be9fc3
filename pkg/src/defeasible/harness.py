"""Random theories, modular additions and differential simulation checks."""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .engine import ALL_TAGS, ConclusionSet, Sign, SignedConclusion, Tag, least_fixpoint
from .syntax import (ArrowKind, Literal, Rule, Theory, add_theories, is_modular_addition,
                     language_of)
from .textformat import print_theory
from .transforms import LITERAL_VARIANTS, TransformKind, fresh_name, prefix_for, transform

MASK64 = (1 << 64) - 1


class UnsupportedClaim(ValueError):
    pass


class NotAMismatch(ValueError):
    pass


@dataclass(frozen=True)
class GenConfig:
    atoms: int = 4
    rules: int = 8
    max_body: int = 2
    strict_ratio: float = 0.2
    defeasible_ratio: float = 0.7
    defeater_ratio: float = 0.1
    superiority_density: float = 0.3
    facts: int = 1

    def __post_init__(self):
        ratios = (self.strict_ratio, self.defeasible_ratio, self.defeater_ratio)
        if min(ratios) < 0 or not math.isclose(sum(ratios), 1.0, abs_tol=1e-9):
            raise ValueError(f"arrow ratios must be non-negative and sum to 1, got {ratios}")
        if self.atoms < 0 or self.rules < 0 or self.max_body < 0 or self.facts < 0:
            raise ValueError("counts must be non-negative")
        if not 0.0 <= self.superiority_density <= 1.0:
            raise ValueError("superiority_density must lie in [0, 1]")
        if self.atoms == 0 and (self.rules or self.facts):
            raise ValueError("rules and facts need at least one atom")

    @property
    def arrow_weights(self):
        return (self.strict_ratio, self.defeasible_ratio, self.defeater_ratio)


ARROW_ORDER = (ArrowKind.STRICT, ArrowKind.DEFEASIBLE, ArrowKind.DEFEATER)


def gen_theory(cfg: GenConfig = GenConfig(), seed: int = 0) -> Theory:
    """A random valid theory over atoms ``a0..``, with rule labels ``g0..``.

    Superiority edges only join opposing rules and always point from a lower
    to a higher rule index, so they are acyclic.
    """
    rng = random.Random(seed)
    lits = [Literal(f"a{i}", pos) for i in range(cfg.atoms) for pos in (True, False)]
    rules = []
    for k in range(cfg.rules):
        arrow = rng.choices(ARROW_ORDER, weights=cfg.arrow_weights)[0]
        head = rng.choice(lits)
        size = rng.randint(0, min(cfg.max_body, len(lits)))
        rules.append(Rule(f"g{k}", rng.sample(lits, size), arrow, head))
    facts = rng.sample(lits, min(cfg.facts, len(lits)))
    sup = []
    for i, a in enumerate(rules):
        for b in rules[i + 1:]:
            if a.head == b.head.complement() and rng.random() < cfg.superiority_density:
                sup.append((a.label, b.label))
    return Theory(facts, rules, sup)


class AdditionKind(enum.Enum):
    FACTS = "facts"
    RULES = "rules"


def _fresh(prefix: str, taken: set, count: int) -> list[str]:
    out, k = [], 0
    while len(out) < count:
        name = f"{prefix}{k}"
        if name not in taken:
            out.append(name)
        k += 1
    return out


def gen_modular_addition(D: Theory, TD: Theory, kind: AdditionKind, cfg: GenConfig = GenConfig(),
                         seed: int = 0) -> Theory:
    """A random addition of facts or of rules that is modular for ``(D, T(D))``.

    Half of the rule additions are empty-bodied rules for literals of ``D``,
    the shape of the known counterexamples for rule additions.
    """
    rng = random.Random(seed)
    sig_d, sig_td = language_of(D), language_of(TD)
    atoms_d = sorted(sig_d.atoms)
    taken_atoms = set(sig_d.atoms) | set(sig_td.atoms)
    fresh_atoms = _fresh("x", taken_atoms, rng.randint(1, 2))
    pool_atoms = atoms_d + fresh_atoms
    pool = [Literal(a, pos) for a in pool_atoms for pos in (True, False)]
    d_pool = [Literal(a, pos) for a in atoms_d for pos in (True, False)] or pool
    size = rng.randint(1, 3)

    if kind is AdditionKind.FACTS:
        A = Theory(facts=rng.sample(pool, min(size, len(pool))))
    else:
        labels = _fresh("a", set(sig_d.labels) | set(sig_td.labels), size)
        biased = rng.random() < 0.5
        rules = []
        for label in labels:
            if biased:
                arrow = rng.choices(ARROW_ORDER, weights=(0.1, 0.8, 0.1))[0]
                rules.append(Rule(label, [], arrow, rng.choice(d_pool)))
            else:
                arrow = rng.choices(ARROW_ORDER, weights=cfg.arrow_weights)[0]
                body = rng.sample(pool, rng.randint(0, min(cfg.max_body, len(pool))))
                rules.append(Rule(label, body, arrow, rng.choice(pool)))
        A = Theory(rules=rules)
    assert is_modular_addition(D, TD, A), "generated addition is not modular"
    return A


@dataclass(frozen=True)
class Mismatch:
    literal: Literal
    sign: Sign
    source_has: bool
    target_has: bool
    D: Theory | None = None
    A: Theory | None = None
    trial: int = 0

    @property
    def key(self):
        return (self.trial, str(self.literal), self.sign.value)


def compare_modulo_tags(src: ConclusionSet, src_tag: Tag, tgt: ConclusionSet, tgt_tag: Tag,
                        scope: Iterable[Literal]) -> list[Mismatch]:
    """Literals of ``scope`` where ``src`` at ``src_tag`` and ``tgt`` at ``tgt_tag`` disagree."""
    out = []
    for q in sorted(scope):
        for sign in Sign:
            a = SignedConclusion(sign, src_tag, q) in src
            b = SignedConclusion(sign, tgt_tag, q) in tgt
            if a != b:
                out.append(Mismatch(q, sign, a, b))
    return out


@dataclass(frozen=True)
class SimCheckConfig:
    transform: TransformKind
    source: Tag
    target: Tag
    additions: AdditionKind
    trials: int = 5
    seed: int = 0
    literal: bool = False  # use the unrepaired construction (see transforms)

    def __post_init__(self):
        if self.claim not in SUPPORTED_CLAIMS:
            raise UnsupportedClaim(f"unsupported simulation claim {self.describe()}")
        if self.literal and self.transform not in LITERAL_VARIANTS:
            raise UnsupportedClaim(f"{self.transform.value} has no literal variant")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def claim(self):
        return (self.transform, self.source, self.target, self.additions)

    def describe(self) -> str:
        variant = " (literal)" if self.literal else ""
        return (f"{self.transform.short}{variant}: {self.source.value} -> {self.target.value} "
                f"wrt {self.additions.value}")

    def apply(self, D: Theory) -> Theory:
        return transform(self.transform, D, literal=self.literal)

    @property
    def expected_to_hold(self) -> bool:
        return SUPPORTED_CLAIMS[self.claim]


_T = TransformKind
_F, _R = AdditionKind.FACTS, AdditionKind.RULES

# claim -> whether the simulation is expected to hold
SUPPORTED_CLAIMS = {
    (_T.BLOCK_FOR_PROP, Tag.DELTA_STAR, Tag.PARTIAL_STAR, _F): True,
    (_T.PROP_FOR_BLOCK, Tag.PARTIAL_STAR, Tag.DELTA_STAR, _F): True,
    (_T.PROP_FOR_BLOCK, Tag.PARTIAL_STAR, Tag.DELTA_AMB, _F): True,
    (_T.PROP_FOR_BLOCK, Tag.PARTIAL_STAR, Tag.PARTIAL, _F): True,
    (_T.TEAM_FOR_INDIVIDUAL, Tag.PARTIAL_STAR, Tag.PARTIAL, _R): True,
    (_T.TEAM_FOR_INDIVIDUAL, Tag.DELTA_STAR, Tag.DELTA_AMB, _R): True,
    (_T.TEAM_FOR_INDIVIDUAL, Tag.PARTIAL_STAR, Tag.PARTIAL, _F): True,
    (_T.TEAM_FOR_INDIVIDUAL, Tag.DELTA_STAR, Tag.DELTA_AMB, _F): True,
    (_T.INDIVIDUAL_FOR_TEAM, Tag.PARTIAL, Tag.PARTIAL_STAR, _R): True,
    (_T.INDIVIDUAL_FOR_TEAM, Tag.DELTA_AMB, Tag.DELTA_STAR, _R): True,
    (_T.INDIVIDUAL_FOR_TEAM, Tag.PARTIAL, Tag.PARTIAL_STAR, _F): True,
    (_T.INDIVIDUAL_FOR_TEAM, Tag.DELTA_AMB, Tag.DELTA_STAR, _F): True,
    (_T.TEAM_FOR_INDIVIDUAL_BASE, Tag.PARTIAL_STAR, Tag.PARTIAL, _R): False,
    (_T.TEAM_FOR_INDIVIDUAL_BASE, Tag.DELTA_STAR, Tag.DELTA_AMB, _R): False,
}


class Verdict(enum.Enum):
    ALL_PASS = "AllPass"
    MISMATCH = "Mismatch"


@dataclass
class SimReport:
    config: SimCheckConfig
    trials_run: int
    mismatches: list = field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        return Verdict.MISMATCH if self.mismatches else Verdict.ALL_PASS

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self, d_file: str | None = None, a_files: Sequence[str | None] = ()) -> dict:
        rows = []
        for m in self.mismatches:
            a_file = a_files[m.trial] if m.trial < len(a_files) else None
            rows.append({
                "d_file": d_file, "a_file": a_file, "trial": m.trial,
                "literal": str(m.literal), "sign": m.sign.value,
                "source": m.source_has, "target": m.target_has,
                "a_text": print_theory(m.A) if m.A is not None else None,
            })
        return {
            "claim": {"transform": self.config.transform.value, "source": self.config.source.value,
                      "target": self.config.target.value, "additions": self.config.additions.value,
                      "literal": self.config.literal},
            "trials": self.trials_run,
            "verdict": self.verdict.value,
            "mismatches": rows,
            "seed": self.config.seed,
        }


def trial_seed(seed: int, i: int) -> int:
    return (seed ^ i) & MASK64


def simulation_mismatches(D: Theory, TD: Theory, A: Theory, cfg: SimCheckConfig) -> list[Mismatch]:
    """Compare ``D + A`` under the source tag with ``T(D) + A`` under the target tag."""
    DA = add_theories(D, A)
    src = least_fixpoint(DA, {cfg.source})
    tgt = least_fixpoint(add_theories(TD, A), {cfg.target})
    return compare_modulo_tags(src, cfg.source, tgt, cfg.target, language_of(DA).literals)


def check_simulation(D: Theory, cfg: SimCheckConfig, additions: Sequence[Theory] = (),
                     gen: GenConfig = GenConfig()) -> SimReport:
    """Run ``cfg.trials`` trials; explicit ``additions`` fill the first trials."""
    TD = cfg.apply(D)
    mismatches = []
    for i in range(cfg.trials):
        if i < len(additions):
            A = additions[i]
            ok = is_modular_addition(D, TD, A)
            if not ok:
                raise ValueError(f"addition {i} is not modular: {ok.reason}")
        else:
            A = gen_modular_addition(D, TD, cfg.additions, gen, trial_seed(cfg.seed, i))
        for m in simulation_mismatches(D, TD, A, cfg):
            mismatches.append(Mismatch(m.literal, m.sign, m.source_has, m.target_has, D, A, i))
    mismatches.sort(key=lambda m: m.key)
    return SimReport(cfg, cfg.trials, mismatches)


# -- property checks ---------------------------------------------------------

D_, PD, PDS, DA_, S, DS, SS = (Tag.DELTA, Tag.PARTIAL, Tag.PARTIAL_STAR, Tag.DELTA_AMB,
                               Tag.SIGMA, Tag.DELTA_STAR, Tag.SIGMA_STAR)
P, M = Sign.PLUS, Sign.MINUS

# Each chain lists (sign, tag) sets that must be contained in their successor.
INCLUSION_CHAINS = (
    ((P, D_), (P, DS), (P, DA_), (P, PD), (P, S), (P, SS)),
    ((M, SS), (M, S), (M, PD), (M, DA_), (M, DS), (M, D_)),
    ((P, DS), (P, PDS), (P, SS)),
    ((M, SS), (M, PDS), (M, DS)),
)


@dataclass(frozen=True)
class Containment:
    smaller: tuple
    larger: tuple

    def __str__(self):
        (s1, t1), (s2, t2) = self.smaller, self.larger
        return f"{s1.value}{t1.value} <= {s2.value}{t2.value}"


CONTAINMENTS = tuple(Containment(a, b) for chain in INCLUSION_CHAINS for a, b in zip(chain, chain[1:]))


@dataclass
class PropertyReport:
    name: str
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.passed


def check_inclusion_theorem(D: Theory, lfp: ConclusionSet | None = None) -> PropertyReport:
    """Every adjacent containment along the four inclusion chains (fourteen in all)."""
    lfp = lfp if lfp is not None else least_fixpoint(D, ALL_TAGS)
    report = PropertyReport("inclusion")
    for c in CONTAINMENTS:
        extra = lfp.literals(*c.smaller) - lfp.literals(*c.larger)
        if extra:
            report.violations.append((c, sorted(extra)))
    return report


def check_coherence(D: Theory, lfp: ConclusionSet | None = None) -> PropertyReport:
    """No tag proves both ``+d q`` and ``-d q``."""
    lfp = lfp if lfp is not None else least_fixpoint(D, ALL_TAGS)
    report = PropertyReport("coherence")
    for tag in Tag:
        both = lfp.plus(tag) & lfp.minus(tag)
        for q in sorted(both):
            report.violations.append((tag, q))
    return report


# -- correspondence checks for the transformed theories ----------------------

def _agree(report: PropertyReport, q: Literal, statements: list[tuple[str, bool]]):
    """Record a violation unless every statement has the same truth value."""
    if len({value for _, value in statements}) > 1:
        held = ", ".join(f"{name}={'yes' if value else 'no'}" for name, value in statements)
        report.violations.append((q, held))


def _has(lfp: ConclusionSet, sign: Sign, tag: Tag, q: Literal) -> bool:
    return SignedConclusion(sign, tag, q) in lfp


def check_strict_correspondence(D: Theory, A: Theory, kind: TransformKind | str) -> PropertyReport:
    """``D+A`` and ``T(D)+A`` draw the same definite conclusions on ``Σ(D+A)``."""
    DA = add_theories(D, A)
    TA = add_theories(transform(kind, D), A)
    src, tgt = least_fixpoint(DA, {Tag.DELTA}), least_fixpoint(TA, {Tag.DELTA})
    report = PropertyReport("strict-correspondence")
    for q in sorted(language_of(DA).literals):
        for sign in Sign:
            _agree(report, q, [(f"D+A {sign.value}D", _has(src, sign, Tag.DELTA, q)),
                               (f"T(D)+A {sign.value}D", _has(tgt, sign, Tag.DELTA, q))])
    return report


def check_strict_mirror(D: Theory, A: Theory) -> PropertyReport:
    """block-for-prop: ``$strict(q)`` under ``pd*`` mirrors definite provability of ``q``."""
    DA = add_theories(D, A)
    TA = add_theories(transform(TransformKind.BLOCK_FOR_PROP, D), A)
    src = least_fixpoint(DA, {Tag.DELTA})
    tgt = least_fixpoint(TA, {Tag.DELTA, Tag.PARTIAL_STAR})
    prefix = prefix_for(D)
    report = PropertyReport("strict-mirror")
    for q in sorted(language_of(D).literals):
        strict = Literal(fresh_name("strict", q, prefix=prefix))
        _agree(report, q, [("D+A +D", _has(src, P, D_, q)), ("T+A +D", _has(tgt, P, D_, q)),
                           ("+pd* strict", _has(tgt, P, PDS, strict)),
                           ("-pd* ~strict", _has(tgt, M, PDS, ~strict))])
        _agree(report, q, [("D+A -D", _has(src, M, D_, q)), ("T+A -D", _has(tgt, M, D_, q)),
                           ("-pd* strict", _has(tgt, M, PDS, strict)),
                           ("+pd* ~strict", _has(tgt, P, PDS, ~strict))])
    return report


def check_true_mirror(D: Theory, A: Theory) -> PropertyReport:
    """prop-for-block: ``$strict(q)`` and ``$true(q)`` under ``d*``/``s*`` mirror definite provability."""
    DA = add_theories(D, A)
    TA = add_theories(transform(TransformKind.PROP_FOR_BLOCK, D), A)
    src = least_fixpoint(DA, {Tag.DELTA})
    tgt = least_fixpoint(TA, {Tag.DELTA, Tag.DELTA_STAR, Tag.SIGMA_STAR})
    prefix = prefix_for(D)
    report = PropertyReport("true-mirror")
    for q in sorted(language_of(D).literals):
        strict = Literal(fresh_name("strict", q, prefix=prefix))
        true = Literal(fresh_name("true_", q, prefix=prefix))
        _agree(report, q, [("D+A +D", _has(src, P, D_, q)), ("T+A +D", _has(tgt, P, D_, q)),
                           ("+d* strict", _has(tgt, P, DS, strict)),
                           ("+d* true", _has(tgt, P, DS, true)), ("+s* true", _has(tgt, P, SS, true)),
                           ("-d* ~true", _has(tgt, M, DS, ~true)),
                           ("-s* ~true", _has(tgt, M, SS, ~true))])
        _agree(report, q, [("D+A -D", _has(src, M, D_, q)), ("T+A -D", _has(tgt, M, D_, q)),
                           ("-d* strict", _has(tgt, M, DS, strict)),
                           ("-d* true", _has(tgt, M, DS, true)), ("-s* true", _has(tgt, M, SS, true)),
                           ("+d* ~true", _has(tgt, P, DS, ~true)),
                           ("+s* ~true", _has(tgt, P, SS, ~true))])
    return report


def tight_literals(D: Theory, A: Theory) -> list[Literal]:
    """``Σ(D+A)`` plus the ``$undefeated``, ``$ok`` and ``~$true`` literals of prop-for-block."""
    prefix = prefix_for(D)
    lits = set(language_of(add_theories(D, A)).literals)
    for q in language_of(D).literals:
        undefeated = Literal(fresh_name("undefeated", q, prefix=prefix))
        lits.update((undefeated, ~undefeated, ~Literal(fresh_name("true_", q, prefix=prefix))))
    for r in D.rules:
        if not r.is_defeater:
            ok = Literal(fresh_name("ok", r.label, prefix=prefix))
            lits.update((ok, ~ok))
    return sorted(lits)


def check_tightness(D: Theory, A: Theory) -> PropertyReport:
    """prop-for-block: ``d*`` and ``s*`` agree on :func:`tight_literals` in ``T(D)+A``."""
    TA = add_theories(transform(TransformKind.PROP_FOR_BLOCK, D), A)
    tgt = least_fixpoint(TA, {Tag.DELTA_STAR, Tag.SIGMA_STAR})
    report = PropertyReport("tightness")
    for q in tight_literals(D, A):
        for sign in Sign:
            _agree(report, q, [(f"{sign.value}d*", _has(tgt, sign, DS, q)),
                               (f"{sign.value}s*", _has(tgt, sign, SS, q))])
    return report


# -- shrinking ---------------------------------------------------------------

def _without_rule(T: Theory, label: str) -> Theory:
    return Theory(T.facts, [r for r in T.rules if r.label != label],
                  [p for p in T.superiority if label not in p])


def _candidates(T: Theory):
    for r in T.rules:
        yield _without_rule(T, r.label)
    for q in sorted(T.facts):
        yield Theory(T.facts - {q}, T.rules, T.superiority)
    for pair in sorted(T.superiority):
        yield Theory(T.facts, T.rules, T.superiority - {pair})


def shrink_counterexample(D: Theory, A: Theory, cfg: SimCheckConfig,
                          witness: tuple[Literal, Sign] | None = None) -> tuple[Theory, Theory]:
    """Greedily drop facts, rules and superiority pairs while the mismatch persists.

    ``witness`` fixes the (literal, sign) that must keep disagreeing; by
    default the first mismatch of the input pair is used.
    """
    found = simulation_mismatches(D, cfg.apply(D), A, cfg)
    if not found:
        raise NotAMismatch("the pair agrees on every literal")
    if witness is None:
        witness = (found[0].literal, found[0].sign)

    def still_fails(d, a):
        td = cfg.apply(d)
        if not is_modular_addition(d, td, a):
            return False
        return any((m.literal, m.sign) == witness for m in simulation_mismatches(d, td, a, cfg))

    changed = True
    while changed:
        changed = False
        for d in _candidates(D):
            if still_fails(d, A):
                D, changed = d, True
                break
        if changed:
            continue
        for a in _candidates(A):
            if still_fails(D, a):
                A, changed = a, True
                break
    return D, A
