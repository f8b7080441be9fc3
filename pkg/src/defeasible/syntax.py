"""Propositional defeasible theories: literals, rules, superiority, addition."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

NAME_RE = re.compile(r"[A-Za-z0-9_]+")
RESERVED = "$"


class LabelClash(ValueError):
    """Raised when two theories that are being added share a rule label."""

    def __init__(self, labels):
        self.labels = sorted(labels)
        super().__init__("shared labels: " + ", ".join(self.labels))


def is_user_name(name: str) -> bool:
    return bool(NAME_RE.fullmatch(name))


@dataclass(frozen=True, order=True)
class Literal:
    atom: str
    positive: bool = True

    def __post_init__(self):
        if not self.atom or any(c.isspace() for c in self.atom):
            raise ValueError(f"bad atom name {self.atom!r}")

    def complement(self) -> Literal:
        return Literal(self.atom, not self.positive)

    def __invert__(self) -> Literal:
        return self.complement()

    def __str__(self):
        return self.atom if self.positive else "~" + self.atom

    @classmethod
    def of(cls, text: str) -> Literal:
        """Build a literal from ``p`` or ``~p`` (no validation of reserved names)."""
        text = text.strip()
        if text.startswith("~"):
            return cls(text[1:], False)
        return cls(text)


def complement(q: Literal) -> Literal:
    return q.complement()


class ArrowKind(enum.Enum):
    STRICT = "->"
    DEFEASIBLE = "=>"
    DEFEATER = "~>"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Rule:
    label: str
    body: frozenset
    arrow: ArrowKind
    head: Literal

    def __init__(self, label: str, body: Iterable[Literal], arrow: ArrowKind, head: Literal):
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "body", frozenset(body))
        object.__setattr__(self, "arrow", arrow)
        object.__setattr__(self, "head", head)

    @property
    def is_strict(self) -> bool:
        return self.arrow is ArrowKind.STRICT

    @property
    def is_defeater(self) -> bool:
        return self.arrow is ArrowKind.DEFEATER

    def sorted_body(self) -> list[Literal]:
        return sorted(self.body)

    def __str__(self):
        body = ", ".join(str(b) for b in self.sorted_body())
        sep = " " if body else ""
        return f"{self.label}: {body}{sep}{self.arrow} {self.head}."


@dataclass(frozen=True)
class Theory:
    facts: frozenset = frozenset()
    rules: tuple = ()
    superiority: frozenset = frozenset()

    def __init__(self, facts: Iterable[Literal] = (), rules: Iterable[Rule] = (),
                 superiority: Iterable[tuple[str, str]] = ()):
        object.__setattr__(self, "facts", frozenset(facts))
        object.__setattr__(self, "rules", tuple(rules))
        object.__setattr__(self, "superiority", frozenset(tuple(p) for p in superiority))

    @property
    def labels(self) -> list[str]:
        return [r.label for r in self.rules]

    def rule(self, label: str) -> Rule:
        for r in self.rules:
            if r.label == label:
                return r
        raise KeyError(label)

    def is_empty(self) -> bool:
        return not (self.facts or self.rules or self.superiority)

    def __len__(self):
        return len(self.rules)


@dataclass(frozen=True)
class LanguageView:
    literals: frozenset = frozenset()
    labels: frozenset = frozenset()

    @property
    def atoms(self) -> frozenset:
        return frozenset(q.atom for q in self.literals)


class Violation(NamedTuple):
    kind: str  # "duplicate-label" | "dangling-superiority" | "superiority-cycle"
    message: str
    labels: tuple


@dataclass
class Validation:
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def superiority_cycles(pairs: Iterable[tuple[str, str]]) -> list[tuple[str, ...]]:
    """Return the label sets of every strongly connected component that holds a cycle."""
    succ: dict[str, set[str]] = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
        succ.setdefault(b, set())

    def reach(start):
        seen, todo = set(), list(succ[start])
        while todo:
            n = todo.pop()
            if n not in seen:
                seen.add(n)
                todo.extend(succ[n])
        return seen

    reachable = {n: reach(n) for n in succ}
    cyclic = sorted(n for n in succ if n in reachable[n])
    comps, placed = [], set()
    for n in cyclic:
        if n in placed:
            continue
        comp = tuple(sorted(m for m in cyclic if m in reachable[n] and n in reachable[m]))
        placed.update(comp)
        comps.append(comp)
    return comps


def validate_theory(D: Theory) -> Validation:
    result = Validation()
    seen: set[str] = set()
    for r in D.rules:
        if r.label in seen:
            result.violations.append(
                Violation("duplicate-label", f"label {r.label} used by more than one rule", (r.label,)))
        seen.add(r.label)
    heads = {r.label: r.head for r in D.rules}
    for a, b in sorted(D.superiority):
        missing = [x for x in (a, b) if x not in heads]
        if missing:
            result.violations.append(Violation(
                "dangling-superiority", f"{a} > {b} names unknown rule(s) {', '.join(missing)}", (a, b)))
        elif heads[a] != heads[b].complement():
            result.notes.append(f"{a} > {b} relates non-opposing rules; it is never consulted")
    for comp in superiority_cycles(D.superiority):
        result.violations.append(
            Violation("superiority-cycle", "superiority cycle through " + ", ".join(comp), comp))
    return result


def language_of(D: Theory) -> LanguageView:
    lits: set[Literal] = set(D.facts)
    for r in D.rules:
        lits.update(r.body)
        lits.add(r.head)
    lits.update([q.complement() for q in lits])
    return LanguageView(frozenset(lits), frozenset(D.labels))


def add_theories(D: Theory, A: Theory) -> Theory:
    """``D + A``: union of facts, rules and superiority; labels must be disjoint."""
    shared = set(D.labels) & set(A.labels)
    if shared:
        raise LabelClash(shared)
    return Theory(D.facts | A.facts, D.rules + A.rules, D.superiority | A.superiority)


class Modularity(NamedTuple):
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_modular_addition(D: Theory, TD: Theory, A: Theory) -> Modularity:
    """Check that ``A`` only touches ``T(D)`` through the language of ``D``."""
    sig_d, sig_td, sig_a = language_of(D), language_of(TD), language_of(A)
    leaked = sorted((sig_a.literals & sig_td.literals) - sig_d.literals)
    if leaked:
        return Modularity(False, f"literal {leaked[0]} belongs to T(D) but not to D")
    for other, what in ((sig_d, "D"), (sig_td, "T(D)")):
        clash = sorted(sig_a.labels & other.labels)
        if clash:
            return Modularity(False, f"label {clash[0]} is already used in {what}")
    return Modularity(True)
