"""Theory-to-theory compilers that let one DL logic simulate another.

All generated atoms and labels live in the ``$`` namespace, so user-space
additions are modular by construction.  If the input already uses ``$``
names (a transformed theory being transformed again), the prefix grows to
``$$`` and so on.

=========================  ==============================================
kind                       simulates
=========================  ==============================================
block-for-prop             ``d*`` in ``pd*`` (facts)
prop-for-block             ``pd*`` in ``d*``, ``d``, ``pd`` (facts)
team-for-individual-base   ``pd*`` in ``pd`` (facts only; fails for rules)
team-for-individual        ``pd*`` in ``pd``, ``d*`` in ``d`` (rules)
individual-for-team        ``pd`` in ``pd*``, ``d`` in ``d*`` (rules)
=========================  ==============================================
"""

from __future__ import annotations

import enum
import re
from typing import Callable, Iterable

from .syntax import ArrowKind, Literal, Rule, Theory, language_of

STRICT, DEFEASIBLE, DEFEATER = ArrowKind.STRICT, ArrowKind.DEFEASIBLE, ArrowKind.DEFEATER

# family -> rendered stem; distinct stems or key shapes keep rendering injective
ATOM_FAMILIES = {
    "strict": "strict", "true_": "true", "supp": "supp", "supp_body": "supp_body",
    "o_rule": "o", "comp": "comp", "undefeated": "undefeated", "h": "h", "one": "one",
    "d1": "d", "d2": "d", "fail": "fail", "d_supp": "d_supp", "o_lit": "oq", "g": "g",
    "ok": "ok",
}
LABEL_FAMILIES = {
    # block-for-prop
    "str": "str", "nstr": "nstr", "supp_lit": "sp", "supp_body": "sb", "supp_head": "sh",
    "p_s": "p_s", "n_s": "n_s", "inf": "inf", "p_d": "p_d", "n_d": "n_d",
    # prop-for-block
    "t": "t", "nt": "nt", "undefeated": "u", "ok": "ok",
    # team-for-individual
    "p": "p", "s": "s", "n": "n", "one_q": "one", "o_q": "o",
    # individual-for-team
    "R1": "R1", "R2": "R2", "R3": "R3", "d_pair": "dd", "d_fail": "df", "NF": "NF", "F": "F",
    "s_q": "s_q", "supp_q": "supp", "a": "a", "b": "b", "g1": "g1", "g2": "g2", "o_rule": "or",
}


class TransformKind(enum.Enum):
    BLOCK_FOR_PROP = "block-for-prop"
    PROP_FOR_BLOCK = "prop-for-block"
    TEAM_FOR_INDIVIDUAL_BASE = "team-for-individual-base"
    TEAM_FOR_INDIVIDUAL = "team-for-individual"
    INDIVIDUAL_FOR_TEAM = "individual-for-team"

    @classmethod
    def parse(cls, text: str) -> TransformKind:
        text = text.strip().lower()
        aliases = {"def2": cls.BLOCK_FOR_PROP, "def3": cls.PROP_FOR_BLOCK,
                   "def4": cls.TEAM_FOR_INDIVIDUAL_BASE, "def5": cls.TEAM_FOR_INDIVIDUAL,
                   "def6": cls.INDIVIDUAL_FOR_TEAM}
        if text in aliases:
            return aliases[text]
        try:
            return cls(text)
        except ValueError:
            options = ", ".join([k.value for k in cls] + sorted(aliases))
            raise ValueError(f"unknown transformation {text!r}; expected one of {options}") from None

    @property
    def short(self) -> str:
        return {TransformKind.BLOCK_FOR_PROP: "def2", TransformKind.PROP_FOR_BLOCK: "def3",
                TransformKind.TEAM_FOR_INDIVIDUAL_BASE: "def4",
                TransformKind.TEAM_FOR_INDIVIDUAL: "def5",
                TransformKind.INDIVIDUAL_FOR_TEAM: "def6"}[self]


def _key(part) -> str:
    return str(part)


def fresh_name(family: str, *key, label: bool = False, prefix: str = "$") -> str:
    """Render a generated atom or label, e.g. ``fresh_name("strict", p) == "$strict(p)"``."""
    stems = LABEL_FAMILIES if label else ATOM_FAMILIES
    stem = stems[family]
    if not key:
        return prefix + stem
    return f"{prefix}{stem}({','.join(_key(k) for k in key)})"


def prefix_for(D: Theory) -> str:
    names = [r.label for r in D.rules] + [q.atom for q in language_of(D).literals]
    depth = max((len(re.match(r"\$*", n).group()) for n in names), default=0)
    return "$" * (depth + 1)


class _Builder:
    def __init__(self, D: Theory):
        self.D = D
        self.prefix = prefix_for(D)
        self.rules: list[Rule] = []
        self.sup: list[tuple[str, str]] = []
        self._labels: set[str] = set()
        self.sigma = sorted(language_of(D).literals)
        self.by_head: dict[Literal, list[Rule]] = {}
        for r in D.rules:
            self.by_head.setdefault(r.head, []).append(r)

    def atom(self, family: str, *key, positive: bool = True) -> Literal:
        return Literal(fresh_name(family, *key, prefix=self.prefix), positive)

    def label(self, family: str, *key) -> str:
        return fresh_name(family, *key, label=True, prefix=self.prefix)

    def add(self, label: str, body: Iterable[Literal], arrow: ArrowKind, head: Literal) -> str:
        if label not in self._labels:
            self._labels.add(label)
            self.rules.append(Rule(label, body, arrow, head))
        return label

    def beats(self, winner: str, loser: str):
        self.sup.append((winner, loser))

    def rules_for(self, q: Literal) -> list[Rule]:
        return self.by_head.get(q, [])

    def opposing(self, r: Rule) -> list[Rule]:
        return self.rules_for(r.head.complement())

    def sup_in_d(self, a: Rule, b: Rule) -> bool:
        return (a.label, b.label) in self.D.superiority

    def copy_strict(self, literal: bool = False):
        """Copy the strict rules of ``D``, which keeps definite conclusions intact.

        Unless ``literal``, each body literal ``b`` is replaced by ``$strict(b)``,
        which is definite exactly when ``b`` is and otherwise fails defeasibly.
        A verbatim copy would also fire on defeasible bodies and bypass the
        per-rule encoding that every construction already gives strict rules.
        """
        for r in self.D.rules:
            if r.is_strict:
                body = r.body if literal else [self.atom("strict", x) for x in r.body]
                self.add(r.label, body, STRICT, r.head)

    def strict_markers(self, with_true: bool):
        for q in self.sigma:
            strict = self.atom("strict", q)
            self.add(self.label("str", q), [q], STRICT, strict)
            self.add(self.label("nstr", q), [], DEFEASIBLE, ~strict)
            self.beats(self.label("nstr", q), self.label("str", q))
            if with_true:
                true = self.atom("true_", q)
                self.add(self.label("t", q), [strict], DEFEASIBLE, true)
                self.add(self.label("nt", q), [], DEFEASIBLE, ~true)
                self.beats(self.label("t", q), self.label("nt", q))

    def theory(self) -> Theory:
        return Theory(self.D.facts, self.rules, self.sup)


def t_block_for_prop(D: Theory, literal: bool = False) -> Theory:
    """Simulate ambiguity propagation (``d*``) with ambiguity blocking (``pd*``).

    ``$supp(q)`` tracks ``+s* q``; ``$comp(r)`` records that ``r`` has a
    supported competitor it does not beat, and ``$o(r)`` that ``r`` is
    overruled for support.  ``literal=True`` copies strict rules verbatim.
    """
    b = _Builder(D)
    b.copy_strict(literal)
    b.strict_markers(with_true=False)
    for q in b.sigma:
        b.add(b.label("supp_lit", q), [q], DEFEASIBLE, b.atom("supp", q))
    for r in D.rules:
        # supp_body is needed for defeaters as well: they are competitors below
        b.add(b.label("supp_body", r.label), [b.atom("supp", x) for x in r.body],
              DEFEASIBLE, b.atom("supp_body", r.label))
    for r in D.rules:
        if r.is_defeater:
            continue
        overruled = b.atom("o_rule", r.label)
        b.add(b.label("supp_head", r.label), [b.atom("supp_body", r.label), ~overruled],
              DEFEASIBLE, b.atom("supp", r.head))
        p_s = b.add(b.label("p_s", r.label), [], DEFEASIBLE, ~overruled)
        for s in b.opposing(r):
            if b.sup_in_d(s, r):
                b.add(b.label("n_s", r.label, s.label), s.body, DEFEASIBLE, overruled)
                b.beats(b.label("n_s", r.label, s.label), p_s)
    for r in D.rules:
        if r.is_defeater:
            continue
        comp = b.atom("comp", r.label)
        b.add(b.label("inf", r.label),
              list(r.body) + [~comp, ~b.atom("strict", r.head.complement())], DEFEASIBLE, r.head)
        p_d = b.add(b.label("p_d", r.label), [], DEFEASIBLE, ~comp)
        for s in b.opposing(r):
            if not b.sup_in_d(r, s):
                b.add(b.label("n_d", r.label, s.label), [b.atom("supp_body", s.label)], DEFEASIBLE, comp)
                b.beats(b.label("n_d", r.label, s.label), p_d)
    return b.theory()


def t_prop_for_block(D: Theory, literal: bool = False) -> Theory:
    """Simulate ambiguity blocking (``pd*``) with ambiguity propagation (``d*``, ``d``, ``pd``).

    By default each rule ``r`` for ``q`` gets its own ``$ok(r)`` atom, attacked
    only by the competitors ``r`` does not beat, and ``$ok(r)`` feeds
    ``$undefeated(q)``.  With ``literal=True`` all rules for ``q`` share
    ``$undefeated(q)`` directly, so a competitor of one rule also blocks a
    sibling rule that beats it; strict rules are then also copied verbatim.
    """
    b = _Builder(D)
    b.copy_strict(literal)
    b.strict_markers(with_true=True)
    for q in b.sigma:
        b.add(b.label("undefeated", q), [b.atom("undefeated", q)], DEFEASIBLE, q)
    for r in D.rules:
        if r.is_defeater:
            continue
        undefeated = b.atom("undefeated", r.head)
        target = undefeated if literal else b.atom("ok", r.label)
        p_d = b.add(b.label("p_d", r.label),
                    list(r.body) + [~b.atom("true_", r.head.complement())], DEFEASIBLE, target)
        for s in b.opposing(r):
            if not b.sup_in_d(r, s):
                b.add(b.label("n_d", r.label, s.label), s.body, DEFEASIBLE, ~target)
                b.beats(b.label("n_d", r.label, s.label), p_d)
        if not literal:
            b.add(b.label("ok", r.label), [target], DEFEASIBLE, undefeated)
    return b.theory()


def t_team_for_individual_base(D: Theory) -> Theory:
    """Route every rule through ``$h(r)`` so that competitors attack ``r`` one at a time.

    Correct for additions of facts only; additions of rules expose the
    missing competitor (see :func:`t_team_for_individual`).
    """
    b = _Builder(D)
    _team_base(b)
    return b.theory()


def _team_base(b: _Builder):
    D = b.D
    for r in D.rules:
        h = b.atom("h", r.label)
        b.add(b.label("p", r.label), r.body, r.arrow, h)
        b.add(b.label("s", r.label), [h], STRICT, r.head)
        for r2 in b.opposing(r):
            b.add(b.label("n", r.label, r2.label), r2.body, r2.arrow, ~h)
    for r in D.rules:
        for r2 in b.opposing(r):
            if b.sup_in_d(r, r2):
                b.beats(b.label("p", r.label), b.label("n", r.label, r2.label))
                b.beats(b.label("n", r2.label, r.label), b.label("p", r2.label))


def t_team_for_individual(D: Theory) -> Theory:
    """The base construction plus one defeater per literal as a standing competitor."""
    b = _Builder(D)
    _team_base(b)
    for q in b.sigma:
        b.add(b.label("o_q", q), [b.atom("one", q)], DEFEATER, q)
    for r in D.rules:
        b.add(b.label("one_q", r.label), r.body, DEFEASIBLE, b.atom("one", r.head))
    for r in D.rules:
        b.beats(b.label("s", r.label), b.label("o_q", r.head.complement()))
    return b.theory()


def t_individual_for_team(D: Theory, literal: bool = False) -> Theory:
    """Simulate team defeat (``pd``, ``d``) with individual defeat (``pd*``, ``d*``).

    ``$d(r)`` says rule ``r`` is defeated: its body fails or some rule for
    the opposite literal beats it.  The ``$g``/``~$g`` pair can only be used
    under ``s*``, which confines the ``$supp(q,r)`` rules to support.

    By default ``R2(ri,rj)`` is only emitted when ``rj > ri``: a rule that is
    not superior to ``ri`` can never defeat it, and an unresolved
    ``R1``/``R2`` conflict would still leave ``$d(ri,rj)`` supported under
    ``s*``.  ``literal=True`` emits every ``R2`` and copies strict rules
    verbatim; ``d`` is then not simulated, already for
    ``r1: => p. r2: => ~p. r1 > r2.``
    """
    b = _Builder(D)
    b.copy_strict(literal)
    b.strict_markers(with_true=True)

    # part 4: defeat of r_i (for ~q) by r_j (for q)
    for ri in D.rules:
        ri_defeated = b.atom("d2", ri.label)
        for rj in b.opposing(ri):
            if rj.is_defeater:
                continue
            dij = b.atom("d1", ri.label, rj.label)
            r1 = b.add(b.label("R1", ri.label, rj.label), ri.body, ri.arrow, ~dij)
            if literal or b.sup_in_d(rj, ri):
                r2 = b.add(b.label("R2", ri.label, rj.label), rj.body, DEFEASIBLE, dij)
                if b.sup_in_d(rj, ri):
                    b.beats(r2, r1)
            r3 = b.add(b.label("R3", ri.label, rj.label), [b.atom("true_", rj.head)], DEFEASIBLE, dij)
            b.add(b.label("d_pair", ri.label, rj.label), [dij], DEFEASIBLE, ri_defeated)
            b.beats(r3, r1)
        fail = b.atom("fail", ri.label)
        b.add(b.label("d_fail", ri.label), [fail], DEFEASIBLE, ri_defeated)
        nf = b.add(b.label("NF", ri.label), ri.body, DEFEASIBLE, ~fail)
        f = b.add(b.label("F", ri.label), [], DEFEASIBLE, fail)
        b.beats(nf, f)

    # part 5
    for r in D.rules:
        if not r.is_defeater:
            b.add(b.label("one_q", r.label), r.body, DEFEASIBLE, b.atom("one", r.head))

    # part 6
    for q in b.sigma:
        nq = q.complement()
        body = [b.atom("one", q), ~b.atom("true_", nq)]
        body += [b.atom("d2", s.label) for s in b.rules_for(nq)]
        b.add(b.label("s_q", q), body, DEFEASIBLE, q)

    # part 7: support, usable only where +s* g and +s* ~g both hold
    g = b.atom("g")
    for r in D.rules:
        if r.is_defeater:
            continue
        opp = b.opposing(r)
        body = list(r.body) + [b.atom("d_supp", s.label, r.label) for s in opp] + [g, ~g]
        b.add(b.label("supp_q", r.head, r.label), body, DEFEASIBLE, r.head)
        for s in opp:
            d_supp = b.atom("d_supp", s.label, r.label)
            a = b.add(b.label("a", s.label, r.label), s.body, DEFEASIBLE, ~d_supp)
            bb = b.add(b.label("b", s.label, r.label), r.body, DEFEASIBLE, d_supp)
            if b.sup_in_d(s, r):
                b.beats(a, bb)
    if D.rules:
        b.add(b.label("g1"), [], DEFEASIBLE, g)
        b.add(b.label("g2"), [], DEFEASIBLE, ~g)

    # parts 8 and 9: a standing competitor for every literal
    for r in D.rules:
        b.add(b.label("o_rule", r.label), r.body, DEFEASIBLE, b.atom("o_lit", r.head))
    for q in b.sigma:
        b.add(b.label("o_q", q), [b.atom("o_lit", q)], DEFEATER, q)
        b.beats(b.label("s_q", q), b.label("o_q", q.complement()))
    return b.theory()


TRANSFORMS: dict[TransformKind, Callable[[Theory], Theory]] = {
    TransformKind.BLOCK_FOR_PROP: t_block_for_prop,
    TransformKind.PROP_FOR_BLOCK: t_prop_for_block,
    TransformKind.TEAM_FOR_INDIVIDUAL_BASE: t_team_for_individual_base,
    TransformKind.TEAM_FOR_INDIVIDUAL: t_team_for_individual,
    TransformKind.INDIVIDUAL_FOR_TEAM: t_individual_for_team,
}


LITERAL_VARIANTS = frozenset({TransformKind.BLOCK_FOR_PROP, TransformKind.PROP_FOR_BLOCK,
                              TransformKind.INDIVIDUAL_FOR_TEAM})


def transform(kind: TransformKind | str, D: Theory, literal: bool = False) -> Theory:
    """Apply a transformation; ``literal`` selects the unrepaired construction where one exists."""
    if isinstance(kind, str):
        kind = TransformKind.parse(kind)
    if literal:
        if kind not in LITERAL_VARIANTS:
            raise ValueError(f"{kind.value} has no literal variant")
        return TRANSFORMS[kind](D, literal=True)
    return TRANSFORMS[kind](D)
