"""Fixpoint inference for the DL family of defeasible logics.

Every tag has a ``+`` and a ``-`` inference rule; together they define the
one-step operator ``T_D``.  Conclusions are computed by iterating ``T_D`` from
the empty set until nothing changes.

The inference rules come in three shapes, each parametrised by the tags it
reads:

* team defeat (``pd``, ``d``): a team of rules for ``q`` may jointly beat the
  rules for ``~q``;
* individual defeat (``pd*``, ``d*``): a single rule must beat every rule for
  ``~q``;
* support (``s``, ``s*``): ``q`` is supported unless every rule for it is
  overruled by a superior applicable rule for ``~q``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .syntax import LanguageView, Literal, Rule, Theory, language_of


class TagSetNotClosed(ValueError):
    pass


class Tag(enum.Enum):
    DELTA = "D"
    PARTIAL = "pd"
    PARTIAL_STAR = "pd*"
    DELTA_AMB = "d"
    SIGMA = "s"
    DELTA_STAR = "d*"
    SIGMA_STAR = "s*"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, text: str) -> Tag:
        try:
            return cls(text.strip())
        except ValueError:
            spelled = ", ".join(t.value for t in cls)
            raise ValueError(f"unknown tag {text!r}; expected one of {spelled}") from None


class Sign(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    def __str__(self):
        return self.value


TAG_DEPENDENCIES = {
    Tag.DELTA: frozenset(),
    Tag.PARTIAL: frozenset({Tag.DELTA}),
    Tag.PARTIAL_STAR: frozenset({Tag.DELTA}),
    Tag.DELTA_AMB: frozenset({Tag.SIGMA, Tag.DELTA}),
    Tag.SIGMA: frozenset({Tag.DELTA_AMB, Tag.DELTA}),
    Tag.DELTA_STAR: frozenset({Tag.SIGMA_STAR, Tag.DELTA}),
    Tag.SIGMA_STAR: frozenset({Tag.DELTA_STAR, Tag.DELTA}),
}
ALL_TAGS = frozenset(Tag)

# (shape, tag consulted on the opposing side)
_SHAPES = {
    Tag.PARTIAL: ("team", Tag.PARTIAL),
    Tag.DELTA_AMB: ("team", Tag.SIGMA),
    Tag.PARTIAL_STAR: ("individual", Tag.PARTIAL_STAR),
    Tag.DELTA_STAR: ("individual", Tag.SIGMA_STAR),
    Tag.SIGMA: ("support", Tag.DELTA_AMB),
    Tag.SIGMA_STAR: ("support", Tag.DELTA_STAR),
}


def close_tags(tags: Iterable[Tag]) -> frozenset:
    closed, todo = set(), list(tags)
    while todo:
        t = todo.pop()
        if t not in closed:
            closed.add(t)
            todo.extend(TAG_DEPENDENCIES[t])
    return frozenset(closed)


def check_closed(tags: Iterable[Tag]) -> frozenset:
    tags = frozenset(tags)
    missing = close_tags(tags) - tags
    if missing:
        names = ", ".join(sorted(t.value for t in missing))
        raise TagSetNotClosed(f"tag set is missing dependencies: {names}")
    return tags


@dataclass(frozen=True)
class SignedConclusion:
    sign: Sign
    tag: Tag
    literal: Literal

    def __str__(self):
        return f"{self.sign.value}{self.tag.value} {self.literal}"

    def __lt__(self, other):
        return str(self) < str(other)

    @classmethod
    def plus(cls, tag: Tag, q: Literal) -> SignedConclusion:
        return cls(Sign.PLUS, tag, q)

    @classmethod
    def minus(cls, tag: Tag, q: Literal) -> SignedConclusion:
        return cls(Sign.MINUS, tag, q)


@dataclass(frozen=True)
class ConclusionSet:
    members: frozenset
    universe: LanguageView

    def __contains__(self, c):
        return c in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def literals(self, sign: Sign, tag: Tag) -> frozenset:
        return frozenset(c.literal for c in self.members if c.sign is sign and c.tag is tag)

    def plus(self, tag: Tag) -> frozenset:
        return self.literals(Sign.PLUS, tag)

    def minus(self, tag: Tag) -> frozenset:
        return self.literals(Sign.MINUS, tag)

    def restrict(self, tags: Iterable[Tag]) -> ConclusionSet:
        tags = frozenset(tags)
        return ConclusionSet(frozenset(c for c in self.members if c.tag in tags), self.universe)

    @property
    def tags(self) -> frozenset:
        return frozenset(c.tag for c in self.members)

    @classmethod
    def empty(cls, universe: LanguageView) -> ConclusionSet:
        return cls(frozenset(), universe)


class IndexedTheory:
    """A theory with rules grouped by head, plus an integer encoding for the engine."""

    def __init__(self, theory: Theory):
        self.theory = theory
        self.universe = language_of(theory)
        self.by_head: dict[Literal, list[Rule]] = {}
        self.by_head_sd: dict[Literal, list[Rule]] = {}
        self.by_head_strict: dict[Literal, list[Rule]] = {}
        for r in theory.rules:
            self.by_head.setdefault(r.head, []).append(r)
            if not r.is_defeater:
                self.by_head_sd.setdefault(r.head, []).append(r)
            if r.is_strict:
                self.by_head_strict.setdefault(r.head, []).append(r)
        self.superiority = frozenset(theory.superiority)

        self.literal_list = sorted(self.universe.literals)
        self.ids = {q: i for i, q in enumerate(self.literal_list)}
        ids = self.ids
        self.neg = [ids[q.complement()] for q in self.literal_list]
        self.facts = frozenset(ids[q] for q in theory.facts)
        # per literal id: indices of the rules with that head
        self.rules_all: list[list[int]] = [[] for _ in self.literal_list]
        self.rules_sd: list[list[int]] = [[] for _ in self.literal_list]
        self.rules_s: list[list[int]] = [[] for _ in self.literal_list]
        self.bodies: list[tuple[int, ...]] = []
        label_index = {}
        for k, r in enumerate(theory.rules):
            label_index[r.label] = k
            self.bodies.append(tuple(sorted(ids[b] for b in r.body)))
            h = ids[r.head]
            self.rules_all[h].append(k)
            if not r.is_defeater:
                self.rules_sd[h].append(k)
            if r.is_strict:
                self.rules_s[h].append(k)
        self.beats = {(label_index[a], label_index[b]) for a, b in theory.superiority
                      if a in label_index and b in label_index}
        # readers[a]: literals whose derivation looks at literal a
        readers: list[set[int]] = [{a, self.neg[a]} for a in range(len(self.literal_list))]
        for k, r in enumerate(theory.rules):
            h = ids[r.head]
            for a in self.bodies[k]:
                readers[a].update((h, self.neg[h]))
        self.readers = [frozenset(x) for x in readers]

    def rules_for(self, q: Literal) -> list[Rule]:
        return self.by_head.get(q, [])


def build_index(D: Theory) -> IndexedTheory:
    return IndexedTheory(D)


# -- one application of T_D over integer-coded conclusion sets ---------------
#
# ``E`` maps (sign, tag) to a set of literal ids.

def _derive(ix: IndexedTheory, E: dict, sign: Sign, tag: Tag, q: int) -> bool:
    """Whether ``(sign, tag, q)`` is in ``T_D(E)``."""
    return _deriver(ix, E, sign, tag)(q)


def _deriver(ix: IndexedTheory, E: dict, sign: Sign, tag: Tag):
    """Return a test ``q -> bool`` for membership of ``(sign, tag, q)`` in ``T_D(E)``."""
    P, M = Sign.PLUS, Sign.MINUS
    bodies, beats, neg_of = ix.bodies, ix.beats, ix.neg
    facts, rules_s, rules_sd, rules_all = ix.facts, ix.rules_s, ix.rules_sd, ix.rules_all
    plus_delta, minus_delta = E[P, Tag.DELTA], E[M, Tag.DELTA]

    if tag is Tag.DELTA:
        if sign is P:
            return lambda q: q in facts or any(
                all(a in plus_delta for a in bodies[r]) for r in rules_s[q])
        return lambda q: q not in facts and all(
            any(a in minus_delta for a in bodies[r]) for r in rules_s[q])

    shape, other = _SHAPES[tag]
    pos, neg = E[P, tag], E[M, tag]
    opos, oneg = E[P, other], E[M, other]

    def holds(r, s):
        return all(a in s for a in bodies[r])

    def fails(r, s):
        return any(a in s for a in bodies[r])

    if shape == "team":
        if sign is P:
            def plus_team(q):
                nq = neg_of[q]
                if q in plus_delta:
                    return True
                if nq not in minus_delta:
                    return False
                team = [t for t in rules_sd[q] if holds(t, pos)]
                if not team:
                    return False
                return all(fails(s, oneg) or any((t, s) in beats for t in team)
                           for s in rules_all[nq])
            return plus_team

        def minus_team(q):
            nq = neg_of[q]
            if q not in minus_delta:
                return False
            sd_q = rules_sd[q]
            if all(fails(r, neg) for r in sd_q) or nq in plus_delta:
                return True
            return any(holds(s, opos) and all(fails(t, neg) or (t, s) not in beats for t in sd_q)
                       for s in rules_all[nq])
        return minus_team

    if shape == "individual":
        if sign is P:
            def plus_individual(q):
                nq = neg_of[q]
                if q in plus_delta:
                    return True
                if nq not in minus_delta:
                    return False
                attackers = rules_all[nq]
                return any(holds(r, pos) and all(fails(s, oneg) or (r, s) in beats for s in attackers)
                           for r in rules_sd[q])
            return plus_individual

        def minus_individual(q):
            nq = neg_of[q]
            if q not in minus_delta:
                return False
            if nq in plus_delta:
                return True
            attackers = rules_all[nq]
            return all(fails(r, neg) or any(holds(s, opos) and (r, s) not in beats for s in attackers)
                       for r in rules_sd[q])
        return minus_individual

    # support
    if sign is P:
        def plus_support(q):
            if q in plus_delta:
                return True
            attackers = rules_all[neg_of[q]]
            return any(holds(r, pos) and all(fails(s, oneg) or (s, r) not in beats for s in attackers)
                       for r in rules_sd[q])
        return plus_support

    def minus_support(q):
        if q not in minus_delta:
            return False
        attackers = rules_all[neg_of[q]]
        return all(fails(r, neg) or any(holds(s, opos) and (s, r) in beats for s in attackers)
                   for r in rules_sd[q])
    return minus_support


def _empty_state(tags) -> dict:
    return {(s, t): set() for s in Sign for t in Tag}


def _apply(ix: IndexedTheory, E: dict, tags, skip_known: bool, candidates=None) -> dict:
    """Return ``T_D(E)`` restricted to ``tags``.

    With ``skip_known`` the members already in ``E`` are copied instead of
    re-derived; that is only exact when ``E`` is contained in ``T_D(E)``, as
    on the iteration sequence from the empty set.  ``candidates`` limits the
    literals that are tested at all; the caller guarantees that the others
    cannot have changed.
    """
    out = _empty_state(tags)
    pool = range(len(ix.literal_list)) if candidates is None else candidates
    for tag in tags:
        for sign in Sign:
            known = E[sign, tag]
            target = out[sign, tag]
            if skip_known:
                target.update(known)
            test = _deriver(ix, E, sign, tag)
            for q in pool:
                if skip_known and q in known:
                    continue
                if test(q):
                    target.add(q)
    return out


def _to_state(ix: IndexedTheory, E: ConclusionSet) -> dict:
    state = _empty_state(ALL_TAGS)
    for c in E.members:
        if c.literal in ix.ids:
            state[c.sign, c.tag].add(ix.ids[c.literal])
    return state


def _from_state(ix: IndexedTheory, state: dict, tags) -> ConclusionSet:
    lits = ix.literal_list
    members = frozenset(SignedConclusion(s, t, lits[q])
                        for (s, t), ids in state.items() if t in tags for q in ids)
    return ConclusionSet(members, ix.universe)


def step(ix: IndexedTheory, E: ConclusionSet, tags: Iterable[Tag]) -> ConclusionSet:
    """One application of ``T_D`` to ``E`` for a dependency-closed set of tags."""
    tags = check_closed(tags)
    return _from_state(ix, _apply(ix, _to_state(ix, E), tags, skip_known=False), tags)


def iterate(ix: IndexedTheory, tags: Iterable[Tag]):
    """Yield ``T_D ↑ 1, T_D ↑ 2, ...`` (as raw states) until the sequence is stable.

    Each round only re-tests literals that read a literal which changed in
    the previous round; every other test would repeat its earlier answer.
    """
    tags = check_closed(tags)
    state = _empty_state(tags)
    candidates = None
    while True:
        nxt = _apply(ix, state, tags, skip_known=True, candidates=candidates)
        changed = set()
        for key, ids in nxt.items():
            if len(ids) != len(state[key]):
                changed.update(ids - state[key])
        if not changed:
            return
        yield nxt
        state = nxt
        candidates = sorted({q for a in changed for q in ix.readers[a]})


def least_fixpoint(D: Theory | IndexedTheory, tags: Iterable[Tag] = ALL_TAGS) -> ConclusionSet:
    """All conclusions of ``D`` for ``tags`` (dependencies are computed and then dropped)."""
    ix = D if isinstance(D, IndexedTheory) else build_index(D)
    wanted = frozenset(tags)
    closed = close_tags(wanted)
    state = _empty_state(closed)
    for state in iterate(ix, closed):
        pass
    return _from_state(ix, state, wanted)


class Verdict(enum.Enum):
    PROVED = "Proved"
    REFUTED = "Refuted"
    UNDETERMINED = "Undetermined"


def query(D: Theory, c: SignedConclusion, lfp: ConclusionSet | None = None) -> Verdict:
    """Status of ``+d q``: Proved, Refuted (``-d q`` holds) or Undetermined."""
    if c.sign is not Sign.PLUS:
        raise ValueError("queries are posed as +d q")
    if c.literal not in language_of(D).literals:
        return Verdict.REFUTED
    if lfp is None:
        lfp = least_fixpoint(D, {c.tag})
    if c in lfp:
        return Verdict.PROVED
    if SignedConclusion(Sign.MINUS, c.tag, c.literal) in lfp:
        return Verdict.REFUTED
    return Verdict.UNDETERMINED
