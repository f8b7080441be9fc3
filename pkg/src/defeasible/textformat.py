"""Line-oriented ``.dfl`` text format for theories and conclusions.

One statement per line, ``#`` starts a comment::

    p.                 # fact (``fact p.`` is accepted too)
    r1: a, ~b => p.    # rule; arrows ->, =>, ~>
    r1 > r2.           # superiority
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .syntax import (ArrowKind, Literal, Rule, Theory, RESERVED, superiority_cycles)

ARROWS = {"->": ArrowKind.STRICT, "=>": ArrowKind.DEFEASIBLE, "~>": ArrowKind.DEFEATER}
NAME_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")
KEY_CHARS = NAME_CHARS | set("$~,")

SYNTAX = "Syntax"
DUPLICATE_LABEL = "DuplicateLabel"
RESERVED_ATOM = "ReservedAtom"
DANGLING = "DanglingSuperiority"
CYCLE = "SuperiorityCycle"


class ParseError(Exception):
    def __init__(self, line: int, column: int, kind: str, message: str):
        self.line, self.column, self.kind, self.message = line, column, kind, message
        super().__init__(f"{line}:{column}: {kind}: {message}")


class ParseErrors(Exception):
    """All problems found in one input; ``errors`` is never empty."""

    def __init__(self, errors: list[ParseError]):
        self.errors = errors
        super().__init__("\n".join(str(e) for e in errors))


@dataclass
class _Tok:
    kind: str  # name, tilde, comma, colon, dot, gt, arrow
    text: str
    col: int


def _scan_name(line: str, i: int, loose: bool) -> int:
    """Return the end index of a name starting at ``i``; loose names may carry ``$`` and ``(...)`` keys."""
    n = len(line)
    j = i
    while j < n and line[j] == RESERVED:
        j += 1
    while j < n and line[j] in NAME_CHARS:
        j += 1
    if j < n and line[j] == "(" and (loose or j > i):
        depth, k = 0, j
        while k < n:
            c = line[k]
            if c == "(":
                depth += 1
            elif c == ")":
                depth -= 1
                if depth == 0:
                    return k + 1
            elif c not in KEY_CHARS:
                break
            k += 1
        return j
    return j


def _tokenize(line: str, lineno: int, loose: bool) -> list[_Tok]:
    toks, i, n = [], 0, len(line)
    while i < n:
        c = line[i]
        if c.isspace():
            i += 1
            continue
        two = line[i:i + 2]
        if two in ARROWS:
            toks.append(_Tok("arrow", two, i + 1))
            i += 2
            continue
        single = {"~": "tilde", ",": "comma", ":": "colon", ".": "dot", ">": "gt"}.get(c)
        if single:
            toks.append(_Tok(single, c, i + 1))
            i += 1
            continue
        if c in NAME_CHARS or c == RESERVED:
            j = _scan_name(line, i, True)
            if j > i:
                toks.append(_Tok("name", line[i:j], i + 1))
                i = j
                continue
        raise ParseError(lineno, i + 1, SYNTAX, f"unexpected character {c!r}")
    return toks


class _Line:
    def __init__(self, toks: list[_Tok], lineno: int, loose: bool, end_col: int):
        self.toks, self.pos, self.lineno, self.loose, self.end_col = toks, 0, lineno, loose, end_col

    def peek(self, offset=0):
        k = self.pos + offset
        return self.toks[k] if k < len(self.toks) else None

    def col(self):
        t = self.peek()
        return t.col if t else self.end_col

    def expect(self, kind: str, what: str) -> _Tok:
        t = self.peek()
        if t is None or t.kind != kind:
            found = repr(t.text) if t else "end of line"
            raise ParseError(self.lineno, self.col(), SYNTAX, f"expected {what}, found {found}")
        self.pos += 1
        return t

    def name(self, what: str) -> str:
        t = self.expect("name", what)
        if not self.loose and RESERVED in t.text:
            raise ParseError(self.lineno, t.col, RESERVED_ATOM,
                             f"{t.text!r} uses the reserved character '$'")
        if not self.loose and "(" in t.text:
            raise ParseError(self.lineno, t.col, SYNTAX, f"unexpected '(' in {t.text!r}")
        return t.text

    def literal(self) -> Literal:
        positive = True
        if self.peek() is not None and self.peek().kind == "tilde":
            self.pos += 1
            positive = False
        return Literal(self.name("atom"), positive)

    def done(self):
        self.expect("dot", "'.'")
        t = self.peek()
        if t is not None:
            raise ParseError(self.lineno, t.col, SYNTAX, "text after statement terminator")


def _parse_line(raw: str, lineno: int, loose: bool):
    line = raw.split("#", 1)[0]
    toks = _tokenize(line, lineno, loose)
    if not toks:
        return None
    p = _Line(toks, lineno, loose, len(line.rstrip()) + 1)
    first, second = p.peek(), p.peek(1)
    if second is not None and second.kind == "colon":
        label = p.name("rule label")
        p.pos += 1
        body = []
        if p.peek() is not None and p.peek().kind != "arrow":
            body.append(p.literal())
            while p.peek() is not None and p.peek().kind == "comma":
                p.pos += 1
                body.append(p.literal())
        arrow = ARROWS[p.expect("arrow", "'->', '=>' or '~>'").text]
        head = p.literal()
        p.done()
        return ("rule", Rule(label, body, arrow, head), first.col)
    if second is not None and second.kind == "gt":
        winner = p.name("rule label")
        p.pos += 1
        loser = p.name("rule label")
        p.done()
        return ("sup", (winner, loser), first.col)
    if first.kind == "name" and first.text == "fact" and second is not None and second.kind != "dot":
        p.pos += 1
    q = p.literal()
    p.done()
    return ("fact", q, first.col)


def parse_theory(text: str, loose: bool = False) -> Theory:
    """Parse ``.dfl`` text; raise :class:`ParseErrors` listing every problem found.

    With ``loose=True`` the reserved ``$`` names emitted by transformations are accepted.
    """
    errors: list[ParseError] = []
    facts, rules, sup = [], [], []
    rule_pos: dict[str, tuple[int, int]] = {}
    sup_pos: dict[tuple[str, str], tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        try:
            stmt = _parse_line(raw, lineno, loose)
        except ParseError as e:
            errors.append(e)
            continue
        if stmt is None:
            continue
        kind, value, col = stmt
        if kind == "fact":
            facts.append(value)
        elif kind == "rule":
            if value.label in rule_pos:
                line0 = rule_pos[value.label][0]
                errors.append(ParseError(lineno, col, DUPLICATE_LABEL,
                                         f"label {value.label} already defined on line {line0}"))
                continue
            rule_pos[value.label] = (lineno, col)
            rules.append(value)
        else:
            sup_pos.setdefault(value, (lineno, col))
            sup.append(value)
    for pair in sup:
        for label in pair:
            if label not in rule_pos:
                line, col = sup_pos[pair]
                errors.append(ParseError(line, col, DANGLING, f"{pair[0]} > {pair[1]}: no rule labelled {label}"))
    for comp in superiority_cycles(sup):
        pair = min(p for p in sup if p[0] in comp and p[1] in comp)
        line, col = sup_pos[pair]
        errors.append(ParseError(line, col, CYCLE, "superiority cycle through " + ", ".join(comp)))
    if errors:
        errors.sort(key=lambda e: (e.line, e.column))
        raise ParseErrors(errors)
    return Theory(facts, rules, sup)


def print_theory(D: Theory) -> str:
    lines = [f"{q}." for q in sorted(D.facts)]
    lines += [str(r) for r in D.rules]
    lines += [f"{a} > {b}." for a, b in sorted(D.superiority)]
    return "".join(line + "\n" for line in lines)


def parse_literal(text: str, loose: bool = True) -> Literal:
    q = Literal.of(text)
    if not loose and RESERVED in q.atom:
        raise ValueError(f"{text!r} uses the reserved character '$'")
    return q


# -- conclusions -------------------------------------------------------------

def print_conclusion(c) -> str:
    return f"{c.sign.value}{c.tag.value} {c.literal}"


def parse_conclusion(text: str):
    from .engine import Sign, SignedConclusion, Tag

    text = text.strip()
    try:
        head, lit = text.split()
        return SignedConclusion(Sign(head[0]), Tag(head[1:]), Literal.of(lit))
    except ValueError as exc:
        raise ValueError(f"not a conclusion: {text!r}") from exc


def print_conclusions(conclusions: Iterable) -> str:
    return "".join(line + "\n" for line in sorted(print_conclusion(c) for c in conclusions))


def conclusions_to_json(conclusions: Iterable) -> str:
    rows = sorted(conclusions, key=print_conclusion)
    payload = {"conclusions": [
        {"sign": c.sign.value, "tag": c.tag.value, "literal": str(c.literal)} for c in rows]}
    return json.dumps(payload, indent=2)


def conclusions_from_json(text: str) -> list:
    from .engine import Sign, SignedConclusion, Tag

    return [SignedConclusion(Sign(row["sign"]), Tag(row["tag"]), Literal.of(row["literal"]))
            for row in json.loads(text)["conclusions"]]
