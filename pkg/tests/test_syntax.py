import pytest
from hypothesis import given, strategies as st

from defeasible.harness import GenConfig, gen_theory
from defeasible.syntax import (ArrowKind, LabelClash, Literal, Rule, Theory, add_theories,
                               complement, is_modular_addition, language_of, validate_theory)
from defeasible.textformat import parse_theory
from defeasible.transforms import TransformKind, transform

EX1 = "r1: => p.\nr2: => ~p.\nr3: ~p => ~q.\nr4: => q.\n"


def lits(*names):
    return frozenset(Literal.of(n) for n in names)


def test_complement_flips_polarity():
    p = Literal("p")
    assert complement(p) == Literal("p", False)
    assert complement(Literal("p", False)) == p
    guilty = Literal("guilty")
    assert complement(complement(guilty)) == guilty


@given(st.from_regex(r"[a-z][a-z0-9_]{0,5}", fullmatch=True), st.booleans())
def test_complement_is_an_involution(atom, positive):
    q = Literal(atom, positive)
    assert ~~q == q
    assert ~q != q
    assert (~q).atom == q.atom


def test_example_theory_is_valid():
    assert validate_theory(parse_theory(EX1)).ok


def test_superiority_cycle_is_reported():
    r1 = Rule("r1", [], ArrowKind.DEFEASIBLE, Literal("p"))
    r2 = Rule("r2", [], ArrowKind.DEFEASIBLE, Literal("p", False))
    result = validate_theory(Theory([], [r1, r2], [("r1", "r2"), ("r2", "r1")]))
    assert not result.ok
    assert [v.kind for v in result.violations] == ["superiority-cycle"]
    assert result.violations[0].labels == ("r1", "r2")


def test_duplicate_label_is_reported():
    r = Rule("r1", [], ArrowKind.DEFEASIBLE, Literal("p"))
    result = validate_theory(Theory([], [r, Rule("r1", [], ArrowKind.STRICT, Literal("q"))]))
    assert [v.kind for v in result.violations] == ["duplicate-label"]


def test_dangling_superiority_is_reported():
    r = Rule("r1", [], ArrowKind.DEFEASIBLE, Literal("p"))
    result = validate_theory(Theory([], [r], [("r1", "r9")]))
    assert [v.kind for v in result.violations] == ["dangling-superiority"]


def test_non_opposing_superiority_is_only_a_note():
    D = parse_theory("r1: => p.\nr2: => q.\nr1 > r2.\n")
    result = validate_theory(D)
    assert result.ok
    assert len(result.notes) == 1


def test_language_of_example():
    view = language_of(parse_theory(EX1))
    assert view.literals == lits("p", "~p", "q", "~q")
    assert view.labels == {"r1", "r2", "r3", "r4"}


def test_language_of_empty_and_fact():
    assert language_of(Theory()).literals == frozenset()
    assert language_of(Theory()).labels == frozenset()
    assert language_of(Theory([Literal("p")])).literals == lits("p", "~p")


def test_add_theories():
    D = parse_theory("r1: => p.\nr2: => ~p.\n")
    A = parse_theory("a1: => p.\n")
    DA = add_theories(D, A)
    assert DA.labels == ["r1", "r2", "a1"]
    assert DA.superiority == frozenset()
    assert add_theories(D, Theory()) == D
    with pytest.raises(LabelClash) as info:
        add_theories(D, parse_theory("r1: => q.\n"))
    assert info.value.labels == ["r1"]


def test_modular_addition_examples():
    D = parse_theory(EX1)
    TD = transform(TransformKind.BLOCK_FOR_PROP, D)
    assert is_modular_addition(D, TD, parse_theory("a1: => p.\n"))
    leak = Theory([Literal("$strict(p)")])
    verdict = is_modular_addition(D, TD, leak)
    assert not verdict and "$strict(p)" in verdict.reason
    clash = Theory([], [Rule("$p_d(r1)", [], ArrowKind.DEFEASIBLE, Literal("p"))])
    verdict = is_modular_addition(D, TD, clash)
    assert not verdict and "$p_d(r1)" in verdict.reason


def test_body_is_a_set():
    r = Rule("r1", [Literal("a"), Literal("a")], ArrowKind.DEFEASIBLE, Literal("p"))
    assert r.body == lits("a")


@pytest.mark.parametrize("seed", range(30))
def test_addition_preserves_validity_and_language(seed):
    D = gen_theory(GenConfig(), seed)
    A = gen_theory(GenConfig(rules=3), seed + 1000)
    A = Theory(A.facts, [Rule("a" + r.label, r.body, r.arrow, r.head) for r in A.rules],
               [("a" + x, "a" + y) for x, y in A.superiority])
    DA = add_theories(D, A)
    assert validate_theory(DA).ok
    assert language_of(DA).literals == language_of(D).literals | language_of(A).literals


def test_addition_is_associative_up_to_rule_order():
    X = parse_theory("x1: => p.\n")
    Y = parse_theory("y1: a => ~p.\ny2: => a.\n")
    Z = parse_theory("q.\nz1: q -> p.\n")
    left = add_theories(add_theories(X, Y), Z)
    right = add_theories(X, add_theories(Y, Z))
    assert set(left.rules) == set(right.rules)
    assert left.facts == right.facts and left.superiority == right.superiority
