import pytest

from defeasible.engine import Sign, SignedConclusion, Tag, least_fixpoint
from defeasible.golden import load_fixture
from defeasible.harness import AdditionKind, GenConfig, gen_modular_addition, gen_theory
from defeasible.syntax import (ArrowKind, Literal, Rule, Theory, add_theories, language_of,
                               validate_theory)
from defeasible.textformat import parse_theory
from defeasible.transforms import (LITERAL_VARIANTS, TransformKind, fresh_name, prefix_for,
                                   t_block_for_prop, t_individual_for_team, t_prop_for_block,
                                   t_team_for_individual, t_team_for_individual_base, transform)

K = TransformKind
S, DF, DT = ArrowKind.STRICT, ArrowKind.DEFEASIBLE, ArrowKind.DEFEATER


def L(text):
    return Literal.of(text)


def rule(label, body, arrow, head):
    return Rule(label, [L(b) for b in body], arrow, L(head))


def has_rule(T, label, body, arrow, head):
    return rule(label, body, arrow, head) in T.rules


EX1 = load_fixture("ex1")
EX13 = load_fixture("ex13")


def test_fresh_name_rendering():
    assert fresh_name("strict", L("p")) == "$strict(p)"
    assert fresh_name("d1", "r1", "r2") == "$d(r1,r2)"
    assert fresh_name("n_d", "r3", "r4", label=True) == "$n_d(r3,r4)"
    assert fresh_name("g") == "$g"


def test_transform_kind_names():
    assert K.parse("def2") is K.BLOCK_FOR_PROP
    assert K.parse("individual-for-team") is K.INDIVIDUAL_FOR_TEAM
    with pytest.raises(ValueError):
        K.parse("def7")


@pytest.mark.parametrize("kind", list(K))
def test_empty_theory_maps_to_empty_theory(kind):
    assert transform(kind, Theory()) == Theory()


def test_block_for_prop_ex1():
    T = t_block_for_prop(EX1)
    assert has_rule(T, "$inf(r3)", ["~p", "~$comp(r3)", "~$strict(q)"], DF, "~q")
    assert ("$n_d(r3,r4)", "$p_d(r3)") in T.superiority
    assert len(T.rules) == 36
    assert not [r for r in T.rules if r.label.startswith("$n_s")]
    assert has_rule(T, "$str(p)", ["p"], S, "$strict(p)")
    assert has_rule(T, "$nstr(p)", [], DF, "~$strict(p)")
    assert ("$nstr(p)", "$str(p)") in T.superiority
    assert has_rule(T, "$sb(r3)", ["$supp(~p)"], DF, "$supp_body(r3)")
    assert has_rule(T, "$sh(r3)", ["$supp_body(r3)", "~$o(r3)"], DF, "$supp(~q)")
    assert has_rule(T, "$p_s(r1)", [], DF, "~$o(r1)")
    assert has_rule(T, "$n_d(r4,r3)", ["$supp_body(r3)"], DF, "$comp(r4)")


def test_block_for_prop_superiority_blocks():
    D = parse_theory("r1: a => p.\nr2: b => ~p.\nr1 > r2.\n")
    T = t_block_for_prop(D)
    assert has_rule(T, "$n_s(r2,r1)", ["a"], DF, "$o(r2)")
    assert ("$n_s(r2,r1)", "$p_s(r2)") in T.superiority
    assert not any(r.label == "$n_s(r1,r2)" for r in T.rules)
    # r1 > r2, so r2 cannot block r1's inference
    assert not any(r.label == "$n_d(r1,r2)" for r in T.rules)
    assert has_rule(T, "$n_d(r2,r1)", ["$supp_body(r1)"], DF, "$comp(r2)")


def test_strict_rules_copied_with_guarded_bodies():
    D = parse_theory("r1: a -> p.\nr2: => a.\n")
    for kind in (K.BLOCK_FOR_PROP, K.PROP_FOR_BLOCK, K.INDIVIDUAL_FOR_TEAM):
        assert has_rule(transform(kind, D), "r1", ["$strict(a)"], S, "p")
        assert has_rule(transform(kind, D, literal=True), "r1", ["a"], S, "p")


def test_prop_for_block_literal_variant_listing():
    T = t_prop_for_block(EX1, literal=True)
    assert has_rule(T, "$n_d(r4,r3)", ["~p"], DF, "~$undefeated(q)")
    assert has_rule(T, "$p_d(r4)", ["~$true(~q)"], DF, "$undefeated(q)")
    assert ("$n_d(r4,r3)", "$p_d(r4)") in T.superiority
    assert has_rule(T, "$u(q)", ["$undefeated(q)"], DF, "q")
    assert ("$t(q)", "$nt(q)") in T.superiority and ("$nstr(q)", "$str(q)") in T.superiority


def test_prop_for_block_uses_a_per_rule_atom():
    T = t_prop_for_block(EX1)
    assert has_rule(T, "$n_d(r4,r3)", ["~p"], DF, "~$ok(r4)")
    assert has_rule(T, "$p_d(r4)", ["~$true(~q)"], DF, "$ok(r4)")
    assert has_rule(T, "$ok(r4)", ["$ok(r4)"], DF, "$undefeated(q)")
    assert has_rule(T, "$u(q)", ["$undefeated(q)"], DF, "q")


def test_prop_for_block_single_rule():
    T = t_prop_for_block(parse_theory("r1: => p.\n"))
    assert has_rule(T, "$p_d(r1)", ["~$true(~p)"], DF, "$ok(r1)")
    assert not [r for r in T.rules if r.label.startswith("$n_d")]
    T = t_prop_for_block(parse_theory("r1: => p.\n"), literal=True)
    assert has_rule(T, "$p_d(r1)", ["~$true(~p)"], DF, "$undefeated(p)")


def test_prop_for_block_skips_beaten_attackers():
    T = t_prop_for_block(parse_theory("r1: => p.\nr2: => ~p.\nr1 > r2.\n"))
    assert not any(r.label == "$n_d(r1,r2)" for r in T.rules)
    assert any(r.label == "$n_d(r2,r1)" for r in T.rules)


def test_team_for_individual_base_ex13():
    T = t_team_for_individual_base(EX13)
    assert set(T.rules) == {
        rule("$p(r1)", [], DF, "$h(r1)"), rule("$n(r1,r2)", [], DF, "~$h(r1)"),
        rule("$p(r2)", [], DF, "$h(r2)"), rule("$n(r2,r1)", [], DF, "~$h(r2)"),
        rule("$s(r1)", ["$h(r1)"], S, "p"), rule("$s(r2)", ["$h(r2)"], S, "~p"),
    }
    assert T.superiority == frozenset()


def test_team_for_individual_base_ex15():
    T = t_team_for_individual_base(load_fixture("ex15"))
    assert {("$p(r1)", "$n(r1,r2)"), ("$n(r2,r1)", "$p(r2)"),
            ("$p(r3)", "$n(r3,r4)"), ("$n(r4,r3)", "$p(r4)")} <= T.superiority


def test_team_for_individual_base_keeps_arrows():
    T = t_team_for_individual_base(parse_theory("r1: a -> p.\nr2: b ~> ~p.\n"))
    assert has_rule(T, "$p(r1)", ["a"], S, "$h(r1)")
    assert has_rule(T, "$n(r1,r2)", ["b"], DT, "~$h(r1)")
    assert has_rule(T, "$p(r2)", ["b"], DT, "$h(r2)")


def test_team_for_individual_ex13():
    T = t_team_for_individual(EX13)
    assert set(t_team_for_individual_base(EX13).rules) <= set(T.rules)
    assert has_rule(T, "$one(r1)", [], DF, "$one(p)")
    assert has_rule(T, "$one(r2)", [], DF, "$one(~p)")
    assert has_rule(T, "$o(p)", ["$one(p)"], DT, "p")
    assert has_rule(T, "$o(~p)", ["$one(~p)"], DT, "~p")
    assert {("$s(r1)", "$o(~p)"), ("$s(r2)", "$o(p)")} <= T.superiority


def test_team_for_individual_unsupported_one():
    T = t_team_for_individual(parse_theory("r1: => p.\n"))
    assert has_rule(T, "$o(~p)", ["$one(~p)"], DT, "~p")
    lfp = least_fixpoint(T, {Tag.PARTIAL})
    assert L("$one(~p)") in lfp.minus(Tag.PARTIAL)


def test_individual_for_team_ex13_support_rules():
    T = t_individual_for_team(EX13)
    assert has_rule(T, "$s_q(p)", ["$one(p)", "~$true(~p)", "$d(r2)"], DF, "p")
    assert has_rule(T, "$s_q(~p)", ["$one(~p)", "~$true(p)", "$d(r1)"], DF, "~p")
    assert has_rule(T, "$o(p)", ["$oq(p)"], DT, "p")
    assert ("$s_q(p)", "$o(~p)") in T.superiority
    assert has_rule(T, "$supp(p,r1)", ["$d_supp(r2,r1)", "$g", "~$g"], DF, "p")
    assert has_rule(T, "$g1", [], DF, "$g") and has_rule(T, "$g2", [], DF, "~$g")


def test_individual_for_team_pair_blocks():
    T = t_individual_for_team(parse_theory("r1: => p.\nr2: => ~p.\nr1 > r2.\n"))
    assert ("$R2(r2,r1)", "$R1(r2,r1)") in T.superiority
    assert ("$R2(r1,r2)", "$R1(r1,r2)") not in T.superiority
    assert {("$R3(r1,r2)", "$R1(r1,r2)"), ("$R3(r2,r1)", "$R1(r2,r1)")} <= T.superiority
    assert has_rule(T, "$R1(r2,r1)", [], DF, "~$d(r2,r1)")
    assert has_rule(T, "$R3(r2,r1)", ["$true(p)"], DF, "$d(r2,r1)")
    assert has_rule(T, "$dd(r2,r1)", ["$d(r2,r1)"], DF, "$d(r2)")
    assert ("$a(r1,r2)", "$b(r1,r2)") in T.superiority
    for i in ("r1", "r2"):
        assert has_rule(T, f"$NF({i})", [], DF, f"~$fail({i})")
        assert has_rule(T, f"$F({i})", [], DF, f"$fail({i})")
        assert (f"$NF({i})", f"$F({i})") in T.superiority


def test_individual_for_team_pair_block_variants():
    D = parse_theory("r1: => p.\nr2: => ~p.\nr1 > r2.\n")
    # the repaired form drops R2 where r_j does not beat r_i; the literal form keeps it
    assert not any(r.label == "$R2(r1,r2)" for r in t_individual_for_team(D).rules)
    assert has_rule(t_individual_for_team(D, literal=True), "$R2(r1,r2)", [], DF, "$d(r1,r2)")


def test_individual_for_team_gadget():
    for seed in range(10):
        D = gen_theory(GenConfig(), seed)
        TD = t_individual_for_team(D)
        A = gen_modular_addition(D, TD, AdditionKind.RULES, seed=seed)
        lfp = least_fixpoint(add_theories(TD, A), {Tag.SIGMA_STAR, Tag.DELTA_STAR, Tag.PARTIAL_STAR})
        g = L(fresh_name("g", prefix=prefix_for(D)))
        assert SignedConclusion(Sign.PLUS, Tag.SIGMA_STAR, g) in lfp
        assert SignedConclusion(Sign.PLUS, Tag.SIGMA_STAR, ~g) in lfp
        assert SignedConclusion(Sign.MINUS, Tag.PARTIAL_STAR, g) in lfp
        assert SignedConclusion(Sign.MINUS, Tag.DELTA_STAR, g) in lfp


@pytest.mark.parametrize("kind", list(K))
@pytest.mark.parametrize("seed", range(15))
def test_transform_output_is_valid_and_fresh(kind, seed):
    D = gen_theory(GenConfig(), seed)
    TD = transform(kind, D)
    assert validate_theory(TD).ok
    user = {q for q in language_of(TD).literals if "$" not in q.atom}
    assert user == set(language_of(D).literals)
    assert transform(kind, D) == TD
    new = set(TD.labels) - set(D.labels)
    assert all(label.startswith("$") for label in new)


@pytest.mark.parametrize("kind", list(K))
def test_transforming_a_transformed_theory_escalates_prefix(kind):
    D = transform(K.BLOCK_FOR_PROP, parse_theory("r1: a -> p.\nr2: => ~p.\n"))
    assert prefix_for(D) == "$$"
    TT = transform(kind, D)
    assert validate_theory(TT).ok
    new = set(TT.labels) - set(D.labels)
    assert new and all(label.startswith("$$") for label in new)


def test_literal_flag_only_for_repaired_kinds():
    assert LITERAL_VARIANTS == {K.BLOCK_FOR_PROP, K.PROP_FOR_BLOCK, K.INDIVIDUAL_FOR_TEAM}
    with pytest.raises(ValueError):
        transform(K.TEAM_FOR_INDIVIDUAL, EX13, literal=True)
