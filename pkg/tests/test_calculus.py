import pytest

from src.logic.calculus import (
    ForwardEngine,
    LogicSpec,
    Proof,
    Rule,
    backward_instances,
    check_proof,
    check_step,
    forward_step,
    forward_universe,
    parse_logic,
    proof_from_text,
    proof_to_text,
    restore_units,
    drop_units,
    strip_units,
)
from src.logic.decide import prove_backward
from src.logic.errors import FragmentError, UnnamedLogicError
from src.logic.syntax import (
    BASIC,
    HOLE,
    UNIT,
    Leaf,
    Node,
    NodeR,
    bang,
    parse_context,
    parse_sequent,
    parse_struct,
    sequent_size,
    var,
)

a = var("a")
NACILL = parse_logic("nacill")
FNL = parse_logic("fnl")


def _has(instances, rule, premises):
    want = tuple(parse_sequent(p) for p in premises)
    return any(i.rule == rule and i.premises == want for i in instances)


def test_parse_logic_expands_w_and_checks_letters():
    logic = parse_logic("cyinfnl+w")
    assert logic.structural == frozenset("io")
    assert str(logic) == "cyinfnl+w"
    assert str(parse_logic("nacill0+ce")) == "nacill0+ec"
    for bad in ("fnl+o", "infnl+i", "bogus", "nacill+x"):
        with pytest.raises(UnnamedLogicError):
            parse_logic(bad)


def test_classical_logic_needs_full_connectives():
    with pytest.raises(FragmentError):
        LogicSpec("infnl", BASIC, frozenset(), "involutive")


def test_rule_premise_counts():
    assert Rule.MUL_R.premise_count == 2
    assert Rule.ID.is_initial and Rule.ASSUMPTION.is_initial
    assert Rule.KE.bidirectional and not Rule.E.bidirectional


def test_backward_instances_examples():
    found = backward_instances(parse_sequent("!a => a"), NACILL)
    assert _has(found, Rule.BANG_L, ["a => a"])
    found = backward_instances(parse_sequent("e => 1"), NACILL)
    assert _has(found, Rule.ONE_R, [])
    found = backward_instances(parse_sequent("(a o b) => (a . b)"), NACILL)
    assert _has(found, Rule.MUL_R, ["a => a", "b => b"])


def test_backward_instances_insert_units_where_rules_need_them():
    found = backward_instances(parse_sequent("a => (1 . a)"), FNL)
    assert not _has(found, Rule.MUL_R, ["e => 1", "a => a"])
    assert _has(found, Rule.UNIT_L, ["(e o a) => (1 . a)"])
    assert _has(found, Rule.UNIT_R, ["(a o e) => (1 . a)"])
    found = backward_instances(parse_sequent("(e o a) => (1 . a)"), FNL)
    assert _has(found, Rule.MUL_R, ["e => 1", "a => a"])
    assert _has(found, Rule.UNIT_L, ["a => (1 . a)"])

    found = backward_instances(parse_sequent("(a \\ b) => b"), FNL)
    assert _has(found, Rule.UNIT_L, ["(e o (a \\ b)) => b"])
    found = backward_instances(parse_sequent("(e o (a \\ b)) => b"), FNL)
    assert _has(found, Rule.LDIV_L, ["e => a", "b => b"])
    assert not _has(found, Rule.UNIT_L, ["(e o (e o (a \\ b))) => b"])


def test_unit_laws_are_calculus_steps():
    ident = Proof(Rule.ID, parse_sequent("a => a"), focus=Leaf(a))
    padded = Proof(Rule.UNIT_R, parse_sequent("(a o e) => a"), (ident,), focus=Node(Leaf(a), UNIT))
    assert check_proof(padded, FNL).ok
    wrong_side = Proof(Rule.UNIT_L, parse_sequent("(a o e) => a"), (ident,), focus=Node(Leaf(a), UNIT))
    assert not check_proof(wrong_side, FNL).ok
    back = Proof(Rule.UNIT_R, parse_sequent("a => a"), (padded,), flip=True, focus=Leaf(a))
    assert check_proof(back, FNL).ok
    assert Rule.UNIT_L.bidirectional and Rule.UNIT_R.bidirectional


def test_unit_steps_are_free_in_backward_search():
    proof = prove_backward(parse_sequent("((e o a) o e) => a"), FNL, 0)
    assert proof is not None
    assert {p.rule for p in proof.nodes()} <= {Rule.ID, Rule.UNIT_L, Rule.UNIT_R}
    assert check_proof(proof, FNL).ok
    proof = prove_backward(parse_sequent("a => (1 . a)"), FNL, 1)
    assert proof is not None and check_proof(proof, FNL).ok


def test_strip_drop_and_restore_units():
    x = parse_struct("((e o a) o (b o (e o e)))")
    assert strip_units(x) == parse_struct("(a o b)")
    assert strip_units(UNIT) == UNIT
    assert strip_units(parse_struct("(e o e)")) == UNIT

    target = parse_sequent("((e o a) o e) => a")
    ident = Proof(Rule.ID, parse_sequent("a => a"), focus=Leaf(a))
    up = restore_units(ident, target)
    assert up.conclusion == target
    assert check_proof(up, FNL).ok
    down = drop_units(Proof(Rule.ASSUMPTION, target))
    assert down.conclusion == parse_sequent("a => a")
    assert check_proof(down, FNL, [target]).ok
    with pytest.raises(ValueError):
        restore_units(ident, parse_sequent("(e o b) => a"))


def test_backward_instances_are_single_node_valid():
    logic = parse_logic("nacill+eci")
    goal = parse_sequent("((!a o b) o (a \\ c)) => (c . !a)")
    for inst in backward_instances(goal, logic):
        node = inst.build([Proof(Rule.ASSUMPTION, p) for p in inst.premises])
        assert check_step(node, logic, inst.premises) is None, f"{inst.rule} rejected"


def test_ke_instances_go_both_ways():
    found = backward_instances(parse_sequent("(!a o b) => a"), NACILL)
    assert _has(found, Rule.KE, ["(b o !a) => a"])
    found = backward_instances(parse_sequent("(b o !a) => a"), NACILL)
    assert _has(found, Rule.KE, ["(!a o b) => a"])


def test_check_proof_identity_and_bang_left():
    ident = Proof(Rule.ID, parse_sequent("a => a"), focus=Leaf(a))
    assert check_proof(ident, FNL).ok
    step = Proof(Rule.BANG_L, parse_sequent("!a => a"), (ident,), context=HOLE, focus=Leaf(bang(a)))
    assert check_proof(step, NACILL).ok


def test_check_proof_rejects_bang_right_over_non_k_term():
    ident = Proof(Rule.ID, parse_sequent("a => a"), focus=Leaf(a))
    bad = Proof(Rule.BANG_R, parse_sequent("a => !a"), (ident,), focus=Leaf(a))
    report = check_proof(bad, NACILL)
    assert not report.ok
    assert "k must range over K" in report.reason, report.reason


def test_check_proof_rejects_disabled_rule():
    proof = prove_backward(parse_sequent("(a o b) => (b . a)"), parse_logic("fnl+e"), 4)
    assert proof is not None
    assert check_proof(proof, parse_logic("fnl+e")).ok
    assert not check_proof(proof, FNL).ok, "exchange accepted without (e)"


def test_check_proof_assumption_leaves():
    s = parse_sequent("(a o b) => (b . a)")
    assert not check_proof(Proof(Rule.ASSUMPTION, s), FNL).ok
    assert check_proof(Proof(Rule.ASSUMPTION, s), FNL, [s]).ok


def test_proof_text_round_trip():
    proof = prove_backward(parse_sequent("(b o !a) => (!a . b)"), NACILL, 6)
    assert proof is not None
    again = proof_from_text(proof_to_text(proof))
    assert again == proof
    assert check_proof(again, NACILL).ok


def test_forward_step_adds_bang_left():
    known = [parse_sequent("a => a")]
    out = forward_step(known, NACILL, [], 4, {a, bang(a)})
    assert parse_sequent("!a => a") in out


def test_forward_step_from_nothing_holds_initial_sequents():
    out = forward_step([], NACILL, [], 4, {a, bang(a)})
    for text in ("a => a", "!a => !a", "e => 1"):
        assert parse_sequent(text) in out, f"missing {text}"
    assert all(sequent_size(s) <= 4 for s in out)


def test_forward_step_cut_with_assumptions():
    hyps = [parse_sequent("a => b")]
    known = [parse_sequent("b => c")]
    universe = {a, var("b"), var("c")}
    first = forward_step(known, FNL, hyps, 6, universe)
    second = forward_step(first, FNL, hyps, 6, universe)
    assert parse_sequent("a => c") in second


def test_forward_step_is_monotone():
    s = [parse_sequent("a => b")]
    small = forward_step(s, FNL, [], 6)
    assert set(small) <= set(forward_step(small, FNL, [], 6))
    assert set(small) <= set(forward_step(s, FNL, [], 8))


def test_forward_derivations_check():
    hyps = [parse_sequent("a => b"), parse_sequent("b => c")]
    engine = ForwardEngine(FNL, hyps, forward_universe(FNL, hyps), 6)
    engine.seed()
    engine.step()
    engine.step()
    assert parse_sequent("a => c") in engine.derived, "cut did not fire"
    for s, p in engine.derived.items():
        assert p.conclusion == s
        report = check_proof(p, FNL, hyps)
        assert report.ok, f"{s}: {report}"


def test_forward_right_division_from_a_leaf():
    target = parse_sequent("e => (a \\ a)")
    engine = ForwardEngine(FNL, [], {a, target.succedent}, 6)
    engine.seed()
    engine.step()
    assert target in engine.derived
    proof = engine.derived[target]
    assert check_proof(proof, FNL).ok
    assert Rule.UNIT_R in {p.rule for p in proof.nodes()}


def test_forward_engine_rebuilds_units_of_the_target():
    hyps = [parse_sequent("a => b")]
    target = parse_sequent("(e o (a o e)) => b")
    engine = ForwardEngine(FNL, hyps, forward_universe(FNL, hyps), 6, target=target)
    engine.seed()
    assert target not in engine.derived
    proof = engine.proof_of(target)
    assert proof is not None and proof.conclusion == target
    assert check_proof(proof, FNL, hyps).ok


def test_forward_weakening_fills_an_inserted_unit():
    logic = parse_logic("fnl+i")
    engine = ForwardEngine(logic, [], {a, var("b")}, 5)
    engine.seed()
    engine.step()
    s = parse_sequent("(a o b) => a")
    assert s in engine.derived
    assert check_proof(engine.derived[s], logic).ok
