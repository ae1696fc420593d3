import pytest

from src.logic.errors import FragmentError, ParseError
from src.logic.syntax import (
    BASIC,
    EMPTY,
    FULL,
    HOLE,
    NO_ZERO,
    ONE,
    UNIT,
    ZERO,
    Leaf,
    Node,
    NodeL,
    NodeR,
    Sequent,
    bang,
    is_k_term,
    ldiv,
    leaves,
    mul,
    parse_batch,
    parse_context,
    parse_formula,
    parse_sequent,
    parse_struct,
    plug,
    rho,
    subformulas,
    substitute,
    theta,
    var,
    join,
)

a, b, c = var("a"), var("b"), var("c")


def test_parse_identity_sequent():
    s = parse_sequent("a => a")
    assert s == Sequent(Leaf(a), a), f"got {s!r}"


def test_parse_nested_antecedent_and_product():
    s = parse_sequent("(a o (b o c)) => (a . (b . c))")
    want = Sequent(Node(Leaf(a), Node(Leaf(b), Leaf(c))), mul(a, mul(b, c)))
    assert s == want, f"got {s!r}"


def test_parse_empty_stoup():
    s = parse_sequent("(!a o b) => ")
    assert s == Sequent(Node(Leaf(bang(a)), Leaf(b)), EMPTY), f"got {s!r}"


def test_printer_output_reparses_to_equal_value():
    texts = [
        "a => a",
        "(a o (b o c)) => (a . (b . c))",
        "(!a o b) =>",
        "((a \\/ b) o !(a / c)) => ((a /\\ 1) \\ 0)",
        "e => 1",
    ]
    for text in texts:
        s = parse_sequent(text)
        again = parse_sequent(str(s))
        assert again == s, f"{text!r} printed as {s} reparsed to {again!r}"


def test_parse_error_reports_byte_offset():
    with pytest.raises(ParseError) as exc:
        parse_sequent("a => (a . )")
    assert exc.value.offset == 10, f"offset {exc.value.offset}"


def test_reserved_words_are_not_formulas():
    with pytest.raises(ParseError):
        parse_formula("o")
    with pytest.raises(ParseError):
        parse_sequent("a => e")


def test_fragment_violation_is_reported():
    with pytest.raises(FragmentError):
        parse_sequent("!a => a", BASIC)
    with pytest.raises(FragmentError):
        parse_sequent("a =>", NO_ZERO)
    assert parse_sequent("!a => a", FULL).succedent == a


def test_unit_is_kept_by_the_parser():
    assert parse_struct("(e o a)") == Node(UNIT, Leaf(a))
    assert parse_struct("(a o e)") == Node(Leaf(a), UNIT)
    assert parse_struct("(e o e)") == Node(UNIT, UNIT)
    assert parse_struct("(e o a)") != Leaf(a)
    assert str(parse_sequent("(a o e) => a")) == "(a o e) => a"
    assert parse_context("(e o _)") == NodeR(UNIT, HOLE)


def test_rho():
    assert rho(UNIT) == ONE
    assert rho(Node(Leaf(a), Node(Leaf(b), Leaf(c)))) == mul(a, mul(b, c))
    assert rho(Leaf(bang(a))) == bang(a)
    with pytest.raises(FragmentError):
        rho(UNIT, BASIC - {"one"})


def test_theta():
    assert theta(EMPTY) == ZERO
    assert theta(join(a, b)) == join(a, b)
    assert theta(ONE) == ONE
    with pytest.raises(FragmentError):
        theta(EMPTY, NO_ZERO)


def test_substitute():
    y = Node(Leaf(a), Leaf(b))
    assert substitute(HOLE, y) == y
    assert substitute(NodeL(HOLE, Leaf(b)), Leaf(a)) == Node(Leaf(a), Leaf(b))
    got = substitute(NodeR(Leaf(a), NodeL(HOLE, Leaf(c))), UNIT)
    assert got == Node(Leaf(a), Node(UNIT, Leaf(c))), f"got {got!r}"
    assert str(got) == "(a o (e o c))"


def test_substitute_is_linear():
    u = parse_context("((a o _) o (b o c))")
    x = parse_struct("(c o !a)")
    got = sorted(map(str, leaves(substitute(u, x))))
    assert got == sorted(["a", "b", "c", "c", "!a"]), f"leaves {got}"


def test_plug_nests_contexts():
    u = parse_context("(a o _)")
    v = parse_context("(_ o e)")
    w = plug(u, v)
    assert w == NodeR(Leaf(a), NodeL(HOLE, UNIT))
    assert substitute(w, Leaf(b)) == parse_struct("(a o (b o e))")


def test_is_k_term():
    assert is_k_term(Node(Leaf(bang(a)), Node(Leaf(bang(b)), Leaf(bang(c)))))
    assert not is_k_term(Node(Leaf(a), Leaf(bang(b))))
    assert is_k_term(UNIT)


def test_subformulas():
    assert subformulas(a) == {a}
    assert subformulas(bang(ldiv(a, b))) == {bang(ldiv(a, b)), ldiv(a, b), a, b}
    assert subformulas(ONE) == {ONE}


def test_parse_batch_separates_assumptions():
    text = "# comment\nassume: a => b\n\nb => c\nassume: (a o b) =>\n"
    batch = parse_batch(text)
    assert [str(s) for s in batch.assumptions] == ["a => b", "(a o b) =>"]
    assert [str(s) for s in batch.goals] == ["b => c"]


def test_parse_batch_error_names_the_line():
    with pytest.raises(ParseError) as exc:
        parse_batch("a => a\n(a o => b\n")
    assert "line 2" in str(exc.value)


def test_module_doc_shows_the_operators_verbatim():
    from src.logic import syntax

    assert "/\\  |  \\/  |  .  |  \\  |  /" in syntax.__doc__
