from pathlib import Path

import pytest

from src.logic.algebra import (
    AlgebraClass,
    FiniteAlgebra,
    algebra_to_text,
    boolean_two_chain,
    chain,
    check_class,
    evaluate_struct,
    parse_algebra,
    parse_class,
    sequent_holds,
)
from src.logic.errors import AlgebraFormatError, MissingZeroError, ResiduationError
from src.logic.syntax import parse_sequent, parse_struct

DATA = Path(__file__).resolve().parents[1] / "data"


def test_boolean_two_chain_is_a_full_nacill0_member():
    A = boolean_two_chain()
    report = check_class(A, parse_class("NACILL0+ecio"))
    assert report.ok, str(report)


def test_constant_zero_bang_fails_unit_law():
    A = boolean_two_chain().with_constants(zero=0, bang=(0, 0))
    report = check_class(A, parse_class("NACILL0"))
    assert not report.ok
    assert report.law == "1 <= !1", str(report)


def test_trivial_algebra_is_in_every_class():
    T = FiniteAlgebra.build([[True]], [[0]], one=0, zero=0, bang=(0,))
    for text in ("RLUG", "NACILL0+ecio", "NACCLL+ew", "CyInRLUG+ec", "Interior0+!e!c"):
        assert check_class(T, parse_class(text)).ok, text


def test_parse_class_and_w_expansion():
    cls = parse_class("NACILL0+ecw")
    assert cls.equations == frozenset("ecio")
    assert str(cls) == "NACILL0+ecio"
    assert parse_class("Interior+!e!c").equations == frozenset({"!e", "!c"})
    with pytest.raises(ValueError):
        parse_class("RLUG+o")
    with pytest.raises(ValueError):
        parse_class("Bogus")


def test_default_sizes():
    assert AlgebraClass("NACILL").default_max_size == 3
    assert AlgebraClass("RLUG").default_max_size == 4


def test_sequent_holds_examples():
    A = boolean_two_chain()
    assert sequent_holds(A, {"a": 1}, parse_sequent("!a => a"))
    assert not sequent_holds(A, {"a": 1, "b": 0}, parse_sequent("a => b"))
    for v in ({}, {"a": 0}):
        assert sequent_holds(A, v, parse_sequent("e => 1"))


def test_empty_stoup_needs_zero():
    A = boolean_two_chain().with_constants(zero=None, bang=(0, 1))
    with pytest.raises(MissingZeroError):
        sequent_holds(A, {"a": 0}, parse_sequent("a =>"))


def test_adjunction_in_valuations():
    A = boolean_two_chain()
    for x in range(2):
        for y in range(2):
            for z in range(2):
                v = {"a": x, "b": y, "c": z}
                left = sequent_holds(A, v, parse_sequent("(a o c) => b"))
                right = sequent_holds(A, v, parse_sequent("c => (a \\ b)"))
                assert left == right, f"adjunction fails at {v}"


def test_evaluate_struct_of_unit_is_one():
    A = boolean_two_chain()
    assert evaluate_struct(A, parse_struct("e"), {}) == A.one


def test_two_chain_file_parses_and_round_trips():
    A = parse_algebra((DATA / "two_chain.alg").read_text(encoding="utf-8"))
    assert A.n == 2 and A.one == 1 and A.zero is None
    assert check_class(A, AlgebraClass("RLUG", frozenset("eci"))).ok
    assert parse_algebra(algebra_to_text(A)) == A


def test_wrong_residual_table_is_rejected():
    text = algebra_to_text(boolean_two_chain()).replace("ldiv:\n1 1\n0 1", "ldiv:\n1 1\n1 1")
    with pytest.raises(ResiduationError):
        parse_algebra(text)


def test_malformed_algebra_files():
    with pytest.raises(AlgebraFormatError):
        parse_algebra("n=2\nmeet:\n0 0\n")
    with pytest.raises(AlgebraFormatError):
        parse_algebra(algebra_to_text(boolean_two_chain()).replace("one=1", "one=7"))


def test_non_residuated_product_is_rejected():
    # on the diamond, a product that does not preserve joins has no residual
    leq = [[x == y or x == 0 or y == 3 for y in range(4)] for x in range(4)]
    prod = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 2, 3], [0, 3, 3, 2]]
    with pytest.raises(ResiduationError):
        FiniteAlgebra.build(leq, prod, one=1)


def test_chain_order():
    leq = chain(3)
    assert leq[0][2] and not leq[2][0]
