import pytest

from src.logic.algebra import AlgebraClass, FiniteAlgebra, boolean_two_chain, check_class, parse_class
from src.logic.enumeration import enumerate_algebras
from src.logic.errors import ClassCheckError, FrameError, MissingZeroError, NuclearityError, PartialOpError
from src.logic.frames import (
    FRAME_RULES,
    Frame,
    PartialSubalgebra,
    bits,
    check_frame_rule,
    closed_sets,
    dm_frame,
    embedding,
    equation_holds,
    fep_frame,
    frame_from_text,
    frame_plus,
    frame_to_text,
    gamma,
    mask_of,
    rule_matches_equation,
    verify_embedding,
    zero_extension,
)


def _trivial_frame() -> Frame:
    return Frame(g=1, prod=((0,),), eps=0, t=1, rel=(1,), lres=((0,),), rres=((0,),), k=1)


def test_bit_helpers():
    assert bits(0b1011) == [0, 1, 3]
    assert mask_of([0, 3]) == 0b1001


def test_dm_frame_of_two_chain():
    A = boolean_two_chain()
    F = dm_frame(A)
    pairs = {(x, z) for x in range(2) for z in range(2) if F.n(x, z)}
    assert pairs == {(0, 0), (0, 1), (1, 1)}
    assert F.eps == A.one
    assert F.k >> A.one & 1, "K must contain 1"


def test_dm_frame_rejects_non_members():
    A = FiniteAlgebra(2, ((0, 0), (0, 1)), ((0, 1), (1, 1)), ((0, 1), (1, 1)), ((1, 1), (0, 1)), ((1, 0), (1, 1)), 1)
    with pytest.raises(ClassCheckError):
        dm_frame(A)


def test_gamma_examples():
    F = dm_frame(boolean_two_chain())
    assert gamma(F, 0) == mask_of([0]), "gamma(empty) is the bottom downset"
    for X in closed_sets(F):
        assert gamma(F, X) == X
    assert gamma(F, 1 << F.eps) == mask_of([0, 1]), "principal downset of 1"


def test_frame_plus_of_dm_frame_is_isomorphic_to_the_input():
    A = boolean_two_chain()
    Fp = frame_plus(dm_frame(A))
    assert Fp.algebra.n == 2
    assert Fp.closed == (mask_of([0]), mask_of([0, 1]))
    assert Fp.algebra.prod == A.prod
    assert Fp.algebra.one == 1 and Fp.algebra.zero == 0


def test_trivial_frame_gives_trivial_algebra():
    F = _trivial_frame()
    Fp = frame_plus(F)
    assert Fp.algebra.n == 1
    assert all(check_frame_rule(F, rule) for rule in FRAME_RULES)


def test_bang_of_frame_plus_is_a_conucleus():
    for A in enumerate_algebras(3, parse_class("Interior")):
        alg = frame_plus(dm_frame(A)).algebra
        b = alg.bang
        for x in range(alg.n):
            assert alg.leq(b[x], x)
            assert b[b[x]] == b[x]


def test_broken_witness_fails_nuclearity():
    A = boolean_two_chain()
    F = dm_frame(A)
    broken = Frame(F.g, F.prod, F.eps, F.t, F.rel, ((0, 0), (0, 1)), F.rres, F.k, F.eps_t)
    with pytest.raises(NuclearityError):
        broken.validate()


def test_unit_of_frame_plus_is_the_image_of_one():
    for A in enumerate_algebras(3, parse_class("Interior")):
        Fp = frame_plus(dm_frame(A))
        assert Fp.closed[Fp.algebra.one] == embedding(Fp, A.one)


def test_embedding_holds_for_dm_and_fep_frames():
    for A in enumerate_algebras(3, parse_class("Interior+!i")):
        Fp = frame_plus(dm_frame(A))
        report = verify_embedding(Fp, A)
        assert report.ok, str(report)
        full = PartialSubalgebra.of(range(A.n))
        report = verify_embedding(frame_plus(fep_frame(A, full)), A, full)
        assert report.ok, str(report)


def test_fep_frame_over_full_two_chain():
    A = boolean_two_chain()
    F = fep_frame(A, PartialSubalgebra.of([0, 1]))
    Fp = frame_plus(F)
    assert F.g == 2
    assert Fp.algebra.n == 2
    assert embedding(Fp, 0) != embedding(Fp, 1)


def test_fep_frame_over_unit_only():
    A = boolean_two_chain()
    F = fep_frame(A, PartialSubalgebra.of([1]))
    assert F.g == 1
    assert F.t == 1
    assert frame_plus(F).algebra.n in (1, 2)


def test_zero_bounded_fep_frame_has_least_closed_set():
    for A in enumerate_algebras(3, parse_class("Interior0+io")):
        for sub in ([A.one], list(range(A.n))):
            F = fep_frame(A, PartialSubalgebra.of(sub), with_zero=True)
            Fp = frame_plus(F)
            least = F.col[F.eps_t]
            assert all(least & ~C == 0 for C in Fp.closed)
            assert Fp.algebra.zero == Fp.index(least)


def test_zero_variant_needs_a_zero():
    A = boolean_two_chain().with_constants(zero=None, bang=(0, 1))
    with pytest.raises(MissingZeroError):
        fep_frame(A, PartialSubalgebra.of([0, 1]), with_zero=True)


def test_partial_subalgebra_outside_carrier():
    with pytest.raises(PartialOpError):
        fep_frame(boolean_two_chain(), PartialSubalgebra.of([0, 5]))


def test_zero_extension():
    A = boolean_two_chain().with_constants(zero=None, bang=(0, 1))
    Fp = zero_extension(frame_plus(dm_frame(A)))
    assert Fp.closed[Fp.algebra.zero] == gamma(Fp.frame, 0)
    assert all(Fp.algebra.leq(Fp.algebra.zero, x) for x in range(Fp.algebra.n))
    with pytest.raises(FrameError):
        zero_extension(Fp)


def test_zero_extension_of_trivial_frame():
    Fp = zero_extension(frame_plus(_trivial_frame()))
    assert Fp.algebra.zero == 0


def test_frame_rules_match_equations():
    for A in enumerate_algebras(3, parse_class("Interior")):
        F = dm_frame(A)
        Fp = frame_plus(F)
        for rule in FRAME_RULES:
            assert rule_matches_equation(F, rule, Fp), f"[{rule}] on size {A.n}"


def test_commutativity_rule_on_commutative_and_non_commutative_inputs():
    commutative = boolean_two_chain()
    F = dm_frame(commutative)
    assert check_frame_rule(F, "e") and equation_holds(frame_plus(F).algebra, "e")
    rlug = AlgebraClass("RLUG")
    non_comm = next(
        A for n in range(1, 5) for A in enumerate_algebras(n, rlug)
        if not check_class(A, AlgebraClass("RLUG", frozenset("e"))).ok
    )
    F = dm_frame(non_comm)
    assert not check_frame_rule(F, "e")
    assert not equation_holds(frame_plus(F).algebra, "e")


def test_unknown_frame_rule():
    with pytest.raises(ValueError):
        check_frame_rule(_trivial_frame(), "x")


def test_frame_text_round_trip():
    F = fep_frame(boolean_two_chain(), PartialSubalgebra.of([0, 1]), with_zero=True)
    again = frame_from_text(frame_to_text(F))
    assert again == F
