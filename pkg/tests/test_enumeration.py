from src.logic.algebra import AlgebraClass, check_class, parse_class, sequent_holds
from src.logic.enumeration import (
    canonical_key,
    collapse_check,
    conuclei,
    count_algebras,
    enumerate_algebras,
    find_countermodel,
    lattices,
    naive_keys,
)
from src.logic.syntax import parse_sequent

RLUG = AlgebraClass("RLUG")


def test_lattice_counts():
    counts = [len(lattices(n)) for n in range(1, 6)]
    assert counts == [1, 1, 1, 2, 5], f"lattice counts {counts}"


def test_small_rlug_counts():
    counts = count_algebras(3, RLUG)
    assert counts == {1: 1, 2: 1, 3: 3}, f"counts {counts}"


def test_every_member_passes_its_class_check():
    for cls in (RLUG, parse_class("NACILL+i"), parse_class("NACILL0+ec"), parse_class("InRLUG")):
        for n in range(1, 4):
            for A in enumerate_algebras(n, cls):
                report = check_class(A, cls)
                assert report.ok, f"{cls} size {n}: {report}"


def test_members_are_pairwise_non_isomorphic():
    cls = parse_class("NACILL")
    members = list(enumerate_algebras(3, cls))
    keys = {canonical_key(A) for A in members}
    assert len(keys) == len(members)


def test_enumeration_is_deterministic():
    cls = parse_class("RLUG+e")
    first = [canonical_key(A) for A in enumerate_algebras(4, cls)]
    second = [canonical_key(A) for A in enumerate_algebras(4, cls)]
    assert first == second


def test_enumeration_matches_naive_oracle():
    for cls in (RLUG, parse_class("RLUG0"), parse_class("Interior"), parse_class("NACILL0")):
        for n in (1, 2):
            fast = {canonical_key(A) for A in enumerate_algebras(n, cls)}
            assert fast == naive_keys(n, cls), f"{cls} size {n}"


def test_integral_members_have_unit_on_top():
    for A in enumerate_algebras(3, parse_class("RLUG+eci")):
        assert A.one == A.top


def test_boolean_implication_algebra_appears():
    members = list(enumerate_algebras(2, parse_class("RLUG+eci")))
    assert len(members) == 1
    A = members[0]
    assert A.prod == ((0, 0), (0, 1))
    assert A.ldiv == ((1, 1), (0, 1))


def test_conuclei_of_two_chain():
    A = next(iter(enumerate_algebras(2, RLUG)))
    assert sorted(conuclei(A)) == [(0, 1)]


def test_countermodel_for_distinct_variables():
    found = find_countermodel(parse_sequent("a => b"), (), RLUG, 2)
    assert found is not None
    A, v = found
    assert A.n == 2
    assert v == {"a": A.top, "b": A.bottom}


def test_no_countermodel_for_identity():
    assert find_countermodel(parse_sequent("a => a"), (), RLUG, 3) is None


def test_non_associativity_countermodel():
    s = parse_sequent("(a . (b . c)) => ((a . b) . c)")
    found = find_countermodel(s, (), RLUG, 4)
    assert found is not None
    A, v = found
    assert A.n == 4, f"smallest witness has {A.n} elements"
    assert not sequent_holds(A, v, s)


def test_countermodel_respects_assumptions():
    goal = parse_sequent("a => c")
    hyps = [parse_sequent("a => b"), parse_sequent("b => c")]
    assert find_countermodel(goal, hyps, RLUG, 3) is None
    found = find_countermodel(goal, hyps[:1], RLUG, 3)
    assert found is not None
    A, v = found
    assert sequent_holds(A, v, hyps[0]) and not sequent_holds(A, v, goal)


def test_contraction_and_weakening_collapse():
    report = collapse_check(3)
    assert report.ok, report.detail
