import random

import pytest

from src.config import resolve_limits
from src.logic.calculus import parse_logic
from src.logic.decide import decide
from src.logic.syntax import BASIC, FULL, connectives, parse_sequent
from src.selftest import (
    DUAL_LOGICS,
    SUITES,
    CorpusEntry,
    iter_frames,
    random_sequent,
    read_corpus,
    run_selftest,
    run_suite,
    suite_conservativity,
    suite_dual,
    suite_frame,
    suite_translation,
)

CORPUS = read_corpus()


def test_corpus_is_large_enough():
    assert len(CORPUS) >= 30
    assert {e.status for e in CORPUS} == {"provable", "refuted"}
    assert all(e.min_size is not None for e in CORPUS if e.status == "refuted")
    with_hyps = [e for e in CORPUS if e.assumptions]
    assert {e.status for e in with_hyps} == {"provable", "refuted"}
    assert {"infnl", "cyinfnl", "naccll"} <= {e.logic.split("+")[0] for e in with_hyps}


def test_corpus_reads_assumption_column(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("fnl | a => c | provable | a => b; b => c\nfnl | a => a | provable\n", encoding="utf-8")
    first, second = read_corpus(path)
    assert first.assumptions == ("a => b", "b => c")
    assert second.assumptions == ()


def test_corpus_rejects_malformed_lines(tmp_path):
    bad = tmp_path / "corpus.txt"
    bad.write_text("# header\nfnl | a => a\n", encoding="utf-8")
    with pytest.raises(ValueError, match="corpus.txt:2"):
        read_corpus(bad)


@pytest.mark.parametrize("entry", CORPUS, ids=lambda e: f"{e.logic}|{e.sequent}|{';'.join(e.assumptions)}")
def test_corpus_entry_matches_expected_verdict(entry):
    logic = parse_logic(entry.logic)
    hyps = [parse_sequent(h, logic.fragment) for h in entry.assumptions]
    v = decide(parse_sequent(entry.sequent, logic.fragment), logic, hyps, resolve_limits(env={}))
    assert v.status == entry.status, f"{entry.logic} | {entry.sequent}: {v.status}"
    if entry.min_size is not None:
        assert v.algebra.n == entry.min_size, f"smallest countermodel has {v.algebra.n} elements"


def test_random_sequents_stay_in_their_fragment():
    rng = random.Random(3)
    for fragment in (BASIC, FULL):
        for _ in range(100):
            assert connectives(random_sequent(rng, fragment)) <= set(fragment)


@pytest.mark.parametrize("name", ["galois", "frame", "embedding", "fep", "star", "rules", "collapse"])
def test_algebraic_suites_pass_at_size_two(name):
    result = run_suite(name, max_n=2)
    assert result.checks > 0
    assert result.failures == 0, result.first_failure


def test_frame_suite_covers_zero_frames():
    zero_dm = [A for label, A, F, _ in iter_frames(2) if label == "dm" and F.eps_t is not None]
    assert zero_dm, "no DM frame with eps_t enumerated"
    assert all(A.zero is not None for A in zero_dm)
    checks, failures = suite_frame(2)
    assert checks > 0
    assert not failures, failures[0]


def test_dual_suite_on_a_small_sample():
    checks, failures = suite_dual(2, samples=10, depth=3)
    assert checks == 10 * len(DUAL_LOGICS)
    assert not failures, failures[0]


def test_translation_suite_on_a_small_sample():
    checks, failures = suite_translation(2, samples=4)
    assert not failures, failures[0]


def test_conservativity_with_and_without_assumptions():
    corpus = [
        CorpusEntry("fnl", "a => a", "provable"),
        CorpusEntry("fnl", "a => b", "refuted:2"),
        CorpusEntry("fnl", "a => c", "provable", ("a => b", "b => c")),
        CorpusEntry("infnl", "b => a", "refuted:2", ("a => b",)),
    ]
    checks, failures = suite_conservativity(2, corpus)
    assert checks > 0
    assert not failures, failures[0]


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")


def test_run_selftest_table():
    table = run_selftest(["collapse", "star"], max_n=2)
    assert list(table["suite"]) == ["collapse", "star"]
    assert set(table.columns) >= {"checks", "failures", "seconds", "first_failure"}
    assert set(SUITES) >= set(table["suite"])
