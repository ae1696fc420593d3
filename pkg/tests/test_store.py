from src.db.queries import count_by_status, ensure_schema, get_engine, recent_verdicts, upsert_verdict
from src.logic.calculus import parse_logic
from src.logic.decide import SearchLimits, decide
from src.logic.syntax import parse_sequent

FNL = parse_logic("fnl")
LIMITS = SearchLimits(backward_depth=4, forward_schedule=(6,), budget_seconds=20.0)


def _engine(tmp_path):
    engine = get_engine(f"sqlite:///{tmp_path / 'store' / 'verdicts.db'}")
    ensure_schema(engine)
    ensure_schema(engine)
    return engine


def test_upsert_writes_once_per_unchanged_verdict(tmp_path):
    engine = _engine(tmp_path)
    v = decide(parse_sequent("a => a"), FNL, limits=LIMITS)
    assert upsert_verdict(engine, v, LIMITS) == 1
    assert upsert_verdict(engine, v, LIMITS) == 0, "unchanged verdict rewritten"


def test_limits_are_part_of_the_key(tmp_path):
    engine = _engine(tmp_path)
    v = decide(parse_sequent("a => b"), FNL, limits=LIMITS)
    other = SearchLimits(backward_depth=5, forward_schedule=(6,), budget_seconds=20.0)
    assert upsert_verdict(engine, v, LIMITS) == 1
    assert upsert_verdict(engine, v, other) == 1
    assert count_by_status(engine) == {"refuted": 2}


def test_recent_verdicts_filters_by_status(tmp_path):
    engine = _engine(tmp_path)
    for text in ("a => a", "a => b"):
        upsert_verdict(engine, decide(parse_sequent(text), FNL, limits=LIMITS), LIMITS)
    rows = recent_verdicts(engine, status="provable")
    assert [(r[0], r[1], r[2]) for r in rows] == [("fnl", "a => a", "provable")]
    assert len(recent_verdicts(engine)) == 2
