import pytest
from pydantic import ValidationError

from src.config import DEFAULT_DB_URL, parse_schedule, resolve_db_url, resolve_limits


def test_defaults_without_environment():
    limits = resolve_limits(env={})
    assert limits.backward_depth == 12
    assert limits.forward_schedule == (8, 12, 16)
    assert limits.max_algebra_size is None
    assert limits.budget_seconds == 60.0


def test_environment_overrides_defaults():
    env = {"NACILL_BACKWARD_DEPTH": "5", "NACILL_FORWARD_SCHEDULE": "6, 9", "NACILL_BUDGET_SECONDS": " "}
    limits = resolve_limits(env=env)
    assert limits.backward_depth == 5
    assert limits.forward_schedule == (6, 9)
    assert limits.budget_seconds == 60.0, "blank values fall back to the default"


def test_flags_override_environment():
    env = {"NACILL_BACKWARD_DEPTH": "5", "NACILL_MAX_ALGEBRA_SIZE": "2"}
    limits = resolve_limits({"backward_depth": 7, "max_algebra_size": None}, env=env)
    assert limits.backward_depth == 7
    assert limits.max_algebra_size == 2


def test_bad_environment_values_are_rejected():
    with pytest.raises(ValidationError):
        resolve_limits(env={"NACILL_FORWARD_SCHEDULE": "12,8"})
    with pytest.raises(ValueError):
        resolve_limits(env={"NACILL_FORWARD_SCHEDULE": "8,x"})


def test_parse_schedule():
    assert parse_schedule("8,12,16") == (8, 12, 16)
    assert parse_schedule(" 4 , 6,") == (4, 6)


def test_db_url_precedence():
    assert resolve_db_url(env={}) == DEFAULT_DB_URL
    assert resolve_db_url(env={"NACILL_DB_URL": "sqlite:///x.db"}) == "sqlite:///x.db"
    assert resolve_db_url("sqlite:///y.db", env={"NACILL_DB_URL": "sqlite:///x.db"}) == "sqlite:///y.db"
