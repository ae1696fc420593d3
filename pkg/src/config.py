# src/config.py
"""
Environment configuration. `.env` at the repo root is loaded on import;
CLI flags override environment values, which override built-in defaults.
"""

from __future__ import annotations

import logging
import os
from typing import Mapping, Optional, Tuple

from dotenv import load_dotenv

from src.logic.decide import SearchLimits

load_dotenv()

DEFAULT_DB_URL = "sqlite:///data/verdicts.db"

_ENV_FIELDS = {
    "backward_depth": "NACILL_BACKWARD_DEPTH",
    "forward_schedule": "NACILL_FORWARD_SCHEDULE",
    "max_algebra_size": "NACILL_MAX_ALGEBRA_SIZE",
    "budget_seconds": "NACILL_BUDGET_SECONDS",
    "quantum": "NACILL_QUANTUM",
}


def setup_logging() -> None:
    """Entrypoints call this once; library modules only create loggers."""
    level = os.getenv("LOG_LEVEL", "INFO").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s [%(levelname)s] %(message)s",
    )


def parse_schedule(text: str) -> Tuple[int, ...]:
    return tuple(int(part) for part in text.replace(" ", "").split(",") if part)


def resolve_limits(overrides: Optional[Mapping[str, object]] = None, env: Optional[Mapping[str, str]] = None) -> SearchLimits:
    """flags > environment > SearchLimits defaults; pydantic validates the result."""
    env = os.environ if env is None else env
    values: dict = {}
    for field, var in _ENV_FIELDS.items():
        raw = env.get(var)
        if raw is None or raw.strip() == "":
            continue
        values[field] = parse_schedule(raw) if field == "forward_schedule" else raw.strip()
    for field, value in (overrides or {}).items():
        if value is not None:
            values[field] = value
    return SearchLimits(**values)


def resolve_db_url(flag: Optional[str] = None, env: Optional[Mapping[str, str]] = None) -> str:
    env = os.environ if env is None else env
    return flag or env.get("NACILL_DB_URL") or DEFAULT_DB_URL
