# src/db/db_setup.py
"""Create the verdict store from db/sqlite/001_init.sql: `python -m src.db.db_setup`."""

from __future__ import annotations

import logging

from src.config import resolve_db_url, setup_logging
from src.db.queries import MIGRATION, ensure_schema, get_engine

log = logging.getLogger(__name__)


def main() -> None:
    setup_logging()
    if not MIGRATION.exists():
        raise FileNotFoundError(f"Migration not found: {MIGRATION}")
    url = resolve_db_url()
    ensure_schema(get_engine(url))
    log.info("✅ DB initialized from migration -> %s", url)


if __name__ == "__main__":
    main()
