# src/db/queries.py
from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional, Tuple

from sqlalchemy import create_engine, text
from sqlalchemy.engine import Engine

from src.config import resolve_db_url
from src.logic.decide import SearchLimits, Verdict

MIGRATION = Path(__file__).resolve().parents[2] / "db" / "sqlite" / "001_init.sql"

# PK = (logic, sequent, assumptions, limits); rewrite only when the answer changed
UPSERT_SQL = text("""
    INSERT INTO verdicts (logic, sequent, assumptions, limits, status, payload, decided_at)
    VALUES (:logic, :sequent, :assumptions, :limits, :status, :payload, :decided_at)
    ON CONFLICT(logic, sequent, assumptions, limits) DO UPDATE SET
      status     = excluded.status,
      payload    = excluded.payload,
      decided_at = excluded.decided_at
    WHERE
      verdicts.status  != excluded.status OR
      verdicts.payload != excluded.payload;
""")


def get_engine(url: Optional[str] = None) -> Engine:
    url = resolve_db_url(url)
    if url.startswith("sqlite:///") and not url.startswith("sqlite:///:memory:"):
        Path(url[len("sqlite:///"):]).parent.mkdir(parents=True, exist_ok=True)
    return create_engine(url, future=True)


def ensure_schema(engine: Engine) -> None:
    statements = [s.strip() for s in MIGRATION.read_text(encoding="utf-8").split(";")]
    with engine.begin() as conn:
        for stmt in statements:
            body = "\n".join(line for line in stmt.splitlines() if not line.strip().startswith("--"))
            if body.strip():
                conn.execute(text(body))


def upsert_verdict(engine: Engine, verdict: Verdict, limits: SearchLimits) -> int:
    """Returns the number of rows written (0 when the stored verdict is unchanged)."""
    row = {
        "logic": verdict.logic,
        "sequent": str(verdict.goal),
        "assumptions": "; ".join(str(s) for s in verdict.assumptions),
        "limits": json.dumps(limits.model_dump(mode="json"), sort_keys=True),
        "status": verdict.status,
        "payload": verdict.to_json(),
        "decided_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    with engine.begin() as conn:
        result = conn.execute(UPSERT_SQL, row)
    return result.rowcount


def recent_verdicts(engine: Engine, limit: int = 20, status: Optional[str] = None) -> List[Tuple[str, str, str, str]]:
    n = int(limit)
    where = "WHERE status = :s" if status else ""
    sql = text(f"""
        SELECT logic, sequent, status, decided_at
        FROM verdicts
        {where}
        ORDER BY decided_at DESC, logic, sequent
        LIMIT {n};
    """)
    with engine.connect() as conn:
        rows = conn.execute(sql, {"s": status} if status else {}).fetchall()
    return [tuple(r) for r in rows]


def count_by_status(engine: Engine) -> dict:
    with engine.connect() as conn:
        rows = conn.execute(text("SELECT status, COUNT(*) FROM verdicts GROUP BY status;")).fetchall()
    return {status: count for status, count in rows}
