# scripts/jobs/run_corpus.py
"""
Decide every entry of data/corpus.txt, compare with the expected answer and
idempotently upsert the verdicts into the verdict store.

A refuted entry also checks that its countermodel has the recorded minimal
size (countermodel search goes through sizes in increasing order).

Usage: python -m scripts.jobs.run_corpus [--db-url URL] [--no-store]
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import pandas as pd

# --------------------------------------------------------------------------------------
# Paths: always relative to repo root (…/scripts/jobs/run_corpus.py -> parents[2])
# --------------------------------------------------------------------------------------
ROOT = Path(__file__).resolve().parents[2]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.config import resolve_db_url, resolve_limits, setup_logging  # noqa: E402
from src.db.queries import count_by_status, ensure_schema, get_engine, upsert_verdict  # noqa: E402
from src.logic.calculus import parse_logic  # noqa: E402
from src.logic.decide import decide  # noqa: E402
from src.logic.syntax import parse_sequent  # noqa: E402
from src.selftest import CORPUS_PATH, CorpusEntry, read_corpus  # noqa: E402

log = logging.getLogger("run_corpus")


# --------------------------------------------------------------------------------------
# Helpers
# --------------------------------------------------------------------------------------
def check_entry(entry: CorpusEntry, limits):
    """Returns (verdict, mismatch or '')."""
    logic = parse_logic(entry.logic)
    goal = parse_sequent(entry.sequent, logic.fragment)
    hyps = [parse_sequent(h, logic.fragment) for h in entry.assumptions]
    v = decide(goal, logic, hyps, limits)
    if v.status != entry.status:
        return v, f"expected {entry.status}, got {v.status}"
    if entry.min_size is not None and v.algebra is not None and v.algebra.n != entry.min_size:
        return v, f"countermodel of size {v.algebra.n}, expected {entry.min_size}"
    return v, ""


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument("--corpus", default=str(CORPUS_PATH))
    parser.add_argument("--db-url")
    parser.add_argument("--no-store", action="store_true")
    args = parser.parse_args(argv)

    setup_logging()
    limits = resolve_limits()
    engine = None
    if not args.no_store:
        url = resolve_db_url(args.db_url)
        log.info("Connecting to verdict store at %s", url)
        engine = get_engine(url)
        ensure_schema(engine)

    rows, written = [], 0
    for entry in read_corpus(Path(args.corpus)):
        v, mismatch = check_entry(entry, limits)
        if mismatch:
            log.warning("%s | %s (%d assumptions): %s", entry.logic, entry.sequent, len(entry.assumptions), mismatch)
        if engine is not None:
            written += upsert_verdict(engine, v, limits)
        rows.append({"logic": entry.logic, "sequent": entry.sequent, "status": v.status, "worker": v.worker, "ok": not mismatch})

    table = pd.DataFrame(rows)
    summary = table.groupby(["logic", "status"]).size().rename("entries").reset_index()
    log.info("corpus summary:\n%s", summary.to_string(index=False))
    if engine is not None:
        log.info("store now holds %s; upserted/updated %d", count_by_status(engine), written)

    failed = int((~table["ok"]).sum())
    if failed:
        log.error("%d of %d corpus entries disagree", failed, len(table))
        return 1
    log.info("✅ all %d corpus entries agree", len(table))
    return 0


if __name__ == "__main__":
    sys.exit(main())
