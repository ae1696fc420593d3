import sys, pathlib

# Ensure repo root is on sys.path so "from src..." works
ROOT = pathlib.Path(__file__).resolve().parents[2]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.db.queries import count_by_status, get_engine, recent_verdicts

if __name__ == "__main__":
    engine = get_engine()
    print("\n=== Helper: verdicts by status ===")
    print(count_by_status(engine))

    print("\n=== Helper: latest verdicts (10) ===")
    for row in recent_verdicts(engine, 10):
        print(row)

    print("\n=== Helper: latest exhausted (5) ===")
    for row in recent_verdicts(engine, 5, status="exhausted"):
        print(row)
