from pathlib import Path
import sys

import pandas as pd
from sqlalchemy import inspect

sys.path.insert(0, str(Path(__file__).resolve().parents[2]))

from src.config import resolve_db_url  # noqa: E402
from src.db.queries import get_engine  # noqa: E402

DB_STR = resolve_db_url()

print("cwd:", Path().resolve())
print("DB URL:", DB_STR)

engine = get_engine(DB_STR)
tables = inspect(engine).get_table_names()
print("tables:", tables)

if "verdicts" in tables:
    df = pd.read_sql("SELECT logic, status, COUNT(*) AS n FROM verdicts GROUP BY logic, status", engine)
    print(df.pivot(index="logic", columns="status", values="n").fillna(0).astype(int))
