import io
import json
from pathlib import Path

import pytest
from sqlalchemy import text

from src.cli import CliConfig, run
from src.db.queries import get_engine
from src.logic.errors import LogicError

TWO_CHAIN = str(Path(__file__).resolve().parents[1] / "data" / "two_chain.alg")


def _run(argv, stdin_text=""):
    out = io.StringIO()
    code = run(argv, stdin=io.StringIO(stdin_text), stdout=out)
    return code, out.getvalue()


def test_translate_prints_internalized_sequent():
    code, out = _run(["translate", "--assume", "a => b", "--goal", "c => c"])
    assert code == 0
    assert out == "(c o !(a\\b)) => c\n"


def test_translate_needs_a_goal():
    code, _ = _run(["translate", "--assume", "a => b"])
    assert code == 1


def test_decide_reads_stdin_and_prints_one_line_per_goal():
    code, out = _run(["decide", "--logic", "fnl", "--in", "-"], "a => a\n# comment\na => b\n")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("a => a\tprovable")
    assert lines[1].startswith("a => b\trefuted\tsize 2")


def test_decide_records_are_json(tmp_path):
    goals = tmp_path / "goals.txt"
    goals.write_text("assume: a => b\nassume: b => c\na => c\n", encoding="utf-8")
    code, out = _run(["decide", "--logic", "fnl", "--format", "records", str(goals)])
    assert code == 0
    record = json.loads(out.splitlines()[0])
    assert record["status"] == "provable"
    assert record["assumptions"] == ["a => b", "b => c"]
    assert record["limits"]["budget_seconds"] == 60.0


def test_decide_exhausted_exit_code():
    code, out = _run(["decide", "--logic", "fnl", "--depth", "1", "--max-size", "1", "--in", "-"], "a => b\n")
    assert code == 2
    assert "exhausted" in out


def test_decide_output_is_deterministic():
    argv = ["decide", "--logic", "nacill+i", "--format", "records", "--in", "-"]
    goals = "(!a o b) => b\na => !a\n"
    assert _run(argv, goals) == _run(argv, goals)


def test_decide_store_upserts(tmp_path):
    url = f"sqlite:///{tmp_path / 'verdicts.db'}"
    argv = ["decide", "--logic", "fnl", "--store", "--db-url", url, "--in", "-"]
    assert _run(argv, "a => a\na => b\n")[0] == 0
    assert _run(argv, "a => a\na => b\n")[0] == 0
    with get_engine(url).connect() as conn:
        rows = conn.execute(text("SELECT status FROM verdicts ORDER BY sequent")).fetchall()
    assert [r[0] for r in rows] == ["provable", "refuted"]


def test_unknown_logic_is_an_error():
    code, _ = _run(["decide", "--logic", "bogus", "--in", "-"], "a => a\n")
    assert code == 1


def test_missing_logic_is_an_error():
    code, _ = _run(["prove", "--in", "-"], "a => a\n")
    assert code == 1


def test_usage_errors_exit_nonzero():
    assert _run([])[0] == 1
    assert _run(["nope"])[0] == 1
    assert _run(["--help"])[0] == 0


def test_prove_writes_checked_proof_text():
    code, out = _run(["prove", "--logic", "nacill", "--in", "-"], "!a => a\n")
    assert code == 0
    assert out.startswith("# !a => a\n")


def test_prove_rejects_assumptions():
    code, _ = _run(["prove", "--logic", "fnl", "--in", "-"], "assume: a => b\na => b\n")
    assert code == 1


def test_countermodel_prints_algebra():
    code, out = _run(["countermodel", "--logic", "fnl", "--in", "-"], "a => b\n")
    assert code == 0
    assert out.startswith("# a => b: a=")
    assert "\nn=2\n" in out
    code, out = _run(["countermodel", "--logic", "fnl", "--max-size", "2", "--in", "-"], "a => a\n")
    assert code == 2
    assert "no countermodel up to size 2" in out


def test_check_algebra_reports_membership():
    code, out = _run(["check-algebra", "--class", "RLUG+eci", "--in", TWO_CHAIN])
    assert code == 0
    assert out == "RLUG+eci: ok\n"
    code, out = _run(["check-algebra", "--class", "RLUG0", "--in", TWO_CHAIN])
    assert code == 2
    assert "0 is designated" in out


def test_enumerate_counts_and_files(tmp_path):
    code, out = _run(["enumerate", "--class", "RLUG", "--size", "3", "--count"])
    assert code == 0
    assert out.split()[-2:] == ["3", "3"]
    code, _ = _run(["enumerate", "--class", "RLUG", "--size", "3", "--out", str(tmp_path / "algs")])
    assert code == 0
    assert sorted(p.name for p in (tmp_path / "algs").iterdir()) == ["3_0000.alg", "3_0001.alg", "3_0002.alg"]


def test_star_of_two_chain_has_six_elements(tmp_path):
    target = tmp_path / "star.alg"
    code, _ = _run(["star", "--in", TWO_CHAIN, "--out", str(target)])
    assert code == 0
    written = target.read_text(encoding="utf-8")
    assert written.startswith("n=6\n")
    assert "neg:" in written


def test_complete_and_fep_embed_the_input():
    code, out = _run(["complete", "--in", TWO_CHAIN])
    assert code == 0
    assert out.startswith("n=2\n") and "embed:" in out
    code, out = _run(["fep", "--subset", "0,1", "--in", TWO_CHAIN])
    assert code == 0
    assert out.startswith("# |G|=2 ")
    code, _ = _run(["fep", "--subset", "0,x", "--in", TWO_CHAIN])
    assert code == 1


def test_fep_takes_explicit_operation_domains():
    argv = ["fep", "--subset", "0,1", "--defined", "prod:1,1;0,1", "--defined", "one:-", "--in", TWO_CHAIN]
    code, out = _run(argv)
    assert code == 0
    assert out.startswith("# |G|=")
    assert "embedding: ok" in out.splitlines()[0]
    code, _ = _run(["fep", "--subset", "1", "--defined", "prod:0,1", "--in", TWO_CHAIN])
    assert code == 1
    code, _ = _run(["fep", "--defined", "prod", "--in", TWO_CHAIN])
    assert code == 1


def test_decide_with_assumptions_in_a_logic_without_bang():
    code, out = _run(["decide", "--logic", "infnl", "--in", "-"], "assume: a => b\na => b\n")
    assert code == 0
    assert out.startswith("a => b\tprovable")


def test_dcore_needs_an_involutive_input():
    code, _ = _run(["dcore", "--in", TWO_CHAIN])
    assert code == 1


def test_selftest_single_suite():
    code, out = _run(["selftest", "--suite", "collapse", "--max-size", "2"])
    assert code == 0
    assert "collapse" in out


def test_cli_config_validates_logic():
    cfg = CliConfig(subcommand="decide", logic="nacill0+ec")
    assert str(cfg.logic_spec) == "nacill0+ec"
    with pytest.raises(LogicError):
        CliConfig(subcommand="decide", logic="fnl+o")
    with pytest.raises(LogicError):
        CliConfig(subcommand="decide").logic_spec
