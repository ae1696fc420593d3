# src/cli.py
"""
Command-line surface: `python -m src.cli <subcommand> ...`.

Machine output goes to stdout, logs to stderr. Exit codes: 0 for a definite
answer (or a passing check), 2 when some verdict is exhausted or a check
fails, 1 for errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, TextIO, Tuple

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.config import parse_schedule, resolve_db_url, resolve_limits, setup_logging
from src.logic.algebra import FiniteAlgebra, algebra_to_text, check_class, parse_algebra, parse_class
from src.logic.calculus import LogicSpec, check_proof, parse_logic, proof_to_text
from src.logic.constructions import (
    dm_with_conucleus,
    internalize,
    star_extension,
    zero_adjoined_completion,
)
from src.logic.decide import (
    SearchLimits,
    Verdict,
    decide,
    prove_backward,
    spec_to_class,
)
from src.logic.enumeration import count_algebras, enumerate_algebras, find_countermodel
from src.logic.errors import LogicError
from src.logic.frames import PartialSubalgebra, dm_frame, embedding, fep_frame, frame_plus, verify_embedding
from src.logic.syntax import Sequent, parse_batch, parse_sequent

log = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_INCOMPLETE = 0, 1, 2

SUBCOMMANDS = (
    "decide",
    "prove",
    "countermodel",
    "check-algebra",
    "enumerate",
    "complete",
    "fep",
    "star",
    "dcore",
    "translate",
    "selftest",
)


class CliConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    subcommand: Literal[SUBCOMMANDS]  # type: ignore[valid-type]
    logic: Optional[str] = Field(None, description="Logic spec string, e.g. nacill0+ec")
    limits: SearchLimits = Field(default_factory=SearchLimits, description="Resolved search limits")
    input: Optional[str] = Field(None, description="Input file; '-' reads stdin")
    output: Optional[str] = Field(None, description="Output file or directory")
    format: Literal["human", "records"] = "human"

    @field_validator("logic")
    @classmethod
    def _named_logic(cls, v: Optional[str]) -> Optional[str]:
        if v is not None:
            spec_to_class(parse_logic(v))
        return v

    @property
    def logic_spec(self) -> LogicSpec:
        if self.logic is None:
            raise LogicError(f"{self.subcommand} needs --logic")
        return parse_logic(self.logic)


# -------------------------
# I/O helpers
# -------------------------
def _read(path: Optional[str], stdin: TextIO) -> str:
    if path is None or path == "-":
        return stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _emit(text: str, output: Optional[str], stdout: TextIO) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
        log.info("✅ wrote %s", output)
    else:
        stdout.write(text)


def _verdict_line(v: Verdict, fmt: str) -> str:
    if fmt == "records":
        return v.to_json()
    if v.status == "provable":
        via = f" via {v.proved_sequent}" if v.proved_sequent is not None else ""
        return f"{v.goal}\tprovable\t{v.worker}{via}\t{v.proof.size if v.proof else 0} nodes"
    if v.status == "refuted":
        vals = " ".join(f"{k}={i}" for k, i in sorted((v.valuation or {}).items()))
        return f"{v.goal}\trefuted\tsize {v.algebra.n if v.algebra else 0}\t{vals}"
    lim = v.limits
    return (
        f"{v.goal}\texhausted\tdepth {lim.backward_depth_reached}, bound {lim.forward_bound_reached}, "
        f"size {lim.algebra_size_reached}"
    )


def _load_algebra(cfg: CliConfig, stdin: TextIO) -> FiniteAlgebra:
    return parse_algebra(_read(cfg.input, stdin))


# -------------------------
# Subcommands
# -------------------------
def cmd_decide(cfg: CliConfig, args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    logic = cfg.logic_spec
    batch = parse_batch(_read(cfg.input, stdin), logic.fragment)
    engine = None
    if args.store:
        from src.db.queries import ensure_schema, get_engine, upsert_verdict

        engine = get_engine(resolve_db_url(args.db_url))
        ensure_schema(engine)
    lines, code = [], EXIT_OK
    for goal in batch.goals:
        v = decide(goal, logic, batch.assumptions, cfg.limits)
        lines.append(_verdict_line(v, cfg.format))
        if not v.definite:
            code = EXIT_INCOMPLETE
        if engine is not None:
            upsert_verdict(engine, v, cfg.limits)
    _emit("".join(line + "\n" for line in lines), cfg.output, stdout)
    return code


def cmd_prove(cfg: CliConfig, args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    logic = cfg.logic_spec
    batch = parse_batch(_read(cfg.input, stdin), logic.fragment)
    if batch.assumptions:
        raise LogicError("prove runs the cut-free backward search only; use decide for assumptions")
    out, code = [], EXIT_OK
    for goal in batch.goals:
        proof = prove_backward(goal, logic, cfg.limits.backward_depth)
        if proof is None:
            out.append(f"# {goal}: no proof up to depth {cfg.limits.backward_depth}\n")
            code = EXIT_INCOMPLETE
            continue
        report = check_proof(proof, logic)
        if not report.ok:
            raise LogicError(f"backward search produced an invalid proof: {report}")
        out.append(f"# {goal}\n{proof_to_text(proof)}")
    _emit("".join(out), cfg.output, stdout)
    return code


def cmd_countermodel(cfg: CliConfig, args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    logic = cfg.logic_spec
    cls = spec_to_class(logic)
    max_n = cfg.limits.algebra_size_for(cls)
    batch = parse_batch(_read(cfg.input, stdin), logic.fragment)
    out, code = [], EXIT_OK
    for goal in batch.goals:
        found = find_countermodel(goal, batch.assumptions, cls, max_n)
        if found is None:
            out.append(f"# {goal}: no countermodel up to size {max_n}\n")
            code = EXIT_INCOMPLETE
            continue
        A, v = found
        vals = " ".join(f"{k}={i}" for k, i in sorted(v.items()))
        out.append(f"# {goal}: {vals}\n{algebra_to_text(A)}")
    _emit("".join(out), cfg.output, stdout)
    return code


def cmd_check_algebra(cfg: CliConfig, args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    A = _load_algebra(cfg, stdin)
    cls = parse_class(args.cls) if args.cls else spec_to_class(cfg.logic_spec)
    report = check_class(A, cls)
    stdout.write(f"{cls}: {report}\n")
    return EXIT_OK if report.ok else EXIT_INCOMPLETE


def cmd_enumerate(cfg: CliConfig, args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    cls = parse_class(args.cls) if args.cls else spec_to_class(cfg.logic_spec)
    if args.count:
        counts = count_algebras(args.size, cls)
        table = pd.DataFrame({"size": list(counts), "members": list(counts.values())})
        stdout.write(table.to_string(index=False) + "\n")
        return EXIT_OK
    members = list(enumerate_algebras(args.size, cls))
    if cfg.output:
        out_dir = Path(cfg.output)
        out_dir.mkdir(parents=True, exist_ok=True)
        for i, A in enumerate(members):
            (out_dir / f"{args.size}_{i:04d}.alg").write_text(algebra_to_text(A), encoding="utf-8")
        log.info("✅ wrote %d algebras of %s to %s", len(members), cls, out_dir)
    else:
        stdout.write("".join(f"# {cls} size {args.size} #{i}\n{algebra_to_text(A)}" for i, A in enumerate(members)))
    return EXIT_OK


def cmd_complete(cfg: CliConfig, args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    A = _load_algebra(cfg, stdin)
    if args.zero:
        Fp = zero_adjoined_completion(A)
    else:
        Fp = frame_plus(dm_frame(A))
    report = verify_embedding(Fp, A)
    if not report.ok:
        raise LogicError(f"completion does not embed the input: {report}")
    embed = [Fp.index(embedding(Fp, a)) for a in range(A.n)]
    _emit(algebra_to_text(Fp.algebra, {"embed": embed}), cfg.output, stdout)
    return EXIT_OK


def _parse_subset(text: str) -> Tuple[int, ...]:
    try:
        return tuple(sorted({int(tok) for tok in text.replace(" ", "").split(",") if tok}))
    except ValueError as e:
        raise LogicError(f"--subset must be comma-separated element indices, got {text!r}") from e


def _parse_defined(items: Optional[List[str]]) -> Dict[str, List[Tuple[int, ...]]]:
    """`prod:0,1;1,1` -> {"prod": [(0, 1), (1, 1)]}; `-` is the empty tuple of a constant, `op:` defines op nowhere."""
    out: Dict[str, List[Tuple[int, ...]]] = {}
    for item in items or []:
        op, sep, rest = item.partition(":")
        if not sep or not op.strip():
            raise LogicError(f"--defined must look like OP:ARGS, got {item!r}")
        tuples = out.setdefault(op.strip(), [])
        for tok in filter(None, (t.strip() for t in rest.split(";"))):
            if tok == "-":
                tuples.append(())
                continue
            try:
                tuples.append(tuple(int(x) for x in tok.split(",")))
            except ValueError as e:
                raise LogicError(f"--defined {op}: bad argument tuple {tok!r}") from e
    return out


def cmd_fep(cfg: CliConfig, args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    A = _load_algebra(cfg, stdin)
    elements = _parse_subset(args.subset) if args.subset else range(A.n)
    # operations without --defined are defined wherever their value lands in B
    B = PartialSubalgebra.of(elements, _parse_defined(args.defined) or None)
    F = fep_frame(A, B, with_zero=args.zero)
    Fp = frame_plus(F)
    report = verify_embedding(Fp, A, B)
    embed = [Fp.index(embedding(Fp, b)) for b in sorted(B.elements)]
    header = f"# |G|={F.g} |T|={F.t} closed={len(Fp.closed)} embedding: {report}\n"
    _emit(header + algebra_to_text(Fp.algebra, {"embed": embed}), cfg.output, stdout)
    return EXIT_OK if report.ok else EXIT_INCOMPLETE


def cmd_star(cfg: CliConfig, args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    S = star_extension(_load_algebra(cfg, stdin))
    _emit(S.to_text(), cfg.output, stdout)
    return EXIT_OK


def cmd_dcore(cfg: CliConfig, args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    A = _load_algebra(cfg, stdin)
    Fp = dm_with_conucleus(A)
    embed = [Fp.index(embedding(Fp, a)) for a in range(A.n)]
    _emit(algebra_to_text(Fp.algebra, {"embed": embed}), cfg.output, stdout)
    return EXIT_OK


def cmd_translate(cfg: CliConfig, args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    fragment = cfg.logic_spec.fragment if cfg.logic else None
    hyps: List[Sequent] = [parse_sequent(s, fragment) for s in args.assume or []]
    if args.goal is None:
        raise LogicError("translate needs --goal")
    goal = parse_sequent(args.goal, fragment)
    s = internalize(hyps, goal, fragment) if fragment is not None else internalize(hyps, goal)
    _emit(f"{s}\n", cfg.output, stdout)
    return EXIT_OK


def cmd_selftest(cfg: CliConfig, args: argparse.Namespace, stdin: TextIO, stdout: TextIO) -> int:
    from src.selftest import run_selftest

    table = run_selftest(args.suite or None, max_n=args.max_size or 3)
    if cfg.format == "records":
        stdout.write(table.to_json(orient="records", lines=True))
    else:
        stdout.write(table.to_string(index=False) + "\n")
    return EXIT_OK if int(table["failures"].sum()) == 0 else EXIT_INCOMPLETE


COMMANDS = {
    "decide": cmd_decide,
    "prove": cmd_prove,
    "countermodel": cmd_countermodel,
    "check-algebra": cmd_check_algebra,
    "enumerate": cmd_enumerate,
    "complete": cmd_complete,
    "fep": cmd_fep,
    "star": cmd_star,
    "dcore": cmd_dcore,
    "translate": cmd_translate,
    "selftest": cmd_selftest,
}


# -------------------------
# Parser
# -------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--logic", help="logic spec, e.g. fnl, nacill0+ec, cyinfnl+w")
    common.add_argument("--in", dest="input", help="input file ('-' for stdin)")
    common.add_argument("--out", dest="output", help="output file (directory for enumerate)")
    common.add_argument("--format", choices=("human", "records"), default="human")
    common.add_argument("--depth", type=int, help="backward search depth")
    common.add_argument("--schedule", help="forward size schedule, e.g. 8,12,16")
    common.add_argument("--max-size", type=int, help="largest countermodel size")
    common.add_argument("--budget", type=float, help="wall-clock budget in seconds")
    common.add_argument("--quantum", type=int, help="work units per worker turn")

    parser = argparse.ArgumentParser(prog="nacill", description="Non-associative linear logic workbench")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("decide", parents=[common], help="verdict per goal of a sequent file")
    p.add_argument("file", nargs="?", help="sequent file (alternative to --in)")
    p.add_argument("--store", action="store_true", help="upsert verdicts into the verdict store")
    p.add_argument("--db-url", help="SQLAlchemy URL (default: NACILL_DB_URL)")
    for name, text in (("prove", "cut-free backward search only"), ("countermodel", "finite countermodel search only")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file", nargs="?", help="sequent file (alternative to --in)")

    p = sub.add_parser("check-algebra", parents=[common], help="class membership report")
    p.add_argument("--class", dest="cls", help="class, e.g. NACILL0+ecio (default: class of --logic)")
    p = sub.add_parser("enumerate", parents=[common], help="members of a class of a given size")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--class", dest="cls", help="class (default: class of --logic)")
    p.add_argument("--count", action="store_true", help="print member counts for sizes 1..size")
    p = sub.add_parser("complete", parents=[common], help="Dedekind-MacNeille completion F+")
    p.add_argument("--zero", action="store_true", help="designate gamma(empty set) as 0")
    p = sub.add_parser("fep", parents=[common], help="finite frame over a partial subalgebra")
    p.add_argument("--subset", help="elements of B, e.g. 0,2 (default: all)")
    p.add_argument(
        "--defined",
        action="append",
        metavar="OP:ARGS",
        help="explicit domain of one operation on B, e.g. prod:0,1;1,1 or one:- (repeatable)",
    )
    p.add_argument("--zero", action="store_true", help="zero-bounded variant with targets B plus 0")
    sub.add_parser("star", parents=[common], help="cyclic involutive extension A*")
    sub.add_parser("dcore", parents=[common], help="completion with the central-core conucleus")
    p = sub.add_parser("translate", parents=[common], help="internalize assumptions into one sequent")
    p.add_argument("--assume", action="append", help="assumption sequent (repeatable)")
    p.add_argument("--goal", help="goal sequent")
    p = sub.add_parser("selftest", parents=[common], help="run the invariant suites")
    p.add_argument("--suite", action="append", help="suite name (repeatable; default: all)")
    return parser


def _config(args: argparse.Namespace) -> CliConfig:
    schedule = None
    if args.schedule:
        schedule = parse_schedule(args.schedule)
    limits = resolve_limits(
        {
            "backward_depth": args.depth,
            "forward_schedule": schedule,
            "max_algebra_size": args.max_size,
            "budget_seconds": args.budget,
            "quantum": args.quantum,
        }
    )
    return CliConfig(
        subcommand=args.subcommand,
        logic=args.logic,
        limits=limits,
        input=args.input or getattr(args, "file", None),
        output=args.output,
        format=args.format,
    )


def run(argv: Optional[Sequence[str]] = None, stdin: TextIO = sys.stdin, stdout: TextIO = sys.stdout) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    try:
        cfg = _config(args)
        return COMMANDS[cfg.subcommand](cfg, args, stdin, stdout)
    except (LogicError, ValueError, OSError) as e:
        log.error("%s: %s", args.subcommand, e)
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR


def main() -> None:
    setup_logging()
    sys.exit(run())


if __name__ == "__main__":
    main()
