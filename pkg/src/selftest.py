# src/selftest.py
"""
Invariant suites run by `cli selftest`. Each suite walks the enumerated
algebras (or a seeded sample of sequents) and returns how many checks it made
and which ones failed; `run_selftest` collects the results into a DataFrame.
"""

from __future__ import annotations

import itertools
import logging
import random
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import pandas as pd
from pydantic import BaseModel, Field

from src.logic.algebra import AlgebraClass, FiniteAlgebra, check_class, sequent_holds
from src.logic.calculus import check_proof, parse_logic
from src.logic.constructions import check_star, internalize, star_extension
from src.logic.decide import SearchLimits, decide, prove_backward, spec_to_class
from src.logic.enumeration import collapse_check, enumerate_algebras, find_countermodel
from src.logic.errors import FragmentError, LogicError
from src.logic.frames import (
    FRAME_RULES,
    PartialSubalgebra,
    closed_sets,
    dm_frame,
    equation_holds,
    fep_frame,
    frame_plus,
    gamma,
    rule_matches_equation,
    verify_embedding,
)
from src.logic.syntax import (
    AND,
    BANG,
    BASIC,
    EMPTY,
    LDIV,
    MUL,
    NO_BANG,
    ONE,
    ONE_OP,
    OR,
    RDIV,
    ZERO,
    ZERO_OP,
    Formula,
    Fragment,
    Leaf,
    Node,
    Sequent,
    bang,
    parse_sequent,
    var,
)

log = logging.getLogger(__name__)

ROOT = Path(__file__).resolve().parents[1]
CORPUS_PATH = ROOT / "data" / "corpus.txt"

PRESERVED_EQUATIONS = ("e", "c", "i", "!c", "!e", "!i", "!a1", "!a2")

Outcome = Tuple[int, List[str]]


class SuiteResult(BaseModel):
    suite: str = Field(..., description="Suite name")
    checks: int = Field(..., description="Individual checks made")
    failures: int = Field(..., description="Checks that failed")
    seconds: float = Field(..., description="Wall time")
    first_failure: Optional[str] = Field(None, description="First failing check, if any")


# -------------------------
# Corpus
# -------------------------
@dataclass(frozen=True)
class CorpusEntry:
    logic: str
    sequent: str
    expected: str  # "provable" or "refuted:<minimal size>"
    assumptions: Tuple[str, ...] = ()

    @property
    def status(self) -> str:
        return self.expected.split(":", 1)[0]

    @property
    def min_size(self) -> Optional[int]:
        _, _, size = self.expected.partition(":")
        return int(size) if size else None


def read_corpus(path: Path = CORPUS_PATH) -> List[CorpusEntry]:
    """`logic | sequent | expected [| assumption; assumption ...]` lines; `#` comments and blank lines skipped."""
    entries = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) not in (3, 4):
            raise ValueError(f"{path.name}:{lineno}: expected 'logic | sequent | expected [| assumptions]'")
        hyps = tuple(h.strip() for h in parts[3].split(";") if h.strip()) if len(parts) == 4 else ()
        entries.append(CorpusEntry(parts[0], parts[1], parts[2], hyps))
    return entries


# -------------------------
# Algebra walks
# -------------------------
def _members(max_n: int, cls: AlgebraClass) -> Iterator[FiniteAlgebra]:
    for n in range(1, max_n + 1):
        yield from enumerate_algebras(n, cls)


def _subsets(n: int, max_size: int = 3) -> Iterator[Tuple[int, ...]]:
    for k in range(1, min(n, max_size) + 1):
        yield from itertools.combinations(range(n), k)


def iter_frames(max_n: int):
    """(label, A, frame, B) for every DM frame and every FEP frame over subsets of <= 3 elements,
    over interior algebras without and with 0. DM frames of the latter carry eps_t."""
    for base in ("Interior", "Interior0"):
        for A in _members(max_n, AlgebraClass(base)):
            yield "dm", A, dm_frame(A), None
            for sub in _subsets(A.n):
                B = PartialSubalgebra.of(sub)
                yield "fep", A, fep_frame(A, B), B


def suite_galois(max_n: int) -> Outcome:
    checks, failures = 0, []
    for label, A, F, _ in iter_frames(max_n):
        subsets = range(1 << F.g)
        for X in subsets:
            gX = gamma(F, X)
            checks += 3
            if X & ~gX:
                failures.append(f"{label} n={A.n}: gamma not extensive at {X}")
            if gamma(F, gX) != gX:
                failures.append(f"{label} n={A.n}: gamma not idempotent at {X}")
            if F.up(F.down(F.up(X))) != F.up(X):
                failures.append(f"{label} n={A.n}: X|> not stable under <||> at {X}")
            for Y in subsets:
                if X & ~Y:
                    continue
                checks += 2
                if gX & ~gamma(F, Y):
                    failures.append(f"{label} n={A.n}: gamma not monotone at {X} <= {Y}")
                if F.up(Y) & ~F.up(X):
                    failures.append(f"{label} n={A.n}: |> not antitone at {X} <= {Y}")
        closed = closed_sets(F)
        for C in closed:
            checks += 1
            basis = F.full
            for z in range(F.t):
                if not C & ~F.col[z]:
                    basis &= F.col[z]
            if basis != C:
                failures.append(f"{label} n={A.n}: closed set {C} is not an intersection of basis sets")
        for X, Y in itertools.product(subsets, repeat=2):
            checks += 1
            if F.compose(gamma(F, X), gamma(F, Y)) & ~gamma(F, F.compose(X, Y)):
                failures.append(f"{label} n={A.n}: nucleus law fails at {X}, {Y}")
    return checks, failures


def suite_frame(max_n: int) -> Outcome:
    checks, failures = 0, []
    for label, A, F, _ in iter_frames(max_n):
        Fp = frame_plus(F)
        checks += 1
        if F.eps_t is not None and Fp.algebra.zero is None:
            failures.append(f"{label} n={A.n}: F+ lost the 0 of its frame")
            continue
        target = "Interior0" if Fp.algebra.zero is not None else "Interior"
        report = check_class(Fp.algebra, AlgebraClass(target))
        if not report.ok:
            failures.append(f"{label} n={A.n}: F+ {report}")
            continue
        for eq in PRESERVED_EQUATIONS:
            if equation_holds(A, eq):
                checks += 1
                if not equation_holds(Fp.algebra, eq):
                    failures.append(f"{label} n={A.n}: ({eq}) lost in F+")
    return checks, failures


def suite_embedding(max_n: int) -> Outcome:
    checks, failures = 0, []
    for label, A, F, B in iter_frames(max_n):
        checks += 1
        report = verify_embedding(frame_plus(F), A, B)
        if not report.ok:
            failures.append(f"{label} n={A.n}: {report}")
    return checks, failures


def suite_fep(max_n: int) -> Outcome:
    """Finite F+ for integral inputs; with a zero bound, {eps}<| is the least closed set."""
    checks, failures = 0, []
    for A in _members(max_n, AlgebraClass("Interior0", frozenset("io"))):
        for sub in _subsets(A.n):
            F = fep_frame(A, PartialSubalgebra.of(sub), with_zero=True)
            Fp = frame_plus(F)
            checks += 2
            log.debug("fep n=%d B=%s: %d closed sets", A.n, sub, len(Fp.closed))
            if not Fp.closed:
                failures.append(f"n={A.n} B={sub}: no closed sets")
            if F.col[F.eps_t] != Fp.closed[0] or gamma(F, 0) != Fp.closed[0]:
                failures.append(f"n={A.n} B={sub}: {{eps}}<| is not the least closed set")
    return checks, failures


def suite_star(max_n: int) -> Outcome:
    checks, failures = 0, []
    for A in _members(max_n, AlgebraClass("RLUG")):
        checks += 1
        try:
            report = check_star(A, star_extension(A))
        except LogicError as e:
            failures.append(f"n={A.n}: {e}")
            continue
        if not report.ok:
            failures.append(f"n={A.n}: {report}")
    return checks, failures


def suite_rules(max_n: int) -> Outcome:
    checks, failures = 0, []
    for label, A, F, _ in iter_frames(max_n):
        Fp = frame_plus(F)
        for rule in FRAME_RULES:
            checks += 1
            if not rule_matches_equation(F, rule, Fp):
                failures.append(f"{label} n={A.n}: [{rule}] disagrees with its equation")
    return checks, failures


def suite_collapse(max_n: int) -> Outcome:
    report = collapse_check(max_n)
    return 1, [] if report.ok else [report.detail]


# -------------------------
# Sequent samples
# -------------------------
DUAL_LOGICS = ("fnl", "fnl+e", "nacill+i", "nacill0+eci", "infnl", "naccll-+w")
TRANSLATION_LOGICS = ("naccll-+w", "naccll+w", "naccll-+ew", "naccll+ew")


def random_formula(rng: random.Random, names: Sequence[str], fragment: Fragment, depth: int) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        atoms = [var(n) for n in names]
        if ONE_OP in fragment:
            atoms.append(ONE)
        if ZERO_OP in fragment:
            atoms.append(ZERO)
        return rng.choice(atoms)
    op = rng.choice([op for op in (AND, OR, MUL, LDIV, RDIV, BANG) if op in fragment])
    if op == BANG:
        return bang(random_formula(rng, names, fragment, depth - 1))
    return Formula(op, (random_formula(rng, names, fragment, depth - 1), random_formula(rng, names, fragment, depth - 1)))


def random_sequent(rng: random.Random, fragment: Fragment, names: Sequence[str] = ("a", "b", "c"), depth: int = 2) -> Sequent:
    ant = Leaf(random_formula(rng, names, fragment, depth))
    if rng.random() < 0.5:
        other = Leaf(random_formula(rng, names, fragment, depth - 1))
        ant = Node(ant, other) if rng.random() < 0.5 else Node(other, ant)
    if ZERO_OP in fragment and rng.random() < 0.15:
        return Sequent(ant, EMPTY)
    return Sequent(ant, random_formula(rng, names, fragment, depth))


def suite_dual(max_n: int, samples: int = 500, seed: int = 7, depth: int = 4) -> Outcome:
    """No sequent gets both a proof and a countermodel; every payload re-checks."""
    checks, failures = 0, []
    for name in DUAL_LOGICS:
        logic = parse_logic(name)
        cls = spec_to_class(logic)
        rng = random.Random(f"{seed}:{name}")
        for _ in range(samples):
            s = random_sequent(rng, logic.fragment)
            proof = prove_backward(s, logic, depth)
            cm = find_countermodel(s, (), cls, min(max_n, cls.default_max_size))
            checks += 1
            if proof is not None and cm is not None:
                failures.append(f"{name}: {s} is both proved and refuted")
            if proof is not None and not check_proof(proof, logic).ok:
                failures.append(f"{name}: proof of {s} fails to check")
            if cm is not None and sequent_holds(cm[0], cm[1], s):
                failures.append(f"{name}: countermodel of {s} does not refute it")
    return checks, failures


def _quick_limits(max_n: int) -> SearchLimits:
    return SearchLimits(backward_depth=6, forward_schedule=(6, 8), max_algebra_size=max_n, budget_seconds=3.0)


def suite_translation(max_n: int, samples: int = 50, seed: int = 11) -> Outcome:
    """decide(goal, S) agrees with decide(internalize(S, goal), no assumptions) when both are definite."""
    checks, failures = 0, []
    limits = _quick_limits(max_n)
    rng = random.Random(seed)
    for i in range(samples):
        logic = parse_logic(TRANSLATION_LOGICS[i % len(TRANSLATION_LOGICS)])
        hyp = random_sequent(rng, logic.fragment, names=("a", "b"), depth=1)
        goal = random_sequent(rng, logic.fragment, names=("a", "b"), depth=1)
        direct = decide(goal, logic, (hyp,), limits)
        inner = decide(internalize((hyp,), goal, logic.fragment), logic, (), limits)
        if direct.definite and inner.definite:
            checks += 1
            if direct.status != inner.status:
                failures.append(f"{logic}: {hyp} / {goal}: {direct.status} vs internalized {inner.status}")
    return checks, failures


CONSERVATIVE_PAIRS = (
    (BASIC, ("fnl", "infnl", "cyinfnl"), ("", "e", "c", "ec")),
    (NO_BANG, ("infnl", "naccll-"), ("", "e", "w")),
    (NO_BANG, ("cyinfnl", "naccll"), ("", "e", "w")),
)


def suite_conservativity(max_n: int, corpus: Optional[Iterable[CorpusEntry]] = None) -> Outcome:
    """Extensions agree with their base on sequents of the smaller language."""
    checks, failures = 0, []
    limits = _quick_limits(max_n)
    entries = list(corpus) if corpus is not None else read_corpus()
    queries = sorted({(e.sequent, e.assumptions) for e in entries})
    for fragment, families, letter_sets in CONSERVATIVE_PAIRS:
        for text, hyp_texts in queries:
            try:
                s = parse_sequent(text, fragment)
                hyps = [parse_sequent(h, fragment) for h in hyp_texts]
            except FragmentError:
                continue
            for letters in letter_sets:
                statuses = {}
                for fam in families:
                    logic = parse_logic(f"{fam}+{letters}" if letters else fam)
                    v = decide(s, logic, hyps, limits)
                    if v.definite:
                        statuses[str(logic)] = v.status
                if len(statuses) > 1:
                    checks += 1
                    if len(set(statuses.values())) > 1:
                        failures.append(f"{s} from {list(hyp_texts)}: {statuses}")
    return checks, failures


SUITES: Dict[str, Callable[[int], Outcome]] = {
    "galois": suite_galois,
    "frame": suite_frame,
    "embedding": suite_embedding,
    "fep": suite_fep,
    "star": suite_star,
    "rules": suite_rules,
    "collapse": suite_collapse,
    "dual": suite_dual,
    "translation": suite_translation,
    "conservativity": suite_conservativity,
}


def run_suite(name: str, max_n: int = 3) -> SuiteResult:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r} (valid: {', '.join(SUITES)})")
    t0 = time.perf_counter()
    checks, failures = SUITES[name](max_n)
    seconds = time.perf_counter() - t0
    if failures:
        log.warning("suite %s: %d of %d checks failed, first: %s", name, len(failures), checks, failures[0])
    else:
        log.info("suite %s: %d checks passed in %.2fs", name, checks, seconds)
    return SuiteResult(
        suite=name,
        checks=checks,
        failures=len(failures),
        seconds=round(seconds, 3),
        first_failure=failures[0] if failures else None,
    )


def run_selftest(names: Optional[Sequence[str]] = None, max_n: int = 3) -> pd.DataFrame:
    results = [run_suite(name, max_n) for name in (names or list(SUITES))]
    return pd.DataFrame([r.model_dump() for r in results])
