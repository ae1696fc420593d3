# src/logic/decide.py
"""
The verdict engine. A cut-free backward prover, a forward enumerator
(cut and assumptions included) and a finite countermodel search are run as
generator workers, round-robin, one work quantum each per turn. The first
worker that finishes with a result decides the verdict.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Dict, Generator, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, field_validator

from src.logic.algebra import AlgebraClass, FiniteAlgebra, algebra_to_text, sequent_holds
from src.logic.calculus import (
    FAMILIES,
    NONE,
    UNIT_RULES,
    ForwardEngine,
    LogicSpec,
    Proof,
    backward_instances,
    check_proof,
    forward_universe,
    proof_to_text,
)
from src.logic.constructions import internalize
from src.logic.enumeration import CountermodelSearch
from src.logic.errors import LogicError, UnnamedLogicError
from src.logic.syntax import BANG, LDIV, Sequent, check_fragment

log = logging.getLogger(__name__)

Worker = Generator[None, None, object]


# -------------------------
# Limits and verdicts
# -------------------------
class SearchLimits(BaseModel):
    backward_depth: int = Field(12, description="Max proof height tried by the backward prover; unit-law steps are free")
    forward_schedule: Tuple[int, ...] = Field((8, 12, 16), description="Sequent size bounds, one saturation per stage")
    max_algebra_size: Optional[int] = Field(None, description="Largest countermodel size; None = 3 with !, 4 without")
    budget_seconds: float = Field(60.0, description="Wall-clock budget for one query")
    quantum: int = Field(200, description="Work units a worker runs per turn")

    @field_validator("backward_depth", "quantum")
    @classmethod
    def _positive_int(cls, v: int) -> int:
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @field_validator("budget_seconds")
    @classmethod
    def _positive_budget(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("must be positive")
        return v

    @field_validator("max_algebra_size")
    @classmethod
    def _positive_size(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v <= 0:
            raise ValueError("must be positive")
        return v

    @field_validator("forward_schedule")
    @classmethod
    def _increasing(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if not v:
            raise ValueError("schedule must not be empty")
        if any(b <= 0 for b in v):
            raise ValueError("schedule bounds must be positive")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("schedule must be strictly increasing")
        return v

    def algebra_size_for(self, cls: AlgebraClass) -> int:
        return self.max_algebra_size or cls.default_max_size


class LimitsSnapshot(BaseModel):
    backward_depth_reached: int = Field(..., description="Deepest completed backward iteration (-1: none)")
    forward_bound_reached: int = Field(..., description="Largest size bound saturated (0: none)")
    algebra_size_reached: int = Field(..., description="Largest algebra size fully searched (0: none)")
    rounds: int = Field(..., description="Round-robin turns taken")
    budget_seconds: float = Field(..., description="Wall-clock budget in force")


Status = Literal["provable", "refuted", "exhausted"]


class VerdictRecord(BaseModel):
    logic: str = Field(..., description="Logic spec string")
    goal: str = Field(..., description="Goal sequent")
    assumptions: List[str] = Field(default_factory=list, description="Assumption sequents")
    status: Status
    worker: str = Field("", description="Worker that produced the answer")
    decidability: str = Field("unknown", description="decidable / undecidable / unknown")
    proved_sequent: Optional[str] = Field(None, description="Set when the proof concludes the internalized goal")
    proof: Optional[str] = Field(None, description="Proof in tab-separated proof text")
    algebra: Optional[str] = Field(None, description="Countermodel in algebra text")
    valuation: Optional[Dict[str, int]] = None
    limits: LimitsSnapshot


@dataclass(frozen=True)
class Verdict:
    status: Status
    logic: str
    goal: Sequent
    limits: LimitsSnapshot
    assumptions: Tuple[Sequent, ...] = ()
    worker: str = ""
    proof: Optional[Proof] = None
    proved_sequent: Optional[Sequent] = None
    algebra: Optional[FiniteAlgebra] = None
    valuation: Optional[Dict[str, int]] = None
    decidability: str = "unknown"

    @property
    def definite(self) -> bool:
        return self.status != "exhausted"

    def to_record(self) -> VerdictRecord:
        return VerdictRecord(
            logic=self.logic,
            goal=str(self.goal),
            assumptions=[str(s) for s in self.assumptions],
            status=self.status,
            worker=self.worker,
            decidability=self.decidability,
            proved_sequent=None if self.proved_sequent is None else str(self.proved_sequent),
            proof=None if self.proof is None else proof_to_text(self.proof),
            algebra=None if self.algebra is None else algebra_to_text(self.algebra),
            valuation=self.valuation,
            limits=self.limits,
        )

    def to_json(self) -> str:
        return self.to_record().model_dump_json()


# -------------------------
# Logic -> class
# -------------------------
CLASS_OF_FAMILY = {
    "fnl": "RLUG",
    "infnl": "InRLUG",
    "cyinfnl": "CyInRLUG",
    "nacill": "NACILL",
    "nacill0": "NACILL0",
    "naccll-": "NACCLLminus",
    "naccll": "NACCLL",
}


def spec_to_class(logic: LogicSpec) -> AlgebraClass:
    valid = sorted(CLASS_OF_FAMILY)
    if logic.family not in FAMILIES:
        raise UnnamedLogicError(f"no completeness result for {logic}", valid=valid)
    fragment, classical, allowed = FAMILIES[logic.family]
    if logic.fragment != fragment or logic.classical != classical:
        raise UnnamedLogicError(f"{logic} does not match the named system {logic.family}", valid=valid)
    if "a" in logic.structural:
        raise UnnamedLogicError(f"no completeness result for {logic} with associativity", valid=valid)
    expanded = set(allowed) - {"w"} | ({"i", "o"} if "w" in allowed else set())
    if not logic.structural <= expanded:
        raise UnnamedLogicError(f"{logic} uses rules outside {''.join(sorted(allowed))}", valid=valid)
    return AlgebraClass(CLASS_OF_FAMILY[logic.family], frozenset(logic.structural))


def decidability(logic: LogicSpec, with_assumptions: bool = False) -> str:
    """decidable / undecidable / unknown, as far as known results reach."""
    R = set(logic.structural)
    if "a" in R:
        return "unknown"
    fam = logic.family
    if fam in ("nacill", "nacill0"):
        return "decidable" if "i" in R else "undecidable"
    if fam in ("naccll-", "naccll"):
        return "undecidable" if R <= {"e", "c"} else "unknown"
    if fam in ("fnl", "infnl", "cyinfnl") and with_assumptions and R <= {"e", "c"}:
        return "undecidable"
    return "unknown"


# -------------------------
# Backward prover
# -------------------------
class BackwardSearch:
    """Iterative deepening over cut-free rule instances with a branch-local loop check.

    Proved sequents are cached across iterations. A failure is cached with its
    depth only when no loop pruning happened below it.
    """

    def __init__(self, goal: Sequent, logic: LogicSpec, max_depth: int) -> None:
        self.goal = goal
        self.logic = logic
        self.max_depth = max_depth
        self.depth_reached = -1
        self.tried = 0
        self.proved: Dict[Sequent, Proof] = {}
        self._failed: Dict[Sequent, int] = {}
        self._instances: Dict[Sequent, list] = {}

    def run(self, tick: int = 200) -> Generator[None, None, Optional[Proof]]:
        for depth in range(self.max_depth + 1):
            proof, _ = yield from self._search(self.goal, depth, frozenset(), tick)
            if proof is not None:
                log.debug("backward: %s proved at depth %d", self.goal, depth)
                return proof
            self.depth_reached = depth
            log.debug("backward: depth %d exhausted (%d instances tried)", depth, self.tried)
        return None

    def _search(self, s: Sequent, depth: int, branch: frozenset, tick: int):
        if s in self.proved:
            return self.proved[s], False
        if self._failed.get(s, -1) >= depth:
            return None, False
        if s in branch:
            return None, True
        if s not in self._instances:
            self._instances[s] = backward_instances(s, self.logic)
        pruned = False
        inner = branch | {s}
        for inst in self._instances[s]:
            self.tried += 1
            if self.tried % tick == 0:
                yield
            if not inst.premises:
                proof = inst.build(())
                self.proved[s] = proof
                return proof, False
            # unit-law steps do not count towards the height bound
            below = depth if inst.rule in UNIT_RULES else depth - 1
            if below < 0:
                continue
            subproofs: List[Proof] = []
            for premise in inst.premises:
                p, pr = yield from self._search(premise, below, inner, tick)
                pruned = pruned or pr
                if p is None:
                    break
                subproofs.append(p)
            else:
                proof = inst.build(subproofs)
                self.proved[s] = proof
                return proof, False
        if not pruned:
            self._failed[s] = max(self._failed.get(s, -1), depth)
        return None, pruned


def _drain(gen: Worker):
    try:
        while True:
            next(gen)
    except StopIteration as stop:
        return stop.value


def prove_backward(goal: Sequent, logic: LogicSpec, depth: int) -> Optional[Proof]:
    return _drain(BackwardSearch(goal, logic, depth).run())


# -------------------------
# Forward enumerator
# -------------------------
class DeducibleSearch:
    """Saturate under all rules at each size bound of the schedule; the universe
    grows by one negation layer per stage for classical logics."""

    def __init__(
        self, goal: Sequent, assumptions: Sequence[Sequent], logic: LogicSpec, schedule: Sequence[int]
    ) -> None:
        self.goal = goal
        self.assumptions = tuple(assumptions)
        self.logic = logic
        self.schedule = tuple(schedule)
        self.bound_reached = 0
        self.engine: Optional[ForwardEngine] = None

    def run(self, tick: int = 200) -> Generator[None, None, Optional[Proof]]:
        seqs = [self.goal, *self.assumptions]
        for stage, bound in enumerate(self.schedule):
            universe = forward_universe(self.logic, seqs, rounds=stage)
            if self.engine is None:
                self.engine = ForwardEngine(self.logic, self.assumptions, universe, bound, target=self.goal)
            else:
                self.engine.widen(bound, universe)
            engine = self.engine
            engine.seed()
            while engine.proof_of(self.goal) is None:
                new = yield from engine.iter_step(tick)
                if not new:
                    break
            proof = engine.proof_of(self.goal)
            if proof is not None:
                log.debug("forward: %s derived at bound %d", self.goal, bound)
                return proof
            self.bound_reached = bound
            log.debug("forward: bound %d saturated with %d sequents", bound, len(engine.derived))
        return None


def enumerate_deducible(
    logic: LogicSpec, assumptions: Sequence[Sequent], goal: Sequent, limits: Optional[SearchLimits] = None
) -> Optional[Proof]:
    limits = limits or SearchLimits()
    gen = DeducibleSearch(goal, assumptions, logic, limits.forward_schedule).run(limits.quantum)
    deadline = time.perf_counter() + limits.budget_seconds
    try:
        while time.perf_counter() < deadline:
            next(gen)
    except StopIteration as stop:
        return stop.value
    return None


# -------------------------
# decide
# -------------------------
def decide(
    goal: Sequent,
    logic: LogicSpec,
    assumptions: Sequence[Sequent] = (),
    limits: Optional[SearchLimits] = None,
) -> Verdict:
    limits = limits or SearchLimits()
    cls = spec_to_class(logic)
    hyps = tuple(assumptions)
    for s in (goal, *hyps):
        check_fragment(s, logic.fragment)
    max_n = limits.algebra_size_for(cls)
    q = limits.quantum
    t0 = time.perf_counter()

    backward = BackwardSearch(goal, logic, limits.backward_depth) if not hyps else None
    forward = DeducibleSearch(goal, hyps, logic, limits.forward_schedule) if hyps or logic.classical != NONE else None
    internalizable = bool(hyps) and logic.classical != NONE and {BANG, LDIV} <= set(logic.fragment)
    internal_goal = internalize(hyps, goal, logic.fragment) if internalizable else None
    internal = BackwardSearch(internal_goal, logic, limits.backward_depth) if internal_goal is not None else None
    refuter = CountermodelSearch(goal, hyps, cls, max_n)

    workers: List[Tuple[str, Worker]] = []
    if backward is not None:
        workers.append(("backward", backward.run(q)))
    if forward is not None:
        workers.append(("forward", forward.run(q)))
    if internal is not None:
        workers.append(("internalized", internal.run(q)))
    workers.append(("refuter", refuter.run(q)))

    rounds = 0

    def snapshot() -> LimitsSnapshot:
        depths = [w.depth_reached for w in (backward, internal) if w is not None]
        return LimitsSnapshot(
            backward_depth_reached=max(depths, default=-1),
            forward_bound_reached=forward.bound_reached if forward is not None else 0,
            algebra_size_reached=refuter.size_reached,
            rounds=rounds,
            budget_seconds=limits.budget_seconds,
        )

    common = dict(logic=str(logic), goal=goal, assumptions=hyps, decidability=decidability(logic, bool(hyps)))
    deadline = t0 + limits.budget_seconds
    active = list(workers)
    while active and time.perf_counter() < deadline:
        rounds += 1
        for entry in list(active):
            name, gen = entry
            try:
                next(gen)
                continue
            except StopIteration as stop:
                result = stop.value
            active.remove(entry)
            if result is None:
                log.debug("%s worker finished without an answer", name)
                continue
            if name == "refuter":
                A, v = result
                verdict = Verdict(status="refuted", worker=name, algebra=A, valuation=v, limits=snapshot(), **common)
            else:
                proved = internal_goal if name == "internalized" else None
                verdict = Verdict(
                    status="provable", worker=name, proof=result, proved_sequent=proved, limits=snapshot(), **common
                )
            audit(verdict, logic)
            log.info(
                "%s %s: %s by %s in %.2fs", logic, goal, verdict.status, name, time.perf_counter() - t0
            )
            return verdict

    verdict = Verdict(status="exhausted", limits=snapshot(), **common)
    log.info("%s %s: exhausted after %.2fs", logic, goal, time.perf_counter() - t0)
    return verdict


def audit(verdict: Verdict, logic: LogicSpec) -> None:
    """Re-check a definite verdict's payload independently of the search; LogicError if it does not hold up."""
    if verdict.status == "provable":
        if verdict.proved_sequent is not None:
            target, hyps = verdict.proved_sequent, ()
        else:
            target, hyps = verdict.goal, verdict.assumptions
        if verdict.proof is None or verdict.proof.conclusion != target:
            raise LogicError(f"proof does not conclude {target}")
        report = check_proof(verdict.proof, logic, hyps)
        if not report.ok:
            raise LogicError(f"proof fails to check: {report}")
    elif verdict.status == "refuted":
        A, v = verdict.algebra, verdict.valuation
        if A is None or v is None:
            raise LogicError("refutation without a countermodel")
        if not all(sequent_holds(A, v, s) for s in verdict.assumptions) or sequent_holds(A, v, verdict.goal):
            raise LogicError("countermodel does not refute the goal")
