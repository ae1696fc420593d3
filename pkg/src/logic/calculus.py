# src/logic/calculus.py
"""
Logic descriptors, the rule schemata of the base calculus plus the optional
structural and classical rules, proof objects, proof checking, and rule
instance generation in both directions (backward for cut-free search,
forward for saturation with cut and assumptions).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import (
    Dict,
    FrozenSet,
    Generator,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from src.logic.errors import FragmentError, ParseError, UnnamedLogicError
from src.logic.syntax import (
    AND,
    BANG,
    BASIC,
    EMPTY,
    FULL,
    HOLE,
    LDIV,
    MUL,
    NO_BANG,
    NO_ZERO,
    ONE,
    ONE_OP,
    OR,
    RDIV,
    UNIT,
    ZERO,
    ZERO_OP,
    Context,
    EmptyStoup,
    Formula,
    Fragment,
    Hole,
    Leaf,
    Node,
    NodeL,
    NodeR,
    Sequent,
    StructTerm,
    Unit,
    bang,
    check_fragment,
    decompositions,
    formula_size,
    is_k_term,
    ldiv,
    mul,
    neg_l,
    neg_r,
    parse_context,
    parse_sequent,
    parse_struct,
    plug,
    rdiv,
    sequent_size,
    sequent_subformulas,
    struct_size,
    substitute,
)

log = logging.getLogger(__name__)


# -------------------------
# Logic descriptors
# -------------------------
NONE, INVOLUTIVE, CYCLIC = "none", "involutive", "cyclic"
STRUCTURAL_LETTERS = ("e", "c", "i", "o", "a")

# family -> (fragment, classical flavor, letters allowed by the named system)
FAMILIES: Dict[str, Tuple[Fragment, str, FrozenSet[str]]] = {
    "fnl": (BASIC, NONE, frozenset("eci")),
    "infnl": (NO_BANG, INVOLUTIVE, frozenset("ecw")),
    "cyinfnl": (NO_BANG, CYCLIC, frozenset("ecw")),
    "nacill": (NO_ZERO, NONE, frozenset("eci")),
    "nacill0": (FULL, NONE, frozenset("ecio")),
    "naccll-": (FULL, INVOLUTIVE, frozenset("ecw")),
    "naccll": (FULL, CYCLIC, frozenset("ecw")),
}


@dataclass(frozen=True)
class LogicSpec:
    family: str
    fragment: Fragment
    structural: FrozenSet[str] = frozenset()
    classical: str = NONE

    def __post_init__(self) -> None:
        bad = set(self.structural) - set(STRUCTURAL_LETTERS)
        if bad:
            raise ValueError(f"unknown structural rule(s): {sorted(bad)}")
        if self.classical not in (NONE, INVOLUTIVE, CYCLIC):
            raise ValueError(f"unknown classical flavor: {self.classical!r}")
        if self.classical != NONE and not {MUL, LDIV, RDIV, ONE_OP, ZERO_OP} <= set(self.fragment):
            raise FragmentError("classical initial sequents need . \\ / 1 0 in the fragment")
        if "o" in self.structural and ZERO_OP not in self.fragment:
            raise FragmentError("rule (o) needs 0 in the fragment")

    @property
    def k_rules_enabled(self) -> bool:
        return BANG in self.fragment

    @property
    def letters(self) -> str:
        s = set(self.structural)
        if self.classical != NONE and {"i", "o"} <= s:
            s -= {"i", "o"}
            s.add("w")
        return "".join(ch for ch in "eciowa" if ch in s)

    def __str__(self) -> str:
        return f"{self.family}+{self.letters}" if self.letters else self.family


def parse_logic(text: str) -> LogicSpec:
    """`nacill0+ec`, `cyinfnl+w`, `fnl`, ... ; `w` abbreviates `io`."""
    base, _, letters = text.strip().lower().partition("+")
    if base not in FAMILIES:
        raise UnnamedLogicError(f"unknown logic {text!r}", valid=sorted(FAMILIES))
    fragment, classical, allowed = FAMILIES[base]
    structural: Set[str] = set()
    for ch in letters:
        if ch not in "eciowa":
            raise UnnamedLogicError(f"unknown structural letter {ch!r} in {text!r}", valid=sorted(FAMILIES))
        if ch != "a" and ch not in allowed and not (ch in "io" and "w" in allowed):
            raise UnnamedLogicError(f"{base} does not take rule {ch!r}", valid=sorted(FAMILIES))
        structural |= {"i", "o"} if ch == "w" else {ch}
    if classical != NONE and len(structural & {"i", "o"}) == 1:
        raise UnnamedLogicError(f"{base} takes i and o together as 'w'", valid=sorted(FAMILIES))
    return LogicSpec(base, fragment, frozenset(structural), classical)


# -------------------------
# Rules
# -------------------------
class Rule(str, Enum):
    ID = "Id"
    ONE_R = "=>1"
    ZERO_L = "0=>"
    CUT = "cut"
    ONE_L = "1=>"
    ZERO_R = "=>0"
    LDIV_L = "\\=>"
    LDIV_R = "=>\\"
    MUL_L = ".=>"
    MUL_R = "=>."
    RDIV_L = "/=>"
    RDIV_R = "=>/"
    AND_L1 = "/\\=>1"
    AND_L2 = "/\\=>2"
    AND_R = "=>/\\"
    OR_L = "\\/=>"
    OR_R1 = "=>\\/1"
    OR_R2 = "=>\\/2"
    BANG_L = "!=>"
    BANG_R = "=>!"
    KW = "kw"
    KC = "kc"
    KE = "ke"
    KA1 = "ka1"
    KA2 = "ka2"
    E = "e"
    I = "i"
    O = "o"
    C = "c"
    A = "a"
    DNE1 = "DNE1"
    DNE2 = "DNE2"
    COMP = "COMP"
    CYC = "CYC"
    UNIT_L = "eo"
    UNIT_R = "oe"
    ASSUMPTION = "Assumption"

    @property
    def premise_count(self) -> int:
        return _PREMISES[self]

    @property
    def is_initial(self) -> bool:
        return _PREMISES[self] == 0

    @property
    def bidirectional(self) -> bool:
        return self in _BIDIRECTIONAL


_PREMISES: Dict[Rule, int] = {
    Rule.ID: 0, Rule.ONE_R: 0, Rule.ZERO_L: 0, Rule.CUT: 2, Rule.ONE_L: 1, Rule.ZERO_R: 1,
    Rule.LDIV_L: 2, Rule.LDIV_R: 1, Rule.MUL_L: 1, Rule.MUL_R: 2, Rule.RDIV_L: 2, Rule.RDIV_R: 1,
    Rule.AND_L1: 1, Rule.AND_L2: 1, Rule.AND_R: 2, Rule.OR_L: 2, Rule.OR_R1: 1, Rule.OR_R2: 1,
    Rule.BANG_L: 1, Rule.BANG_R: 1, Rule.KW: 1, Rule.KC: 1, Rule.KE: 1, Rule.KA1: 1, Rule.KA2: 1,
    Rule.E: 1, Rule.I: 1, Rule.O: 1, Rule.C: 1, Rule.A: 1, Rule.UNIT_L: 1, Rule.UNIT_R: 1,
    Rule.DNE1: 0, Rule.DNE2: 0, Rule.COMP: 0, Rule.CYC: 0, Rule.ASSUMPTION: 0,
}
_BIDIRECTIONAL = {Rule.KE, Rule.KA1, Rule.KA2, Rule.A, Rule.COMP, Rule.CYC, Rule.UNIT_L, Rule.UNIT_R}

# rules whose principal part is the whole sequent (no context)
_RIGHT_RULES = {
    Rule.ID, Rule.ONE_R, Rule.ZERO_L, Rule.ZERO_R, Rule.LDIV_R, Rule.RDIV_R, Rule.MUL_R,
    Rule.AND_R, Rule.OR_R1, Rule.OR_R2, Rule.BANG_R, Rule.O,
    Rule.DNE1, Rule.DNE2, Rule.COMP, Rule.CYC,
}
# u(e o x) / u(x) and u(x o e) / u(x); the only place e acts as an identity
UNIT_RULES = frozenset({Rule.UNIT_L, Rule.UNIT_R})
_K_RULES = {Rule.KW, Rule.KC, Rule.KE, Rule.KA1, Rule.KA2}
_NEEDS = {
    Rule.ONE_R: ONE_OP, Rule.ONE_L: ONE_OP, Rule.ZERO_L: ZERO_OP, Rule.ZERO_R: ZERO_OP,
    Rule.LDIV_L: LDIV, Rule.LDIV_R: LDIV, Rule.RDIV_L: RDIV, Rule.RDIV_R: RDIV,
    Rule.MUL_L: MUL, Rule.MUL_R: MUL, Rule.AND_L1: AND, Rule.AND_L2: AND, Rule.AND_R: AND,
    Rule.OR_L: OR, Rule.OR_R1: OR, Rule.OR_R2: OR, Rule.BANG_L: BANG, Rule.BANG_R: BANG,
}


def rule_label(rule: Rule, flip: bool = False) -> str:
    return rule.value + ("^" if flip else "")


def rule_enabled(rule: Rule, logic: LogicSpec) -> bool:
    if rule in _NEEDS:
        return _NEEDS[rule] in logic.fragment
    if rule in _K_RULES:
        return logic.k_rules_enabled
    if rule.value in STRUCTURAL_LETTERS:
        return rule.value in logic.structural
    if rule in (Rule.DNE1, Rule.DNE2, Rule.COMP):
        return logic.classical != NONE
    if rule == Rule.CYC:
        return logic.classical == CYCLIC
    return True


# -------------------------
# Proofs
# -------------------------
@dataclass(frozen=True)
class Proof:
    """A derivation; `context` and `focus` record where a left/structural rule acted."""

    rule: Rule
    conclusion: Sequent
    premises: Tuple["Proof", ...] = ()
    flip: bool = False
    context: Context = HOLE
    focus: Optional[StructTerm] = None

    def nodes(self) -> Iterator["Proof"]:
        stack = [self]
        while stack:
            p = stack.pop()
            yield p
            stack.extend(reversed(p.premises))

    @property
    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    @property
    def height(self) -> int:
        return 1 + max((p.height for p in self.premises), default=-1)

    def __str__(self) -> str:
        return proof_to_text(self)


@dataclass(frozen=True)
class RuleInstance:
    rule: Rule
    conclusion: Sequent
    premises: Tuple[Sequent, ...]
    flip: bool = False
    context: Context = HOLE
    focus: Optional[StructTerm] = None

    def build(self, premise_proofs: Sequence[Proof]) -> Proof:
        return Proof(self.rule, self.conclusion, tuple(premise_proofs), self.flip, self.context, self.focus)


@dataclass
class ProofCheck:
    ok: bool
    path: str = ""
    rule: str = ""
    conclusion: str = ""
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return f"node {self.path} [{self.rule}] {self.conclusion}: {self.reason}"


# -------------------------
# Instance generation (bottom-up reading of the rules)
# -------------------------
def _right_instances(goal: Sequent, logic: LogicSpec) -> Iterator[RuleInstance]:
    x, d = goal.antecedent, goal.succedent

    def inst(rule: Rule, *prems: Sequent, flip: bool = False) -> RuleInstance:
        return RuleInstance(rule, goal, tuple(prems), flip, HOLE, x)

    frag = logic.fragment
    if isinstance(x, Leaf) and x.formula == d:
        yield inst(Rule.ID)
    if isinstance(x, Unit) and d == ONE and ONE_OP in frag:
        yield inst(Rule.ONE_R)
    if isinstance(x, Leaf) and x.formula == ZERO and isinstance(d, EmptyStoup) and ZERO_OP in frag:
        yield inst(Rule.ZERO_L)
    if logic.classical != NONE and isinstance(x, Leaf) and isinstance(d, Formula):
        yield from _classical_instances(goal, x.formula, d, logic)

    if not isinstance(d, Formula):
        return
    op = d.op
    if op == ZERO_OP:
        yield inst(Rule.ZERO_R, Sequent(x, EMPTY))
    elif op == LDIV:
        a, b = d.args
        yield inst(Rule.LDIV_R, Sequent(Node(Leaf(a), x), b))
    elif op == RDIV:
        b, a = d.args
        yield inst(Rule.RDIV_R, Sequent(Node(x, Leaf(a)), b))
    elif op == MUL:
        a, b = d.args
        if isinstance(x, Node):
            yield inst(Rule.MUL_R, Sequent(x.left, a), Sequent(x.right, b))
    elif op == AND:
        a, b = d.args
        yield inst(Rule.AND_R, Sequent(x, a), Sequent(x, b))
    elif op == OR:
        a, b = d.args
        yield inst(Rule.OR_R1, Sequent(x, a))
        yield inst(Rule.OR_R2, Sequent(x, b))
    elif op == BANG and is_k_term(x):
        yield inst(Rule.BANG_R, Sequent(x, d.args[0]))
    if "o" in logic.structural:
        yield inst(Rule.O, Sequent(x, EMPTY))


def _classical_instances(goal: Sequent, f: Formula, d: Formula, logic: LogicSpec) -> Iterator[RuleInstance]:
    def inst(rule: Rule, flip: bool = False) -> RuleInstance:
        return RuleInstance(rule, goal, (), flip, HOLE, goal.antecedent)

    if f == neg_l(neg_r(d)):
        yield inst(Rule.DNE1)
    if f == neg_r(neg_l(d)):
        yield inst(Rule.DNE2)
    # (a\0)/b => a\(0/b) and back
    if f.op == RDIV and f.args[0].op == LDIV and f.args[0].args[1] == ZERO:
        a, b = f.args[0].args[0], f.args[1]
        if d == ldiv(a, neg_r(b)):
            yield inst(Rule.COMP)
    if f.op == LDIV and f.args[1].op == RDIV and f.args[1].args[0] == ZERO:
        a, b = f.args[0], f.args[1].args[1]
        if d == rdiv(neg_l(a), b):
            yield inst(Rule.COMP, flip=True)
    if logic.classical == CYCLIC:
        if f.op == LDIV and f.args[1] == ZERO and d == neg_r(f.args[0]):
            yield inst(Rule.CYC)
        if f.op == RDIV and f.args[0] == ZERO and d == neg_l(f.args[1]):
            yield inst(Rule.CYC, flip=True)


def _innermost(u: Context) -> Optional[Union[NodeL, NodeR]]:
    """The node directly around the hole, None for the bare hole."""
    frame = None
    while not isinstance(u, Hole):
        frame = u
        u = u.ctx
    return frame


def _unit_beside(frame: Optional[Union[NodeL, NodeR]], side: str) -> bool:
    if side == "left":
        return isinstance(frame, NodeR) and isinstance(frame.left, Unit)
    return isinstance(frame, NodeL) and isinstance(frame.right, Unit)


def _has_unit_child(x: StructTerm) -> bool:
    return isinstance(x, Node) and (isinstance(x.left, Unit) or isinstance(x.right, Unit))


def _left_instances(
    goal: Sequent,
    u: Context,
    y: StructTerm,
    logic: LogicSpec,
    drop_trivial: bool = True,
    all_insertions: bool = False,
) -> Iterator[RuleInstance]:
    """Left, K and structural instances acting on y at u.

    Unit insertions (eo^ and oe^) are offered at every position when
    `all_insertions` is set; otherwise only where a rule needs the extra e:
    beside an implication leaf and around the antecedent of a product goal.
    """
    d = goal.succedent

    def at(z: StructTerm) -> Sequent:
        return Sequent(substitute(u, z), d)

    def inst(rule: Rule, *prems: Sequent, flip: bool = False) -> Optional[RuleInstance]:
        if drop_trivial and len(prems) == 1 and prems[0] == goal:
            return None
        return RuleInstance(rule, goal, tuple(prems), flip, u, y)

    out: List[Optional[RuleInstance]] = []
    if isinstance(y, Leaf):
        f = y.formula
        if f == ONE:
            out.append(inst(Rule.ONE_L, at(UNIT)))
        elif f.op == MUL:
            out.append(inst(Rule.MUL_L, at(Node(Leaf(f.args[0]), Leaf(f.args[1])))))
        elif f.op == AND:
            out.append(inst(Rule.AND_L1, at(Leaf(f.args[0]))))
            out.append(inst(Rule.AND_L2, at(Leaf(f.args[1]))))
        elif f.op == OR:
            out.append(inst(Rule.OR_L, at(Leaf(f.args[0])), at(Leaf(f.args[1]))))
        elif f.op == BANG:
            out.append(inst(Rule.BANG_L, at(Leaf(f.args[0]))))

    if isinstance(y, Node):
        p, q = y.left, y.right
        if isinstance(q, Leaf) and q.formula.op == LDIV:
            a, b = q.formula.args
            out.append(inst(Rule.LDIV_L, Sequent(p, a), at(Leaf(b))))
        if isinstance(p, Leaf) and p.formula.op == RDIV:
            b, a = p.formula.args
            out.append(inst(Rule.RDIV_L, Sequent(q, a), at(Leaf(b))))

    if logic.k_rules_enabled:
        if is_k_term(y):
            if not isinstance(y, Unit):
                out.append(inst(Rule.KW, at(UNIT)))
            out.append(inst(Rule.KC, at(Node(y, y))))
        if isinstance(y, Node):
            p, q = y.left, y.right
            # ke: u(k o z) / u(z o k), both ways
            if is_k_term(q):
                out.append(inst(Rule.KE, at(Node(q, p))))
            if is_k_term(p):
                out.append(inst(Rule.KE, at(Node(q, p)), flip=True))
            # ka1: u((k o z) o w) / u(k o (z o w)), both ways
            if is_k_term(p) and isinstance(q, Node):
                out.append(inst(Rule.KA1, at(Node(Node(p, q.left), q.right))))
            if isinstance(p, Node) and is_k_term(p.left):
                out.append(inst(Rule.KA1, at(Node(p.left, Node(p.right, q))), flip=True))
            # ka2: u((z o w) o k) / u(z o (w o k)), both ways
            if isinstance(q, Node) and is_k_term(q.right):
                out.append(inst(Rule.KA2, at(Node(Node(p, q.left), q.right))))
            if isinstance(p, Node) and is_k_term(q):
                out.append(inst(Rule.KA2, at(Node(p.left, Node(p.right, q))), flip=True))

    if isinstance(y, Node):
        if isinstance(y.left, Unit):
            out.append(inst(Rule.UNIT_L, at(y.right)))
        if isinstance(y.right, Unit):
            out.append(inst(Rule.UNIT_R, at(y.left)))
    if all_insertions:
        out.append(inst(Rule.UNIT_L, at(Node(UNIT, y)), flip=True))
        out.append(inst(Rule.UNIT_R, at(Node(y, UNIT)), flip=True))
    else:
        frame = _innermost(u)
        if isinstance(y, Leaf) and y.formula.op == LDIV and not _unit_beside(frame, "left"):
            out.append(inst(Rule.UNIT_L, at(Node(UNIT, y)), flip=True))
        if isinstance(y, Leaf) and y.formula.op == RDIV and not _unit_beside(frame, "right"):
            out.append(inst(Rule.UNIT_R, at(Node(y, UNIT)), flip=True))
        if isinstance(u, Hole) and isinstance(d, Formula) and d.op == MUL and not _has_unit_child(y):
            out.append(inst(Rule.UNIT_L, at(Node(UNIT, y)), flip=True))
            out.append(inst(Rule.UNIT_R, at(Node(y, UNIT)), flip=True))

    structural = logic.structural
    if isinstance(y, Node):
        p, q = y.left, y.right
        if "e" in structural:
            out.append(inst(Rule.E, at(Node(q, p))))
        if "a" in structural:
            if isinstance(q, Node):
                out.append(inst(Rule.A, at(Node(Node(p, q.left), q.right))))
            if isinstance(p, Node):
                out.append(inst(Rule.A, at(Node(p.left, Node(p.right, q))), flip=True))
    if "c" in structural:
        out.append(inst(Rule.C, at(Node(y, y))))
    if "i" in structural and not isinstance(y, Unit):
        out.append(inst(Rule.I, at(UNIT)))

    for i in out:
        if i is not None:
            yield i


def backward_instances(goal: Sequent, logic: LogicSpec) -> List[RuleInstance]:
    """All cut-free rule instances concluding `goal`, initial sequents first."""
    found: List[RuleInstance] = list(_right_instances(goal, logic))
    for u, y in decompositions(goal.antecedent):
        found.extend(_left_instances(goal, u, y, logic))
    found.sort(key=lambda i: len(i.premises) > 0)
    return found


# -------------------------
# Unit laws as proof steps
# -------------------------
def strip_units(x: StructTerm) -> StructTerm:
    """x with every (e o y) and (y o e) collapsed to y; e stays only when nothing else is left."""
    if not isinstance(x, Node):
        return x
    left, right = strip_units(x.left), strip_units(x.right)
    if isinstance(left, Unit):
        return right
    if isinstance(right, Unit):
        return left
    return Node(left, right)


def _unit_step(x: StructTerm) -> Optional[Tuple[Context, Node, Rule, StructTerm]]:
    """The outermost (e o z) or (z o e) in x as (context, that node, rule, z)."""
    for u, y in decompositions(x):
        if isinstance(y, Node):
            if isinstance(y.left, Unit):
                return u, y, Rule.UNIT_L, y.right
            if isinstance(y.right, Unit):
                return u, y, Rule.UNIT_R, y.left
    return None


def drop_units(proof: Proof) -> Proof:
    """Extend `proof` downwards with eo^/oe^ steps until its antecedent is unit-free."""
    while True:
        s = proof.conclusion
        step = _unit_step(s.antecedent)
        if step is None:
            return proof
        u, _, rule, z = step
        proof = Proof(rule, Sequent(substitute(u, z), s.succedent), (proof,), True, u, z)


def restore_units(proof: Proof, target: Sequent) -> Proof:
    """A proof of `target` from a proof of its unit-free form, by eo/oe steps."""
    steps = []
    x = target.antecedent
    while True:
        step = _unit_step(x)
        if step is None:
            break
        u, y, rule, z = step
        steps.append((x, u, y, rule))
        x = substitute(u, z)
    if proof.conclusion != Sequent(x, target.succedent):
        raise ValueError(f"{proof.conclusion} is not the unit-free form of {target}")
    for term, u, y, rule in reversed(steps):
        proof = Proof(rule, Sequent(term, target.succedent), (proof,), False, u, y)
    return proof


# -------------------------
# Proof checking
# -------------------------
def check_step(node: Proof, logic: LogicSpec, assumptions: Iterable[Sequent] = ()) -> Optional[str]:
    """Validate one node against its premises' conclusions; None when correct."""
    c = node.conclusion
    rule = node.rule
    try:
        check_fragment(c, logic.fragment)
    except FragmentError as e:
        return str(e)
    if not rule_enabled(rule, logic):
        return f"rule {rule.value} is not part of {logic}"
    if len(node.premises) != rule.premise_count:
        return f"rule {rule.value} takes {rule.premise_count} premise(s), got {len(node.premises)}"
    if node.flip and not rule.bidirectional:
        return f"rule {rule.value} has no reverse orientation"

    if rule == Rule.ASSUMPTION:
        return None if c in set(assumptions) else "conclusion is not among the assumptions"

    premises = tuple(p.conclusion for p in node.premises)
    if rule == Rule.CUT:
        x = node.focus
        if x is None or substitute(node.context, x) != c.antecedent:
            return "context and focus do not rebuild the conclusion"
        left, right = premises
        if left.antecedent != x or not isinstance(left.succedent, Formula):
            return "left cut premise must be focus => formula"
        if right != Sequent(substitute(node.context, Leaf(left.succedent)), c.succedent):
            return "right cut premise must place the cut formula in the context"
        return None

    if rule == Rule.BANG_R and not is_k_term(c.antecedent):
        return "k must range over K (antecedent has a leaf that is not !-rooted)"

    if rule in _RIGHT_RULES:
        candidates = _right_instances(c, logic)
    else:
        if node.focus is None or substitute(node.context, node.focus) != c.antecedent:
            return "context and focus do not rebuild the conclusion"
        if rule in _K_RULES and rule in (Rule.KW, Rule.KC) and not is_k_term(node.focus):
            return "k must range over K"
        candidates = _left_instances(c, node.context, node.focus, logic, drop_trivial=False, all_insertions=True)

    for inst in candidates:
        if inst.rule == rule and inst.flip == node.flip and inst.premises == premises:
            return None
    return f"not an instance of {rule_label(rule, node.flip)}"


def check_proof(p: Proof, logic: LogicSpec, assumptions: Iterable[Sequent] = ()) -> ProofCheck:
    hyps = frozenset(assumptions)
    stack: List[Tuple[Proof, str]] = [(p, "0")]
    while stack:
        node, path = stack.pop()
        reason = check_step(node, logic, hyps)
        if reason is not None:
            return ProofCheck(False, path, rule_label(node.rule, node.flip), str(node.conclusion), reason)
        for i, child in enumerate(node.premises):
            stack.append((child, f"{path}.{i}"))
    return ProofCheck(True)


# -------------------------
# Proof text format
# -------------------------
def proof_to_text(p: Proof) -> str:
    """One node per line, children before parents: index, rule, conclusion, children, context, focus."""
    lines: List[str] = []

    def emit(node: Proof) -> int:
        kids = [emit(child) for child in node.premises]
        idx = len(lines)
        focus = "-" if node.focus is None else str(node.focus)
        lines.append(
            "\t".join(
                [
                    str(idx),
                    rule_label(node.rule, node.flip),
                    str(node.conclusion),
                    ",".join(map(str, kids)) or "-",
                    str(node.context),
                    focus,
                ]
            )
        )
        return idx

    emit(p)
    return "\n".join(lines) + "\n"


def proof_from_text(text: str) -> Proof:
    built: List[Proof] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 6:
            raise ParseError(f"proof line {lineno}: expected 6 tab-separated fields", 0, line)
        idx, label, concl, kids, ctx, focus = parts
        if int(idx) != len(built):
            raise ParseError(f"proof line {lineno}: index {idx} out of order", 0, line)
        flip = label.endswith("^")
        rule = Rule(label[:-1] if flip else label)
        children = () if kids == "-" else tuple(built[int(k)] for k in kids.split(","))
        context = parse_context(ctx) if ctx != "_" else HOLE
        built.append(
            Proof(
                rule,
                parse_sequent(concl),
                children,
                flip,
                context,
                None if focus == "-" else parse_struct(focus),
            )
        )
    if not built:
        raise ParseError("empty proof text", 0, text)
    return built[-1]


# -------------------------
# Forward saturation
# -------------------------
def forward_universe(logic: LogicSpec, seqs: Iterable[Sequent], rounds: int = 0) -> FrozenSet[Formula]:
    """Subformulas of `seqs` plus the constants of the fragment; classical specs
    add `rounds` layers of ~ and - on top."""
    universe: Set[Formula] = set(sequent_subformulas(seqs))
    if ONE_OP in logic.fragment:
        universe.add(ONE)
    if ZERO_OP in logic.fragment:
        universe.add(ZERO)
    if logic.classical != NONE:
        for _ in range(rounds):
            universe |= {neg_l(a) for a in universe} | {neg_r(a) for a in universe}
    return frozenset(universe)


class ForwardEngine:
    """Bounded forward closure under every rule (cut and assumptions included),
    retaining one derivation per sequent."""

    def __init__(
        self,
        logic: LogicSpec,
        assumptions: Iterable[Sequent],
        universe: Iterable[Formula],
        size_bound: int,
        target: Optional[Sequent] = None,
    ) -> None:
        self.logic = logic
        self.assumptions = tuple(assumptions)
        self.target = target
        self.derived: Dict[Sequent, Proof] = {}
        self.steps = 0
        self.size_bound = size_bound
        self.universe: FrozenSet[Formula] = frozenset()
        self._terms_cache: Dict[Tuple[str, int], List[StructTerm]] = {}
        self.widen(size_bound, universe)

    # -------------------------
    # set-up
    # -------------------------
    def widen(self, size_bound: int, universe: Iterable[Formula]) -> None:
        self.size_bound = size_bound
        keep = []
        for a in universe:
            try:
                check_fragment(a, self.logic.fragment)
            except FragmentError:
                continue
            if formula_size(a) <= size_bound:
                keep.append(a)
        self.universe = frozenset(keep)
        self._terms_cache.clear()

    def _add(self, proof: Proof, new: List[Sequent]) -> None:
        """Record `proof` and, when its antecedent carries units, its unit-free form too."""
        for p in (proof, drop_units(proof)):
            c = p.conclusion
            if c in self.derived or sequent_size(c) > self.size_bound:
                continue
            self.derived[c] = p
            new.append(c)

    def proof_of(self, s: Sequent) -> Optional[Proof]:
        """A derivation of s, rebuilding its units from the unit-free form when needed."""
        if s in self.derived:
            return self.derived[s]
        bare = Sequent(strip_units(s.antecedent), s.succedent)
        if bare in self.derived:
            return restore_units(self.derived[bare], s)
        return None

    def seed(self) -> List[Sequent]:
        new: List[Sequent] = []
        U = sorted(self.universe, key=str)
        frag = self.logic.fragment
        for s in self.assumptions:
            if s not in self.derived:
                self.derived[s] = Proof(Rule.ASSUMPTION, s)
                new.append(s)
        for a in U:
            self._add(Proof(Rule.ID, Sequent(Leaf(a), a), focus=Leaf(a)), new)
        if ONE_OP in frag:
            self._add(Proof(Rule.ONE_R, Sequent(UNIT, ONE), focus=UNIT), new)
        if ZERO_OP in frag:
            self._add(Proof(Rule.ZERO_L, Sequent(Leaf(ZERO), EMPTY), focus=Leaf(ZERO)), new)
        if self.logic.classical != NONE:
            for a in U:
                for f, rule in ((neg_l(neg_r(a)), Rule.DNE1), (neg_r(neg_l(a)), Rule.DNE2)):
                    if f in self.universe:
                        self._add(Proof(rule, Sequent(Leaf(f), a), focus=Leaf(f)), new)
                if self.logic.classical == CYCLIC and neg_l(a) in self.universe and neg_r(a) in self.universe:
                    self._add(Proof(Rule.CYC, Sequent(Leaf(neg_l(a)), neg_r(a)), focus=Leaf(neg_l(a))), new)
                    self._add(
                        Proof(Rule.CYC, Sequent(Leaf(neg_r(a)), neg_l(a)), flip=True, focus=Leaf(neg_r(a))), new
                    )
                for b in U:
                    lhs, rhs = rdiv(neg_l(a), b), ldiv(a, neg_r(b))
                    if lhs in self.universe and rhs in self.universe:
                        self._add(Proof(Rule.COMP, Sequent(Leaf(lhs), rhs), focus=Leaf(lhs)), new)
                        self._add(Proof(Rule.COMP, Sequent(Leaf(rhs), lhs), flip=True, focus=Leaf(rhs)), new)
        return new

    def _terms(self, kind: str, budget: int) -> List[StructTerm]:
        """Unit-free struct terms of size <= budget; kind 'k' restricts leaves to !-formulas."""
        key = (kind, budget)
        if key in self._terms_cache:
            return self._terms_cache[key]
        atoms: List[StructTerm] = [Leaf(a) for a in sorted(self.universe, key=str) if kind != "k" or a.op == BANG]
        by_size: Dict[int, List[StructTerm]] = {}
        for t in atoms:
            by_size.setdefault(struct_size(t), []).append(t)
        for size in range(3, budget + 1):
            for ls in range(1, size - 1):
                rs = size - 1 - ls
                for left in by_size.get(ls, []):
                    for right in by_size.get(rs, []):
                        by_size.setdefault(size, []).append(Node(left, right))
        terms = [t for s in sorted(by_size) if s <= budget for t in by_size[s]]
        self._terms_cache[key] = terms
        return terms

    # -------------------------
    # one round
    # -------------------------
    def step(self) -> List[Sequent]:
        gen = self.iter_step()
        try:
            while True:
                next(gen)
        except StopIteration as stop:
            return stop.value

    def iter_step(self, tick: int = 64) -> Generator[None, None, List[Sequent]]:
        """Apply every rule once to the current set; yields every `tick` candidates."""
        new: List[Sequent] = []
        snapshot = list(self.derived.items())
        by_succ: Dict[Formula, List[Tuple[Sequent, Proof]]] = {}
        for s, p in snapshot:
            if isinstance(s.succedent, Formula):
                by_succ.setdefault(s.succedent, []).append((s, p))
        U = sorted(self.universe, key=str)
        logic = self.logic
        structural = logic.structural
        count = 0

        def emit(proof: Proof) -> None:
            self._add(proof, new)

        for s, P in snapshot:
            count += 1
            if count % tick == 0:
                self.steps += tick
                yield
            if self.target is not None and self.proof_of(self.target) is not None:
                return new
            x, d = s.antecedent, s.succedent
            # right rules
            if isinstance(d, EmptyStoup):
                if ZERO in self.universe:
                    emit(Proof(Rule.ZERO_R, Sequent(x, ZERO), (P,), focus=x))
                if "o" in structural:
                    for a in U:
                        emit(Proof(Rule.O, Sequent(x, a), (P,), focus=x))
            else:
                for g in U:
                    if g.op == OR:
                        if g.args[0] == d:
                            emit(Proof(Rule.OR_R1, Sequent(x, g), (P,), focus=x))
                        if g.args[1] == d:
                            emit(Proof(Rule.OR_R2, Sequent(x, g), (P,), focus=x))
                if logic.k_rules_enabled and is_k_term(x) and bang(d) in self.universe:
                    emit(Proof(Rule.BANG_R, Sequent(x, bang(d)), (P,), focus=x))
                self._division_right(s, P, emit)
                if d in self.universe:
                    self._two_premise_right(s, P, by_succ, U, emit)

            # left and structural rules at every position
            budget = self.size_bound - sequent_size(s) + 1
            for u, y in decompositions(x):
                self._left_forward(s, P, u, y, budget, emit)
                if isinstance(y, Leaf):
                    self._cut_like(s, P, u, y.formula, by_succ, U, emit)
            self._unit_forward(s, P, budget, emit)
        self.steps += count % tick
        log.debug("forward round at bound %d: %d new (total %d)", self.size_bound, len(new), len(self.derived))
        return new

    def _two_premise_right(self, s, P, by_succ, U, emit) -> None:
        x, d = s.antecedent, s.succedent
        for g in U:
            if g.op == MUL and g.args[0] == d:
                for s2, P2 in by_succ.get(g.args[1], []):
                    emit(Proof(Rule.MUL_R, Sequent(Node(x, s2.antecedent), g), (P, P2), focus=Node(x, s2.antecedent)))
            elif g.op == AND and g.args[0] == d:
                other = Sequent(x, g.args[1])
                if other in self.derived:
                    emit(Proof(Rule.AND_R, Sequent(x, g), (P, self.derived[other]), focus=x))

    def _left_forward(self, s, P, u, y, budget, emit) -> None:
        d = s.succedent
        logic = self.logic
        structural = logic.structural

        def at(z: StructTerm) -> Sequent:
            return Sequent(substitute(u, z), d)

        def rule(r: Rule, z: StructTerm, flip: bool = False) -> None:
            emit(Proof(r, at(z), (P,), flip, u, z))

        if isinstance(y, Unit):
            return
        if isinstance(y, Leaf):
            f = y.formula
            if logic.k_rules_enabled and bang(f) in self.universe:
                rule(Rule.BANG_L, Leaf(bang(f)))
            for g in self.universe:
                if g.op == AND:
                    if g.args[0] == f:
                        rule(Rule.AND_L1, Leaf(g))
                    if g.args[1] == f:
                        rule(Rule.AND_L2, Leaf(g))
        else:
            p, q = y.left, y.right
            if isinstance(p, Leaf) and isinstance(q, Leaf) and mul(p.formula, q.formula) in self.universe:
                rule(Rule.MUL_L, Leaf(mul(p.formula, q.formula)))
            if p == q:
                if logic.k_rules_enabled and is_k_term(p):
                    rule(Rule.KC, p)
                if "c" in structural:
                    rule(Rule.C, p)
            if logic.k_rules_enabled:
                if is_k_term(p):
                    rule(Rule.KE, Node(q, p))
                if is_k_term(q):
                    rule(Rule.KE, Node(q, p), flip=True)
                if isinstance(p, Node) and is_k_term(p.left):
                    rule(Rule.KA1, Node(p.left, Node(p.right, q)))
                if is_k_term(p) and isinstance(q, Node):
                    rule(Rule.KA1, Node(Node(p, q.left), q.right), flip=True)
                if isinstance(p, Node) and is_k_term(q):
                    rule(Rule.KA2, Node(p.left, Node(p.right, q)))
                if isinstance(q, Node) and is_k_term(q.right):
                    rule(Rule.KA2, Node(Node(p, q.left), q.right), flip=True)
            if "e" in structural:
                rule(Rule.E, Node(q, p))
            if "a" in structural:
                if isinstance(p, Node):
                    rule(Rule.A, Node(p.left, Node(p.right, q)))
                if isinstance(q, Node):
                    rule(Rule.A, Node(Node(p, q.left), q.right), flip=True)

    def _division_right(self, s, P, emit) -> None:
        """=>\\ and =>/ ; a leaf antecedent first gets an e on the free side."""
        x, d = s.antecedent, s.succedent
        if isinstance(x, Node):
            if isinstance(x.left, Leaf) and ldiv(x.left.formula, d) in self.universe:
                emit(Proof(Rule.LDIV_R, Sequent(x.right, ldiv(x.left.formula, d)), (P,), focus=x.right))
            if isinstance(x.right, Leaf) and rdiv(d, x.right.formula) in self.universe:
                emit(Proof(Rule.RDIV_R, Sequent(x.left, rdiv(d, x.right.formula)), (P,), focus=x.left))
        elif isinstance(x, Leaf):
            if ldiv(x.formula, d) in self.universe:
                padded = Node(x, UNIT)
                P1 = Proof(Rule.UNIT_R, Sequent(padded, d), (P,), False, HOLE, padded)
                emit(Proof(Rule.LDIV_R, Sequent(UNIT, ldiv(x.formula, d)), (P1,), focus=UNIT))
            if rdiv(d, x.formula) in self.universe:
                padded = Node(UNIT, x)
                P1 = Proof(Rule.UNIT_L, Sequent(padded, d), (P,), False, HOLE, padded)
                emit(Proof(Rule.RDIV_R, Sequent(UNIT, rdiv(d, x.formula)), (P1,), focus=UNIT))

    def _unit_forward(self, s, P, budget, emit) -> None:
        """1=>, kw and i at every e of the antecedent, and at an e first inserted next to each subterm."""
        d = s.succedent
        for u, y in decompositions(s.antecedent):
            if isinstance(y, Unit):
                self._replace_unit(d, P, u, budget, emit)
            sides = ((Node(UNIT, y), Rule.UNIT_L, NodeL(HOLE, y)), (Node(y, UNIT), Rule.UNIT_R, NodeR(y, HOLE)))
            for padded, rule, hole in sides:
                P1 = Proof(rule, Sequent(substitute(u, padded), d), (P,), False, u, padded)
                self._replace_unit(d, P1, plug(u, hole), budget - 2, emit)

    def _replace_unit(self, d, P, u, budget, emit) -> None:
        """The rules whose premise has e where the conclusion has something at u."""

        def rule(r: Rule, z: StructTerm) -> None:
            emit(Proof(r, Sequent(substitute(u, z), d), (P,), False, u, z))

        if ONE in self.universe:
            rule(Rule.ONE_L, Leaf(ONE))
        if self.logic.k_rules_enabled:
            for k in self._terms("k", budget):
                rule(Rule.KW, k)
        if "i" in self.logic.structural:
            for z in self._terms("any", budget):
                rule(Rule.I, z)

    def _cut_like(self, s, P, u, b, by_succ, U, emit) -> None:
        """Rules whose second premise has `b` at position u: cut, \\=>, /=>, \\/=>."""
        d = s.succedent
        for s1, P1 in by_succ.get(b, []):
            concl = Sequent(substitute(u, s1.antecedent), d)
            emit(Proof(Rule.CUT, concl, (P1, P), False, u, s1.antecedent))
        for g in U:
            if g.op == LDIV and g.args[1] == b:
                for s1, P1 in by_succ.get(g.args[0], []):
                    focus = Node(s1.antecedent, Leaf(g))
                    emit(Proof(Rule.LDIV_L, Sequent(substitute(u, focus), d), (P1, P), False, u, focus))
            elif g.op == RDIV and g.args[0] == b:
                for s1, P1 in by_succ.get(g.args[1], []):
                    focus = Node(Leaf(g), s1.antecedent)
                    emit(Proof(Rule.RDIV_L, Sequent(substitute(u, focus), d), (P1, P), False, u, focus))
            elif g.op == OR and g.args[0] == b:
                other = Sequent(substitute(u, Leaf(g.args[1])), d)
                if other in self.derived:
                    emit(Proof(Rule.OR_L, Sequent(substitute(u, Leaf(g)), d), (P, self.derived[other]), False, u, Leaf(g)))


def forward_step(
    known: Union[Mapping[Sequent, Proof], Iterable[Sequent]],
    logic: LogicSpec,
    assumptions: Iterable[Sequent],
    size_bound: int,
    universe: Optional[Iterable[Formula]] = None,
) -> Dict[Sequent, Proof]:
    """known ∪ initial sequents ∪ everything one rule application away, all within size_bound.

    Bare sequents in `known` are carried as Assumption leaves, so their
    consequences check against assumptions ∪ known.
    """
    hyps = list(assumptions)
    if isinstance(known, Mapping):
        given = dict(known)
    else:
        given = {s: Proof(Rule.ASSUMPTION, s) for s in known}
    if universe is None:
        universe = forward_universe(logic, list(given) + hyps)
    engine = ForwardEngine(logic, hyps, universe, size_bound)
    engine.seed()
    for s, p in given.items():
        engine.derived.setdefault(s, p)
    engine.step()
    return dict(engine.derived)
