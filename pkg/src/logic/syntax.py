# src/logic/syntax.py
r"""
Formulas, structured antecedents, contexts and sequents, with the ASCII
parser/printer and the syntactic maps rho, theta and K-membership.

Concrete grammar (fully parenthesized, no precedence):
  formula := var | 1 | 0 | !formula | (formula op formula)
  op      := /\  |  \/  |  .  |  \  |  /
  struct  := e | formula | (struct o struct)
  context := struct with exactly one `_`
  sequent := struct => [formula]          (nothing after => is the empty stoup)

Variables match [a-z][a-z0-9_]*; `o` and `e` are reserved words.

Antecedents are terms over `e`, formulas and `o`. Terms are never normalized:
(e o x) and x are different terms, and only the unit rules of the calculus
relate them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple, Union

from src.logic.errors import FragmentError, ParseError

# -------------------------
# Connectives / fragments
# -------------------------
AND, OR, MUL, LDIV, RDIV, BANG = "and", "or", "mul", "ldiv", "rdiv", "bang"
ONE_OP, ZERO_OP, VAR_OP = "one", "zero", "var"

BINARY = (AND, OR, MUL, LDIV, RDIV)
CONNECTIVES = (AND, OR, MUL, LDIV, RDIV, BANG, ONE_OP, ZERO_OP)

SYMBOLS = {AND: "/\\", OR: "\\/", MUL: ".", LDIV: "\\", RDIV: "/"}
_OP_OF_SYMBOL = {sym: op for op, sym in SYMBOLS.items()}
_PRINT_NAME = {AND: "/\\", OR: "\\/", MUL: ".", LDIV: "\\", RDIV: "/", BANG: "!", ONE_OP: "1", ZERO_OP: "0"}

Fragment = FrozenSet[str]

FULL: Fragment = frozenset(CONNECTIVES)
NO_ZERO: Fragment = FULL - {ZERO_OP}
NO_BANG: Fragment = FULL - {BANG}
BASIC: Fragment = FULL - {BANG, ZERO_OP}

FRAGMENTS = {"L0!": FULL, "L!": NO_ZERO, "L0": NO_BANG, "L": BASIC}

_IDENT = re.compile(r"[a-z][a-z0-9_]*")
_RESERVED = {"o", "e"}


# -------------------------
# Formulas
# -------------------------
@dataclass(frozen=True)
class Formula:
    op: str
    args: Tuple["Formula", ...] = ()
    name: str = ""
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self) -> None:
        if self.op in BINARY:
            arity = 2
        elif self.op == BANG:
            arity = 1
        elif self.op in (ONE_OP, ZERO_OP, VAR_OP):
            arity = 0
        else:
            raise ValueError(f"unknown connective: {self.op!r}")
        if len(self.args) != arity:
            raise ValueError(f"{self.op} takes {arity} argument(s), got {len(self.args)}")
        if self.op == VAR_OP and not (_IDENT.fullmatch(self.name) and self.name not in _RESERVED):
            raise ValueError(f"bad variable name: {self.name!r}")
        object.__setattr__(self, "_hash", hash((self.op, self.args, self.name)))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if self.op == VAR_OP:
            return self.name
        if self.op == ONE_OP:
            return "1"
        if self.op == ZERO_OP:
            return "0"
        if self.op == BANG:
            return f"!{self.args[0]}"
        left, right = self.args
        return f"({left}{SYMBOLS[self.op]}{right})"

    def __repr__(self) -> str:
        return f"Formula({self})"


ONE = Formula(ONE_OP)
ZERO = Formula(ZERO_OP)


def var(name: str) -> Formula:
    return Formula(VAR_OP, (), name)


def bang(a: Formula) -> Formula:
    return Formula(BANG, (a,))


def meet(a: Formula, b: Formula) -> Formula:
    return Formula(AND, (a, b))


def join(a: Formula, b: Formula) -> Formula:
    return Formula(OR, (a, b))


def mul(a: Formula, b: Formula) -> Formula:
    return Formula(MUL, (a, b))


def ldiv(a: Formula, b: Formula) -> Formula:
    """a\\b"""
    return Formula(LDIV, (a, b))


def rdiv(b: Formula, a: Formula) -> Formula:
    """b/a"""
    return Formula(RDIV, (b, a))


def neg_l(a: Formula) -> Formula:
    """~a = a\\0"""
    return ldiv(a, ZERO)


def neg_r(a: Formula) -> Formula:
    """-a = 0/a"""
    return rdiv(ZERO, a)


# -------------------------
# Structured antecedents
# -------------------------
@dataclass(frozen=True)
class Unit:
    def __str__(self) -> str:
        return "e"

    def __repr__(self) -> str:
        return "Unit"


UNIT = Unit()


@dataclass(frozen=True)
class Leaf:
    formula: Formula
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("leaf", self.formula)))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return str(self.formula)

    def __repr__(self) -> str:
        return f"Leaf({self.formula})"


@dataclass(frozen=True)
class Node:
    left: "StructTerm"
    right: "StructTerm"
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("node", self.left, self.right)))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return f"({self.left} o {self.right})"

    def __repr__(self) -> str:
        return f"Node{self}"


StructTerm = Union[Unit, Leaf, Node]


# -------------------------
# Contexts (unary linear polynomials)
# -------------------------
@dataclass(frozen=True)
class Hole:
    def __str__(self) -> str:
        return "_"

    def __repr__(self) -> str:
        return "Hole"


HOLE = Hole()


@dataclass(frozen=True)
class NodeL:
    """(ctx o right)"""

    ctx: "Context"
    right: StructTerm

    def __str__(self) -> str:
        return f"({self.ctx} o {self.right})"


@dataclass(frozen=True)
class NodeR:
    """(left o ctx)"""

    left: StructTerm
    ctx: "Context"

    def __str__(self) -> str:
        return f"({self.left} o {self.ctx})"


Context = Union[Hole, NodeL, NodeR]


# -------------------------
# Sequents
# -------------------------
@dataclass(frozen=True)
class EmptyStoup:
    def __str__(self) -> str:
        return ""

    def __repr__(self) -> str:
        return "EmptyStoup"


EMPTY = EmptyStoup()

Succedent = Union[Formula, EmptyStoup]


@dataclass(frozen=True)
class Sequent:
    antecedent: StructTerm
    succedent: Succedent
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("seq", self.antecedent, self.succedent)))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if isinstance(self.succedent, EmptyStoup):
            return f"{self.antecedent} =>"
        return f"{self.antecedent} => {self.succedent}"

    def __repr__(self) -> str:
        return f"Sequent({self})"


# -------------------------
# Parser
# -------------------------
_TOKEN_RE = re.compile(r"=>|/\\|\\/|\\|/|\.|[()!_]|[a-z][a-z0-9_]*|[01]|\S")


class _Parser:
    def __init__(self, text: str, allow_hole: bool = False) -> None:
        self.text = text
        self.allow_hole = allow_hole
        self.tokens = [(m.group(), m.start()) for m in _TOKEN_RE.finditer(text)]
        self.pos = 0

    # token helpers
    def peek(self) -> Optional[str]:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def advance(self) -> str:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, want: str) -> None:
        tok = self.peek()
        if tok != want:
            raise self.error(f"expected {want!r}, found {tok!r}" if tok else f"expected {want!r}")
        self.pos += 1

    def error(self, message: str) -> ParseError:
        char_pos = self.tokens[self.pos][1] if self.pos < len(self.tokens) else len(self.text)
        return ParseError(message, len(self.text[:char_pos].encode("utf-8")), self.text)

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    # grammar
    def formula(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        if tok == "!":
            self.pos += 1
            return bang(self.formula())
        if tok == "(":
            self.pos += 1
            left = self.formula()
            op = self._binary_op()
            right = self.formula()
            self.expect(")")
            return Formula(op, (left, right))
        if tok == "1":
            self.pos += 1
            return ONE
        if tok == "0":
            self.pos += 1
            return ZERO
        if _IDENT.fullmatch(tok):
            if tok in _RESERVED:
                raise self.error(f"{tok!r} is reserved and cannot be a formula")
            self.pos += 1
            return var(tok)
        raise self.error(f"unexpected token {tok!r}")

    def _binary_op(self) -> str:
        tok = self.peek()
        if tok not in _OP_OF_SYMBOL:
            raise self.error(f"expected a binary connective, found {tok!r}" if tok else "expected a binary connective")
        self.pos += 1
        return _OP_OF_SYMBOL[tok]

    def struct(self) -> Union[StructTerm, Context]:
        tok = self.peek()
        if tok == "e":
            self.pos += 1
            return UNIT
        if tok == "_":
            if not self.allow_hole:
                raise self.error("hole '_' only allowed in contexts")
            self.pos += 1
            return HOLE
        if tok == "(":
            self.pos += 1
            left = self.struct()
            nxt = self.peek()
            if nxt == "o":
                self.pos += 1
                right = self.struct()
                self.expect(")")
                return self._node(left, right)
            if nxt in _OP_OF_SYMBOL:
                if not isinstance(left, Leaf):
                    raise self.error("structural term used as a formula operand")
                op = self._binary_op()
                right_f = self.formula()
                self.expect(")")
                return Leaf(Formula(op, (left.formula, right_f)))
            raise self.error(f"expected 'o' or a connective, found {nxt!r}" if nxt else "expected 'o' or a connective")
        return Leaf(self.formula())

    def _node(self, left, right):
        left_ctx, right_ctx = _is_context(left), _is_context(right)
        if left_ctx and right_ctx:
            raise self.error("more than one hole")
        if left_ctx:
            return NodeL(left, right)
        if right_ctx:
            return NodeR(left, right)
        return Node(left, right)

    def finish(self) -> None:
        if not self.at_end():
            raise self.error(f"trailing input {self.peek()!r}")


def _is_context(x: object) -> bool:
    return isinstance(x, (Hole, NodeL, NodeR))


def parse_formula(text: str, fragment: Optional[Fragment] = None) -> Formula:
    p = _Parser(text)
    a = p.formula()
    p.finish()
    if fragment is not None:
        check_fragment(a, fragment)
    return a


def parse_struct(text: str) -> StructTerm:
    p = _Parser(text)
    x = p.struct()
    p.finish()
    return x


def parse_context(text: str) -> Context:
    p = _Parser(text, allow_hole=True)
    u = p.struct()
    p.finish()
    if not _is_context(u):
        raise ParseError("context needs exactly one hole '_'", 0, text)
    return u


def parse_sequent(text: str, fragment: Optional[Fragment] = None) -> Sequent:
    p = _Parser(text)
    ant = p.struct()
    p.expect("=>")
    succ: Succedent = EMPTY if p.at_end() else p.formula()
    p.finish()
    s = Sequent(ant, succ)
    if fragment is not None:
        check_fragment(s, fragment)
    return s


# -------------------------
# Batch files
# -------------------------
@dataclass
class Batch:
    assumptions: List[Sequent] = field(default_factory=list)
    goals: List[Sequent] = field(default_factory=list)


def parse_batch(text: str, fragment: Optional[Fragment] = None) -> Batch:
    """One sequent per line; `#` starts a comment line; `assume:` lines form the hypothesis set."""
    batch = Batch()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("assume:"):
                batch.assumptions.append(parse_sequent(line[len("assume:"):], fragment))
            else:
                batch.goals.append(parse_sequent(line, fragment))
        except ParseError as e:
            raise ParseError(f"line {lineno}: {e}", e.offset, line) from e
    return batch


# -------------------------
# Fragments
# -------------------------
def connectives(x: Union[Formula, StructTerm, Sequent]) -> Set[str]:
    out: Set[str] = set()
    for a in _formulas_in(x):
        for b in subformulas(a):
            if b.op != VAR_OP:
                out.add(b.op)
    if isinstance(x, Sequent) and isinstance(x.succedent, EmptyStoup):
        out.add(ZERO_OP)
    return out


def check_fragment(x: Union[Formula, StructTerm, Sequent], fragment: Fragment) -> None:
    extra = connectives(x) - set(fragment)
    if extra:
        names = ", ".join(_PRINT_NAME[c] for c in sorted(extra))
        raise FragmentError(f"{x} uses connective(s) outside the fragment: {names}")


def _formulas_in(x: Union[Formula, StructTerm, Sequent]) -> List[Formula]:
    if isinstance(x, Formula):
        return [x]
    if isinstance(x, Sequent):
        fs = leaves(x.antecedent)
        if isinstance(x.succedent, Formula):
            fs.append(x.succedent)
        return fs
    return leaves(x)


# -------------------------
# Syntactic maps
# -------------------------
def rho(x: StructTerm, fragment: Optional[Fragment] = None) -> Formula:
    if isinstance(x, Unit):
        if fragment is not None and ONE_OP not in fragment:
            raise FragmentError("rho(e) = 1 but 1 is outside the fragment")
        return ONE
    if isinstance(x, Leaf):
        return x.formula
    if fragment is not None and MUL not in fragment:
        raise FragmentError("rho needs '.' but it is outside the fragment")
    return mul(rho(x.left, fragment), rho(x.right, fragment))


def theta(d: Succedent, fragment: Optional[Fragment] = None) -> Formula:
    if isinstance(d, EmptyStoup):
        if fragment is not None and ZERO_OP not in fragment:
            raise FragmentError("theta(empty stoup) = 0 but 0 is outside the fragment")
        return ZERO
    return d


def substitute(u: Context, x: StructTerm) -> StructTerm:
    if isinstance(u, Hole):
        return x
    if isinstance(u, NodeL):
        return Node(substitute(u.ctx, x), u.right)
    return Node(u.left, substitute(u.ctx, x))


def plug(u: Context, v: Context) -> Context:
    """The context u(v)."""
    if isinstance(u, Hole):
        return v
    if isinstance(u, NodeL):
        return NodeL(plug(u.ctx, v), u.right)
    return NodeR(u.left, plug(u.ctx, v))


def is_k_term(x: StructTerm) -> bool:
    if isinstance(x, Unit):
        return True
    if isinstance(x, Leaf):
        return x.formula.op == BANG
    return is_k_term(x.left) and is_k_term(x.right)


def subformulas(a: Formula) -> FrozenSet[Formula]:
    out: Set[Formula] = set()
    stack = [a]
    while stack:
        b = stack.pop()
        if b in out:
            continue
        out.add(b)
        stack.extend(b.args)
    return frozenset(out)


def sequent_subformulas(seqs: Iterable[Sequent]) -> FrozenSet[Formula]:
    out: Set[Formula] = set()
    for s in seqs:
        for a in _formulas_in(s):
            out |= subformulas(a)
    return frozenset(out)


# -------------------------
# Tree utilities
# -------------------------
def leaves(x: StructTerm) -> List[Formula]:
    if isinstance(x, Unit):
        return []
    if isinstance(x, Leaf):
        return [x.formula]
    return leaves(x.left) + leaves(x.right)


def context_leaves(u: Context) -> List[Formula]:
    if isinstance(u, Hole):
        return []
    if isinstance(u, NodeL):
        return context_leaves(u.ctx) + leaves(u.right)
    return leaves(u.left) + context_leaves(u.ctx)


def decompositions(x: StructTerm) -> Iterator[Tuple[Context, StructTerm]]:
    """Every (u, y) with u(y) = x, outermost first."""
    yield HOLE, x
    if isinstance(x, Node):
        for u, y in decompositions(x.left):
            yield NodeL(u, x.right), y
        for u, y in decompositions(x.right):
            yield NodeR(x.left, u), y


def formula_size(a: Formula) -> int:
    return 1 + sum(formula_size(b) for b in a.args)


def struct_size(x: StructTerm) -> int:
    if isinstance(x, Unit):
        return 1
    if isinstance(x, Leaf):
        return formula_size(x.formula)
    return 1 + struct_size(x.left) + struct_size(x.right)


def sequent_size(s: Sequent) -> int:
    succ = formula_size(s.succedent) if isinstance(s.succedent, Formula) else 0
    return struct_size(s.antecedent) + succ


def variables(x: Union[Formula, StructTerm, Sequent]) -> List[str]:
    names = set()
    for a in _formulas_in(x):
        names |= {b.name for b in subformulas(a) if b.op == VAR_OP}
    return sorted(names)
