# src/logic/algebra.py
"""
Finite algebras as operation tables, the variety descriptors they are
checked against, valuation semantics of sequents, and the algebra text
format.

Elements are the integers 0..n-1. The lattice order is read off the meet
table (x <= y iff meet[x][y] == x); residuals are derived data and are
always recomputed from prod and the order.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from src.logic.errors import (
    AlgebraFormatError,
    FragmentError,
    MissingZeroError,
    ResiduationError,
)
from src.logic.syntax import (
    AND,
    BANG,
    LDIV,
    MUL,
    ONE_OP,
    OR,
    RDIV,
    VAR_OP,
    ZERO_OP,
    EmptyStoup,
    Formula,
    Leaf,
    Sequent,
    StructTerm,
    Unit,
)

log = logging.getLogger(__name__)

Table = Tuple[Tuple[int, ...], ...]
Valuation = Dict[str, int]


# -------------------------
# Helpers
# -------------------------
def _freeze(rows: Sequence[Sequence[int]]) -> Table:
    return tuple(tuple(int(v) for v in row) for row in rows)


def _lattice_tables(n: int, leq: Sequence[Sequence[bool]]) -> Tuple[Table, Table]:
    """meet/join tables of a finite order; AlgebraFormatError unless it is a lattice."""
    for x in range(n):
        if not leq[x][x]:
            raise AlgebraFormatError(f"order is not reflexive at {x}")
        for y in range(n):
            if x != y and leq[x][y] and leq[y][x]:
                raise AlgebraFormatError(f"order is not antisymmetric at ({x}, {y})")
            for z in range(n):
                if leq[x][y] and leq[y][z] and not leq[x][z]:
                    raise AlgebraFormatError(f"order is not transitive at ({x}, {y}, {z})")
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            lower = [z for z in range(n) if leq[z][x] and leq[z][y]]
            upper = [z for z in range(n) if leq[x][z] and leq[y][z]]
            glb = [z for z in lower if all(leq[w][z] for w in lower)]
            lub = [z for z in upper if all(leq[z][w] for w in upper)]
            if not glb or not lub:
                raise AlgebraFormatError(f"elements {x} and {y} have no meet or join")
            meet[x][y], join[x][y] = glb[0], lub[0]
    return _freeze(meet), _freeze(join)


def residuals(n: int, leq: Sequence[Sequence[bool]], prod: Sequence[Sequence[int]]) -> Tuple[Table, Table]:
    """ldiv(x,z) = max{y : x.y <= z}, rdiv(z,y) = max{x : x.y <= z}; ResiduationError if a max is missing."""
    ldiv = [[0] * n for _ in range(n)]
    rdiv = [[0] * n for _ in range(n)]
    for x in range(n):
        for z in range(n):
            ys = [y for y in range(n) if leq[prod[x][y]][z]]
            top = [m for m in ys if all(leq[y][m] for y in ys)]
            if not top or any(leq[y][top[0]] and y not in ys for y in range(n)):
                raise ResiduationError(f"no left residual {x}\\{z}")
            ldiv[x][z] = top[0]
            xs = [w for w in range(n) if leq[prod[w][x]][z]]
            top = [m for m in xs if all(leq[w][m] for w in xs)]
            if not top or any(leq[w][top[0]] and w not in xs for w in range(n)):
                raise ResiduationError(f"no right residual {z}/{x}")
            rdiv[z][x] = top[0]
    return _freeze(ldiv), _freeze(rdiv)


# -------------------------
# Algebra
# -------------------------
@dataclass(frozen=True)
class FiniteAlgebra:
    n: int
    meet: Table
    join: Table
    prod: Table
    ldiv: Table
    rdiv: Table
    one: int
    zero: Optional[int] = None
    bang: Optional[Tuple[int, ...]] = None
    labels: Tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def build(
        cls,
        leq: Sequence[Sequence[bool]],
        prod: Sequence[Sequence[int]],
        one: int,
        zero: Optional[int] = None,
        bang: Optional[Sequence[int]] = None,
        labels: Sequence[str] = (),
    ) -> "FiniteAlgebra":
        """Derive meet, join and both residuals from an order and a product table."""
        n = len(leq)
        meet, join = _lattice_tables(n, leq)
        ldiv, rdiv = residuals(n, leq, prod)
        return cls(
            n,
            meet,
            join,
            _freeze(prod),
            ldiv,
            rdiv,
            one,
            zero,
            None if bang is None else tuple(bang),
            tuple(labels),
        )

    def with_constants(self, zero: Optional[int] = None, bang: Optional[Sequence[int]] = None) -> "FiniteAlgebra":
        return FiniteAlgebra(
            self.n, self.meet, self.join, self.prod, self.ldiv, self.rdiv, self.one,
            zero, None if bang is None else tuple(bang), self.labels,
        )

    # -------------------------
    # order
    # -------------------------
    @cached_property
    def order(self) -> Tuple[Tuple[bool, ...], ...]:
        return tuple(tuple(self.meet[x][y] == x for y in range(self.n)) for x in range(self.n))

    def leq(self, x: int, y: int) -> bool:
        return self.order[x][y]

    @cached_property
    def bottom(self) -> int:
        return next(x for x in range(self.n) if all(self.order[x]))

    @cached_property
    def top(self) -> int:
        return next(x for x in range(self.n) if all(self.order[y][x] for y in range(self.n)))

    def join_all(self, xs: Iterable[int]) -> int:
        acc = self.bottom
        for x in xs:
            acc = self.join[acc][x]
        return acc

    # -------------------------
    # negations
    # -------------------------
    def _zero(self) -> int:
        if self.zero is None:
            raise MissingZeroError("algebra has no designated 0")
        return self.zero

    def neg_l(self, x: int) -> int:
        """~x = x\\0"""
        return self.ldiv[x][self._zero()]

    def neg_r(self, x: int) -> int:
        """-x = 0/x"""
        return self.rdiv[self._zero()][x]

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)


# -------------------------
# Valuation semantics
# -------------------------
def evaluate(A: FiniteAlgebra, a: Formula, v: Mapping[str, int]) -> int:
    op = a.op
    if op == VAR_OP:
        if a.name not in v:
            raise KeyError(f"valuation does not assign {a.name}")
        return v[a.name]
    if op == ONE_OP:
        return A.one
    if op == ZERO_OP:
        return A._zero()
    if op == BANG:
        if A.bang is None:
            raise FragmentError("algebra has no ! operation")
        return A.bang[evaluate(A, a.args[0], v)]
    x, y = (evaluate(A, b, v) for b in a.args)
    if op == AND:
        return A.meet[x][y]
    if op == OR:
        return A.join[x][y]
    if op == MUL:
        return A.prod[x][y]
    if op == LDIV:
        return A.ldiv[x][y]
    return A.rdiv[x][y]


def evaluate_struct(A: FiniteAlgebra, x: StructTerm, v: Mapping[str, int]) -> int:
    """f(rho(x))"""
    if isinstance(x, Unit):
        return A.one
    if isinstance(x, Leaf):
        return evaluate(A, x.formula, v)
    return A.prod[evaluate_struct(A, x.left, v)][evaluate_struct(A, x.right, v)]


def sequent_holds(A: FiniteAlgebra, v: Mapping[str, int], s: Sequent) -> bool:
    left = evaluate_struct(A, s.antecedent, v)
    if isinstance(s.succedent, EmptyStoup):
        return A.leq(left, A._zero())
    return A.leq(left, evaluate(A, s.succedent, v))


# -------------------------
# Classes
# -------------------------
BANG_EQUATIONS = ("!i", "!c", "!e", "!a1", "!a2")
EQUATIONS = ("e", "c", "i", "o") + BANG_EQUATIONS

# base -> (needs zero, needs bang, implies the !-equations, classical flavor)
BASES: Dict[str, Tuple[bool, bool, bool, str]] = {
    "RLUG": (False, False, False, "none"),
    "RLUG0": (True, False, False, "none"),
    "Interior": (False, True, False, "none"),
    "Interior0": (True, True, False, "none"),
    "InRLUG": (True, False, False, "involutive"),
    "CyInRLUG": (True, False, False, "cyclic"),
    "NACILL": (False, True, True, "none"),
    "NACILL0": (True, True, True, "none"),
    "NACCLLminus": (True, True, True, "involutive"),
    "NACCLL": (True, True, True, "cyclic"),
}

_EQ_TOKEN = re.compile(r"!(?:a1|a2|[eci])|[eciow]")


@dataclass(frozen=True)
class AlgebraClass:
    base: str
    equations: FrozenSet[str] = frozenset()

    def __post_init__(self) -> None:
        if self.base not in BASES:
            raise ValueError(f"unknown class base {self.base!r} (valid: {', '.join(BASES)})")
        eqs = set(self.equations)
        if "w" in eqs:
            eqs = (eqs - {"w"}) | {"i", "o"}
        bad = eqs - set(EQUATIONS)
        if bad:
            raise ValueError(f"unknown equation(s): {sorted(bad)}")
        if "o" in eqs and not self.needs_zero:
            raise ValueError(f"{self.base} has no 0, so (o) is meaningless")
        object.__setattr__(self, "equations", frozenset(eqs))

    @property
    def needs_zero(self) -> bool:
        return BASES[self.base][0]

    @property
    def needs_bang(self) -> bool:
        return BASES[self.base][1] or any(e.startswith("!") for e in self.equations)

    @property
    def classical(self) -> str:
        return BASES[self.base][3]

    @property
    def all_equations(self) -> FrozenSet[str]:
        if BASES[self.base][2]:
            return self.equations | frozenset(BANG_EQUATIONS)
        return self.equations

    @property
    def default_max_size(self) -> int:
        return 3 if self.needs_bang else 4

    def __str__(self) -> str:
        letters = "".join(e for e in EQUATIONS if e in self.equations)
        return f"{self.base}+{letters}" if letters else self.base


def parse_class(text: str) -> AlgebraClass:
    """`NACILL0+ecio`, `RLUG+w`, `Interior+!e!c`."""
    base, _, rest = text.strip().partition("+")
    tokens = _EQ_TOKEN.findall(rest)
    if "".join(tokens) != rest.strip():
        raise ValueError(f"cannot read equations {rest!r}")
    return AlgebraClass(base, frozenset(tokens))


@dataclass
class ClassReport:
    ok: bool
    law: str = ""
    witness: Tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return f"fails {self.law} at {self.witness}"


def _first(cond, arity: int, n: int) -> Optional[Tuple[int, ...]]:
    for t in itertools.product(range(n), repeat=arity):
        if not cond(*t):
            return t
    return None


def _laws(A: FiniteAlgebra, cls: AlgebraClass):
    """(name, arity, predicate) for every law of cls, in checking order."""
    n = A.n
    le, m, j, p, ld, rd = A.leq, A.meet, A.join, A.prod, A.ldiv, A.rdiv
    u = A.one
    laws = [
        ("meet is commutative", 2, lambda x, y: m[x][y] == m[y][x]),
        ("join is commutative", 2, lambda x, y: j[x][y] == j[y][x]),
        ("meet is associative", 3, lambda x, y, z: m[m[x][y]][z] == m[x][m[y][z]]),
        ("join is associative", 3, lambda x, y, z: j[j[x][y]][z] == j[x][j[y][z]]),
        ("absorption", 2, lambda x, y: m[x][j[x][y]] == x and j[x][m[x][y]] == x),
        ("1.x = x = x.1", 1, lambda x: p[u][x] == x and p[x][u] == x),
        (
            "x.y <= z iff y <= x\\z iff x <= z/y",
            3,
            lambda x, y, z: le(p[x][y], z) == le(y, ld[x][z]) == le(x, rd[z][y]),
        ),
    ]
    if cls.needs_bang:
        b = A.bang
        laws += [
            ("1 <= !1", 0, lambda: le(u, b[u])),
            ("!x.!y <= !(x.y)", 2, lambda x, y: le(p[b[x]][b[y]], b[p[x][y]])),
            ("!x <= x", 1, lambda x: le(b[x], x)),
            ("!x <= !!x", 1, lambda x: le(b[x], b[b[x]])),
            ("x <= y implies !x <= !y", 2, lambda x, y: not le(x, y) or le(b[x], b[y])),
        ]
        eqs = cls.all_equations
        if "!i" in eqs:
            laws.append(("!x <= 1", 1, lambda x: le(b[x], u)))
        if "!c" in eqs:
            laws.append(("!x <= !x.!x", 1, lambda x: le(b[x], p[b[x]][b[x]])))
        if "!e" in eqs:
            laws.append(("!x.y = y.!x", 2, lambda x, y: p[b[x]][y] == p[y][b[x]]))
        if "!a1" in eqs:
            laws.append(("!x.(y.z) = (!x.y).z", 3, lambda x, y, z: p[b[x]][p[y][z]] == p[p[b[x]][y]][z]))
        if "!a2" in eqs:
            laws.append(("x.(y.!z) = (x.y).!z", 3, lambda x, y, z: p[x][p[y][b[z]]] == p[p[x][y]][b[z]]))
    if cls.classical != "none":
        laws += [
            ("~-x = x = -~x", 1, lambda x: A.neg_l(A.neg_r(x)) == x == A.neg_r(A.neg_l(x))),
            ("~x/y = x\\-y", 2, lambda x, y: rd[A.neg_l(x)][y] == ld[x][A.neg_r(y)]),
        ]
    if cls.classical == "cyclic":
        laws.append(("~x = -x", 1, lambda x: A.neg_l(x) == A.neg_r(x)))
    eqs = cls.equations
    if "e" in eqs:
        laws.append(("x.y <= y.x", 2, lambda x, y: le(p[x][y], p[y][x])))
    if "c" in eqs:
        laws.append(("x <= x.x", 1, lambda x: le(x, p[x][x])))
    if "i" in eqs:
        laws.append(("x <= 1", 1, lambda x: le(x, u)))
    if "o" in eqs:
        laws.append(("0 <= x", 1, lambda x: le(A.zero, x)))
    return laws


def check_class(A: FiniteAlgebra, cls: AlgebraClass) -> ClassReport:
    """Exhaustively test every defining law of cls; the first failure wins."""
    if cls.needs_zero and A.zero is None:
        return ClassReport(False, "0 is designated")
    if cls.needs_bang and A.bang is None:
        return ClassReport(False, "! is present")
    for name, arity, cond in _laws(A, cls):
        witness = _first(cond, arity, A.n)
        if witness is not None:
            return ClassReport(False, name, witness)
    return ClassReport(True)


def holds(A: FiniteAlgebra, cls: AlgebraClass) -> bool:
    return check_class(A, cls).ok


# -------------------------
# Text format
# -------------------------
_TABLES = ("meet", "join", "prod", "ldiv", "rdiv")


def algebra_to_text(A: FiniteAlgebra, extra_rows: Optional[Mapping[str, Sequence[int]]] = None) -> str:
    lines = [f"n={A.n}"]
    for name in _TABLES:
        lines.append(f"{name}:")
        lines.extend(" ".join(map(str, row)) for row in getattr(A, name))
    if A.bang is not None:
        lines.append("bang:")
        lines.append(" ".join(map(str, A.bang)))
    lines.append(f"one={A.one}")
    if A.zero is not None:
        lines.append(f"zero={A.zero}")
    for name, row in (extra_rows or {}).items():
        lines.append(f"{name}:")
        lines.append(" ".join(map(str, row)))
    return "\n".join(lines) + "\n"


def _parse_sections(text: str) -> Tuple[Dict[str, str], Dict[str, List[List[int]]]]:
    scalars: Dict[str, str] = {}
    rows: Dict[str, List[List[int]]] = {}
    current: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.endswith(":"):
            current = line[:-1].strip()
            if current in rows:
                raise AlgebraFormatError(f"line {lineno}: duplicate section {current!r}")
            rows[current] = []
        elif "=" in line:
            key, _, val = line.partition("=")
            scalars[key.strip()] = val.strip()
            current = None
        elif current is not None:
            try:
                rows[current].append([int(tok) for tok in line.split()])
            except ValueError as e:
                raise AlgebraFormatError(f"line {lineno}: non-integer entry in {current!r}") from e
        else:
            raise AlgebraFormatError(f"line {lineno}: row outside a section")
    return scalars, rows


def _int_scalar(scalars: Mapping[str, str], key: str, n: Optional[int] = None) -> int:
    try:
        val = int(scalars[key])
    except KeyError as e:
        raise AlgebraFormatError(f"missing {key}=") from e
    except ValueError as e:
        raise AlgebraFormatError(f"{key}= is not an integer") from e
    if n is not None and not 0 <= val < n:
        raise AlgebraFormatError(f"{key}={val} outside 0..{n - 1}")
    return val


def parse_algebra_sections(text: str) -> Tuple[FiniteAlgebra, Dict[str, str], Dict[str, List[List[int]]]]:
    """Parse and validate an algebra, also returning unconsumed scalars/sections for extended formats."""
    scalars, rows = _parse_sections(text)
    n = _int_scalar(scalars, "n")
    if n < 1:
        raise AlgebraFormatError("n must be at least 1")
    tables: Dict[str, Table] = {}
    for name in _TABLES:
        if name not in rows:
            raise AlgebraFormatError(f"missing {name}: table")
        t = rows.pop(name)
        if len(t) != n or any(len(r) != n for r in t) or any(not 0 <= v < n for r in t for v in r):
            raise AlgebraFormatError(f"{name}: must be {n} rows of {n} entries in 0..{n - 1}")
        tables[name] = _freeze(t)
    bang = None
    if "bang" in rows:
        b = rows.pop("bang")
        if len(b) != 1 or len(b[0]) != n or any(not 0 <= v < n for v in b[0]):
            raise AlgebraFormatError(f"bang: must be one row of {n} entries")
        bang = tuple(b[0])
    one = _int_scalar(scalars, "one", n)
    zero = _int_scalar(scalars, "zero", n) if "zero" in scalars else None
    for key in ("n", "one", "zero"):
        scalars.pop(key, None)

    leq = [[tables["meet"][x][y] == x for y in range(n)] for x in range(n)]
    meet, join = _lattice_tables(n, leq)
    if meet != tables["meet"] or join != tables["join"]:
        raise AlgebraFormatError("meet/join tables are not the lattice operations of their order")
    ldiv, rdiv = residuals(n, leq, tables["prod"])
    if ldiv != tables["ldiv"] or rdiv != tables["rdiv"]:
        raise ResiduationError("ldiv/rdiv tables are not the residuals of prod")
    A = FiniteAlgebra(n, meet, join, tables["prod"], ldiv, rdiv, one, zero, bang)
    if "neg" in rows:
        neg = rows.pop("neg")
        if zero is None or len(neg) != 1 or list(neg[0]) != [A.neg_l(x) for x in range(n)]:
            raise AlgebraFormatError("neg: row does not match x\\0")
    return A, scalars, rows


def parse_algebra(text: str) -> FiniteAlgebra:
    A, scalars, rows = parse_algebra_sections(text)
    if scalars or rows:
        log.debug("ignoring extra algebra fields: %s", sorted(list(scalars) + list(rows)))
    return A


def chain(n: int) -> List[List[bool]]:
    """Order of the n-element chain 0 < 1 < ... < n-1."""
    return [[x <= y for y in range(n)] for x in range(n)]


def boolean_two_chain(bang: str = "identity") -> FiniteAlgebra:
    """The 2-element Boolean algebra with . = meet, 0 the least element and ! chosen by name."""
    bangs = {"identity": (0, 1), "zero": (0, 0), "none": None}
    return FiniteAlgebra.build(chain(2), [[0, 0], [0, 1]], one=1, zero=0, bang=bangs[bang])
