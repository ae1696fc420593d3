# src/logic/constructions.py
"""
Algebra-level constructions: the cyclic involutive extension A*, the
central-core conucleus on an involutive algebra, the zero-adjoined
completion, and internalization of hypotheses into a single sequent.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import FrozenSet, List, Optional, Sequence, Tuple

from src.logic.algebra import (
    AlgebraClass,
    ClassReport,
    FiniteAlgebra,
    _freeze,
    _lattice_tables,
    algebra_to_text,
    check_class,
    residuals,
)
from src.logic.errors import ClassCheckError, ConstructionError, FragmentError, ResiduationError
from src.logic.frames import FPlusAlgebra, dm_frame, frame_plus, zero_extension
from src.logic.syntax import (
    BANG,
    FULL,
    LDIV,
    Formula,
    Fragment,
    Leaf,
    Node,
    Sequent,
    bang,
    ldiv,
    rho,
    theta,
)

log = logging.getLogger(__name__)


def _require(A: FiniteAlgebra, cls: AlgebraClass) -> None:
    report = check_class(A, cls)
    if not report.ok:
        raise ClassCheckError(f"input is not in {cls}: {report}", report)


# -------------------------
# A*
# -------------------------
@dataclass(frozen=True)
class StarAlgebra:
    algebra: FiniteAlgebra
    neg: Tuple[int, ...]
    source_n: int

    @property
    def top(self) -> int:
        return 2 * self.source_n

    @property
    def bot(self) -> int:
        return 2 * self.source_n + 1

    def tilde(self, a: int) -> int:
        """index of a~ for a in the source algebra"""
        return self.source_n + a

    def to_text(self) -> str:
        return algebra_to_text(self.algebra, {"neg": self.neg})


def star_extension(A: FiniteAlgebra) -> StarAlgebra:
    """A plus a reversed copy A~ plus new bounds; cyclic involutive with 0 = 1~."""
    _require(A, AlgebraClass("RLUG"))
    n = A.n
    size = 2 * n + 2
    TOP, BOT = 2 * n, 2 * n + 1
    src = range(n)

    def kind(x: int) -> str:
        if x == TOP:
            return "top"
        if x == BOT:
            return "bot"
        return "a" if x < n else "t"

    def leq(x: int, y: int) -> bool:
        kx, ky = kind(x), kind(y)
        if kx == "bot" or ky == "top":
            return True
        if kx == "top" or ky == "bot":
            return False
        if kx == "a" and ky == "a":
            return A.leq(x, y)
        if kx == "a":
            return True
        if ky == "a":
            return False
        return A.leq(y - n, x - n)

    def mul(x: int, y: int) -> int:
        kx, ky = kind(x), kind(y)
        if kx == "bot" or ky == "bot":
            return BOT
        if kx == "top" or ky == "top":
            return TOP
        if kx == "a" and ky == "a":
            return A.prod[x][y]
        if kx == "a":
            return n + A.rdiv[y - n][x]  # x . y~ = (y/x)~
        if ky == "a":
            return n + A.ldiv[y][x - n]  # x~ . y = (y\x)~
        return TOP

    neg = tuple([n + a for a in src] + [a for a in src] + [BOT, TOP])

    def lat(x: int, y: int, meet: bool) -> int:
        kx, ky = kind(x), kind(y)
        if kx == "bot" or ky == "bot":
            return BOT if meet else (y if kx == "bot" else x)
        if kx == "top" or ky == "top":
            return (y if kx == "top" else x) if meet else TOP
        if kx == "a" and ky == "a":
            return A.meet[x][y] if meet else A.join[x][y]
        if kx == "t" and ky == "t":
            # inf{a~, b~} = (a v b)~ and sup{a~, b~} = (a ^ b)~
            return n + (A.join[x - n][y - n] if meet else A.meet[x - n][y - n])
        lower, upper = (x, y) if kx == "a" else (y, x)
        return lower if meet else upper

    order = [[leq(x, y) for y in range(size)] for x in range(size)]
    meet = _freeze([[lat(x, y, True) for y in range(size)] for x in range(size)])
    join = _freeze([[lat(x, y, False) for y in range(size)] for x in range(size)])
    if (meet, join) != _lattice_tables(size, order):
        raise ConstructionError("A* lattice operations disagree with its order")
    prod = _freeze([[mul(x, y) for y in range(size)] for x in range(size)])
    # x\z = ~(~z . x),  z/x = ~(x . ~z)
    ldiv = _freeze([[neg[mul(neg[z], x)] for z in range(size)] for x in range(size)])
    rdiv = _freeze([[neg[mul(x, neg[z])] for x in range(size)] for z in range(size)])
    try:
        brute = residuals(size, order, prod)
    except ResiduationError as e:
        raise ConstructionError(f"A* product is not residuated: {e}") from e
    if brute != (ldiv, rdiv):
        raise ConstructionError("A* residual formulas disagree with the residuals of its product")

    labels = [A.label(a) for a in src] + [f"{A.label(a)}~" for a in src] + ["top", "bot"]
    star = FiniteAlgebra(size, meet, join, prod, ldiv, rdiv, A.one, n + A.one, None, tuple(labels))
    log.debug("A* built: %d -> %d elements", n, size)
    return StarAlgebra(star, neg, n)


def check_star(A: FiniteAlgebra, S: StarAlgebra) -> ClassReport:
    """The full battery for A*: unit, monotonicity, negation, shift law, cyclicity, class, embedding, transport."""
    B = S.algebra
    size = B.n
    le, p, neg = B.leq, B.prod, S.neg
    E = range(size)
    checks = [
        ("1 is a unit of A*", 1, lambda x: p[B.one][x] == x == p[x][B.one]),
        (
            "x <= y implies z.x <= z.y and x.z <= y.z",
            3,
            lambda x, y, z: not le(x, y) or (le(p[z][x], p[z][y]) and le(p[x][z], p[y][z])),
        ),
        ("~~x = x", 1, lambda x: neg[neg[x]] == x),
        ("x <= y iff ~y <= ~x", 2, lambda x, y: le(x, y) == le(neg[y], neg[x])),
        (
            "x.y <= z iff ~z.x <= ~y iff y.~z <= ~x",
            3,
            lambda x, y, z: le(p[x][y], z) == le(p[neg[z]][x], neg[y]) == le(p[y][neg[z]], neg[x]),
        ),
        ("x\\0 = 0/x = ~x", 1, lambda x: B.ldiv[x][B.zero] == B.rdiv[B.zero][x] == neg[x]),
    ]
    n = A.n
    checks += [
        ("inf{a~,b~} = (a v b)~", 2, lambda a, b: a >= n or b >= n or B.meet[n + a][n + b] == n + A.join[a][b]),
        ("sup{a~,b~} = (a ^ b)~", 2, lambda a, b: a >= n or b >= n or B.join[n + a][n + b] == n + A.meet[a][b]),
    ]
    for name, arity, cond in checks:
        for t in itertools.product(E, repeat=arity):
            if not cond(*t):
                return ClassReport(False, name, t)

    eqs = frozenset(e for e in ("e", "c") if check_class(A, AlgebraClass("RLUG", frozenset(e))).ok)
    report = check_class(B, AlgebraClass("CyInRLUG", eqs))
    if not report.ok:
        return report
    for op in ("meet", "join", "prod", "ldiv", "rdiv"):
        ta, tb = getattr(A, op), getattr(B, op)
        for a, b in itertools.product(range(n), repeat=2):
            if ta[a][b] != tb[a][b]:
                return ClassReport(False, f"A is a subalgebra of A* ({op})", (a, b))
    return ClassReport(True)


# -------------------------
# Central core
# -------------------------
def central_core(A: FiniteAlgebra) -> FrozenSet[int]:
    """Elements below 1 that are idempotent, central and associate with everything."""
    p, E = A.prod, range(A.n)
    core = []
    for x in E:
        if not A.leq(x, A.one) or p[x][x] != x:
            continue
        if any(p[x][a] != p[a][x] for a in E):
            continue
        if any(p[x][p[a][b]] != p[p[x][a]][b] or p[p[a][b]][x] != p[a][p[b][x]] for a in E for b in E):
            continue
        core.append(x)
    return frozenset(core)


def dm_with_conucleus(A: FiniteAlgebra) -> FPlusAlgebra:
    """Completion of a !-free involutive algebra with !X = gamma(X n core)."""
    _require(A, AlgebraClass("InRLUG"))
    plain = A.with_constants(zero=A.zero, bang=None)
    core = central_core(plain)
    Fp = frame_plus(dm_frame(plain, k=core))
    log.debug("central core %s, completion has %d elements", sorted(core), Fp.algebra.n)
    return Fp


def zero_adjoined_completion(A: FiniteAlgebra) -> FPlusAlgebra:
    """DM completion of a zero-free interior algebra with 0 := gamma(empty set)."""
    if A.zero is not None:
        raise ConstructionError("input already has a 0")
    _require(A, AlgebraClass("Interior"))
    return zero_extension(frame_plus(dm_frame(A)))


# -------------------------
# Internalization
# -------------------------
def tau(s: Sequent, fragment: Fragment = FULL) -> Formula:
    """!(rho(x)\\theta(d))"""
    missing = {BANG, LDIV} - set(fragment)
    if missing:
        raise FragmentError(f"internalizing {s} needs ! and \\ in the fragment")
    return bang(ldiv(rho(s.antecedent, fragment), theta(s.succedent, fragment)))


def internalize(assumptions: Sequence[Sequent], goal: Sequent, fragment: Fragment = FULL) -> Sequent:
    """goal antecedent o (tau(s1) o (... o tau(sn))); the goal itself when there are no assumptions."""
    if not assumptions:
        return goal
    tail = Leaf(tau(assumptions[-1], fragment))
    for s in reversed(assumptions[:-1]):
        tail = Node(Leaf(tau(s, fragment)), tail)
    return Sequent(Node(goal.antecedent, tail), goal.succedent)
