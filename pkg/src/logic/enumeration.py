# src/logic/enumeration.py
"""
Isomorph-free enumeration of finite members of an AlgebraClass and the
countermodel search built on it.

Members are generated lattice first: every lattice of size n (naturally
labelled, 0 = bottom, n-1 = top), then every unit and every product table
that preserves joins, then 0 and ! as the class asks. A product that
preserves finite joins is determined by its values on pairs of
join-irreducibles, so only those cells are searched.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Generator, Iterable, Iterator, List, Optional, Sequence, Tuple

from src.logic.algebra import (
    AlgebraClass,
    FiniteAlgebra,
    Valuation,
    _lattice_tables,
    check_class,
    residuals,
    sequent_holds,
)
from src.logic.errors import AlgebraFormatError, ResiduationError
from src.logic.syntax import Sequent, variables

log = logging.getLogger(__name__)

Order = Tuple[Tuple[bool, ...], ...]


# -------------------------
# Lattices
# -------------------------
def _relabel_order(leq: Order, perm: Sequence[int]) -> Order:
    """Order of the image under x -> perm[x]."""
    n = len(leq)
    inv = [0] * n
    for x, px in enumerate(perm):
        inv[px] = x
    return tuple(tuple(leq[inv[i]][inv[j]] for j in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def lattices(n: int) -> Tuple[Order, ...]:
    """One naturally labelled representative per isomorphism class of n-element lattices."""
    if n == 1:
        return (((True,),),)
    middle = range(1, n - 1)
    pairs = [(i, j) for i in middle for j in middle if i < j]
    seen = set()
    out: List[Order] = []
    for mask in range(1 << len(pairs)):
        rel = [[x == y or x == 0 or y == n - 1 for y in range(n)] for x in range(n)]
        for k, (i, j) in enumerate(pairs):
            if mask >> k & 1:
                rel[i][j] = True
        try:
            _lattice_tables(n, rel)
        except AlgebraFormatError:
            continue
        leq = tuple(tuple(r) for r in rel)
        key = min(_relabel_order(leq, p) for p in itertools.permutations(range(n)))
        if key in seen:
            continue
        seen.add(key)
        out.append(leq)
    return tuple(out)


@lru_cache(maxsize=None)
def automorphisms(leq: Order) -> Tuple[Tuple[int, ...], ...]:
    n = len(leq)
    return tuple(p for p in itertools.permutations(range(n)) if _relabel_order(leq, p) == leq)


def join_irreducibles(n: int, leq: Order, join) -> List[int]:
    out = []
    for x in range(n):
        below = [y for y in range(n) if leq[y][x] and y != x]
        if not below:
            continue
        acc = below[0]
        for y in below[1:]:
            acc = join[acc][y]
        if acc != x:
            out.append(x)
    return out


# -------------------------
# Product tables
# -------------------------
def _groupoids(leq: Order, letters: FrozenSet[str]) -> Iterator[FiniteAlgebra]:
    """Every residuated unital product on the lattice `leq` satisfying the letters among e, c, i."""
    n = len(leq)
    meet, join = _lattice_tables(n, leq)
    bottom, top = 0, n - 1
    J = join_irreducibles(n, leq, join)
    below = {x: [j for j in J if leq[j][x]] for x in range(n)}
    units = [top] if "i" in letters else [u for u in range(n) if n == 1 or u != bottom]
    commutative = "e" in letters

    for u in units:
        cells = [(j, k) for j in J for k in J if not commutative or j <= k]
        g: Dict[Tuple[int, int], int] = {}
        if u in J:
            for k in J:
                g[(u, k)] = k
                g[(k, u)] = k
        free = [c for c in cells if c not in g]

        def value(j: int, k: int) -> Optional[int]:
            if (j, k) in g:
                return g[(j, k)]
            if commutative and (k, j) in g:
                return g[(k, j)]
            return None

        def candidates(j: int, k: int) -> Iterator[int]:
            for v in range(n):
                if "i" in letters and not leq[v][meet[j][k]]:
                    continue
                if "c" in letters and j == k and not leq[j][v]:
                    continue
                ok = True
                for (a, b), w in list(g.items()):
                    if leq[a][j] and leq[b][k] and not leq[w][v]:
                        ok = False
                        break
                    if leq[j][a] and leq[k][b] and not leq[v][w]:
                        ok = False
                        break
                if ok:
                    yield v

        def extend() -> Optional[FiniteAlgebra]:
            prod = [[bottom] * n for _ in range(n)]
            for x in range(n):
                for y in range(n):
                    acc = bottom
                    for j in below[x]:
                        for k in below[y]:
                            acc = join[acc][value(j, k)]
                    prod[x][y] = acc
            for x in range(n):
                if prod[u][x] != x or prod[x][u] != x:
                    return None
                for y in range(n):
                    for z in range(n):
                        if prod[join[x][y]][z] != join[prod[x][z]][prod[y][z]]:
                            return None
                        if prod[z][join[x][y]] != join[prod[z][x]][prod[z][y]]:
                            return None
            try:
                ldiv, rdiv = residuals(n, leq, prod)
            except ResiduationError:
                return None
            return FiniteAlgebra(n, meet, join, tuple(map(tuple, prod)), ldiv, rdiv, u)

        def fill(i: int) -> Iterator[FiniteAlgebra]:
            if i == len(free):
                A = extend()
                if A is not None:
                    yield A
                return
            j, k = free[i]
            for v in candidates(j, k):
                g[(j, k)] = v
                if commutative:
                    g[(k, j)] = v
                yield from fill(i + 1)
                del g[(j, k)]
                if commutative and j != k:
                    g.pop((k, j), None)

        yield from fill(0)


def conuclei(A: FiniteAlgebra) -> Iterator[Tuple[int, ...]]:
    """Every conucleus on A, as the table x -> max of its image below x."""
    n = A.n
    must = {A.bottom, A.one}
    rest = [x for x in range(n) if x not in must]
    for r in range(len(rest) + 1):
        for extra in itertools.combinations(rest, r):
            image = must | set(extra)
            if any(A.join[s][t] not in image or A.prod[s][t] not in image for s in image for t in image):
                continue
            yield tuple(A.join_all(s for s in image if A.leq(s, x)) for x in range(n))


# -------------------------
# Canonical forms
# -------------------------
def canonical_key(A: FiniteAlgebra, perms: Optional[Iterable[Sequence[int]]] = None) -> tuple:
    """Lexicographically least encoding of A over relabellings (all of them by default)."""
    n = A.n
    if perms is None:
        perms = itertools.permutations(range(n))
    best = None
    for p in perms:
        inv = [0] * n
        for x, px in enumerate(p):
            inv[px] = x
        key = (
            tuple(A.order[inv[i]][inv[j]] for i in range(n) for j in range(n)),
            tuple(p[A.prod[inv[i]][inv[j]]] for i in range(n) for j in range(n)),
            p[A.one],
            -1 if A.zero is None else p[A.zero],
            () if A.bang is None else tuple(p[A.bang[inv[i]]] for i in range(n)),
        )
        if best is None or key < best:
            best = key
    return best


# -------------------------
# Enumeration
# -------------------------
_MEMBERS: Dict[Tuple[int, AlgebraClass], Tuple[FiniteAlgebra, ...]] = {}


def _generate(n: int, cls: AlgebraClass) -> Iterator[FiniteAlgebra]:
    letters = frozenset(cls.equations & {"e", "c", "i"})
    for leq in lattices(n):
        autos = automorphisms(leq)
        seen = set()
        for G in _groupoids(leq, letters):
            if not cls.needs_zero:
                zeros: Iterable[Optional[int]] = [None]
            elif "o" in cls.equations:
                zeros = [G.bottom]
            else:
                zeros = range(n)
            bangs: Iterable[Optional[Tuple[int, ...]]] = list(conuclei(G)) if cls.needs_bang else [None]
            for z in zeros:
                for b in bangs:
                    A = G.with_constants(z, b)
                    if not check_class(A, cls).ok:
                        continue
                    key = canonical_key(A, autos)
                    if key in seen:
                        continue
                    seen.add(key)
                    yield A


def enumerate_algebras(n: int, cls: AlgebraClass) -> Iterator[FiniteAlgebra]:
    """One representative per isomorphism class of n-element members of cls, in a fixed order."""
    if n < 1:
        raise ValueError("n must be at least 1")
    key = (n, cls)
    if key in _MEMBERS:
        yield from _MEMBERS[key]
        return
    t0 = time.perf_counter()
    found: List[FiniteAlgebra] = []
    for A in _generate(n, cls):
        found.append(A)
        yield A
    _MEMBERS[key] = tuple(found)
    log.debug("enumerated %d members of %s at size %d in %.2fs", len(found), cls, n, time.perf_counter() - t0)


def count_algebras(max_n: int, cls: AlgebraClass) -> Dict[int, int]:
    return {n: sum(1 for _ in enumerate_algebras(n, cls)) for n in range(1, max_n + 1)}


def naive_keys(n: int, cls: AlgebraClass) -> FrozenSet[tuple]:
    """Canonical keys of all n-element members, by brute force over every order and table."""
    keys = set()
    cells = [(x, y) for x in range(n) for y in range(n) if x != y]
    for mask in range(1 << len(cells)):
        leq = [[x == y for y in range(n)] for x in range(n)]
        for k, (x, y) in enumerate(cells):
            if mask >> k & 1:
                leq[x][y] = True
        for flat in itertools.product(range(n), repeat=n * n):
            prod = [list(flat[i * n:(i + 1) * n]) for i in range(n)]
            for one in range(n):
                try:
                    G = FiniteAlgebra.build(leq, prod, one)
                except (AlgebraFormatError, ResiduationError):
                    continue
                zeros = list(range(n)) if cls.needs_zero else [None]
                bangs = list(itertools.product(range(n), repeat=n)) if cls.needs_bang else [None]
                for z in zeros:
                    for b in bangs:
                        A = G.with_constants(z, b)
                        if check_class(A, cls).ok:
                            keys.add(canonical_key(A))
    return frozenset(keys)


# -------------------------
# Countermodels
# -------------------------
Countermodel = Tuple[FiniteAlgebra, Valuation]


class CountermodelSearch:
    """Sizes 1..max_n in order, every member, every valuation of the occurring variables."""

    def __init__(self, goal: Sequent, assumptions: Sequence[Sequent], cls: AlgebraClass, max_n: int) -> None:
        self.goal = goal
        self.assumptions = tuple(assumptions)
        self.cls = cls
        self.max_n = max_n
        self.names: List[str] = sorted(set().union(*(variables(s) for s in (goal, *self.assumptions))))
        self.size_reached = 0
        self.checked = 0

    def run(self, tick: int = 256) -> Generator[None, None, Optional[Countermodel]]:
        for n in range(1, self.max_n + 1):
            for A in enumerate_algebras(n, self.cls):
                for values in itertools.product(range(n), repeat=len(self.names)):
                    self.checked += 1
                    if self.checked % tick == 0:
                        yield
                    v = dict(zip(self.names, values))
                    if all(sequent_holds(A, v, s) for s in self.assumptions) and not sequent_holds(A, v, self.goal):
                        log.debug("countermodel of size %d for %s", n, self.goal)
                        return A, v
            self.size_reached = n
        return None


def find_countermodel(
    s: Sequent, assumptions: Sequence[Sequent], cls: AlgebraClass, max_n: int
) -> Optional[Countermodel]:
    gen = CountermodelSearch(s, assumptions, cls, max_n).run()
    try:
        while True:
            next(gen)
    except StopIteration as stop:
        return stop.value


# -------------------------
# Integral square-increasing collapse
# -------------------------
@dataclass
class CollapseReport:
    ok: bool
    detail: str = ""


def collapse_check(max_n: int) -> CollapseReport:
    """(c)+(i) force a commutative associative product; NACILL+ci and NACILL+eci coincide."""
    ci = AlgebraClass("RLUG", frozenset("ci"))
    for n in range(1, max_n + 1):
        for A in enumerate_algebras(n, ci):
            p = A.prod
            for x, y in itertools.product(range(n), repeat=2):
                if p[x][y] != p[y][x]:
                    return CollapseReport(False, f"size {n}: {x}.{y} != {y}.{x}")
            for x, y, z in itertools.product(range(n), repeat=3):
                if p[x][p[y][z]] != p[p[x][y]][z]:
                    return CollapseReport(False, f"size {n}: product not associative at {(x, y, z)}")
        left = {canonical_key(A) for A in enumerate_algebras(n, AlgebraClass("NACILL", frozenset("ci")))}
        right = {canonical_key(A) for A in enumerate_algebras(n, AlgebraClass("NACILL", frozenset("eci")))}
        if left != right:
            return CollapseReport(False, f"size {n}: NACILL+ci has {len(left)} members, NACILL+eci {len(right)}")
    return CollapseReport(True, f"checked sizes 1..{max_n}")
