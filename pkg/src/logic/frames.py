# src/logic/frames.py
"""
Enriched residuated frames over finite carriers and the closed-set algebra
F+ they induce.

Subsets of G are int bitmasks (bit x set iff x in the set), subsets of T
likewise. Closed sets are the intersections of the basis {z}<| for z in T,
together with G itself.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from src.logic.algebra import (
    AlgebraClass,
    FiniteAlgebra,
    Table,
    _freeze,
    _int_scalar,
    _parse_sections,
    check_class,
)
from src.logic.errors import (
    AlgebraFormatError,
    ClassCheckError,
    FrameError,
    MissingZeroError,
    NuclearityError,
    PartialOpError,
)

log = logging.getLogger(__name__)


def bits(mask: int) -> List[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(xs: Iterable[int]) -> int:
    m = 0
    for x in xs:
        m |= 1 << x
    return m


# -------------------------
# Frames
# -------------------------
@dataclass(frozen=True)
class Frame:
    """(G, T, N) with witnesses x||z = lres[x][z], z||y = rres[z][y], the subunital groupoid K and an optional eps_t."""

    g: int
    prod: Table
    eps: int
    t: int
    rel: Tuple[int, ...]  # rel[x] = {z : x N z} as a mask over T
    lres: Table
    rres: Table
    k: int  # mask over G
    eps_t: Optional[int] = None
    origin: Tuple[int, ...] = field(default=(), compare=False)  # G index -> element of the source algebra
    anchors: Tuple[Tuple[int, int], ...] = field(default=(), compare=False)  # (source element, T index)

    @cached_property
    def full(self) -> int:
        return (1 << self.g) - 1

    @cached_property
    def full_t(self) -> int:
        return (1 << self.t) - 1

    @cached_property
    def col(self) -> Tuple[int, ...]:
        """col[z] = {z}<| = {x : x N z}"""
        return tuple(mask_of(x for x in range(self.g) if self.rel[x] >> z & 1) for z in range(self.t))

    def n(self, x: int, z: int) -> bool:
        return bool(self.rel[x] >> z & 1)

    def up(self, X: int) -> int:
        """X|> = {z : x N z for all x in X}"""
        acc = self.full_t
        for x in bits(X):
            acc &= self.rel[x]
        return acc

    def down(self, Y: int) -> int:
        """Y<| = {x : x N z for all z in Y}"""
        acc = self.full
        for z in bits(Y):
            acc &= self.col[z]
        return acc

    def compose(self, X: int, Y: int) -> int:
        """X o Y = {x.y : x in X, y in Y}"""
        ys = bits(Y)
        return mask_of(self.prod[x][y] for x in bits(X) for y in ys)

    @cached_property
    def anchor_map(self) -> Dict[int, int]:
        return dict(self.anchors)

    def validate(self) -> None:
        g, t = self.g, self.t
        for x in range(g):
            for y in range(g):
                xy = self.prod[x][y]
                for z in range(t):
                    a = self.n(xy, z)
                    if a != self.n(y, self.lres[x][z]) or a != self.n(x, self.rres[z][y]):
                        raise NuclearityError(f"nuclearity fails at x={x}, y={y}, z={z}")
        if not self.k >> self.eps & 1:
            raise FrameError("K must contain the unit of G")
        ks = bits(self.k)
        for a in ks:
            for b in ks:
                if not self.k >> self.prod[a][b] & 1:
                    raise FrameError(f"K is not closed under the product: {a}.{b}")
        for x in range(g):
            if self.prod[self.eps][x] != x or self.prod[x][self.eps] != x:
                raise FrameError(f"{self.eps} is not a unit of G at {x}")


def gamma(F: Frame, X: int) -> int:
    """X|><| , the least closed set containing X."""
    return F.down(F.up(X))


def closed_sets(F: Frame) -> Tuple[int, ...]:
    """All intersections of basis sets, smallest first."""
    found = {F.full}
    for z in range(F.t):
        b = F.col[z]
        found |= {c & b for c in found}
    return tuple(sorted(found, key=lambda m: (bin(m).count("1"), m)))


# -------------------------
# F+
# -------------------------
@dataclass(frozen=True)
class FPlusAlgebra:
    frame: Frame
    closed: Tuple[int, ...]
    algebra: FiniteAlgebra

    @cached_property
    def _index(self) -> Dict[int, int]:
        return {m: i for i, m in enumerate(self.closed)}

    def index(self, X: int) -> int:
        try:
            return self._index[X]
        except KeyError as e:
            raise FrameError(f"{bits(X)} is not a closed set") from e


def frame_plus(F: Frame) -> FPlusAlgebra:
    F.validate()
    sets = closed_sets(F)
    idx = {m: i for i, m in enumerate(sets)}
    n = len(sets)
    g_elems = range(F.g)

    def at(X: int) -> int:
        if X not in idx:
            raise NuclearityError(f"{bits(X)} should be closed but is not")
        return idx[X]

    meet = [[idx[a & b] for b in sets] for a in sets]
    join = [[idx[gamma(F, a | b)] for b in sets] for a in sets]
    prod = [[idx[gamma(F, F.compose(a, b))] for b in sets] for a in sets]
    ldiv = [[0] * n for _ in range(n)]
    rdiv = [[0] * n for _ in range(n)]
    for i, X in enumerate(sets):
        xs = bits(X)
        for j, Y in enumerate(sets):
            # X\Y = {z : X o {z} <= Y},  Y/X = {z : {z} o X <= Y}
            left = mask_of(z for z in g_elems if all(Y >> F.prod[x][z] & 1 for x in xs))
            right = mask_of(z for z in g_elems if all(Y >> F.prod[z][x] & 1 for x in xs))
            ldiv[i][j] = at(left)
            rdiv[j][i] = at(right)
    bang = tuple(idx[gamma(F, X & F.k)] for X in sets)
    zero = None if F.eps_t is None else idx[F.col[F.eps_t]]
    one = idx[gamma(F, 1 << F.eps)]
    A = FiniteAlgebra(n, _freeze(meet), _freeze(join), _freeze(prod), _freeze(ldiv), _freeze(rdiv), one, zero, bang)
    log.debug("F+ has %d closed sets (|G|=%d, |T|=%d)", n, F.g, F.t)
    return FPlusAlgebra(F, sets, A)


def zero_extension(Fp: FPlusAlgebra) -> FPlusAlgebra:
    """Designate gamma(empty set) as 0; the 0-free reduct is untouched."""
    if Fp.algebra.zero is not None:
        raise FrameError("algebra already has a 0")
    z = Fp.index(gamma(Fp.frame, 0))
    return FPlusAlgebra(Fp.frame, Fp.closed, Fp.algebra.with_constants(zero=z, bang=Fp.algebra.bang))


# -------------------------
# Dedekind-MacNeille frame
# -------------------------
def dm_frame(A: FiniteAlgebra, k: Optional[Iterable[int]] = None) -> Frame:
    """(A, A, <=) with the residuals as witnesses; K is the image of ! (else `k`, else {1})."""
    report = check_class(A, AlgebraClass("RLUG"))
    if not report.ok:
        raise ClassCheckError(f"not a residuated lattice-ordered unital groupoid: {report}", report)
    n = A.n
    if A.bang is not None:
        kset = set(A.bang)
    elif k is not None:
        kset = set(k)
    else:
        kset = {A.one}
    rel = tuple(mask_of(z for z in range(n) if A.leq(x, z)) for x in range(n))
    return Frame(
        g=n,
        prod=A.prod,
        eps=A.one,
        t=n,
        rel=rel,
        lres=A.ldiv,
        rres=A.rdiv,
        k=mask_of(kset),
        eps_t=A.zero,
        origin=tuple(range(n)),
        anchors=tuple((a, a) for a in range(n)),
    )


# -------------------------
# Partial subalgebras and the FEP frame
# -------------------------
BINARY_OPS = ("meet", "join", "prod", "ldiv", "rdiv")


@dataclass(frozen=True)
class PartialSubalgebra:
    """A subset B of a finite algebra; each operation is defined on the listed argument tuples.

    With `defined` left empty an operation is defined exactly where its value lands in B.
    """

    elements: FrozenSet[int]
    defined: Tuple[Tuple[str, FrozenSet[Tuple[int, ...]]], ...] = ()

    @classmethod
    def of(cls, elements: Iterable[int], defined: Optional[Mapping[str, Iterable[Tuple[int, ...]]]] = None):
        items = tuple(sorted((op, frozenset(map(tuple, args))) for op, args in (defined or {}).items()))
        return cls(frozenset(elements), items)

    def domain(self, A: FiniteAlgebra, op: str) -> FrozenSet[Tuple[int, ...]]:
        explicit = dict(self.defined)
        if op in explicit:
            return explicit[op]
        B = self.elements
        if op in BINARY_OPS:
            table = getattr(A, op)
            return frozenset((x, y) for x in B for y in B if table[x][y] in B)
        if op == "bang":
            return frozenset((x,) for x in B if A.bang is not None and A.bang[x] in B)
        if op == "one":
            return frozenset({()}) if A.one in B else frozenset()
        if op == "zero":
            return frozenset({()}) if A.zero is not None and A.zero in B else frozenset()
        raise PartialOpError(f"unknown operation {op!r}")

    def validate(self, A: FiniteAlgebra) -> None:
        if not all(0 <= b < A.n for b in self.elements):
            raise PartialOpError(f"B is not a subset of the carrier 0..{A.n - 1}")
        for op, args in self.defined:
            for tup in args:
                if any(a not in self.elements for a in tup):
                    raise PartialOpError(f"{op}{tup}: arguments outside B")
                value = apply_op(A, op, tup)
                if value not in self.elements:
                    raise PartialOpError(f"{op}{tup} = {value} is not in B")


def apply_op(A: FiniteAlgebra, op: str, args: Tuple[int, ...]) -> int:
    if op in BINARY_OPS:
        return getattr(A, op)[args[0]][args[1]]
    if op == "bang":
        if A.bang is None:
            raise PartialOpError("algebra has no !")
        return A.bang[args[0]]
    if op == "one":
        return A.one
    if op == "zero":
        if A.zero is None:
            raise MissingZeroError("algebra has no 0")
        return A.zero
    raise PartialOpError(f"unknown operation {op!r}")


def fep_frame(A: FiniteAlgebra, B: PartialSubalgebra, with_zero: bool = False) -> Frame:
    """The frame over the subgroupoid generated by B, with T the pairs (induced function, b).

    Functions z -> u(z) of contexts u over G_B are kept extensionally, so T is finite.
    With `with_zero` the targets range over B plus 0 and eps_t = (identity, 0).
    """
    B.validate(A)
    # G_B: closure of B and 1 under the product
    gset = set(B.elements) | {A.one}
    frontier = list(gset)
    while frontier:
        new = []
        for a in frontier:
            for b in list(gset):
                for c in (A.prod[a][b], A.prod[b][a]):
                    if c not in gset:
                        gset.add(c)
                        new.append(c)
        frontier = new
    gs = sorted(gset)
    gi = {a: i for i, a in enumerate(gs)}
    g = len(gs)
    prod = tuple(tuple(gi[A.prod[a][b]] for b in gs) for a in gs)

    # induced functions, as tuples over G_B indices
    ident = tuple(range(g))
    funcs = [ident]
    seen = {ident}
    i = 0
    while i < len(funcs):
        f = funcs[i]
        i += 1
        for a in range(g):
            for h in (tuple(f[prod[a][z]] for z in range(g)), tuple(f[prod[z][a]] for z in range(g))):
                if h not in seen:
                    seen.add(h)
                    funcs.append(h)
    fi = {f: i for i, f in enumerate(funcs)}

    targets = sorted(B.elements)
    if with_zero:
        if A.zero is None:
            raise MissingZeroError("zero variant needs an algebra with 0")
        if A.zero not in targets:
            targets = sorted(set(targets) | {A.zero})
    pairs = [(f, b) for f in range(len(funcs)) for b in targets]
    pi = {p: i for i, p in enumerate(pairs)}
    t = len(pairs)

    rel = tuple(
        mask_of(j for j, (f, b) in enumerate(pairs) if A.leq(gs[funcs[f][x]], b)) for x in range(g)
    )
    lres = tuple(
        tuple(pi[(fi[tuple(funcs[f][prod[x][z]] for z in range(g))], b)] for (f, b) in pairs) for x in range(g)
    )
    rres = tuple(
        tuple(pi[(fi[tuple(funcs[f][prod[z][y]] for z in range(g))], b)] for y in range(g)) for (f, b) in pairs
    )

    # K_B: generated by the unit and the values of ! defined in B
    kset = {gi[A.one]} | {gi[apply_op(A, "bang", tup)] for tup in B.domain(A, "bang")}
    grow = True
    while grow:
        grow = False
        for a in list(kset):
            for b in list(kset):
                c = prod[a][b]
                if c not in kset:
                    kset.add(c)
                    grow = True

    eps_t = pi[(fi[ident], A.zero)] if with_zero else None
    anchors = tuple((b, pi[(fi[ident], b)]) for b in sorted(B.elements))
    log.debug("fep frame: |G_B|=%d, %d functions, |T_B|=%d", g, len(funcs), t)
    return Frame(g, prod, gi[A.one], t, rel, lres, rres, mask_of(kset), eps_t, tuple(gs), anchors)


# -------------------------
# Embeddings
# -------------------------
def embedding(Fp: FPlusAlgebra, elem: int) -> int:
    """elem -> {elem}<| as a closed set (mask over G)."""
    F = Fp.frame
    if elem not in F.anchor_map:
        raise FrameError(f"{elem} has no anchor in this frame")
    return F.col[F.anchor_map[elem]]


@dataclass
class EmbeddingReport:
    ok: bool
    clause: str = ""
    witness: Tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else f"fails {self.clause} at {self.witness}"


def verify_embedding(Fp: FPlusAlgebra, A: FiniteAlgebra, B: Optional[PartialSubalgebra] = None) -> EmbeddingReport:
    """Injectivity plus preservation of every defined operation, ! included."""
    F = Fp.frame
    alg = Fp.algebra
    B = B or PartialSubalgebra.of(range(A.n))
    elems = sorted(B.elements)
    image = {b: embedding(Fp, b) for b in elems}
    for a, b in itertools.combinations(elems, 2):
        if image[a] == image[b]:
            return EmbeddingReport(False, "injective", (a, b))
    g_of = {e: i for i, e in enumerate(F.origin)}

    for op in BINARY_OPS:
        table = getattr(alg, op)
        for x, y in sorted(B.domain(A, op)):
            want = image[apply_op(A, op, (x, y))]
            got = Fp.closed[table[Fp.index(image[x])][Fp.index(image[y])]]
            if got != want:
                return EmbeddingReport(False, op, (x, y))
    if B.domain(A, "one"):
        if Fp.closed[alg.one] != image[A.one]:
            return EmbeddingReport(False, "one", (A.one,))
    if B.domain(A, "zero") and alg.zero is not None:
        if Fp.closed[alg.zero] != image[A.zero]:
            return EmbeddingReport(False, "zero", (A.zero,))
    for (b,) in sorted(B.domain(A, "bang")):
        nb = apply_op(A, "bang", (b,))
        banged = Fp.closed[alg.bang[Fp.index(image[b])]]
        if not banged >> g_of[nb] & 1 or banged & ~image[nb]:
            return EmbeddingReport(False, "!b in !{b}<| <= {!b}<|", (b,))
        if banged != image[nb]:
            return EmbeddingReport(False, "bang", (b,))
    return EmbeddingReport(True)


# -------------------------
# Frame rules
# -------------------------
FRAME_RULES = ("e", "c", "i", "kc", "ke", "ki", "ka1", "ka2")
# rule -> equation holding in F+ exactly when the rule holds in the frame
RULE_EQUATION = {"e": "e", "c": "c", "i": "i", "kc": "!c", "ke": "!e", "ki": "!i", "ka1": "!a1", "ka2": "!a2"}


def check_frame_rule(F: Frame, rule: str) -> bool:
    G, T = range(F.g), range(F.t)
    K = bits(F.k)
    p, N, eps = F.prod, F.n, F.eps
    if rule == "e":
        return all(N(p[x][y], z) <= N(p[y][x], z) for x in G for y in G for z in T)
    if rule == "c":
        return all(N(p[x][x], z) <= N(x, z) for x in G for z in T)
    if rule == "i":
        return all(N(eps, z) <= N(x, z) for x in G for z in T)
    if rule == "ki":
        return all(N(eps, z) <= N(k, z) for k in K for z in T)
    if rule == "kc":
        return all(N(p[k][k], z) <= N(k, z) for k in K for z in T)
    if rule == "ke":
        return all(N(p[k][y], z) == N(p[y][k], z) for k in K for y in G for z in T)
    if rule == "ka1":
        return all(N(p[k][p[x][y]], z) == N(p[p[k][x]][y], z) for k in K for x in G for y in G for z in T)
    if rule == "ka2":
        return all(N(p[x][p[y][k]], z) == N(p[p[x][y]][k], z) for k in K for x in G for y in G for z in T)
    raise ValueError(f"unknown frame rule {rule!r} (valid: {', '.join(FRAME_RULES)})")


def equation_holds(A: FiniteAlgebra, equation: str) -> bool:
    """One equation from e, c, i, o, !i, !c, !e, !a1, !a2, tested on its own."""
    base = "Interior0" if A.zero is not None else "Interior"
    if A.bang is None:
        base = "RLUG0" if A.zero is not None else "RLUG"
    return check_class(A, AlgebraClass(base, frozenset({equation}))).ok


def rule_matches_equation(F: Frame, rule: str, Fp: Optional[FPlusAlgebra] = None) -> bool:
    Fp = Fp or frame_plus(F)
    return check_frame_rule(F, rule) == equation_holds(Fp.algebra, RULE_EQUATION[rule])


# -------------------------
# Text format
# -------------------------
def frame_to_text(F: Frame) -> str:
    lines = [f"n={F.g}", "prod:"]
    lines.extend(" ".join(map(str, row)) for row in F.prod)
    lines.append(f"one={F.eps}")
    lines.append(f"T={F.t}")
    lines.append("N:")
    lines.extend("".join("1" if F.n(x, z) else "0" for z in range(F.t)) for x in range(F.g))
    lines.append("K:")
    lines.append(" ".join(map(str, bits(F.k))))
    lines.append("lres:")
    lines.extend(" ".join(map(str, row)) for row in F.lres)
    lines.append("rres:")
    lines.extend(" ".join(map(str, row)) for row in F.rres)
    if F.eps_t is not None:
        lines.append(f"eps_t={F.eps_t}")
    return "\n".join(lines) + "\n"


def frame_from_text(text: str) -> Frame:
    # N: rows are bit strings, so read them before the integer sections
    raw_rows: List[str] = []
    kept: List[str] = []
    in_n = False
    for line in text.splitlines():
        s = line.strip()
        if s == "N:":
            in_n = True
            continue
        if in_n and s and set(s) <= {"0", "1"} and " " not in s:
            raw_rows.append(s)
            continue
        in_n = False
        kept.append(line)
    scalars, rows = _parse_sections("\n".join(kept))
    g = _int_scalar(scalars, "n")
    t = _int_scalar(scalars, "T")
    eps = _int_scalar(scalars, "one", g)
    eps_t = _int_scalar(scalars, "eps_t", t) if "eps_t" in scalars else None
    if len(raw_rows) != g or any(len(r) != t for r in raw_rows):
        raise AlgebraFormatError(f"N: must be {g} rows of {t} bits")
    for name, shape in (("prod", (g, g, g)), ("lres", (g, t, t)), ("rres", (t, g, t))):
        r = rows.get(name)
        if r is None or len(r) != shape[0] or any(len(row) != shape[1] for row in r):
            raise AlgebraFormatError(f"{name}: must be {shape[0]} rows of {shape[1]} entries")
        if any(not 0 <= v < shape[2] for row in r for v in row):
            raise AlgebraFormatError(f"{name}: entry out of range")
    members = rows.get("K", [[]])
    k = mask_of(members[0] if members else [])
    rel = tuple(mask_of(z for z, ch in enumerate(r) if ch == "1") for r in raw_rows)
    F = Frame(g, _freeze(rows["prod"]), eps, t, rel, _freeze(rows["lres"]), _freeze(rows["rres"]), k, eps_t)
    F.validate()
    return F
