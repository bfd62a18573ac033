"""Explicit generators: O'Keefe hooked Skolem pairs, the Skolem cyclic STS,
XOR-based Steiner systems, the circle one-factorization and the quadrupling
construction that turns an SQS(m) into an SQS(4m) with a long cyclic-good
sequencing.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .designs import BlockSystem, Kind, build_system
from .goodness import Sequencing


class ConstructionError(Exception):
    pass


class BadResidue(ConstructionError):
    pass


class OddOrder(ConstructionError):
    pass


class InvalidBase(ConstructionError):
    pass


class EmptyUniverse(ConstructionError):
    pass


@dataclass(frozen=True)
class SkolemPairs:
    """A hooked Skolem sequence of order m: a partition of
    {1..2m-1} u {2m+1} into pairs (a_i, b_i) with b_i - a_i = i."""

    m: int
    pairs: tuple[tuple[int, int], ...]  # pairs[i-1] = (a_i, b_i)

    def b(self, i: int) -> int:
        return self.pairs[i - 1][1]

    def ground_set(self) -> set[int]:
        return {x for p in self.pairs for x in p}


def okeefe_pairs(m: int) -> SkolemPairs:
    """O'Keefe's hooked Skolem sequence of order m = 4k+2, re-indexed so that
    pair i has difference i.

    The rows of the construction, writing k = (m-2)/4:

        (r, 4k+2-r)        r = 1..2k        differences 2, 4, ..., 4k
        (2k+1, 6k+2)                        difference 4k+1
        (4k+2, 6k+3)                        difference 2k+1
        (4k+3, 8k+5)                        difference 4k+2 (the hook 2m+1)
        (4k+3+r, 8k+4-r)   r = 1..k-1       differences 2k+3, ..., 4k-1
        (5k+2+r, 7k+3-r)   r = 1..k-1       differences 3, 5, ..., 2k-1
        (7k+3, 7k+4)                        difference 1
    """
    if m % 4 != 2 or m < 6:
        raise BadResidue(f"need m = 4k+2 with k >= 1, got m={m}")
    k = (m - 2) // 4
    rows: list[tuple[int, int]] = []
    rows += [(r, 4 * k + 2 - r) for r in range(1, 2 * k + 1)]
    rows.append((2 * k + 1, 6 * k + 2))
    rows.append((4 * k + 2, 6 * k + 3))
    rows.append((4 * k + 3, 8 * k + 5))
    rows += [(4 * k + 3 + r, 8 * k + 4 - r) for r in range(1, k)]
    rows += [(5 * k + 2 + r, 7 * k + 3 - r) for r in range(1, k)]
    rows.append((7 * k + 3, 7 * k + 4))

    by_diff: dict[int, tuple[int, int]] = {}
    for a, b in rows:
        d = b - a
        if d in by_diff:
            raise ConstructionError(f"difference {d} produced twice")
        by_diff[d] = (a, b)
    if sorted(by_diff) != list(range(1, m + 1)):
        raise ConstructionError("differences do not cover 1..m")
    return SkolemPairs(m, tuple(by_diff[i] for i in range(1, m + 1)))


def skolem_sts(m: int) -> tuple[BlockSystem, Sequencing]:
    """Skolem's cyclic STS on Z_{6m+1} from a hooked Skolem sequence: blocks
    {x, x+i, x+m+b_i} for all x and i = 1..m, with the natural sequencing.

    Every b_i >= 2k+2, which is why the natural ordering 0,1,...,6m is
    cyclically (n+3)/4-good.
    """
    sk = okeefe_pairs(m)
    n = 6 * m + 1
    blocks = []
    for i in range(1, m + 1):
        bi = sk.b(i)
        for x in range(n):
            blocks.append(((x) % n, (x + i) % n, (x + m + bi) % n))
    sys_ = build_system(Kind.STS, n, blocks=blocks)
    return sys_, Sequencing.identity(n)


def hamming_sts(r: int) -> BlockSystem:
    """The STS on the 2^r - 1 nonzero binary r-vectors whose blocks are the
    XOR-closed triples.  Point id p stands for the vector with value p+1."""
    if r < 2:
        raise ConstructionError(f"need r >= 2, got {r}")
    n = 2 ** r - 1
    blocks = []
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            c = a ^ b
            if c > b:
                blocks.append((a - 1, b - 1, c - 1))
    return build_system(Kind.STS, n, blocks=blocks)


def boolean_sqs(r: int) -> BlockSystem:
    """The SQS on all 2^r binary r-vectors whose blocks are the quadruples
    with XOR zero."""
    if r < 2:
        raise ConstructionError(f"need r >= 2, got {r}")
    n = 2 ** r
    blocks = []
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                d = a ^ b ^ c
                if d > c:
                    blocks.append((a, b, c, d))
    return build_system(Kind.SQS, n, blocks=blocks)


@dataclass(frozen=True)
class OneFactorization:
    """A partition of the edges of K_m into m-1 perfect matchings."""

    m: int
    factors: tuple[tuple[tuple[int, int], ...], ...]  # factors[i-1] = matching i

    def factor(self, i: int) -> tuple[tuple[int, int], ...]:
        return self.factors[i - 1]


def circle_one_factorization(m: int) -> OneFactorization:
    """Round-robin (circle method) one-factorization of K_m, m even.

    Factor i (i = 1..m-1) pairs the hub m-1 with i-1 and pairs
    (i-1+j, i-1-j) mod m-1 for j = 1..m/2-1.
    """
    if m % 2 != 0 or m < 2:
        raise OddOrder(f"need even m >= 2, got {m}")
    mm = m - 1
    factors = []
    for i in range(1, m):
        edges = [(i - 1, m - 1)]
        for j in range(1, m // 2):
            u = (i - 1 + j) % mm
            v = (i - 1 - j) % mm
            edges.append((min(u, v), max(u, v)))
        factors.append(tuple(sorted(edges)))
    return OneFactorization(m, tuple(factors))


def sqs_quadruple(base: BlockSystem) -> tuple[BlockSystem, Sequencing]:
    """Quadruple an SQS(m) into an SQS(4m) whose natural ordering is
    cyclically (m+1)-good.

    V is split into four consecutive copies V_1..V_4 of Z_m; the table below
    gives the twelve block families (F is the circle one-factorization of
    K_m, with factor index i-j reduced mod m into 1..m-1):

        {x, y, z} in V_1, w in V_3          for each base block, each w
        {x, y, z} in V_2, w in V_4
        w in V_1, {x, y, z} in V_3
        w in V_2, {x, y, z} in V_4
        {a, b} in V_1 and in V_3            unordered pairs a != b
        {a, b} in V_2 and in V_4
        i in V_1, {u,v} in V_2, j in V_3    ordered (i, j), {u,v} in F_{i-j}
        i in V_2, {u,v} in V_3, j in V_4
        j in V_1, i in V_3, {u,v} in V_4
        {u,v} in V_1, j in V_2, i in V_4
        r in V_1 and V_3, s in V_2 and V_4  ordered (r, s), r != s
        r in all four copies

    No block lies inside V_i u V_{i+1} (cyclically), so no cyclic window of
    m+1 consecutive points contains one.
    """
    if base.kind is not Kind.SQS:
        raise InvalidBase("base must be an SQS")
    m = base.n
    if m % 2 != 0:
        raise InvalidBase(f"base order must be even, got {m}")
    of = circle_one_factorization(m)
    n = 4 * m
    V = [lambda x, o=off: o + x for off in (0, m, 2 * m, 3 * m)]
    v1, v2, v3, v4 = V

    blocks: list[tuple[int, int, int, int]] = []
    for blk in base.blocks:
        for w in blk.points:
            x, y, z = sorted(set(blk.points) - {w})
            blocks.append((v1(x), v1(y), v1(z), v3(w)))
            blocks.append((v2(x), v2(y), v2(z), v4(w)))
            blocks.append((v1(w), v3(x), v3(y), v3(z)))
            blocks.append((v2(w), v4(x), v4(y), v4(z)))
    for a, b in itertools.combinations(range(m), 2):
        blocks.append((v1(a), v1(b), v3(a), v3(b)))
        blocks.append((v2(a), v2(b), v4(a), v4(b)))
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            for u, v in of.factor((i - j) % m):
                blocks.append((v1(i), v2(u), v2(v), v3(j)))
                blocks.append((v2(i), v3(u), v3(v), v4(j)))
                blocks.append((v1(j), v3(i), v4(u), v4(v)))
                blocks.append((v1(u), v1(v), v2(j), v4(i)))
    for r in range(m):
        for s in range(m):
            if r != s:
                blocks.append((v1(r), v2(s), v3(r), v4(s)))
    for r in range(m):
        blocks.append((v1(r), v2(r), v3(r), v4(r)))

    sys_ = build_system(Kind.SQS, n, blocks=blocks)
    return sys_, Sequencing.identity(n)


def natural_sequencing(n: int) -> Sequencing:
    """The identity ordering 0, 1, ..., n-1."""
    if n < 1:
        raise EmptyUniverse(f"need n >= 1, got {n}")
    return Sequencing.identity(n)
