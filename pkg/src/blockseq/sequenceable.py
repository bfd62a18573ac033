"""Sequenceable partial Steiner triple systems.

A PSTS is sequenceable when some ordering has no segment of length 3r equal
to the points of r pairwise disjoint blocks.  For a system with at most k
disjoint blocks the binary-pattern construction places the 3k block points
sparsely enough that long segments are starved of them, and a greedy choice
of the remaining points protects the short segments.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Optional, Sequence

from .designs import BlockSystem, Kind
from .goodness import Sequencing


class SequenceableError(Exception):
    pass


class TooShort(SequenceableError):
    pass


class TooLargeForExact(SequenceableError):
    pass


class GreedyStuck(SequenceableError):
    pass


def _icbrt(x: int) -> int:
    """Integer cube root (floor)."""
    if x < 0:
        raise ValueError("negative")
    r = round(x ** (1 / 3))
    while r ** 3 > x:
        r -= 1
    while (r + 1) ** 3 <= x:
        r += 1
    return r


def alspach_threshold(k: int) -> int:
    """Smallest n with n > 9k + 22 k^(2/3) + 10, the sufficient point count
    for sequenceability with k disjoint blocks.  Exact: floor(22 k^(2/3)) is
    the integer cube root of 22^3 k^2."""
    if k < 1:
        raise ValueError("k must be positive")
    return 9 * k + 11 + _icbrt(10648 * k * k)


@dataclass(frozen=True)
class PatternSeq:
    """Binary placement pattern: zeros mark positions of block points."""

    bits: str
    k: int
    ellp: int  # floor(k^(1/3))
    n: int

    def zero_positions(self) -> list[int]:
        return [i for i, b in enumerate(self.bits) if b == "0"]


def pattern_sequence(k: int, n: int) -> PatternSeq:
    """Concatenate floor(3k/l) copies of (011)^(l-1) 0111 with l =
    floor(k^(1/3)), pad with 011 until 3k zeros appear, then with ones to
    length n.  Zero runs are then separated by ones-runs of length 2 or 3,
    every l-th run having length 3."""
    if k < 1:
        raise ValueError("k must be positive")
    ellp = _icbrt(k)
    blk = "011" * (ellp - 1) + "0111"
    copies = (3 * k) // ellp
    s = blk * copies + "011" * (3 * k % ellp)
    main_len = 9 * k + copies
    assert len(s) == main_len and s.count("0") == 3 * k
    if n < main_len:
        raise TooShort(f"need n >= {main_len}, got {n}")
    s += "1" * (n - main_len)
    return PatternSeq(s, k, ellp, n)


def _main_part_length(p: PatternSeq) -> int:
    return 9 * p.k + (3 * p.k) // p.ellp


def pattern_properties_check(p: PatternSeq) -> bool:
    """Verify the three segment properties of the pattern over all segments:

    (a) every segment of length 3r has at most r zeros;
    (b) segments of length 3r ending past the main part have at most r-1;
    (c) segments of length 3r with r >= 3l+1 have at most r-1.

    A length-3r segment with too many zeros contains q consecutive zeros of
    span <= 3(q-1) (for (a), q = r+1) or <= 3q - 1 (for (c), q = r), so the
    checks reduce to gap sums over the zero positions; (b) reduces to the
    worst window ending just past the main part.
    """
    zeros = p.zero_positions()
    if len(zeros) != 3 * p.k:
        return False
    # (a): q zeros span >= 3(q-1)+1, i.e. consecutive gaps are all >= 3
    gaps = [b - a for a, b in zip(zeros, zeros[1:])]
    if any(g < 3 for g in gaps):
        return False
    # (c): every window of 3*ellp consecutive gaps must contain >= 3 gaps of
    # length 4 (excess 1), so r >= 3*ellp+1 zeros span > 3r - 1
    w = 3 * p.ellp
    excess = [g - 3 for g in gaps]
    if len(excess) >= w:
        run = sum(excess[:w])
        if run < 3:
            return False
        for i in range(len(excess) - w):
            run += excess[i + w] - excess[i]
            if run < 3:
                return False
    # (b): for each r, at most r-1 zeros in the window of length 3r ending
    # just past the main part (later windows only lose zeros)
    main_len = _main_part_length(p)
    end = main_len + 1  # 1-indexed end position; window covers [end-3r+1, end]
    for r in range(1, p.n // 3 + 1):
        lo = end - 3 * r + 1
        cnt = bisect_right(zeros, end - 1) - bisect_left(zeros, lo - 1)
        if cnt > r - 1:
            return False
    return True


def max_disjoint_blocks(psts: BlockSystem,
                        max_blocks: int = 60) -> tuple[int, list[int]]:
    """Exact maximum family of pairwise disjoint blocks, by backtracking over
    blocks in order with a remaining-count prune; returns (k, witness point
    union sorted)."""
    if psts.kind not in (Kind.PSTS, Kind.STS):
        raise SequenceableError("expects a (partial) Steiner triple system")
    if len(psts.blocks) > max_blocks:
        raise TooLargeForExact(f"{len(psts.blocks)} blocks > {max_blocks}")
    blocks = [b.point_set for b in psts.blocks]
    best: list[int] = []
    chosen: list[int] = []

    def extend(start: int, used: frozenset[int]) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = chosen.copy()
        if len(chosen) + (len(blocks) - start) <= len(best):
            return
        for i in range(start, len(blocks)):
            if not blocks[i] & used:
                chosen.append(i)
                extend(i + 1, used | blocks[i])
                chosen.pop()

    extend(0, frozenset())
    witness = sorted(p for i in best for p in blocks[i])
    return len(best), witness


@dataclass(frozen=True)
class SequenceableInstance:
    """A PSTS with its maximum-disjoint-block witness: X is the union of a
    maximum family of k pairwise disjoint blocks, Y the rest of the points."""

    system: BlockSystem
    k: int
    X: tuple[int, ...]
    Y: tuple[int, ...]

    @classmethod
    def from_system(cls, psts: BlockSystem) -> "SequenceableInstance":
        k, X = max_disjoint_blocks(psts)
        Y = sorted(set(range(psts.n)) - set(X))
        return cls(psts, k, tuple(X), tuple(Y))


def alspach_sequencing(inst: SequenceableInstance, n: int) -> Sequencing:
    """Greedy sequenceable ordering: X points go to the pattern's zero
    positions in order; early Y points are chosen to avoid blocks with the
    recently used window (the last 3l X points plus the next, and the last
    6l Y points); late Y points are arbitrary."""
    psts = inst.system
    if psts.n != n:
        raise SequenceableError(f"instance has {psts.n} points, not {n}")
    if inst.k == 0:
        return Sequencing.identity(n)
    pat = pattern_sequence(inst.k, n)
    main_len = _main_part_length(pat)
    ellp = pat.ellp
    X = list(inst.X)
    y_unused = sorted(inst.Y)
    y_used: list[int] = []
    order: list[int] = []
    j = 0  # zeros consumed
    for i, bit in enumerate(pat.bits, start=1):
        if bit == "0":
            order.append(X[j])
            j += 1
            continue
        if i > main_len:
            order.append(y_unused.pop(0))
            continue
        xlo = max(1, j - 3 * ellp + 1)
        xhi = min(3 * inst.k, j + 1)
        xprime = set(X[xlo - 1:xhi])
        yprime = set(y_used[-6 * ellp:])
        y = None
        for cand in y_unused:
            ok = True
            for b in psts.blocks_through(cand):
                rest = b.point_set - {cand}
                if rest & xprime and rest & yprime:
                    ok = False
                    break
            if ok:
                y = cand
                break
        if y is None:
            raise GreedyStuck(f"no safe filler at position {i}")
        y_unused.remove(y)
        order.append(y)
        y_used.append(y)
    return Sequencing.from_order(order)


def _cover_exactly(block_sets: Sequence[frozenset[int]],
                   target: frozenset[int]) -> bool:
    """Can target be partitioned into blocks from block_sets?  Backtracking
    on the smallest uncovered point."""
    if not target:
        return True
    p = min(target)
    for b in block_sets:
        if p in b and b <= target:
            if _cover_exactly(block_sets, target - b):
                return True
    return False


def verify_sequenceable(psts: BlockSystem, seq: Sequencing,
                        prune_by_witness: bool = True
                        ) -> tuple[bool, Optional[tuple[int, int]]]:
    """Check every segment of length 3r against being a union of r disjoint
    blocks; returns (True, None) or (False, (start, r)) for the first bad
    segment.

    With prune_by_witness, segments holding fewer than r points of a
    maximum-disjoint-block witness X are skipped: one of the r blocks would
    avoid X entirely, contradicting X's maximality.
    """
    n = len(seq)
    blocks = [b.point_set for b in psts.blocks]
    xset: Optional[set[int]] = None
    if prune_by_witness and blocks:
        try:
            _, wit = max_disjoint_blocks(psts)
            xset = set(wit)
        except TooLargeForExact:
            xset = None
    prefix_x = [0] * (n + 1)
    if xset is not None:
        for i, p in enumerate(seq.order):
            prefix_x[i + 1] = prefix_x[i] + (1 if p in xset else 0)
    for r in range(1, n // 3 + 1):
        width = 3 * r
        for start in range(n - width + 1):
            if xset is not None and prefix_x[start + width] - prefix_x[start] < r:
                continue
            window = frozenset(seq.order[start:start + width])
            if _cover_exactly(blocks, window):
                return False, (start, r)
    return True, None
