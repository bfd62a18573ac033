"""Verification of the block-avoiding window property.

A sequencing is ell-good when no segment of length at most ell contains a
block: as a point subset for unordered kinds, as an order-respecting
subsequence for DTS, and as a subsequence of any rotation for MTS.  The
cyclic variant also scans segments that wrap around the ends.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .designs import Block, BlockSystem


@dataclass(frozen=True)
class Sequencing:
    """A permutation of the points 0..n-1 with inverse position lookup."""

    order: tuple[int, ...]
    pos: tuple[int, ...]

    @classmethod
    def from_order(cls, order: Iterable[int]) -> "Sequencing":
        order = tuple(order)
        n = len(order)
        if sorted(order) != list(range(n)):
            raise ValueError("order is not a permutation of 0..n-1")
        pos = [0] * n
        for i, p in enumerate(order):
            pos[p] = i
        return cls(order, tuple(pos))

    @classmethod
    def identity(cls, n: int) -> "Sequencing":
        r = tuple(range(n))
        return cls(r, r)

    def __len__(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class Violation:
    window_start: int
    window_len: int
    block: Block
    positions: tuple[int, ...]  # sequence positions of the occurrence, in order


def window_is_good(sys: BlockSystem, window: Sequence[int]) -> bool:
    """True iff no block of sys occurs inside the window."""
    w = tuple(window)
    if len(w) < sys.k:
        return True
    if sys.kind.directed:
        forbidden = sys._forbidden_seqs
        for trip in itertools.combinations(w, 3):
            if trip in forbidden:
                return False
        return True
    # a block inside the window leaves all its (k-1)-subsets there too
    wset = frozenset(w)
    index = sys._subset_index
    for sub in itertools.combinations(sorted(wset), sys.k - 1):
        for b in index.get(frozenset(sub), ()):
            if b.point_set <= wset:
                return False
    return True


def sequence_is_ell_good(sys: BlockSystem, points: Sequence[int], ell: int) -> bool:
    """Every segment of `points` of length <= ell avoids the blocks."""
    pts = list(points)
    m = len(pts)
    width = min(ell, m)
    return all(window_is_good(sys, pts[i:i + width]) for i in range(m - width + 1))


def forbidden_next(sys: BlockSystem, window: Sequence[int]) -> set[int]:
    """Points z such that window + z is no longer good.

    For unordered kinds these are the completions of (k-1)-subsets of the
    window; for DTS/MTS the completions of ordered pairs of the window.
    """
    w = tuple(window)
    out: set[int] = set()
    if sys.kind.directed:
        for i, j in itertools.combinations(range(len(w)), 2):
            out |= sys._next2.get((w[i], w[j]), frozenset())
        return out - set(w)
    wset = set(w)
    if len(w) < sys.k - 1:
        return out
    for sub in itertools.combinations(sorted(wset), sys.k - 1):
        for b in sys._subset_index.get(frozenset(sub), ()):
            (z,) = b.point_set - frozenset(sub)
            if z not in wset:
                out.add(z)
    return out


def forbidden_prev(sys: BlockSystem, window: Sequence[int]) -> set[int]:
    """Points z such that z + window is no longer good (mirror of forbidden_next)."""
    w = tuple(window)
    if not sys.kind.directed:
        return forbidden_next(sys, w)
    out: set[int] = set()
    for i, j in itertools.combinations(range(len(w)), 2):
        out |= sys._prev2.get((w[i], w[j]), frozenset())
    return out - set(w)


def _min_occurrence(sys: BlockSystem, seq: Sequencing, b: Block,
                    cyclic: bool) -> Optional[tuple[int, int, tuple[int, ...]]]:
    """Minimal-span occurrence of block b in seq: (start, span, positions)."""
    n = len(seq)
    pos = seq.pos
    if not sys.kind.directed:
        ps = sorted(pos[p] for p in b.points)
        if not cyclic:
            span = ps[-1] - ps[0] + 1
            return ps[0], span, tuple(ps)
        # the minimal cyclic window starts just after the widest gap
        best = None
        kk = len(ps)
        for i in range(kk):
            gap = ps[i + 1] - ps[i] if i + 1 < kk else ps[0] + n - ps[-1]
            start = ps[(i + 1) % kk]
            span = n - gap + 1
            if best is None or (span, start) < (best[1], best[0]):
                best = (start, span)
        start, span = best
        ordered = sorted(b.points, key=lambda p: (pos[p] - start) % n)
        return start, span, tuple(pos[p] for p in ordered)

    # directed kinds: the occurrence must respect the stored order
    best = None
    for s in sys._expand_sequences(b):
        p = [pos[x] for x in s]
        if not cyclic:
            if p[0] < p[1] < p[2]:
                cand = (p[0], p[2] - p[0] + 1, tuple(p))
                if best is None or (cand[1], cand[0]) < (best[1], best[0]):
                    best = cand
        else:
            o1 = (p[1] - p[0]) % n
            o2 = (p[2] - p[0]) % n
            if 0 < o1 < o2:
                cand = (p[0], o2 + 1, tuple(p))
                if best is None or (cand[1], cand[0]) < (best[1], best[0]):
                    best = cand
    return best


def first_violation(sys: BlockSystem, seq: Sequencing, ell: int,
                    cyclic: bool = False, workers: int = 1) -> Optional[Violation]:
    """The lexicographically least (start, length) block occurrence spanning
    at most ell positions, or None when the sequencing is (cyclic) ell-good."""
    if ell < 1:
        raise ValueError("ell must be positive")
    n = len(seq)
    eff = min(ell, n)

    def scan(blocks) -> Optional[Violation]:
        best: Optional[Violation] = None
        for b in blocks:
            occ = _min_occurrence(sys, seq, b, cyclic)
            if occ is None:
                continue
            start, span, positions = occ
            if span > eff:
                continue
            v = Violation(start, span, b, positions)
            if best is None or (v.window_start, v.window_len, v.block.points) < \
                    (best.window_start, best.window_len, best.block.points):
                best = v
        return best

    if workers <= 1 or len(sys.blocks) < 64:
        return scan(sys.blocks)
    chunks = [sys.blocks[i::workers] for i in range(workers)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = [r for r in pool.map(scan, chunks) if r is not None]
    if not results:
        return None
    return min(results, key=lambda v: (v.window_start, v.window_len, v.block.points))


def max_good_ell(sys: BlockSystem, seq: Sequencing, cyclic: bool = False) -> int:
    """Largest ell for which seq is (cyclic) ell-good.

    Computed from the minimal occurrence span over all blocks; capped at n
    (cyclic: n-1, since the full cyclic window contains every block).
    """
    n = len(seq)
    cap = n - 1 if cyclic else n
    best = cap + 1
    for b in sys.blocks:
        occ = _min_occurrence(sys, seq, b, cyclic)
        if occ is not None:
            best = min(best, occ[1])
    return min(best - 1, cap)
