"""Brute-force ground truth at desk scale: backtracking search for (cyclic)
ell-good sequencings, the exact maximum ell over all sequencings, and
exhaustive sequenceability.
"""
from __future__ import annotations

from typing import Callable, Optional, Sequence

from .designs import BlockSystem
from .goodness import Sequencing, first_violation, forbidden_next


class OracleError(Exception):
    pass


class TooLarge(OracleError):
    pass


def backtrack_sequencing(sys: BlockSystem, ell: int, cyclic: bool = False,
                         max_n: int = 16) -> Optional[Sequencing]:
    """Depth-first search for an (cyclic) ell-good sequencing, pruning
    prefixes whose next point is forbidden; None means proven non-existent."""
    n = sys.n
    if n > max_n:
        raise TooLarge(f"n={n} exceeds guard {max_n}")
    order: list[int] = []
    used = [False] * n

    def extend() -> bool:
        if len(order) == n:
            if cyclic:
                seq = Sequencing.from_order(order)
                return first_violation(sys, seq, ell, cyclic=True) is None
            return True
        window = order[-(ell - 1):] if ell > 1 else []
        bad = forbidden_next(sys, window)
        for p in range(n):
            if used[p] or p in bad:
                continue
            used[p] = True
            order.append(p)
            if extend():
                return True
            order.pop()
            used[p] = False
        return False

    if extend():
        return Sequencing.from_order(order)
    return None


def oracle_max_ell(sys: BlockSystem, cyclic: bool = False,
                   max_n: int = 12) -> int:
    """Exact maximum ell over all sequencings, by binary search on ell with
    backtrack_sequencing as the witness finder.  Any permutation is
    (k-1)-good; cyclic ell is capped at n-1."""
    n = sys.n
    if n > max_n:
        raise TooLarge(f"n={n} exceeds guard {max_n}")
    lo = sys.k - 1
    hi = n - 1 if cyclic else n
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if backtrack_sequencing(sys, mid, cyclic, max_n=max_n) is not None:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _segment_partitions(blocks: Sequence[frozenset[int]],
                        target: frozenset[int]) -> bool:
    if not target:
        return True
    p = min(target)
    for b in blocks:
        if p in b and b <= target:
            if _segment_partitions(blocks, target - b):
                return True
    return False


def find_sequenceable_order(
        psts: BlockSystem,
        segment_ok: Optional[Callable[[frozenset[int]], bool]] = None,
        max_n: int = 9) -> Optional[Sequencing]:
    """Backtracking over orderings, pruning a placement the moment a segment
    ending at it is a disjoint union of blocks.

    segment_ok(window_set) -> True when the window is NOT a disjoint union;
    defaults to plain exact cover.  Returns a witness or None (exhausted).
    """
    n = psts.n
    if n > max_n:
        raise TooLarge(f"n={n} exceeds guard {max_n}")
    blocks = [b.point_set for b in psts.blocks]
    if segment_ok is None:
        memo: dict[frozenset[int], bool] = {}

        def segment_ok(window: frozenset[int]) -> bool:
            if window not in memo:
                memo[window] = not _segment_partitions(blocks, window)
            return memo[window]

    order: list[int] = []
    used = [False] * n

    def extend() -> bool:
        if len(order) == n:
            return True
        for p in range(n):
            if used[p]:
                continue
            order.append(p)
            i = len(order)
            ok = True
            for r in range(1, i // 3 + 1):
                if not segment_ok(frozenset(order[i - 3 * r:i])):
                    ok = False
                    break
            if ok:
                used[p] = True
                if extend():
                    return True
                used[p] = False
            order.pop()
        return False

    if extend():
        return Sequencing.from_order(order)
    return None


def brute_sequenceable(psts: BlockSystem, max_n: int = 9) -> bool:
    """True iff some ordering of the points has no segment of length 3r equal
    to r pairwise disjoint blocks; exhaustive with segment pruning."""
    return find_sequenceable_order(psts, max_n=max_n) is not None
