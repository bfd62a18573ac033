"""Block systems: (partial) Steiner triple systems, quadruple systems,
Mendelsohn/directed triple systems and general block designs.

Points are dense integers 0..n-1.  A system is immutable after construction
and indexes every proper subset of each block, so "which blocks complete this
partial window" is a dictionary lookup.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence


class Kind(str, Enum):
    PSTS = "PSTS"
    STS = "STS"
    SQS = "SQS"
    MTS = "MTS"
    DTS = "DTS"
    BD = "BD"

    @property
    def directed(self) -> bool:
        return self in (Kind.MTS, Kind.DTS)


# (t, k, lambda) fixed by the kind; BD supplies its own.
_FIXED_PARAMS = {
    Kind.PSTS: (2, 3, 1),
    Kind.STS: (2, 3, 1),
    Kind.SQS: (3, 4, 1),
    Kind.MTS: (2, 3, 1),
    Kind.DTS: (2, 3, 1),
}


class DesignError(Exception):
    """Base class for block-system construction and query errors."""


class PointOutOfRange(DesignError):
    pass


class RepeatedPointInBlock(DesignError):
    pass


class DuplicateBlock(DesignError):
    pass


class SubsetTooLarge(DesignError):
    pass


class UnsupportedKind(DesignError):
    pass


class InvalidSystem(DesignError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        head = report.violations[:3]
        super().__init__(f"system invalid; first violations: {head}")


@dataclass(frozen=True, order=True)
class Block:
    """A block.  Unordered blocks store points ascending; MTS blocks store the
    rotation with the minimum id first; DTS blocks keep the transitive order."""

    points: tuple[int, ...]
    ordered: bool = False

    @property
    def point_set(self) -> frozenset[int]:
        return frozenset(self.points)

    def __repr__(self):
        inner = ",".join(map(str, self.points))
        return f"({inner})" if self.ordered else f"{{{inner}}}"


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[tuple[tuple[int, ...], int, int], ...]
    # each violation: (subset or directed edge, multiplicity found, multiplicity required)


def _canonical_block(kind: Kind, pts: Sequence[int], n: int, k: int) -> Block:
    pts = tuple(int(p) for p in pts)
    if len(pts) != k:
        raise RepeatedPointInBlock(f"block {pts} must have exactly {k} points")
    if len(set(pts)) != k:
        raise RepeatedPointInBlock(f"repeated point in block {pts}")
    for p in pts:
        if not 0 <= p < n:
            raise PointOutOfRange(f"point {p} outside [0, {n})")
    if kind is Kind.DTS:
        return Block(pts, ordered=True)
    if kind is Kind.MTS:
        i = pts.index(min(pts))
        return Block(pts[i:] + pts[:i], ordered=True)
    return Block(tuple(sorted(pts)), ordered=False)


class BlockSystem:
    """Immutable design of any supported kind, with completion indexes."""

    def __init__(self, kind: Kind, n: int, t: int, k: int, lam: int,
                 blocks: Sequence[Block]):
        self.kind = kind
        self.n = n
        self.t = t
        self.k = k
        self.lam = lam
        self.blocks: tuple[Block, ...] = tuple(blocks)
        self._build_indexes()

    def _build_indexes(self) -> None:
        k = self.k
        self._point_blocks: dict[int, list[Block]] = {}
        self._block_point_sets: frozenset[frozenset[int]] = frozenset(
            b.point_set for b in self.blocks)
        # every proper non-empty subset of every block -> blocks through it
        subset_index: dict[frozenset[int], list[Block]] = {}
        for b in self.blocks:
            for p in b.points:
                self._point_blocks.setdefault(p, []).append(b)
            for size in range(1, k):
                for sub in itertools.combinations(b.points, size):
                    subset_index.setdefault(frozenset(sub), []).append(b)
        self._subset_index = subset_index

        if self.kind.directed:
            seqs: set[tuple[int, ...]] = set()
            for b in self.blocks:
                seqs.update(self._expand_sequences(b))
            self._forbidden_seqs = frozenset(seqs)
            nxt: dict[tuple[int, int], set[int]] = {}
            prv: dict[tuple[int, int], set[int]] = {}
            mid: dict[tuple[int, int], set[int]] = {}
            pair_blocks: dict[tuple[int, int], list[Block]] = {}
            for b in self.blocks:
                for s in self._expand_sequences(b):
                    x, y, z = s
                    nxt.setdefault((x, y), set()).add(z)
                    prv.setdefault((y, z), set()).add(x)
                    mid.setdefault((x, z), set()).add(y)
                    for pair in ((x, y), (x, z), (y, z)):
                        lst = pair_blocks.setdefault(pair, [])
                        if b not in lst:
                            lst.append(b)
            self._next2 = {p: frozenset(v) for p, v in nxt.items()}
            self._prev2 = {p: frozenset(v) for p, v in prv.items()}
            self._mid2 = {p: frozenset(v) for p, v in mid.items()}
            self._ordered_pair_blocks = pair_blocks

    def _expand_sequences(self, b: Block) -> list[tuple[int, ...]]:
        """Forbidden sequences contributed by one block (3 rotations for MTS)."""
        if self.kind is Kind.MTS:
            x, y, z = b.points
            return [(x, y, z), (y, z, x), (z, x, y)]
        if self.kind is Kind.DTS:
            return [b.points]
        return []

    # -- queries ---------------------------------------------------------

    def is_block_set(self, pts: Iterable[int]) -> bool:
        return frozenset(pts) in self._block_point_sets

    def blocks_through(self, p: int) -> tuple[Block, ...]:
        return tuple(self._point_blocks.get(p, ()))

    def __repr__(self):
        return (f"BlockSystem({self.kind.value}, n={self.n}, "
                f"t={self.t}, k={self.k}, lambda={self.lam}, "
                f"{len(self.blocks)} blocks)")


def build_system(kind: Kind | str, n: int, t: int | None = None,
                 k: int | None = None, lam: int | None = None,
                 blocks: Iterable[Sequence[int]] = (),
                 validate: bool = True) -> BlockSystem:
    """Construct a validated BlockSystem.

    Unordered blocks are canonicalized ascending, MTS blocks rotated to put
    the minimum id first.  Duplicate blocks are rejected (multiplicities are
    not representable).  With validate=True (default) the kind's coverage
    invariant is checked and InvalidSystem raised on failure.
    """
    kind = Kind(kind)
    if kind is Kind.BD:
        if t is None or k is None or lam is None:
            raise UnsupportedKind("BD requires explicit t, k, lambda")
        if not (2 <= t < k):
            raise UnsupportedKind(f"BD needs 2 <= t < k, got t={t}, k={k}")
        if lam < 1:
            raise UnsupportedKind(f"BD needs lambda >= 1, got {lam}")
    else:
        ft, fk, fl = _FIXED_PARAMS[kind]
        t = ft if t is None else t
        k = fk if k is None else k
        lam = fl if lam is None else lam
        if (t, k) != (ft, fk) or lam != fl:
            raise UnsupportedKind(
                f"{kind.value} has fixed parameters t={ft}, k={fk}, lambda={fl}")
    if not 0 < k <= n:
        raise PointOutOfRange(f"need 0 < k <= n, got k={k}, n={n}")

    canon: list[Block] = []
    seen: set[tuple] = set()
    for pts in blocks:
        b = _canonical_block(kind, tuple(pts), n, k)
        key = b.points
        if key in seen:
            raise DuplicateBlock(f"duplicate block {b}")
        seen.add(key)
        canon.append(b)

    sys_ = BlockSystem(kind, n, t, k, lam, canon)
    if validate:
        report = validate_system(sys_)
        if not report.valid:
            raise InvalidSystem(report)
    return sys_


def validate_system(sys: BlockSystem) -> ValidationReport:
    """Exhaustively check the kind's coverage/intersection invariant.

    PSTS: each pair in at most one block.  STS: exactly one.  SQS: each
    3-subset exactly once.  BD: each t-subset exactly lambda times.
    MTS/DTS: each directed edge in at most one block.
    """
    violations: list[tuple[tuple[int, ...], int, int]] = []
    if sys.kind.directed:
        edge_count: dict[tuple[int, int], int] = {}
        for b in sys.blocks:
            if sys.kind is Kind.DTS:
                x, y, z = b.points
                edges = [(x, y), (x, z), (y, z)]
            else:
                x, y, z = b.points
                edges = [(x, y), (y, z), (z, x)]
            for e in edges:
                edge_count[e] = edge_count.get(e, 0) + 1
        for e, c in sorted(edge_count.items()):
            if c > 1:
                violations.append((e, c, 1))
        return ValidationReport(not violations, tuple(violations))

    exact = sys.kind in (Kind.STS, Kind.SQS, Kind.BD)
    required = sys.lam if sys.kind is Kind.BD else 1
    t = sys.t
    count: dict[tuple[int, ...], int] = {}
    for b in sys.blocks:
        for sub in itertools.combinations(b.points, t):
            count[sub] = count.get(sub, 0) + 1
    if exact:
        for sub in itertools.combinations(range(sys.n), t):
            c = count.get(sub, 0)
            if c != required:
                violations.append((sub, c, required))
    else:
        for sub, c in sorted(count.items()):
            if c > required:
                violations.append((sub, c, required))
    return ValidationReport(not violations, tuple(violations))


def completions(sys: BlockSystem, subset) -> list[Block]:
    """Blocks containing the given partial block.

    For unordered kinds `subset` is any collection of fewer than k distinct
    points.  For MTS/DTS pass an ordered tuple; a block qualifies when the
    tuple is an order-respecting subsequence of one of the block's forbidden
    sequences (any rotation, for MTS).
    """
    pts = tuple(subset)
    if len(set(pts)) != len(pts):
        raise RepeatedPointInBlock(f"subset {pts} has repeats")
    if len(pts) >= sys.k:
        raise SubsetTooLarge(f"subset of size {len(pts)} not below k={sys.k}")
    for p in pts:
        if not 0 <= p < sys.n:
            raise PointOutOfRange(f"point {p} outside [0, {sys.n})")
    if not pts:
        return list(sys.blocks)

    if not sys.kind.directed:
        return list(sys._subset_index.get(frozenset(pts), ()))

    if len(pts) == 1:
        return list(sys._point_blocks.get(pts[0], ()))
    # ordered pair: blocks whose expanded sequences contain it in order
    return list(sys._ordered_pair_blocks.get((pts[0], pts[1]), ()))
