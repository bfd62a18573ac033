"""Greedy sequencing engines.

The staged algorithm builds the start of the sequencing as segments with
unspecified gaps, banks every point that could poison a gap ("unfortunate"
points) into the tail, finishes the tail greedily, and only then fills the
gaps with the harmless leftovers.  The cyclic variant additionally bridges
the tail back to the first segment with a completion step.

Thresholds are the proven sufficient conditions on n; the engines run
below threshold too (relaxed mode) and report StageFailed when a greedy
choice set empties, which the thresholds rule out.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

from .designs import BlockSystem, Kind, UnsupportedKind
from .goodness import (Sequencing, first_violation, forbidden_next,
                       sequence_is_ell_good)


class SequencerError(Exception):
    pass


class ConstantsInconsistent(SequencerError):
    pass


class ThresholdNotMet(SequencerError):
    pass


class ReachabilityFailed(SequencerError):
    pass


class CompletionFailed(SequencerError):
    pass


class StageFailed(SequencerError):
    def __init__(self, stage: int | str, detail: str = ""):
        self.stage = stage
        self.detail = detail
        super().__init__(f"stage {stage} failed: {detail}")


@dataclass(frozen=True)
class PropertyConstants:
    """The extension-counting constants of a forbidden-sequence family:
    L-suffix, L'-prefix, K-insertion, (J, s)-reachability and
    (K', s')-completion."""

    L: int
    Lp: int
    K: int
    J: int
    s: int
    Kp: int
    sp: int
    symmetric: bool


def constants_for(kind: Kind | str, ell: int, t: int | None = None,
                  k: int | None = None, lam: int | None = None) -> PropertyConstants:
    """Extension-counting constants per family.

    Triple kinds: L = L' = K = C(ell-1, 2) (DTS: C(ell, 2)),
    J = C(ell-1, 2) + 2*ell, s = ell-1, K' = 3*C(ell-1, 2) + ell - 1.
    Designs with block size k: L = ceil(lam*C(ell-1, t)/C(k-1, t)),
    K = lam*C(2(ell-1), t), J = L + ell - 1 + lam*C(ell-1, t-1),
    K' = K + ell - 1.
    """
    kind = Kind(kind)
    if ell < 1:
        raise ValueError("ell must be positive")
    e1 = ell - 1
    if kind in (Kind.PSTS, Kind.STS, Kind.MTS, Kind.DTS):
        L = comb(ell, 2) if kind is Kind.DTS else comb(e1, 2)
        J = comb(e1, 2) + 2 * ell
        Kp = 3 * comb(e1, 2) + e1
        return PropertyConstants(L=L, Lp=L, K=L, J=J, s=e1, Kp=Kp, sp=e1,
                                 symmetric=kind is not Kind.DTS)
    if kind is Kind.SQS:
        t, k, lam = 3, 4, 1
    elif kind is Kind.BD:
        if t is None or k is None or lam is None:
            raise UnsupportedKind("BD constants need t, k, lambda")
    else:
        raise UnsupportedKind(str(kind))
    denom = comb(k - 1, t)
    L = -(-lam * comb(e1, t) // denom)
    K = lam * comb(2 * e1, t)
    J = L + e1 + lam * comb(e1, t - 1)
    return PropertyConstants(L=L, Lp=L, K=K, J=J, s=e1, Kp=K + e1, sp=e1,
                             symmetric=True)


def threshold_psts(ell: int) -> int:
    """Sufficient n for the four-stage algorithm on any partial STS:
    (2*ell + 3*C(ell-1,2)) * C(ell-1,2) + ell.  Every ordering is 1- and
    2-good, so the floor for ell < 3 is the block size."""
    if ell < 3:
        return 3
    L = comb(ell - 1, 2)
    return (2 * ell + 3 * L) * L + ell


def threshold_general(c: PropertyConstants, ell: int) -> int:
    """Sufficient n for an ell-good sequencing:
    ell*L + (L+L'+K)*L + s*L + J, with L' dropped for symmetric families."""
    mid = (c.L + c.K if c.symmetric else c.L + c.Lp + c.K) * c.L
    return ell * c.L + mid + c.s * c.L + c.J


def threshold_cyclic(c: PropertyConstants, ell: int) -> int:
    """Sufficient n for a cyclic ell-good sequencing:
    (K'-s')*ell + ell + (K'-s')*(L+L'+K) + (s-1)*L + J + K',
    with L' dropped for symmetric families."""
    if c.Kp < c.sp:
        raise ConstantsInconsistent(f"K'={c.Kp} < s'={c.sp}")
    d = c.Kp - c.sp
    mid = c.L + c.K if c.symmetric else c.L + c.Lp + c.K
    return d * ell + ell + d * mid + (c.s - 1) * c.L + c.J + c.Kp


def _window(tail: Sequence[int], ell: int) -> list[int]:
    return list(tail[-(ell - 1):]) if ell > 1 else []


def _pick(eligible: set[int], tie: str, rng: Optional[random.Random]) -> Optional[int]:
    if not eligible:
        return None
    if tie == "min":
        return min(eligible)
    return rng.choice(sorted(eligible))


def naive_greedy(sys: BlockSystem, ell: int, cyclic_check: bool = False,
                 tie: str = "min", seed: int | None = None) -> Optional[Sequencing]:
    """Append the least eligible point until done; None when stuck (the
    leftover points all poison the window) or, with cyclic_check, when the
    result fails the wrap-around windows."""
    rng = random.Random(seed) if tie == "random" else None
    order: list[int] = []
    unused = set(range(sys.n))
    while unused:
        bad = forbidden_next(sys, _window(order, ell))
        p = _pick(unused - bad, tie, rng)
        if p is None:
            return None
        order.append(p)
        unused.discard(p)
    seq = Sequencing.from_order(order)
    if cyclic_check and first_violation(sys, seq, ell, cyclic=True) is not None:
        return None
    return seq


def unfortunate_set(sys: BlockSystem, ell: int,
                    segments: Sequence[Sequence[int]]) -> set[int]:
    """Exact set of leftover points that cannot sit in any gap: y is
    unfortunate when y x^i, x^i y, or x^i y x^(i+1) stops being ell-good."""
    used = {p for seg in segments for p in seg}
    rest = set(range(sys.n)) - used
    out: set[int] = set()
    L = len(segments)
    for y in rest:
        bad = False
        for i in range(L):
            if not sequence_is_ell_good(sys, [y, *segments[i]], ell):
                bad = True
                break
        if not bad:
            for i in range(L - 1):
                if not sequence_is_ell_good(
                        sys, [*segments[i], y, *segments[i + 1]], ell):
                    bad = True
                    break
        if bad:
            out.add(y)
    return out


def _sandwich_unfortunate(sys: BlockSystem, ell: int,
                          segments: Sequence[Sequence[int]]) -> set[int]:
    """Unfortunate set for the cyclic engine, where every gap is interior:
    only the sandwich test x^i y x^(i+1) is needed."""
    used = {p for seg in segments for p in seg}
    rest = set(range(sys.n)) - used
    out: set[int] = set()
    for y in rest:
        for i in range(len(segments) - 1):
            if not sequence_is_ell_good(
                    sys, [*segments[i], y, *segments[i + 1]], ell):
                out.add(y)
                break
    return out


def _grow_good_prefix(sys: BlockSystem, ell: int, count: int, tie: str,
                      rng: Optional[random.Random], stage: int) -> list[int]:
    order: list[int] = []
    unused = set(range(sys.n))
    for _ in range(count):
        bad = forbidden_next(sys, _window(order, ell))
        p = _pick(unused - bad, tie, rng)
        if p is None:
            raise StageFailed(stage, f"no eligible point at length {len(order)}")
        order.append(p)
        unused.discard(p)
    return order


def _latent_completions(sys: BlockSystem, chosen: Sequence[int], u: int) -> set[int]:
    """Points w that would let the final target u close a block: some block
    contains u, w and k-2 of the already chosen filler points."""
    out: set[int] = set()
    if sys.kind.directed:
        for a in chosen:
            out |= sys._mid2.get((a, u), frozenset())
        return out
    base = {u}
    for subset in itertools.combinations(sorted(chosen), sys.k - 2):
        key = frozenset(base | set(subset))
        if len(key) != sys.k - 1:
            continue
        for b in sys._subset_index.get(key, ()):
            (w,) = b.point_set - key
            out.add(w)
    return out


def reachability_extend(sys: BlockSystem, ell: int, prefix_window: Sequence[int],
                        W: set[int], u: int,
                        tie: str = "min", rng: Optional[random.Random] = None,
                        s: int | None = None) -> list[int]:
    """Choose fillers w_1..w_s from W so that appending w_1..w_s, u after the
    prefix keeps the sequencing ell-good.

    Greedy conditions when picking w_i: the window stays good, and no block
    through u can complete inside the filler set."""
    s = ell - 1 if s is None else s
    chosen: list[int] = []
    ctx = list(prefix_window)
    for _ in range(s):
        bad = forbidden_next(sys, _window(ctx, ell))
        bad |= _latent_completions(sys, chosen, u)
        p = _pick((W - set(chosen) - {u}) - bad, tie, rng)
        if p is None:
            raise ReachabilityFailed(
                f"no filler available with |W|={len(W)} (< J means this is expected)")
        chosen.append(p)
        ctx.append(p)
    if u in forbidden_next(sys, _window(ctx, ell)):
        raise ReachabilityFailed("target still blocked after fillers")
    return chosen


def completion_bridge(sys: BlockSystem, ell: int, x_end: Sequence[int],
                      x_start: Sequence[int], X: set[int],
                      tie: str = "min", rng: Optional[random.Random] = None) -> list[int]:
    """Choose y_1..y_{ell-1} from X so that x_end + y + x_start is ell-good.

    Triple kinds pick y_i avoiding blocks with two earlier neighbours on
    either side and cross blocks {y_j, y_i, b}; block designs avoid any block
    through y_i meeting the trailing window W_i in k-1 points.
    """
    xe = list(x_end)
    xs = list(x_start)
    sp = ell - 1
    ys: list[int] = []
    for i in range(1, sp + 1):
        bad: set[int] = set()
        if sys.k == 3:
            left = xe[i - 1:] + ys            # x_i..x_{ell-1}, y_1..y_{i-1}
            right = xs[:i]                    # x'_1..x'_i
            bad |= _pairs_completions(sys, left)
            bad |= _pairs_completions(sys, right)
            for j, yj in enumerate(ys, start=1):
                for b in xs[:j]:
                    bad |= _third_points(sys, yj, b)
        else:
            Wi = set(xe[i - 1:]) | set(ys) | set(xs[:i])
            for sub in itertools.combinations(sorted(Wi), sys.k - 1):
                for blk in sys._subset_index.get(frozenset(sub), ()):
                    (w,) = blk.point_set - frozenset(sub)
                    bad.add(w)
        p = _pick(X - set(ys) - bad, tie, rng)
        if p is None:
            raise CompletionFailed(
                f"no bridge point available with |X|={len(X)} (< K' means this is expected)")
        ys.append(p)
    if not sequence_is_ell_good(sys, xe + ys + xs, ell):
        raise CompletionFailed("bridge check failed")
    return ys


def _pairs_completions(sys: BlockSystem, pts: Sequence[int]) -> set[int]:
    """Third points of blocks through any two of pts (point-set semantics,
    which over-approximates for the directed kinds)."""
    out: set[int] = set()
    for a, b in itertools.combinations(sorted(set(pts)), 2):
        out |= _third_points(sys, a, b)
    return out


def _third_points(sys: BlockSystem, a: int, b: int) -> set[int]:
    out: set[int] = set()
    for blk in sys._subset_index.get(frozenset((a, b)), ()):
        out |= blk.point_set - {a, b}
    return out


def staged_greedy(sys: BlockSystem, ell: int, tie: str = "min",
                  seed: int | None = None, strict: bool = False) -> Sequencing:
    """Four-stage ell-good sequencing construction.

    Stage 1 greedily builds L segments of length ell-1; the final shape is
    y_1 x^1 y_2 x^2 ... y_L x^L z, where the unfortunate points are forced
    into z (stage 2 greedily, stage 3 via reachability fillers), stage 4
    extends z until exactly L points remain, and those become the gaps.
    The result is re-verified before returning.
    """
    c = constants_for(sys.kind, ell, sys.t, sys.k, sys.lam)
    if strict and sys.n < threshold_general(c, ell):
        raise ThresholdNotMet(
            f"n={sys.n} below threshold {threshold_general(c, ell)}")
    rng = random.Random(seed) if tie == "random" else None
    L = c.L
    if L == 0:
        seq = naive_greedy(sys, ell, tie=tie, seed=seed)
        if seq is None:
            raise StageFailed(1, "naive fallback stuck")
        return seq
    if (ell - 1) * L + L > sys.n:
        raise StageFailed(1, f"n={sys.n} cannot hold {L} segments plus gaps")

    prefix = _grow_good_prefix(sys, ell, (ell - 1) * L, tie, rng, stage=1)
    segments = [prefix[j * (ell - 1):(j + 1) * (ell - 1)] for j in range(L)]

    U = unfortunate_set(sys, ell, segments)
    vprime = set(range(sys.n)) - set(prefix)
    tail = list(segments[-1])      # window context: x^L then z
    z: list[int] = []

    def append_point(p: int) -> None:
        tail.append(p)
        z.append(p)
        vprime_unused.discard(p)
        remaining_U.discard(p)

    vprime_unused = set(vprime)
    remaining_U = set(U)

    # Stage 2: bank unfortunate points until at most L remain.
    while len(remaining_U) > L:
        bad = forbidden_next(sys, _window(tail, ell))
        p = _pick(remaining_U - bad, tie, rng)
        if p is None:
            raise StageFailed(2, f"{len(remaining_U)} unfortunate points left")
        append_point(p)

    # Stage 3: reach each remaining unfortunate point through s fillers.
    while remaining_U:
        u = min(remaining_U)
        W = vprime_unused - {u}
        try:
            fillers = reachability_extend(sys, ell, _window(tail, ell), W, u,
                                          tie=tie, rng=rng, s=c.s)
        except ReachabilityFailed as exc:
            raise StageFailed(3, str(exc)) from exc
        for w in fillers:
            append_point(w)
        append_point(u)

    # Stage 4: extend until exactly L points remain; they become the gaps.
    while len(vprime_unused) > L:
        bad = forbidden_next(sys, _window(tail, ell))
        p = _pick(vprime_unused - bad, tie, rng)
        if p is None:
            raise StageFailed(4, f"{len(vprime_unused)} points left")
        append_point(p)

    gaps = sorted(vprime_unused)
    assert not (set(gaps) & U), "a gap point is unfortunate"
    order: list[int] = []
    for y, seg in zip(gaps, segments):
        order.append(y)
        order.extend(seg)
    order.extend(z)
    seq = Sequencing.from_order(order)
    v = first_violation(sys, seq, ell, cyclic=False)
    if v is not None:
        raise StageFailed("verify", f"violation {v}")
    return seq


def cyclic_staged_greedy(sys: BlockSystem, ell: int, tie: str = "min",
                         seed: int | None = None, strict: bool = False) -> Sequencing:
    """Five-stage cyclic ell-good sequencing construction.

    Stage 1 builds K'-s'+1 segments x^0..x^(K'-s'); stages 2-4 mirror the
    non-cyclic engine but stop stage 4 with exactly K' points unused; stage 5
    bridges the tail back to x^0 with a completion sequence y, the leftovers
    fill the gaps, and the output cycle
    x^0 y_1 x^1 ... y_(K'-s') x^(K'-s') z y is re-verified cyclically.
    """
    c = constants_for(sys.kind, ell, sys.t, sys.k, sys.lam)
    if c.Kp < c.sp:
        raise ConstantsInconsistent(f"K'={c.Kp} < s'={c.sp}")
    if strict and sys.n < threshold_cyclic(c, ell):
        raise ThresholdNotMet(
            f"n={sys.n} below cyclic threshold {threshold_cyclic(c, ell)}")
    rng = random.Random(seed) if tie == "random" else None
    L = c.L
    if L == 0:
        # nothing is ever forbidden in windows shorter than a block
        return Sequencing.identity(sys.n)
    nseg = c.Kp - c.sp + 1
    if (ell - 1) * nseg + c.Kp > sys.n:
        raise StageFailed(1, f"n={sys.n} cannot hold {nseg} segments plus K' leftovers")

    prefix = _grow_good_prefix(sys, ell, (ell - 1) * nseg, tie, rng, stage=1)
    segments = [prefix[j * (ell - 1):(j + 1) * (ell - 1)] for j in range(nseg)]

    U = _sandwich_unfortunate(sys, ell, segments)
    vprime_unused = set(range(sys.n)) - set(prefix)
    remaining_U = set(U)
    tail = list(segments[-1])
    z: list[int] = []

    def append_point(p: int) -> None:
        tail.append(p)
        z.append(p)
        vprime_unused.discard(p)
        remaining_U.discard(p)

    while len(remaining_U) > L:
        bad = forbidden_next(sys, _window(tail, ell))
        p = _pick(remaining_U - bad, tie, rng)
        if p is None:
            raise StageFailed(2, f"{len(remaining_U)} unfortunate points left")
        append_point(p)

    while remaining_U:
        u = min(remaining_U)
        W = vprime_unused - {u}
        try:
            fillers = reachability_extend(sys, ell, _window(tail, ell), W, u,
                                          tie=tie, rng=rng, s=c.s)
        except ReachabilityFailed as exc:
            raise StageFailed(3, str(exc)) from exc
        for w in fillers:
            append_point(w)
        append_point(u)

    while len(vprime_unused) > c.Kp:
        bad = forbidden_next(sys, _window(tail, ell))
        p = _pick(vprime_unused - bad, tie, rng)
        if p is None:
            raise StageFailed(4, f"{len(vprime_unused)} points left")
        append_point(p)

    # Stage 5: bridge the end of the tail back to x^0.
    Y = set(vprime_unused)
    x_endw = _window(tail, ell)
    try:
        bridge = completion_bridge(sys, ell, x_endw, segments[0], Y,
                                   tie=tie, rng=rng)
    except CompletionFailed as exc:
        raise StageFailed(5, str(exc)) from exc
    gaps = sorted(Y - set(bridge))
    assert len(gaps) == c.Kp - c.sp, "leftover count mismatch"
    assert not (set(gaps) & U), "a gap point is unfortunate"

    order = list(segments[0])
    for y, seg in zip(gaps, segments[1:]):
        order.append(y)
        order.extend(seg)
    order.extend(z)
    order.extend(bridge)
    seq = Sequencing.from_order(order)
    v = first_violation(sys, seq, ell, cyclic=True)
    if v is not None:
        raise StageFailed("verify", f"violation {v}")
    return seq
