"""Upper bounds on the window length ell.

Exact integer/rational arithmetic for the counting bounds (Stinson-Veitch
and its S_lambda(t, t+1, n) generalization, the wide-subset bound), floating
point only inside the linear program that tightens the cyclic STS bound to
0.329 n, plus the segment profile counts that feed it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping

from .designs import BlockSystem, Kind
from .goodness import Sequencing
from .lp import LinearProgram, simplex_solve


class BoundsError(Exception):
    pass


class BadParameters(BoundsError):
    pass


class BadPartition(BoundsError):
    pass


def sv_bound_sts(n: int) -> int:
    """An STS(n) with an ell-good sequencing has ell <= (n+2)/3."""
    if n < 3:
        raise BadParameters(f"need n >= 3, got {n}")
    return (n + 2) // 3


def _wide_subset_count(t: int, n: int, ell: int) -> int:
    """Number of t-subsets whose first and last sequencing positions are more
    than ell apart: sum over u < v - ell of C(v-u-1, t-2)."""
    total = 0
    for u in range(1, n - ell):
        # sum_{v=u+ell+1}^{n} C(v-u-1, t-2) = C(n-u, t-1) - C(ell, t-1)
        total += comb(n - u, t - 1) - comb(ell, t - 1)
    return total


def easy_bound_feasible(t: int, k: int, lam: int, n: int, ell: int) -> bool:
    """Wide-subset bound for any design: an ell-good S_lambda(t,k,n) needs
    C(n,t) <= C(k,t) * (number of wide t-subsets).  lam cancels."""
    if not (2 <= t < k <= n):
        raise BadParameters(f"need 2 <= t < k <= n, got t={t}, k={k}, n={n}")
    if ell < 0:
        raise BadParameters("ell must be non-negative")
    return comb(n, t) <= comb(k, t) * _wide_subset_count(t, n, ell)


def easy_bound_max_ell(t: int, k: int, lam: int, n: int) -> int:
    """Largest ell the wide-subset inequality permits (monotone in ell)."""
    lo, hi = 0, n - 1
    if not easy_bound_feasible(t, k, lam, n, lo):
        raise BadParameters("infeasible even at ell=0")
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if easy_bound_feasible(t, k, lam, n, mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass(frozen=True)
class BiVector:
    """Exact solution b_0..b_{t+1} of the block-intersection count system for
    a design with k = t+1: the number of blocks meeting the first ell points
    of an ell-good sequencing in i points satisfies
    (t+1-i) b_i + (i+1) b_{i+1} = lam C(ell,i) C(n-ell,t-i), b_{t+1} = 0."""

    t: int
    lam: int
    n: int
    ell: int
    b: tuple[Fraction, ...]

    def total(self) -> Fraction:
        return sum(self.b, Fraction(0))


def bi_solve(t: int, lam: int, n: int, ell: int) -> BiVector:
    if not (2 <= t and 0 <= ell <= n):
        raise BadParameters(f"need t >= 2 and 0 <= ell <= n, got t={t}, ell={ell}")
    b = [Fraction(0)] * (t + 2)
    for i in range(t, -1, -1):
        b[i] = Fraction(lam * comb(ell, i) * comb(n - ell, t - i) - (i + 1) * b[i + 1],
                        t + 1 - i)
    return BiVector(t, lam, n, ell, tuple(b))


def svgen_check(t: int, lam: int, n: int, ell: int) -> tuple[bool, str]:
    """Generalized Stinson-Veitch feasibility for S_lambda(t, t+1, n), with a
    reason: 'ok', 'negative_bi' (some b_i < 0 already witnesses
    infeasibility) or 'b0_bound' (b_0 exceeds the wide-pair count)."""
    if ell < 1:
        return True, "ok"  # a window this short holds no block
    bv = bi_solve(t, lam, n, ell)
    if any(x < 0 for x in bv.b):
        return False, "negative_bi"
    # b_0 <= sum_{u=ell+1}^{n-ell} sum_{v=u+ell}^{n} lam*C(v-u-1, t-2)/(k-2)
    total = 0
    for u in range(ell + 1, n - ell + 1):
        # inner sum over v: distances d = v-u-1 from ell-1 to n-u-1
        total += comb(n - u, t - 1) - comb(ell - 1, t - 1)
    rhs = Fraction(lam * total, t - 1)  # k-2 = t-1
    if bv.b[0] > rhs:
        return False, "b0_bound"
    return True, "ok"


def svgen_feasible(t: int, lam: int, n: int, ell: int) -> bool:
    return svgen_check(t, lam, n, ell)[0]


def svgen_max_ell(t: int, lam: int, n: int) -> int:
    """Largest ell feasible under the generalized bound (ascending scan up to
    the first infeasible ell)."""
    best = 0
    for ell in range(1, n + 1):
        if svgen_feasible(t, lam, n, ell):
            best = ell
        else:
            break
    return best


def sqs_alpha_root() -> float:
    """Smallest positive root of 12x^3 - 6x^2 - 2x + 1, the asymptotic cap on
    ell/n for SQS sequencings (equals 1/sqrt(6)); bisection to 1e-12."""
    def p(x: float) -> float:
        return ((12 * x - 6) * x - 2) * x + 1

    lo = 0.0
    step = 1e-3
    hi = step
    while p(hi) > 0:
        lo, hi = hi, hi + step
        if hi > 1:
            raise BoundsError("no sign change in (0, 1)")
    while hi - lo > 1e-12:
        mid = (lo + hi) / 2
        if p(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# -- the cyclic STS linear program -------------------------------------

_LP_VARS = ["a_111000", "a_110100", "a_110010", "a_201000", "a_200010",
            "a_101010", "a_200100"]


def cyclic_lp_bound(delta_hat: float = 0.1645, eps_hat: float = 0.013) -> float:
    """Minimum of a_200100 (normalized per n^2) over the four shift-averaged
    constraint families of the cyclic bound, at leading order:

        D - E   <= 2 a_111000 + a_110100 + a_110010              <= D
        D - 5E  <= a_110100 + 2 a_201000 + a_111000
                   + 2 a_200010 + a_110010 + a_101010            <= D + 4E
        D - 7E  <= 2 a_110010 + 4 a_200100 + 2 a_110100          <= D + 6E
        D/2 - G <= a_201000 + a_200100 + a_200010                <= D/2

    with D = delta^2, E = delta*eps, G = eps^2/2.  At (0.1645, 0.013) the
    optimum is 0.00225352, the constant behind the 0.329 n cyclic bound.
    """
    if delta_hat <= 0 or eps_hat < 0:
        raise BadParameters("need delta_hat > 0 and eps_hat >= 0")
    if abs(6 * delta_hat + eps_hat - 1.0) > 1e-9:
        raise BadParameters("need 6*delta_hat + eps_hat = 1")
    D = delta_hat * delta_hat
    E = delta_hat * eps_hat
    G = eps_hat * eps_hat / 2

    lp = LinearProgram(list(_LP_VARS), [0, 0, 0, 0, 0, 0, 1])

    def row(**kw) -> list[float]:
        return [float(kw.get(v, 0)) for v in _LP_VARS]

    first = row(a_111000=2, a_110100=1, a_110010=1)
    lp.add(first, ">=", D - E)
    lp.add(first, "<=", D)
    second = row(a_110100=1, a_201000=2, a_111000=1, a_200010=2,
                 a_110010=1, a_101010=1)
    lp.add(second, ">=", D - 5 * E)
    lp.add(second, "<=", D + 4 * E)
    third = row(a_110010=2, a_200100=4, a_110100=2)
    lp.add(third, ">=", D - 7 * E)
    lp.add(third, "<=", D + 6 * E)
    fourth = row(a_201000=1, a_200100=1, a_200010=1)
    lp.add(fourth, ">=", D / 2 - G)
    lp.add(fourth, "<=", D / 2)

    value, _ = simplex_solve(lp)
    return value


def contradiction_margin(alpha: float, t_hat: float) -> float:
    """Leading-order margin of the final counting contradiction: positive
    means a cyclic (alpha n)-good STS sequencing is impossible.

    Blocks missing the window: n^2 (1/6 - alpha/2 + alpha^2/2) plus the
    t_hat n^2 double-counted ones must fit among (1-2 alpha)^2 n^2 / 2 wide
    pairs.
    """
    if not 0 < alpha < 0.5:
        raise BadParameters("need 0 < alpha < 1/2")
    lhs = 1 / 6 - alpha / 2 + alpha * alpha / 2 + t_hat
    rhs = (1 - 2 * alpha) ** 2 / 2
    return lhs - rhs


# -- segment profile counts --------------------------------------------

@dataclass(frozen=True)
class ProfileCounts:
    """Counts of blocks by intersection profile (k_1..k_6) with the six long
    segments at a given shift; the short seventh segment is implied,
    |B n S_7| = 3 - sum(k_i)."""

    shift: int
    delta: int
    eps: int
    counts: Mapping[tuple[int, ...], int]

    def __getitem__(self, profile: tuple[int, ...]) -> int:
        return self.counts.get(tuple(profile), 0)

    def total(self) -> int:
        return sum(self.counts.values())


def segment_profile_counts(sys: BlockSystem, seq: Sequencing, r: int,
                           delta: int, eps: int) -> ProfileCounts:
    """Split the cyclic sequencing at shift r into six segments of length
    delta followed by one of length eps, and count blocks by profile.

    The vanishing of the adjacent-segment profiles additionally needs the
    sequencing to be cyclically 2*delta-good; the counts themselves and the
    pair-counting identities do not.
    """
    if sys.kind is not Kind.STS:
        raise BadParameters("profile counts are defined for STS systems")
    n = sys.n
    if delta <= 0 or eps < 0 or 6 * delta + eps != n:
        raise BadPartition(f"need 6*delta + eps = n, got 6*{delta}+{eps} != {n}")
    seg_of = [0] * n
    for off in range(n):
        seg_of[(r + off) % n] = min(off // delta, 6)  # 6 = short segment
    counts: dict[tuple[int, ...], int] = {}
    for b in sys.blocks:
        prof = [0] * 6
        for p in b.points:
            s = seg_of[seq.pos[p]]
            if s < 6:
                prof[s] += 1
        key = tuple(prof)
        counts[key] = counts.get(key, 0) + 1
    return ProfileCounts(r % n, delta, eps, counts)


def segment_sizes(delta: int, eps: int) -> tuple[int, ...]:
    return (delta,) * 6 + (eps,)


def pair_identity_gap(pc: ProfileCounts, i: int, j: int) -> int:
    """Residual of the (i, j) pair-counting identity, 1-indexed segments
    (7 = short): counting triples (x, y, B) with x in S_i, y in S_j and B
    the block through them gives

        sum_B k_i k_j = |S_i| |S_j|   (i < j),
        sum_B C(k_i, 2) = C(|S_i|, 2) (i = j).

    Returns LHS - RHS; zero on any true STS for any shift.
    """
    if not (1 <= i <= j <= 7):
        raise BadParameters("need 1 <= i <= j <= 7")
    sizes = segment_sizes(pc.delta, pc.eps)
    lhs = 0
    for prof, c in pc.counts.items():
        full = prof + (3 - sum(prof),)
        ki, kj = full[i - 1], full[j - 1]
        lhs += c * (comb(ki, 2) if i == j else ki * kj)
    rhs = comb(sizes[i - 1], 2) if i == j else sizes[i - 1] * sizes[j - 1]
    return lhs - rhs


#: Profiles asserted zero when no block fits in two adjacent long segments
#: (rows one and two) or in the short segment plus a neighbour (rest).
VANISHING_PROFILES: tuple[tuple[int, ...], ...] = (
    (2, 1, 0, 0, 0, 0), (0, 2, 1, 0, 0, 0), (0, 0, 2, 1, 0, 0),
    (0, 0, 0, 2, 1, 0), (0, 0, 0, 0, 2, 1),
    (1, 2, 0, 0, 0, 0), (0, 1, 2, 0, 0, 0), (0, 0, 1, 2, 0, 0),
    (0, 0, 0, 1, 2, 0), (0, 0, 0, 0, 1, 2),
    (2, 0, 0, 0, 0, 0), (1, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 2), (0, 0, 0, 0, 0, 1),
    (0, 0, 0, 0, 0, 0),
)

#: Shift-averaged equalities: each group lists profiles whose counts agree
#: after averaging over all n shifts (each is the previous shifted by one
#: long segment).
SHIFT_EQUALITY_GROUPS: tuple[tuple[tuple[int, ...], ...], ...] = (
    ((1, 0, 2, 0, 0, 0), (0, 1, 0, 2, 0, 0), (0, 0, 1, 0, 2, 0), (0, 0, 0, 1, 0, 2)),
    ((2, 0, 1, 0, 0, 0), (0, 2, 0, 1, 0, 0), (0, 0, 2, 0, 1, 0), (0, 0, 0, 2, 0, 1)),
    ((1, 0, 0, 2, 0, 0), (0, 1, 0, 0, 2, 0), (0, 0, 1, 0, 0, 2)),
    ((2, 0, 0, 1, 0, 0), (0, 2, 0, 0, 1, 0), (0, 0, 2, 0, 0, 1)),
    ((2, 0, 0, 0, 1, 0), (0, 2, 0, 0, 0, 1)),
)


def shift_count_sums(sys: BlockSystem, seq: Sequencing, delta: int,
                     eps: int) -> dict[tuple[int, ...], int]:
    """Sum of each profile count over all n shifts (n times the average)."""
    sums: dict[tuple[int, ...], int] = {}
    for r in range(sys.n):
        pc = segment_profile_counts(sys, seq, r, delta, eps)
        for prof, c in pc.counts.items():
            sums[prof] = sums.get(prof, 0) + c
    return sums
