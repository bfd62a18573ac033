import random

import pytest

from blockseq.constructions import hamming_sts
from blockseq.designs import Kind, build_system
from blockseq.goodness import first_violation, sequence_is_ell_good
from blockseq.oracle import backtrack_sequencing
from blockseq.sequencer import (CompletionFailed, PropertyConstants,
                                ReachabilityFailed, StageFailed,
                                ThresholdNotMet, completion_bridge,
                                constants_for, cyclic_staged_greedy,
                                naive_greedy, reachability_extend,
                                staged_greedy, threshold_cyclic,
                                threshold_general, threshold_psts,
                                unfortunate_set)


def test_constants_sts_ell4():
    c = constants_for(Kind.STS, 4)
    assert (c.L, c.Lp, c.K, c.J, c.s, c.Kp, c.sp) == (3, 3, 3, 11, 3, 12, 3)
    assert c.symmetric


def test_constants_dts_ell4():
    c = constants_for(Kind.DTS, 4)
    assert c.L == c.Lp == c.K == 6
    assert c.J == 11 and c.s == 3
    assert not c.symmetric


def test_constants_mts_match_psts():
    for ell in (3, 4, 5, 6):
        assert constants_for(Kind.MTS, ell) == constants_for(Kind.PSTS, ell)


def test_constants_bd_example():
    c = constants_for(Kind.BD, 5, t=3, k=4, lam=1)
    assert c.L == 4        # ceil(C(4,3)/C(3,3))
    assert c.K == 56       # C(8,3)
    assert c.J == 14       # L + 4 + C(4,2)
    assert c.s == 4
    assert c.Kp == 60 and c.sp == 4


def test_constants_sqs_uses_design_formulas():
    c = constants_for(Kind.SQS, 4)
    assert c.L == 1 and c.K == 20 and c.J == 7 and c.Kp == 23


def test_threshold_psts_values():
    assert threshold_psts(3) == 12
    assert threshold_psts(4) == 55
    assert threshold_psts(5) == 173
    assert threshold_psts(2) == 3
    assert threshold_psts(1) == 3


def test_threshold_general_values():
    assert threshold_general(constants_for(Kind.STS, 4), 4) == 50
    assert threshold_general(constants_for(Kind.STS, 3), 3) == 14
    assert threshold_general(constants_for(Kind.DTS, 4), 4) == 161


def test_threshold_cyclic_values():
    assert threshold_cyclic(constants_for(Kind.STS, 4), 4) == 123
    # plugging K'=5, s'=2, L=K=1, s=2, J=7 into the symmetric formula:
    # 3*3 + 3 + 3*2 + 1*1 + 7 + 5 = 31
    assert threshold_cyclic(constants_for(Kind.STS, 3), 3) == 31
    # 9*4 + 4 + 9*(6+6+6) + (3-1)*6 + 11 + 12
    assert threshold_cyclic(constants_for(Kind.DTS, 4), 4) == 237


def test_threshold_cyclic_inconsistent_constants():
    from blockseq.sequencer import ConstantsInconsistent
    bad = PropertyConstants(L=1, Lp=1, K=1, J=5, s=2, Kp=1, sp=2, symmetric=True)
    with pytest.raises(ConstantsInconsistent):
        threshold_cyclic(bad, 3)


def test_naive_greedy_blockless_gives_identity():
    sys_ = build_system(Kind.PSTS, 6, blocks=[])
    seq = naive_greedy(sys_, 4)
    assert seq.order == tuple(range(6))


def test_naive_greedy_fano(fano):
    seq = naive_greedy(fano, 3)
    assert seq is not None
    assert first_violation(fano, seq, 3) is None


def test_naive_greedy_can_get_stuck():
    """Search small partial systems for a case where smallest-first naive
    greedy jams but an ell-good sequencing exists."""
    import itertools
    found = None
    for blocks in itertools.combinations(list(itertools.combinations(range(6), 3)), 3):
        pair_seen = set()
        ok = True
        for b in blocks:
            for p in itertools.combinations(b, 2):
                if p in pair_seen:
                    ok = False
                pair_seen.add(p)
        if not ok:
            continue
        sys_ = build_system(Kind.PSTS, 6, blocks=blocks)
        if naive_greedy(sys_, 3) is None:
            found = sys_
            break
    assert found is not None
    assert backtrack_sequencing(found, 3) is not None


def test_unfortunate_set_blockless():
    sys_ = build_system(Kind.PSTS, 12, blocks=[])
    segs = [[0, 1], [2, 3], [4, 5]]
    assert unfortunate_set(sys_, 3, segs) == set()


def test_unfortunate_set_single_block():
    # segments place 0 and 1 adjacently; 2 completes the block between them
    sys_ = build_system(Kind.PSTS, 8, blocks=[(0, 1, 2)])
    segs = [[0, 1], [3, 4]]
    u = unfortunate_set(sys_, 3, segs)
    assert 2 in u


def test_unfortunate_cap_on_random_sts_runs(skolem6):
    """Exact unfortunate sets stay within the counting cap (L+L'+K)L = 3L^2."""
    sys_, _ = skolem6
    rng = random.Random(0)
    for trial in range(20):
        ell = rng.choice([3, 4])
        c = constants_for(sys_.kind, ell)
        pts = rng.sample(range(sys_.n), (ell - 1) * c.L)
        segs = [pts[j * (ell - 1):(j + 1) * (ell - 1)] for j in range(c.L)]
        if not all(sequence_is_ell_good(sys_, s, ell) for s in segs):
            continue
        u = unfortunate_set(sys_, ell, segs)
        assert len(u) <= 3 * c.L * c.L


def test_reachability_blockless_takes_smallest():
    sys_ = build_system(Kind.PSTS, 20, blocks=[])
    got = reachability_extend(sys_, 4, [0, 1, 2], set(range(5, 15)), 17)
    assert got == [5, 6, 7]


def test_reachability_on_fano_fragment(fano):
    W = {3, 4, 5, 6}
    got = reachability_extend(fano, 3, [0], W, 1)
    assert len(got) == 2
    assert sequence_is_ell_good(fano, [0, *got, 1], 3)


def test_reachability_proof_tight_pool(skolem6):
    """|W| = J exactly still succeeds on a generated STS."""
    sys_, _ = skolem6
    c = constants_for(sys_.kind, 3)
    rng = random.Random(2)
    for _ in range(10):
        prefix = rng.sample(range(sys_.n), 2)
        if not sequence_is_ell_good(sys_, prefix, 3):
            continue
        rest = [p for p in range(sys_.n) if p not in prefix]
        W = set(rng.sample(rest, c.J + 1))
        u = min(W)
        got = reachability_extend(sys_, 3, prefix, W - {u}, u)
        assert sequence_is_ell_good(sys_, [*prefix, *got, u], 3)


def test_completion_bridge_blockless():
    sys_ = build_system(Kind.PSTS, 30, blocks=[])
    got = completion_bridge(sys_, 4, [0, 1, 2], [3, 4, 5], set(range(10, 20)))
    assert got == [10, 11, 12]


def test_completion_bridge_proof_tight(skolem6):
    sys_, _ = skolem6
    ell = 3
    c = constants_for(sys_.kind, ell)
    rng = random.Random(4)
    hits = 0
    while hits < 5:
        pts = rng.sample(range(sys_.n), 2 * (ell - 1))
        xe, xs = pts[:ell - 1], pts[ell - 1:]
        if not (sequence_is_ell_good(sys_, xe, ell)
                and sequence_is_ell_good(sys_, xs, ell)):
            continue
        pool = [p for p in range(sys_.n) if p not in pts]
        X = set(rng.sample(pool, c.Kp))
        ys = completion_bridge(sys_, ell, xe, xs, X)
        assert sequence_is_ell_good(sys_, [*xe, *ys, *xs], ell)
        hits += 1


def test_completion_bridge_sqs(sqs8):
    from blockseq.constructions import sqs_quadruple
    sys_, _ = sqs_quadruple(sqs8)   # SQS(32)
    ell = 5
    c = constants_for(sys_.kind, ell)
    rng = random.Random(9)
    hits = 0
    while hits < 3:
        pts = rng.sample(range(sys_.n), 2 * (ell - 1))
        xe, xs = pts[:ell - 1], pts[ell - 1:]
        if not (sequence_is_ell_good(sys_, xe, ell)
                and sequence_is_ell_good(sys_, xs, ell)):
            continue
        pool = [p for p in range(sys_.n) if p not in pts]
        if len(pool) < c.Kp:
            break
        X = set(rng.sample(pool, min(c.Kp, len(pool))))
        ys = completion_bridge(sys_, ell, xe, xs, X)
        assert sequence_is_ell_good(sys_, [*xe, *ys, *xs], ell)
        hits += 1


def test_staged_greedy_skolem(skolem6, skolem10):
    sys6, _ = skolem6
    seq = staged_greedy(sys6, 3)
    assert first_violation(sys6, seq, 3) is None
    sys10, _ = skolem10
    seq = staged_greedy(sys10, 4)
    assert first_violation(sys10, seq, 4) is None


def test_staged_greedy_blockless():
    sys_ = build_system(Kind.PSTS, 31, blocks=[])
    seq = staged_greedy(sys_, 5)
    assert sorted(seq.order) == list(range(31))


def test_staged_greedy_deterministic(skolem6):
    sys_, _ = skolem6
    a = staged_greedy(sys_, 3)
    b = staged_greedy(sys_, 3)
    assert a.order == b.order
    r1 = staged_greedy(sys_, 3, tie="random", seed=42)
    r2 = staged_greedy(sys_, 3, tie="random", seed=42)
    assert r1.order == r2.order
    assert first_violation(sys_, r1, 3) is None
    c1 = cyclic_staged_greedy(sys_, 3)
    c2 = cyclic_staged_greedy(sys_, 3)
    assert c1.order == c2.order


def test_staged_greedy_strict_below_threshold(fano):
    with pytest.raises(ThresholdNotMet):
        staged_greedy(fano, 3, strict=True)   # n=7 < 14


def test_staged_greedy_segment_structure(skolem6):
    """Stage-1 segments consume (ell-1)L points and gaps interleave them."""
    sys_, _ = skolem6
    ell = 3
    c = constants_for(sys_.kind, ell)
    seq = staged_greedy(sys_, ell)
    # shape: y_1 x^1 y_2 x^2 ... y_L x^L z -> prefix length L*ell
    prefix = seq.order[:c.L * ell]
    assert len(set(prefix)) == c.L * ell
    assert sorted(seq.order) == list(range(sys_.n))


def test_cyclic_staged_greedy(skolem6):
    sys_, _ = skolem6
    seq = cyclic_staged_greedy(sys_, 3)
    assert first_violation(sys_, seq, 3, cyclic=True) is None


def test_cyclic_staged_greedy_sts127():
    h7 = hamming_sts(7)
    seq = cyclic_staged_greedy(h7, 4)
    assert first_violation(h7, seq, 4, cyclic=True) is None


def test_cyclic_staged_greedy_blockless():
    sys_ = build_system(Kind.PSTS, 40, blocks=[])
    seq = cyclic_staged_greedy(sys_, 3)
    assert sorted(seq.order) == list(range(40))
    assert first_violation(sys_, seq, 3, cyclic=True) is None


def test_staged_greedy_directed_kinds():
    """Small DTS and MTS systems at threshold run through the same engine."""
    rng = random.Random(13)
    triples = []
    used_edges = set()
    while len(triples) < 30:
        t = tuple(rng.sample(range(49), 3))
        edges = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
        if any(e in used_edges for e in edges):
            continue
        used_edges.update(edges)
        triples.append(t)
    dts = build_system(Kind.DTS, 49, blocks=triples)
    assert threshold_general(constants_for(Kind.DTS, 3), 3) == 49
    seq = staged_greedy(dts, 3)
    assert first_violation(dts, seq, 3) is None

    mts_blocks = []
    used_edges = set()
    rng = random.Random(14)
    while len(mts_blocks) < 20:
        t = tuple(rng.sample(range(31), 3))
        edges = [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
        if any(e in used_edges for e in edges):
            continue
        used_edges.update(edges)
        mts_blocks.append(t)
    mts = build_system(Kind.MTS, 31, blocks=mts_blocks)
    assert threshold_cyclic(constants_for(Kind.MTS, 3), 3) == 31
    seq = cyclic_staged_greedy(mts, 3)
    assert first_violation(mts, seq, 3, cyclic=True) is None


def test_stagefailed_reports_stage():
    # far below threshold: a dense tiny STS jams stage 1 or later
    sys_ = hamming_sts(3)
    with pytest.raises((StageFailed, ReachabilityFailed, CompletionFailed)):
        cyclic_staged_greedy(sys_, 4)


def test_staged_output_embeds_stage1_segments(skolem6):
    """The output shape is y_1 x^1 ... y_L x^L z: stripping the gap slots
    recovers the deterministic stage-1 prefix."""
    from blockseq.sequencer import _grow_good_prefix
    sys_, _ = skolem6
    for ell in (3, 4):
        c = constants_for(sys_.kind, ell)
        seq = staged_greedy(sys_, ell)
        prefix = _grow_good_prefix(sys_, ell, (ell - 1) * c.L, "min", None, 1)
        rebuilt = []
        for j in range(c.L):
            rebuilt.extend(seq.order[j * ell + 1:(j + 1) * ell])
        assert rebuilt == prefix
        gaps = [seq.order[j * ell] for j in range(c.L)]
        assert len(set(gaps)) == c.L
        assert not set(gaps) & set(prefix)


def test_cyclic_output_starts_with_stage1_segment(skolem6):
    from blockseq.sequencer import _grow_good_prefix
    sys_, _ = skolem6
    ell = 3
    c = constants_for(sys_.kind, ell)
    nseg = c.Kp - c.sp + 1
    seq = cyclic_staged_greedy(sys_, ell)
    prefix = _grow_good_prefix(sys_, ell, (ell - 1) * nseg, "min", None, 1)
    assert list(seq.order[:ell - 1]) == prefix[:ell - 1]
