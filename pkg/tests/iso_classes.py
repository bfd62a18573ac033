"""Isomorphism-class representatives of small partial Steiner triple systems.

Used to make 'every small PSTS' assertions affordable: the checks we run are
invariant under relabeling points, so one representative per class suffices.
Classes are generated by breadth-first extension of canonical forms; a block
set's canonical form is its lexicographically least relabeled image, and the
least image must start with the block (0, 1, 2), so only bijections sending
some block onto {0, 1, 2} need to be tried.
"""
from __future__ import annotations

import itertools


def canonical_form(blocks) -> tuple[tuple[int, ...], ...]:
    blocks = tuple(sorted(tuple(sorted(b)) for b in blocks))
    if not blocks:
        return ()
    pts = sorted({p for b in blocks for p in b})
    s = len(pts)
    best = None
    for b in blocks:
        others = [p for p in pts if p not in b]
        for trip in itertools.permutations(b):
            base = {trip[i]: i for i in range(3)}
            for rest in itertools.permutations(range(3, s)):
                phi = dict(base)
                phi.update(zip(others, rest))
                img = tuple(sorted(tuple(sorted(phi[p] for p in blk))
                                   for blk in blocks))
                if best is None or img < best:
                    best = img
    return best


def _compatible(blocks, t) -> bool:
    tset = set(t)
    return all(len(tset & set(b)) <= 1 for b in blocks)


def psts_classes(max_blocks: int = 4, max_support: int = 8):
    """All PSTS isomorphism classes with at most max_blocks blocks on at most
    max_support points, as canonical block tuples (empty class included)."""
    out = {()}
    level = {()}
    for _ in range(max_blocks):
        nxt = set()
        for form in level:
            pts = {p for b in form for p in b}
            cap = min(len(pts) + 3, max_support)
            for t in itertools.combinations(range(cap), 3):
                if t in form or not _compatible(form, t):
                    continue
                nxt.add(canonical_form(form + (t,)))
        out |= nxt
        level = nxt
    return sorted(out, key=lambda f: (len(f), f))
