"""The alternating-move block-avoiding game.

Alice and Bob take turns appending unused points to a partial sequencing; a
player loses the moment the partial sequencing stops being ell-good, and a
completed ell-good sequencing is a draw.  On the XOR-closed Steiner triple
systems Bob wins by pairing: he privately fixes a label u and always answers
Alice's x with x XOR u.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional

from .designs import BlockSystem, Kind
from .goodness import forbidden_next


class GameError(Exception):
    pass


class EllTooSmall(GameError):
    pass


class PointUsed(GameError):
    pass


class GameOver(GameError):
    pass


class NotHammingSystem(GameError):
    pass


class Outcome(str, Enum):
    ALICE_LOSES = "AliceLoses"
    BOB_LOSES = "BobLoses"
    DRAW = "Draw"


class Turn(str, Enum):
    ALICE = "Alice"
    BOB = "Bob"


@dataclass(frozen=True)
class GameState:
    system: BlockSystem
    ell: int
    moves: tuple[int, ...]
    turn: Turn
    bob_u: Optional[int] = None  # Bob's secret pairing label (1-based)
    outcome: Optional[Outcome] = None

    def unused(self) -> list[int]:
        used = set(self.moves)
        return [p for p in range(self.system.n) if p not in used]


def new_game(sys: BlockSystem, ell: int) -> GameState:
    if ell < 3:
        raise EllTooSmall(f"need ell >= 3, got {ell}")
    return GameState(sys, ell, (), Turn.ALICE)


def apply_move(state: GameState, p: int) -> GameState:
    """Append p for the player to move.  Sets the outcome when the move
    breaks the ell-good property (mover loses) or completes an ell-good
    sequencing (draw)."""
    if state.outcome is not None:
        raise GameOver(f"game already ended: {state.outcome.value}")
    if p in state.moves:
        raise PointUsed(f"point {p} already played")
    if not 0 <= p < state.system.n:
        raise GameError(f"point {p} out of range")
    window = state.moves[-(state.ell - 1):]
    loses = p in forbidden_next(state.system, window)
    moves = state.moves + (p,)
    outcome = None
    if loses:
        outcome = Outcome.ALICE_LOSES if state.turn is Turn.ALICE else Outcome.BOB_LOSES
    elif len(moves) == state.system.n:
        outcome = Outcome.DRAW
    nxt = Turn.BOB if state.turn is Turn.ALICE else Turn.ALICE
    return replace(state, moves=moves, turn=nxt, outcome=outcome)


def _require_hamming(sys: BlockSystem) -> None:
    n = sys.n
    if sys.kind is not Kind.STS or n < 3 or (n + 1) & n != 0:
        raise NotHammingSystem("system is not an XOR-closed STS")
    for b in sys.blocks:
        x, y, z = (p + 1 for p in b.points)
        if x ^ y ^ z != 0:
            raise NotHammingSystem(f"block {b} is not XOR-closed")


def bob_reply(state: GameState) -> int:
    """Bob's pairing strategy on an XOR-closed STS.

    First reply: pick u as the smallest label different from Alice's opening
    v and play v XOR u; afterwards always answer Alice's last x with
    x XOR u.  Returns the point id; the caller records bob_u via play()."""
    _require_hamming(state.system)
    if state.turn is not Turn.BOB or not state.moves:
        raise GameError("not Bob's move")
    last_label = state.moves[-1] + 1
    if state.bob_u is None:
        if len(state.moves) != 1:
            raise GameError("bob_u unset after the opening; use play()")
        u = 1 if last_label != 1 else 2
    else:
        u = state.bob_u
    reply = last_label ^ u
    if reply == 0:
        raise GameError("pairing reply is the zero vector; opponent played u")
    return reply - 1


def _with_bob_u(state: GameState) -> GameState:
    if state.bob_u is not None or len(state.moves) != 1:
        return state
    last_label = state.moves[-1] + 1
    return replace(state, bob_u=(1 if last_label != 1 else 2))


AlicePolicy = Callable[[GameState], int]
BobPolicy = Callable[[GameState], int]


def random_policy(seed: int) -> AlicePolicy:
    rng = random.Random(seed)

    def pick(state: GameState) -> int:
        return rng.choice(state.unused())

    return pick


def scripted_policy(moves: list[int]) -> AlicePolicy:
    it = iter(moves)

    def pick(state: GameState) -> int:
        return next(it)

    return pick


def play(sys: BlockSystem, ell: int, alice: AlicePolicy,
         bob: BobPolicy = bob_reply) -> GameState:
    """Run a game to its outcome and return the final state."""
    state = new_game(sys, ell)
    while state.outcome is None:
        policy = alice if state.turn is Turn.ALICE else bob
        state = apply_move(state, policy(state))
        state = _with_bob_u(state)
    return state


def _double_factorial(m: int) -> int:
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def exhaustive_bob_never_loses(r: int, ell: int,
                               max_r: int = 4) -> tuple[bool, int]:
    """Enumerate every complete script of Alice moves against the pairing
    strategy on the XOR STS with 2^r - 1 points.

    A script fixes Alice's choice at each of her turns among the then-unused
    points; the game is simulated until its first violation.  All scripts
    extending a decided prefix share its outcome, so the subtree below a
    terminal is counted in bulk.  Returns (every script ends with Alice
    losing, script count).
    """
    from .constructions import hamming_sts

    if r > max_r:
        raise GameError(f"r={r} too large for exhaustive search (max {max_r})")
    if ell < 3:
        raise EllTooSmall(f"need ell >= 3, got {ell}")
    sys = hamming_sts(r)
    n = sys.n
    all_alice_lose = True
    count = 0
    moves: list[int] = []
    used = [False] * n

    def losing(p: int) -> bool:
        window = moves[-(ell - 1):] if ell > 1 else []
        return p in forbidden_next(sys, window)

    def walk(u_label: Optional[int], unused_cnt: int) -> None:
        nonlocal count, all_alice_lose
        for p in range(n):
            if used[p]:
                continue
            # Alice plays p
            if losing(p):
                count += _double_factorial(unused_cnt - 2)
                continue
            if unused_cnt == 1:
                # board filled without a violation: a draw, so Bob did not win
                count += 1
                all_alice_lose = False
                continue
            used[p] = True
            moves.append(p)
            ul = u_label if u_label is not None else (1 if p + 1 != 1 else 2)
            reply = ((p + 1) ^ ul) - 1
            assert 0 <= reply < n and not used[reply], "pairing reply illegal"
            if losing(reply):
                all_alice_lose = False  # Bob lost a line
                count += _double_factorial(unused_cnt - 2)
            else:
                used[reply] = True
                moves.append(reply)
                walk(ul, unused_cnt - 2)
                used[reply] = False
                moves.pop()
            used[p] = False
            moves.pop()

    walk(None, n)
    return all_alice_lose, count
