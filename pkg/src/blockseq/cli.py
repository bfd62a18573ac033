"""Command-line surface.

Exit codes: 0 success / verified good; 1 verified bad or refuted; 2 usage,
I/O or parse error; 3 algorithm failure (a greedy stage ran out of choices).
"""
from __future__ import annotations

import argparse
import json
import os
import sys as _sys
from pathlib import Path

from . import bounds as bounds_mod
from . import constructions as cons
from . import game as game_mod
from . import oracle as oracle_mod
from . import sequenceable as seqable_mod
from . import sequencer as eng
from .designs import DesignError, validate_system
from .formats import ParseError, parse_design, parse_seq, write_design, write_seq
from .goodness import first_violation, max_good_ell

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_ALGO = 3


def _out(path: str, text: str) -> None:
    if path == "-":
        _sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_design(path: str):
    return parse_design(Path(path))


def _load_seq(path: str):
    return parse_seq(Path(path))


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("SEQDESIGN_THREADS", "1")))
    except ValueError:
        return 1


def _require(value, flag: str):
    if value is None:
        raise DesignError(f"missing required option {flag}")
    return value


def _cmd_gen(args) -> int:
    seq = None
    if args.generator == "skolem-sts":
        system, seq = cons.skolem_sts(_require(args.m, "--m"))
    elif args.generator == "hamming-sts":
        system = cons.hamming_sts(_require(args.r, "--r"))
    elif args.generator == "boolean-sqs":
        system = cons.boolean_sqs(_require(args.r, "--r"))
    elif args.generator == "sqs-quadruple":
        base = (_load_design(args.base) if args.base
                else cons.boolean_sqs(_require(args.r, "--r or --base")))
        system, seq = cons.sqs_quadruple(base)
    else:
        raise DesignError(f"unknown generator {args.generator}")
    _out(args.output, write_design(system))
    if args.seq_out:
        if seq is None:
            seq = cons.natural_sequencing(system.n)
        _out(args.seq_out, write_seq(seq))
    return EXIT_OK


def _cmd_sequence(args) -> int:
    system = _load_design(args.design)
    if args.algo == "naive":
        seq = eng.naive_greedy(system, args.ell, tie=args.tie, seed=args.seed)
        if seq is None:
            print("naive greedy got stuck", file=_sys.stderr)
            return EXIT_ALGO
    elif args.algo == "staged":
        seq = eng.staged_greedy(system, args.ell, tie=args.tie,
                                seed=args.seed, strict=args.strict)
    else:
        seq = eng.cyclic_staged_greedy(system, args.ell, tie=args.tie,
                                       seed=args.seed, strict=args.strict)
    _out(args.output, write_seq(seq))
    return EXIT_OK


def _cmd_verify(args) -> int:
    system = _load_design(args.design)
    seq = _load_seq(args.seq)
    v = first_violation(system, seq, args.ell, cyclic=args.cyclic,
                        workers=args.threads)
    if v is None:
        print(f"good: no block in any {'cyclic ' if args.cyclic else ''}window "
              f"of length <= {args.ell}")
        return EXIT_OK
    print(f"violation: block {v.block} in window start={v.window_start} "
          f"len={v.window_len} positions={list(v.positions)}")
    return EXIT_REFUTED


def _cmd_maxell(args) -> int:
    system = _load_design(args.design)
    seq = _load_seq(args.seq)
    print(max_good_ell(system, seq, cyclic=args.cyclic))
    return EXIT_OK


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _cmd_bounds(args) -> int:
    record: dict = {"v": 1, "mode": args.mode}
    if args.mode == "sv":
        record["max_ell"] = bounds_mod.sv_bound_sts(_require(args.n, "--n"))
    elif args.mode == "sv-general":
        t, n = _require(args.t, "--t"), _require(args.n, "--n")
        if args.ell is not None:
            ok, reason = bounds_mod.svgen_check(t, args.lam, n, args.ell)
            record.update(ell=args.ell, feasible=ok, reason=reason)
        else:
            record["max_ell"] = bounds_mod.svgen_max_ell(t, args.lam, n)
    elif args.mode == "easy":
        t, k = _require(args.t, "--t"), _require(args.k, "--k")
        n = _require(args.n, "--n")
        if args.ell is not None:
            record.update(ell=args.ell, feasible=bounds_mod.easy_bound_feasible(
                t, k, args.lam, n, args.ell))
        else:
            record["max_ell"] = bounds_mod.easy_bound_max_ell(t, k, args.lam, n)
    elif args.mode == "sqs-root":
        record["root"] = bounds_mod.sqs_alpha_root()
    elif args.mode == "lp":
        t_hat = bounds_mod.cyclic_lp_bound(args.delta, args.eps)
        record.update(delta=args.delta, eps=args.eps, t_hat=t_hat)
        if args.alpha is not None:
            record["margin"] = bounds_mod.contradiction_margin(args.alpha, t_hat)
    elif args.mode == "profiles":
        system = _load_design(_require(args.design, "--design"))
        seq = _load_seq(_require(args.seq, "--seq"))
        pc = bounds_mod.segment_profile_counts(
            system, seq, args.shift,
            _require(args.delta_len, "--delta-len"),
            _require(args.eps_len, "--eps-len"))
        record.update(shift=pc.shift, delta=pc.delta, eps=pc.eps,
                      counts={"".join(map(str, k)): v
                              for k, v in sorted(pc.counts.items())})
    if args.json:
        print(json.dumps(record, sort_keys=True))
    else:
        for key, val in record.items():
            if key in ("v", "mode"):
                continue
            print(f"{key} = {_fmt(val) if isinstance(val, float) else val}")
    return EXIT_OK


def _cmd_sequenceable(args) -> int:
    system = _load_design(args.design)
    if args.check:
        seq = _load_seq(args.check)
        ok, bad = seqable_mod.verify_sequenceable(system, seq)
        if ok:
            print("sequenceable ordering verified")
            return EXIT_OK
        start, r = bad
        print(f"refuted: segment at {start} of length {3 * r} is a union of "
              f"{r} disjoint blocks")
        return EXIT_REFUTED
    inst = seqable_mod.SequenceableInstance.from_system(system)
    seq = seqable_mod.alspach_sequencing(inst, system.n)
    ok, bad = seqable_mod.verify_sequenceable(system, seq)
    if not ok:
        print(f"construction failed verification at {bad}", file=_sys.stderr)
        return EXIT_ALGO
    if args.output:
        _out(args.output, write_seq(seq))
    print(f"constructed and verified (k={inst.k})")
    return EXIT_OK


def _cmd_game(args) -> int:
    if args.system != "hamming":
        raise DesignError("only the hamming system is supported")
    system = cons.hamming_sts(args.r)
    if args.mode == "exhaustive":
        ok, count = game_mod.exhaustive_bob_never_loses(args.r, args.ell)
        if args.json:
            print(json.dumps({"v": 1, "all_alice_lose": ok, "lines": count}))
        else:
            print(f"alice loses every line: {ok} ({count} lines)")
        return EXIT_OK if ok else EXIT_REFUTED
    if args.mode == "random":
        outcomes = []
        for trial in range(args.trials):
            final = game_mod.play(system, args.ell,
                                  game_mod.random_policy(args.seed + trial))
            outcomes.append(final.outcome.value)
        if args.json:
            print(json.dumps({"v": 1, "outcomes": outcomes}))
        else:
            for i, o in enumerate(outcomes):
                print(f"trial {i}: {o}")
        return EXIT_OK
    return _interactive_game(system, args.ell, args.json)


def _interactive_game(system, ell: int, as_json: bool) -> int:
    state = game_mod.new_game(system, ell)
    print(f"playing on {system!r} with ell={ell}; you are Alice.")
    print("enter a point id, 'moves' to list legal moves, 'resign' to quit.")
    while state.outcome is None:
        raw = input("alice> ").strip()
        if raw == "resign":
            print("resigned.")
            return EXIT_OK
        if raw == "moves":
            bad = game_mod.forbidden_next(system, state.moves[-(ell - 1):])
            legal = [p for p in state.unused() if p not in bad]
            print("safe moves:", " ".join(map(str, legal)))
            continue
        try:
            p = int(raw)
            state = game_mod.apply_move(state, p)
        except (ValueError, game_mod.GameError) as exc:
            print(f"bad move: {exc}")
            continue
        state = game_mod._with_bob_u(state)
        if state.outcome is None:
            reply = game_mod.bob_reply(state)
            state = game_mod.apply_move(state, reply)
            print(f"bob plays {reply}")
    print(f"outcome: {state.outcome.value}")
    if as_json:
        print(json.dumps({"v": 1, "moves": list(state.moves),
                          "outcome": state.outcome.value}))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    system = _load_design(args.design)
    if args.max_ell:
        print(oracle_mod.oracle_max_ell(system, cyclic=args.cyclic))
        return EXIT_OK
    seq = oracle_mod.backtrack_sequencing(system, _require(args.ell, "--ell"),
                                          cyclic=args.cyclic)
    if seq is None:
        print(f"no {'cyclic ' if args.cyclic else ''}{args.ell}-good sequencing exists")
        return EXIT_REFUTED
    _out(args.output, write_seq(seq))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blockseq",
                                 description="block-avoiding point sequencings")
    ap.add_argument("--threads", type=int, default=_default_threads(),
                    help="worker threads for parallelizable scans")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a design")
    g.add_argument("generator", choices=["skolem-sts", "hamming-sts",
                                         "boolean-sqs", "sqs-quadruple"])
    g.add_argument("--m", type=int, help="Skolem order (m = 2 mod 4)")
    g.add_argument("--r", type=int, help="rank for the XOR systems")
    g.add_argument("--base", help="base SQS design file for sqs-quadruple")
    g.add_argument("-o", "--output", default="-")
    g.add_argument("--seq-out", help="also write the paired sequencing")
    g.set_defaults(func=_cmd_gen)

    s = sub.add_parser("sequence", help="construct a sequencing")
    s.add_argument("--design", required=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--algo", choices=["naive", "staged", "cyclic"],
                   default="staged")
    s.add_argument("--tie", choices=["min", "random"], default="min")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--strict", action="store_true",
                   help="refuse to run below the proven sufficient point count")
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=_cmd_sequence)

    v = sub.add_parser("verify", help="verify a sequencing is ell-good")
    v.add_argument("--design", required=True)
    v.add_argument("--seq", required=True)
    v.add_argument("--ell", type=int, required=True)
    v.add_argument("--cyclic", action="store_true")
    v.set_defaults(func=_cmd_verify)

    m = sub.add_parser("maxell", help="maximum ell for a given sequencing")
    m.add_argument("--design", required=True)
    m.add_argument("--seq", required=True)
    m.add_argument("--cyclic", action="store_true")
    m.set_defaults(func=_cmd_maxell)

    b = sub.add_parser("bounds", help="upper-bound calculators")
    b.add_argument("mode", choices=["sv", "sv-general", "easy", "sqs-root",
                                    "lp", "profiles"])
    b.add_argument("--n", type=int)
    b.add_argument("--t", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--lam", type=int, default=1)
    b.add_argument("--ell", type=int)
    b.add_argument("--delta", type=float, default=0.1645)
    b.add_argument("--eps", type=float, default=0.013)
    b.add_argument("--alpha", type=float)
    b.add_argument("--design")
    b.add_argument("--seq")
    b.add_argument("--shift", type=int, default=0)
    b.add_argument("--delta-len", type=int)
    b.add_argument("--eps-len", type=int)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=_cmd_bounds)

    q = sub.add_parser("sequenceable", help="sequenceable-PSTS construction/check")
    q.add_argument("--design", required=True)
    q.add_argument("--construct", action="store_true")
    q.add_argument("--check", help="sequencing file to check")
    q.add_argument("-o", "--output")
    q.set_defaults(func=_cmd_sequenceable)

    gm = sub.add_parser("game", help="the block-avoiding game")
    gm.add_argument("--system", default="hamming")
    gm.add_argument("--r", type=int, required=True)
    gm.add_argument("--ell", type=int, required=True)
    gm.add_argument("--mode", choices=["interactive", "random", "exhaustive"],
                    default="exhaustive")
    gm.add_argument("--trials", type=int, default=1)
    gm.add_argument("--seed", type=int, default=0)
    gm.add_argument("--json", action="store_true")
    gm.set_defaults(func=_cmd_game)

    o = sub.add_parser("oracle", help="brute-force search")
    o.add_argument("--design", required=True)
    o.add_argument("--ell", type=int)
    o.add_argument("--cyclic", action="store_true")
    o.add_argument("--max-ell", action="store_true")
    o.add_argument("-o", "--output", default="-")
    o.set_defaults(func=_cmd_oracle)

    val = sub.add_parser("validate", help="validate a design file")
    val.add_argument("--design", required=True)
    val.set_defaults(func=_cmd_validate)
    return ap


def _cmd_validate(args) -> int:
    system = _load_design(args.design)
    report = validate_system(system)
    if report.valid:
        print(f"valid {system!r}")
        return EXIT_OK
    for sub_, found, req in report.violations[:20]:
        print(f"subset {sub_}: found {found}, required {req}")
    return EXIT_REFUTED


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ParseError, DesignError, OSError, ValueError,
            bounds_mod.BoundsError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_USAGE
    except (eng.SequencerError, seqable_mod.SequenceableError,
            oracle_mod.OracleError, game_mod.GameError) as exc:
        print(f"algorithm failure: {exc}", file=_sys.stderr)
        return EXIT_ALGO


if __name__ == "__main__":
    raise SystemExit(main())
