"""Line-oriented text formats for designs and sequencings.

Design files: `#` comments, header lines `kind`, `params t k lambda`,
`n <int>`, then one `block p1 ... pk` line each (order significant only for
MTS/DTS).  The writer emits the canonical form: fixed header order and
blocks sorted lexicographically, so write(parse(f)) == f on canonical files.

Sequencing files: `seq <n>` then one line of n space-separated ids.
"""
from __future__ import annotations

from pathlib import Path
from typing import TextIO

from .designs import BlockSystem, DesignError, Kind, build_system
from .goodness import Sequencing


class ParseError(Exception):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


def parse_design(source: str | Path | TextIO) -> BlockSystem:
    text = _read(source)
    kind = None
    params = None
    n = None
    blocks: list[tuple[int, ...]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        tag, rest = fields[0], fields[1:]
        try:
            if tag == "kind":
                kind = Kind(rest[0])
            elif tag == "params":
                params = tuple(int(x) for x in rest)
                if len(params) != 3:
                    raise ParseError(line_no, "params needs t k lambda")
            elif tag == "n":
                n = int(rest[0])
            elif tag == "block":
                blocks.append(tuple(int(x) for x in rest))
            else:
                raise ParseError(line_no, f"unknown directive {tag!r}")
        except ParseError:
            raise
        except (ValueError, IndexError) as exc:
            raise ParseError(line_no, f"bad {tag} line: {exc}") from exc
    if kind is None or n is None:
        raise ParseError(0, "missing kind or n header")
    t, k, lam = params if params is not None else (None, None, None)
    try:
        return build_system(kind, n, t, k, lam, blocks)
    except DesignError as exc:
        raise ParseError(0, str(exc)) from exc


def write_design(sys: BlockSystem) -> str:
    lines = [f"kind {sys.kind.value}",
             f"params {sys.t} {sys.k} {sys.lam}",
             f"n {sys.n}"]
    for b in sorted(sys.blocks):
        lines.append("block " + " ".join(map(str, b.points)))
    return "\n".join(lines) + "\n"


def parse_seq(source: str | Path | TextIO) -> Sequencing:
    text = _read(source)
    n = None
    ids: list[int] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if fields[0] == "seq":
            try:
                n = int(fields[1])
            except (ValueError, IndexError) as exc:
                raise ParseError(line_no, f"bad seq header: {exc}") from exc
        else:
            try:
                ids.extend(int(x) for x in fields)
            except ValueError as exc:
                raise ParseError(line_no, f"bad id: {exc}") from exc
    if n is None:
        raise ParseError(0, "missing seq header")
    if len(ids) != n:
        raise ParseError(0, f"expected {n} ids, got {len(ids)}")
    try:
        return Sequencing.from_order(ids)
    except ValueError as exc:
        raise ParseError(0, str(exc)) from exc


def write_seq(seq: Sequencing) -> str:
    return f"seq {len(seq)}\n" + " ".join(map(str, seq.order)) + "\n"


def _read(source: str | Path | TextIO) -> str:
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8")
    if isinstance(source, str):
        return source
    return source.read()
